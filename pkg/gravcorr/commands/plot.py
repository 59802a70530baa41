import logging
from pathlib import Path
from typing import Optional, Sequence

import click

from gravcorr.errors import UsageError
from gravcorr.utils.csv_output import read_columns
from gravcorr.utils.svg_plot import write_svg

from .common import guarded

logger = logging.getLogger(__name__)


def cmd_plot(csv_path: str, columns: Sequence[str], log_x: bool = False, log_y: bool = False,
             out_path: Optional[str] = None, x_column: Optional[str] = None) -> Path:
    """
    Render selected CSV columns as an SVG line chart.

    Args:
        csv_path: CSV written by evolve, sweep or asymptote
        columns: Columns to draw, one polyline each
        log_x: Logarithmic abscissa
        log_y: Logarithmic ordinate
        out_path: SVG destination (default: csv_path with .svg suffix)
        x_column: Abscissa column (default: the first column)

    Raises:
        UsageError: missing file or column; the message lists the available columns
    """
    header, data = read_columns(csv_path)
    x_name = x_column or header[0]
    missing = [name for name in [x_name, *columns] if name not in data]
    if missing:
        raise UsageError(f"Column(s) {', '.join(missing)} not in {csv_path}; "
                         f"available: {', '.join(header)}", {"missing": missing, "available": header})
    if not columns:
        raise UsageError(f"No columns selected; available: {', '.join(header)}", {"available": header})

    out = Path(out_path) if out_path else Path(csv_path).with_suffix(".svg")
    write_svg(out, data[x_name], {name: data[name] for name in columns},
              x_label=x_name, log_x=log_x, log_y=log_y, title=Path(csv_path).name)
    return out


@click.command("plot")
@click.argument("csv_path", type=click.Path(dir_okay=False))
@click.option("--columns", "-c", "columns_text", required=True, help="Comma-separated column names.")
@click.option("--x-column", default=None, help="Abscissa column (default: first column).")
@click.option("--log-x", is_flag=True, default=False)
@click.option("--log-y", is_flag=True, default=False)
@click.option("--output-path", "-o", "out_path", type=click.Path(dir_okay=False), default=None)
@guarded
def plot(csv_path, columns_text, x_column, log_x, log_y, out_path):
    """Draw CSV columns as a static SVG chart."""
    columns = [name.strip() for name in columns_text.split(",") if name.strip()]
    cmd_plot(csv_path, columns, log_x, log_y, out_path, x_column)
