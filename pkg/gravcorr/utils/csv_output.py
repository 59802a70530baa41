"""
Deterministic CSV output: 17 significant digits, '.' decimal point, '\n'
line endings, empty cells for missing values.
"""
import csv
import logging
import math
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from gravcorr.errors import UsageError
from gravcorr.utils.atomic_file import atomic_text_file

logger = logging.getLogger(__name__)

Cell = Union[None, bool, int, float, str]


def format_cell(value: Cell) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return format(value, ".17g")
    return str(value)


def render_csv(header: Sequence[str], rows: Iterable[Sequence[Cell]]) -> str:
    lines = [",".join(header)]
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"row has {len(row)} cells, header has {len(header)}")
        lines.append(",".join(format_cell(cell) for cell in row))
    return "\n".join(lines) + "\n"


def write_csv(path: Union[str, Path], header: Sequence[str], rows: Iterable[Sequence[Cell]]) -> int:
    """
    Write a CSV file atomically.

    Returns:
        int: number of data rows written
    """
    rows = list(rows)
    with atomic_text_file(path) as handle:
        handle.write(render_csv(header, rows))
    logger.info(f"✅ Wrote {len(rows)} rows to {path}")
    return len(rows)


def _parse_float(text: str) -> Optional[float]:
    text = text.strip()
    if text == "":
        return None
    if text in ("true", "false"):
        return 1.0 if text == "true" else 0.0
    return float(text)


def read_columns(path: Union[str, Path]) -> Tuple[List[str], Dict[str, List[Optional[float]]]]:
    """
    Read a numeric CSV written by this package.

    Returns:
        (header, columns): columns maps each header name to its values, with
        empty cells as None

    Raises:
        UsageError: if the file is missing, empty or holds non-numeric cells
    """
    path = Path(path)
    if not path.is_file():
        raise UsageError(f"CSV file not found: {path}", {"csv_path": str(path)})
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if not header:
            raise UsageError(f"CSV file {path} has no header", {"csv_path": str(path)})
        columns: Dict[str, List[Optional[float]]] = {name: [] for name in header}
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise UsageError(f"{path}:{line_no}: expected {len(header)} cells, got {len(row)}",
                                 {"csv_path": str(path), "line": line_no})
            for name, cell in zip(header, row):
                try:
                    columns[name].append(_parse_float(cell))
                except ValueError:
                    raise UsageError(f"{path}:{line_no}: non-numeric value {cell!r} in column {name!r}",
                                     {"csv_path": str(path), "line": line_no, "column": name})
    return header, columns
