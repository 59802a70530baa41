import logging
from pathlib import Path
from typing import Sequence

import click

from gravcorr.analysis.sweeps import SweepTable, alpha_sweep, eta_sweep, squeezing_sweep
from gravcorr.errors import UsageError
from gravcorr.gaussian.correlations import NATS_TO_BITS
from gravcorr.utils.csv_output import write_csv
from gravcorr.utils.run_config import RunConfig

from .common import guarded, parse_values, run_config_from, run_config_options

logger = logging.getLogger(__name__)

SWEEP_HEADER = ("value", "peak_discord", "peak_tau", "peak_mutual_information",
                "asymptotic_discord", "asymptotic_mutual_information")
_ENTROPY_COLUMNS = {"peak_discord", "peak_mutual_information", "asymptotic_discord",
                    "asymptotic_mutual_information"}

# Axis -> models it can be swept on
AXIS_MODELS = {
    "squeezing": ("ktm", "dktm", "unitary"),
    "alpha": ("dktm",),
    "eta": ("ktm",),
}


def _table_rows(table: SweepTable, report_bits: bool):
    scale = NATS_TO_BITS if report_bits else 1.0
    for row in table.rows:
        cells = []
        for name in SWEEP_HEADER:
            value = getattr(row, name)
            if value is not None and name in _ENTROPY_COLUMNS:
                value *= scale
            cells.append(value)
        yield cells


def cmd_sweep(cfg: RunConfig, axis: str, values: Sequence[float], transient: bool = False) -> Path:
    """
    One CSV row per axis value.

    Args:
        cfg: Run configuration; its own value of the swept parameter is ignored
        axis: ``squeezing``, ``alpha`` or ``eta``
        values: Strictly increasing axis values
        transient: For the alpha axis, also evolve each point to record the peak

    Raises:
        UsageError: when the axis does not apply to the configured model
    """
    if axis not in AXIS_MODELS:
        raise UsageError(f"Unknown sweep axis {axis!r}", {"axis": axis})
    if cfg.model not in AXIS_MODELS[axis]:
        raise UsageError(f"Axis {axis!r} cannot be swept on model {cfg.model!r}; "
                         f"use --model {' or '.join(AXIS_MODELS[axis])}",
                         {"axis": axis, "model": cfg.model})

    if any(b <= a for a, b in zip(values, values[1:])):
        raise UsageError(f"Sweep values must be strictly increasing, got {list(values)}", {"values": list(values)})
    if axis in ("alpha", "eta") and min(values) <= 0.0:
        raise UsageError(f"{axis} values must be > 0, got {list(values)}", {"values": list(values)})

    common = dict(measured=cfg.measured_subsystem, branch=cfg.delta_branch)
    p = cfg.model_params()
    if axis == "squeezing":
        table = squeezing_sweep(p, values, cfg.tau_max, cfg.n_samples, cfg.spacing, model=cfg.model,
                                dktm_d11=cfg.dktm_d11, **common)
    elif axis == "alpha":
        table = alpha_sweep(p, values, cfg.tau_max if transient else None, cfg.n_samples, cfg.spacing,
                            dktm_d11=cfg.dktm_d11, **common)
    else:
        table = eta_sweep(p, values, cfg.tau_max, cfg.n_samples, cfg.spacing, **common)

    failed = [row.value for row in table.rows if row.error_code]
    if failed:
        logger.warning(f"⚠️ {len(failed)} sweep point(s) failed and are left empty: {failed}")

    out = cfg.output_or(f"sweep_{axis}.csv")
    write_csv(out, SWEEP_HEADER, _table_rows(table, cfg.report_bits))
    return out


@click.command("sweep")
@click.option("--axis", type=click.Choice(sorted(AXIS_MODELS)), required=True)
@click.option("--values", "values_text", required=True, help="Comma-separated axis values, e.g. 0,0.5,1,2")
@click.option("--transient", is_flag=True, default=False,
              help="alpha axis: also evolve each point and report the transient peak.")
@run_config_options
@guarded
def sweep(axis, values_text, transient, **kwargs):
    """Peak and asymptotic correlations across squeezing, alpha_tilde or eta."""
    cfg = run_config_from(kwargs)
    cmd_sweep(cfg, axis, parse_values(values_text), transient)
