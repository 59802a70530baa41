import logging
from pathlib import Path
from typing import Optional

import click
import numpy as np

from gravcorr.analysis.series import GOLDEN_RATIO, asymptotic_ktm_discord
from gravcorr.dynamics.propagator import map_ordered, propagate
from gravcorr.errors import UsageError
from gravcorr.gaussian.correlations import gaussian_discord
from gravcorr.models.ktm import ktm_generators
from gravcorr.models.params import ModelParams
from gravcorr.models.states import coherent_cov
from gravcorr.utils.csv_output import write_csv

from .common import guarded

logger = logging.getLogger(__name__)

ASYMPTOTE_HEADER = ("tau", "formula_discord", "numeric_discord", "relative_gap")


def cmd_asymptote(eta: float, tau_min: float, tau_max: float, n: int,
                  output_path: Optional[str] = None) -> Path:
    """
    Compare the long-time KTM discord expression with a fresh coherent-start evolution.

    Raises:
        UsageError: when eta * tau_min is not above the golden ratio, or the grid is invalid
    """
    if n < 1:
        raise UsageError(f"n must be >= 1, got {n}", {"n": n})
    if not (0.0 < eta < 1.0):
        raise UsageError(f"eta must lie in (0, 1), got {eta:g}", {"eta": eta})
    if not (np.isfinite(tau_min) and np.isfinite(tau_max)) or tau_max < tau_min:
        raise UsageError(f"Need finite tau_min <= tau_max, got [{tau_min:g}, {tau_max:g}]",
                         {"tau_min": tau_min, "tau_max": tau_max})
    if eta * tau_min <= GOLDEN_RATIO:
        raise UsageError(f"eta*tau_min = {eta * tau_min:.6g} must exceed {GOLDEN_RATIO:.6f} "
                         f"(need tau_min > {GOLDEN_RATIO / eta:.6g})",
                         {"eta_tau_min": eta * tau_min, "bound": GOLDEN_RATIO})

    taus = np.linspace(tau_min, tau_max, n) if n > 1 else np.array([tau_min])
    gen = ktm_generators(ModelParams(eta=eta))
    sigma0 = coherent_cov()
    logger.info(f"🔵 Comparing asymptote with KTM evolution at {n} times in [{tau_min:g}, {tau_max:g}]")

    def row(tau: float):
        formula = asymptotic_ktm_discord(eta, tau)
        numeric = gaussian_discord(propagate(gen, sigma0, tau))
        gap = abs(numeric - formula) / abs(formula) if formula != 0.0 else float("inf")
        return float(tau), formula, numeric, gap

    rows = map_ordered(row, list(taus), None)
    out = Path(output_path or "asymptote.csv")
    write_csv(out, ASYMPTOTE_HEADER, rows)
    return out


@click.command("asymptote")
@click.option("--eta", type=float, required=True)
@click.option("--tau-min", type=float, required=True)
@click.option("--tau-max", type=float, required=True)
@click.option("--n", "n", type=int, default=20, show_default=True)
@click.option("--output-path", "-o", type=click.Path(dir_okay=False), default=None)
@guarded
def asymptote(eta, tau_min, tau_max, n, output_path):
    """Long-time KTM discord expression against the numerical value."""
    cmd_asymptote(eta, tau_min, tau_max, n, output_path)
