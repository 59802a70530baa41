import logging
from pathlib import Path

import click

from gravcorr.dynamics.propagator import steady_state
from gravcorr.errors import ModelCapabilityError
from gravcorr.gaussian.correlations import NATS_TO_BITS, gaussian_discord, mutual_information
from gravcorr.kernels.matkernel import lyapunov_residual
from gravcorr.utils.csv_output import write_csv
from gravcorr.utils.run_config import RunConfig

from .common import guarded, run_config_from, run_config_options

logger = logging.getLogger(__name__)

STEADY_HEADER = ("quantity", "value")


def cmd_steady(cfg: RunConfig) -> Path:
    """
    Solve for the DKTM stationary covariance and write its entries and correlations.

    Raises:
        ModelCapabilityError: for ktm and unitary runs, and for dktm with alpha_tilde = 0
    """
    if cfg.model != "dktm" or cfg.alpha_tilde <= 0.0:
        reason = ("the undamped flow lacks a stationary state; trace(sigma) grows without bound"
                  if cfg.model != "unitary" else "the unitary flow never relaxes to a stationary state")
        raise ModelCapabilityError(
            f"No stationary state for model {cfg.model!r} (alpha_tilde={cfg.alpha_tilde:g}): {reason}",
            {"model": cfg.model, "alpha_tilde": cfg.alpha_tilde},
        )

    out = cfg.output_or("steady.csv")
    gen = cfg.generators()
    sigma = steady_state(gen)
    residual = lyapunov_residual(gen.drift, sigma, 4.0 * gen.diffusion)
    scale = NATS_TO_BITS if cfg.report_bits else 1.0

    rows = [(f"sigma_{i + 1}{j + 1}", float(sigma[i, j])) for i in range(4) for j in range(4)]
    rows += [
        ("mutual_information", mutual_information(sigma) * scale),
        ("discord", gaussian_discord(sigma, cfg.measured_subsystem, cfg.delta_branch) * scale),
        ("lyapunov_residual", residual),
    ]
    write_csv(out, STEADY_HEADER, rows)
    return out


@click.command("steady")
@run_config_options
@guarded
def steady(**kwargs):
    """Stationary covariance of the dissipative model with its correlations."""
    cmd_steady(run_config_from(kwargs))
