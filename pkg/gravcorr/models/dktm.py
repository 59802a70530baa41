"""
Dissipative KTM model: the measured quadrature is rotated by alpha_tilde,
which adds damping to the drift and cross-mode terms to the diffusion, and
gives the flow a unique stationary state.
"""
import logging
from typing import Literal

import numpy as np

from gravcorr.errors import InputError

from .ktm import coupled_drift, feedback_diffusion_rate
from .model_registry import register_model
from .params import GeneratorPair, ModelParams

logger = logging.getLogger(__name__)

D11Convention = Literal["limit-consistent", "paper"]


def cross_diffusion_rate(p: ModelParams, d11: D11Convention = "limit-consistent") -> float:
    """
    X_j / P_j' entry of the cross-mode diffusion block.

    The double commutator (1/2) alpha eta [X_j, [P_j', rho]] feeds
    d<{X_j', P_j}>/dtau = alpha eta, hence 4 D = alpha eta. ``paper`` keeps the
    printed alpha^2 eta / 4, which lets the channel entangle the masses.
    """
    if d11 == "limit-consistent":
        return 0.25 * p.alpha_tilde * p.eta
    if d11 == "paper":
        return 0.25 * p.alpha_tilde ** 2 * p.eta
    raise InputError(f"Unknown dktm_d11 convention {d11!r}", {"dktm_d11": d11})


@register_model("dktm")
def dktm_generators(p: ModelParams, d11: D11Convention = "limit-consistent") -> GeneratorPair:
    """
    Drift and diffusion of the dissipative KTM covariance flow.

    Args:
        p: Model parameters; alpha_tilde = 0 reproduces ktm_generators exactly
        d11: ``limit-consistent`` uses the derived diffusion, whose momentum
            entry matches KTM; ``paper`` uses the printed matrices at unit
            frequency, which differ only in the cross-mode block

    Returns:
        GeneratorPair labelled "dktm"
    """
    cross = cross_diffusion_rate(p, d11)
    rotated = 0.25 * p.alpha_tilde ** 2 * p.eta
    d11_block = np.array([[rotated, 0.0], [0.0, feedback_diffusion_rate(p)]])
    d12_block = np.array([[0.0, cross], [cross, 0.0]])

    if p.alpha_tilde > 0.0:
        logger.debug(f"DKTM generators: eta={p.eta:g}, alpha_tilde={p.alpha_tilde:g}, d11={d11}")
        if d11 == "paper":
            logger.warning("⚠️ dktm_d11=paper: printed cross diffusion is not a local channel "
                           "and can entangle the masses")
    return GeneratorPair(
        model_label="dktm",
        drift=coupled_drift(p, damping=0.5 * p.alpha_tilde * p.eta),
        diffusion=np.block([[d11_block, d12_block], [d12_block, d11_block]]),
    )
