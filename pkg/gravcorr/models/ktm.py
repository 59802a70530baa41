"""
Generator pairs for the measurement-feedback (KTM) channel and for the
unitary Newtonian limit.

Both share the drift of the linearised Hamiltonian
H = sum_j (P_j^2 + (1 - eta) X_j^2) / 2 + eta X1 X2
in units of omega: generators act on tau = omega t, so the trap frequency
never enters them.
"""
import logging

import numpy as np

from .model_registry import register_model
from .params import GeneratorPair, ModelParams

logger = logging.getLogger(__name__)


def feedback_diffusion_rate(p: ModelParams) -> float:
    """
    Momentum-diffusion entry (eta / 4)(c + 1/c) with c the feedback-rate ratio.

    c = 1 gives the minimal value eta / 2.
    """
    c = p.lambda_ratio
    if c == 1.0:
        return 0.5 * p.eta
    return 0.25 * p.eta * (c + 1.0 / c)


def coupled_drift(p: ModelParams, damping: float = 0.0) -> np.ndarray:
    """
    Drift of two identical oscillators with X1 X2 coupling.

    ``damping`` is the dimensionless rate a entering Y11 = [[a, 1], [eta - 1, -3a]].
    """
    eta = p.eta
    y11 = np.array([[damping, 1.0], [eta - 1.0, -3.0 * damping]])
    y12 = np.array([[0.0, 0.0], [-eta, 0.0]])
    return np.block([[y11, y12], [y12, y11]])


@register_model("ktm")
def ktm_generators(p: ModelParams) -> GeneratorPair:
    """Drift and diffusion of the KTM covariance flow."""
    d11 = np.diag([0.0, feedback_diffusion_rate(p)])
    zero = np.zeros((2, 2))
    return GeneratorPair(
        model_label="ktm",
        drift=coupled_drift(p),
        diffusion=np.block([[d11, zero], [zero, d11]]),
    )


@register_model("unitary")
def unitary_generators(p: ModelParams) -> GeneratorPair:
    """Unitary Newtonian limit: same drift as KTM, no diffusion."""
    return GeneratorPair(
        model_label="unitary",
        drift=coupled_drift(p),
        diffusion=np.zeros((4, 4)),
    )
