"""Initial-state covariance builders (product states of the two masses)."""
import math

import numpy as np

from gravcorr.errors import DomainError


def coherent_cov() -> np.ndarray:
    """Coherent (and vacuum) product state: the identity, whatever the amplitudes."""
    return np.eye(4)


def squeezed_cov(s: float) -> np.ndarray:
    """Equal single-mode squeezing s on both masses: blocks diag(e^s, e^-s)."""
    if not math.isfinite(s):
        raise DomainError(f"Squeezing parameter must be finite, got {s}", {"s": s})
    block = [math.cosh(s) + math.sinh(s), math.cosh(s) - math.sinh(s)]
    return np.diag(block + block)


def thermal_cov(nbar: float) -> np.ndarray:
    """Product of thermal states with mean occupation nbar: (2 nbar + 1) I."""
    if not math.isfinite(nbar) or nbar < 0.0:
        raise DomainError(f"Mean occupation must be >= 0, got {nbar}", {"nbar": nbar})
    return (2.0 * nbar + 1.0) * np.eye(4)
