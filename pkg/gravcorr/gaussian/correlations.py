"""
Entropic correlation measures of two-mode Gaussian states.

All entropies are in nats. Conversion to bits happens only when results are
written out (see ``NATS_TO_BITS``).
"""
import logging
import math
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict

from gravcorr.config import config
from gravcorr.errors import DomainError, InputError, NumericalDegeneracyError
from gravcorr.gaussian.covariance import (
    CovarianceMatrix,
    SymplecticInvariants,
    ppt_min_symplectic,
    swap_modes,
    symplectic_eigenvalues,
    symplectic_invariants,
    validate,
)

logger = logging.getLogger(__name__)

NATS_TO_BITS = 1.0 / math.log(2.0)

DeltaBranch = Literal["standard", "paper"]


class CorrelationRecord(BaseModel):
    """Correlation content of one covariance matrix."""

    model_config = ConfigDict(frozen=True)

    mutual_information: float
    discord: float
    ppt_nu_minus: float
    entangled: bool


def _clamp_unit(x: float, tol: float, what: str) -> float:
    if x < 1.0 - tol:
        raise DomainError(f"{what} = {x:.12g} is below 1 - {tol:g}", {"value": x, "tolerance": tol})
    return max(x, 1.0)


def entropy_f(x: float, tol: Optional[float] = None) -> float:
    """
    Von Neumann entropy of a single-mode Gaussian state with symplectic eigenvalue x.

    f(x) = ((x+1)/2) ln((x+1)/2) - ((x-1)/2) ln((x-1)/2), with f(1) = 0.
    Values in [1 - tol, 1) are clamped to 1.
    """
    tol = config.PHYSICAL_TOL if tol is None else tol
    x = _clamp_unit(float(x), tol, "Symplectic eigenvalue")
    plus = 0.5 * (x + 1.0)
    minus = 0.5 * (x - 1.0)
    value = plus * math.log(plus)
    if minus > 0.0:
        value -= minus * math.log(minus)
    return value


def _sqrt_floor(x: float) -> float:
    return math.sqrt(max(x, 0.0))


def mutual_information(sigma: CovarianceMatrix) -> float:
    """Total correlations I = f(sqrt I1) + f(sqrt I2) - f(nu_-) - f(nu_+)."""
    sigma = validate(sigma)
    inv = symplectic_invariants(sigma)
    spectrum = symplectic_eigenvalues(sigma)
    value = (entropy_f(_sqrt_floor(inv.I1)) + entropy_f(_sqrt_floor(inv.I2))
             - entropy_f(spectrum.nu_minus) - entropy_f(spectrum.nu_plus))
    return max(value, 0.0)


def conditional_delta(inv: SymplecticInvariants, branch: DeltaBranch = "standard") -> float:
    """
    Minimal determinant of the conditional covariance of mode 1 after an
    optimal Gaussian measurement on mode 2.

    ``standard`` selects the first expression when
    (I4 - I1 I2)^2 <= (I2 + 1)(I1 + I4) I3^2; ``paper`` uses the printed
    variant (I4 - I1 I2)^2 < (I2 + 1)(I3 + I4) I3^2.
    """
    i1, i2, i3, i4 = inv.I1, inv.I2, inv.I3, inv.I4
    gap = i4 - i1 * i2
    if branch == "standard":
        first = gap ** 2 <= (i2 + 1.0) * (i1 + i4) * i3 ** 2
    elif branch == "paper":
        first = gap ** 2 < (i2 + 1.0) * (i3 + i4) * i3 ** 2
    else:
        raise InputError(f"Unknown delta branch {branch!r}", {"branch": branch})

    # A pure measured mode forces a product state, where both forms reduce to I1.
    if first and abs(i2 - 1.0) > 1e-10:
        root = _sqrt_floor(i3 ** 2 + (i2 - 1.0) * (i4 - i1))
        return (2.0 * i3 ** 2 + (i2 - 1.0) * (i4 - i1) + 2.0 * abs(i3) * root) / (i2 - 1.0) ** 2

    root = _sqrt_floor(i3 ** 4 + gap ** 2 - 2.0 * i3 ** 2 * (i4 + i1 * i2))
    return (i1 * i2 - i3 ** 2 + i4 - root) / (2.0 * i2)


def gaussian_discord(sigma: CovarianceMatrix, measured: int = 2,
                     branch: DeltaBranch = "standard") -> float:
    """
    Gaussian quantum discord with the measurement performed on ``measured``.

    Args:
        sigma: Covariance matrix
        measured: Index of the measured subsystem, 1 or 2
        branch: Branch condition for the conditional determinant

    Returns:
        Discord in nats, clamped at 0
    """
    if measured not in (1, 2):
        raise InputError(f"Measured subsystem must be 1 or 2, got {measured}", {"measured": measured})
    sigma = validate(sigma)
    if measured == 1:
        sigma = swap_modes(sigma)

    inv = symplectic_invariants(sigma)
    spectrum = symplectic_eigenvalues(sigma)
    delta = conditional_delta(inv, branch)
    if delta < 1.0 - config.DELTA_FLOOR_TOL:
        raise NumericalDegeneracyError(
            f"Conditional determinant {delta:.12g} fell below 1",
            {"delta": delta, "invariants": inv._asdict(), "branch": branch},
        )

    raw = (entropy_f(_sqrt_floor(inv.I2)) - entropy_f(spectrum.nu_minus)
           - entropy_f(spectrum.nu_plus) + entropy_f(math.sqrt(max(delta, 1.0))))
    if raw < -1e-9:
        logger.warning(f"⚠️ Discord evaluated to {raw:.3e} < 0, clamping")
    return max(raw, 0.0)


def correlation_record(sigma: CovarianceMatrix, measured: int = 2,
                       branch: DeltaBranch = "standard") -> CorrelationRecord:
    """Bundle mutual information, discord and the PPT witness for one sigma."""
    nu_tilde = ppt_min_symplectic(sigma)
    return CorrelationRecord(
        mutual_information=mutual_information(sigma),
        discord=gaussian_discord(sigma, measured, branch),
        ppt_nu_minus=nu_tilde,
        entangled=nu_tilde < 1.0 - config.PHYSICAL_TOL,
    )
