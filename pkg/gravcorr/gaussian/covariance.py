"""
Two-mode covariance matrices: validation, symplectic invariants and
symplectic eigenvalues.

Convention: operator order (X1, P1, X2, P2), sigma_mn = <O_m O_n + O_n O_m> - 2<O_m><O_n>,
so the vacuum (and any coherent state) has sigma = identity and physical
states satisfy nu_minus >= 1.
"""
import logging
from typing import NamedTuple, Optional

import numpy as np

from gravcorr.config import config
from gravcorr.errors import DimensionError, NumericalDegeneracyError, SymmetryError, UnphysicalStateError
from gravcorr.kernels.matkernel import max_abs, sym_eigvals

logger = logging.getLogger(__name__)

CovarianceMatrix = np.ndarray

OMEGA = np.array([
    [0.0, 1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
    [0.0, 0.0, -1.0, 0.0],
])

# (X1,P1,X2,P2) -> (X2,P2,X1,P1)
MODE_SWAP = np.array([
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
])

# P2 -> -P2
PARTIAL_TRANSPOSE = np.diag([1.0, 1.0, 1.0, -1.0])


class SymplecticInvariants(NamedTuple):
    I1: float
    I2: float
    I3: float
    I4: float
    Delta: float


class SymplecticSpectrum(NamedTuple):
    nu_minus: float
    nu_plus: float


def blocks(sigma: CovarianceMatrix):
    """Split sigma into (A1, A2, A3) with A3 the mode-1/mode-2 cross block."""
    return sigma[0:2, 0:2], sigma[2:4, 2:4], sigma[0:2, 2:4]


def swap_modes(sigma: CovarianceMatrix) -> CovarianceMatrix:
    return MODE_SWAP @ sigma @ MODE_SWAP.T


def partial_transpose(sigma: CovarianceMatrix) -> CovarianceMatrix:
    return PARTIAL_TRANSPOSE @ sigma @ PARTIAL_TRANSPOSE


def _as_4x4(sigma) -> np.ndarray:
    arr = np.array(sigma, dtype=float)
    if arr.shape != (4, 4):
        raise DimensionError(f"Covariance matrix must be 4x4, got shape {arr.shape}",
                             {"shape": list(arr.shape)})
    if not np.all(np.isfinite(arr)):
        raise DimensionError("Covariance matrix contains NaN or Inf entries")
    return arr


def _invariants(sigma: np.ndarray) -> SymplecticInvariants:
    a1, a2, a3 = blocks(sigma)
    i1 = float(np.linalg.det(a1))
    i2 = float(np.linalg.det(a2))
    i3 = float(np.linalg.det(a3))
    i4 = float(np.linalg.det(sigma))
    return SymplecticInvariants(i1, i2, i3, i4, i1 + i2 + 2.0 * i3)


def _williamson_pair(sigma: np.ndarray) -> SymplecticSpectrum:
    # Moduli of the eigenvalues of Omega.sigma come in equal pairs for sigma > 0.
    moduli = np.sort(np.abs(np.linalg.eigvals(OMEGA @ sigma)))
    return SymplecticSpectrum(float(0.5 * (moduli[0] + moduli[1])), float(0.5 * (moduli[2] + moduli[3])))


def _checked_spectrum(sigma: np.ndarray, inv: SymplecticInvariants,
                      degeneracy_tol: Optional[float] = None) -> SymplecticSpectrum:
    tol = config.DEGENERACY_TOL if degeneracy_tol is None else degeneracy_tol
    disc = inv.Delta ** 2 - 4.0 * inv.I4
    if disc < -tol * max(1.0, inv.Delta ** 2):
        raise NumericalDegeneracyError(
            f"Delta^2 - 4 I4 = {disc:.3e} is negative beyond tolerance",
            {"Delta": inv.Delta, "I4": inv.I4, "discriminant": disc},
        )
    # The radical loses half the digits near nu_minus = nu_plus; the Omega.sigma
    # spectrum does not, and agrees with 2 nu^2 = Delta +- sqrt(disc) elsewhere.
    return _williamson_pair(sigma)


def validate(sigma, symmetry_tol: Optional[float] = None,
             physical_tol: Optional[float] = None) -> CovarianceMatrix:
    """
    Check that sigma is a symmetric, physical two-mode covariance matrix.

    Inputs whose asymmetry is within tolerance are symmetrised.

    Args:
        sigma: 4x4 real matrix
        symmetry_tol: Max allowed |sigma - sigma^T| (default config.SYMMETRY_TOL)
        physical_tol: Allowed shortfall of nu_minus below 1 (default config.PHYSICAL_TOL)

    Returns:
        The symmetrised covariance matrix

    Raises:
        SymmetryError, UnphysicalStateError
    """
    arr = _as_4x4(sigma)
    sym_tol = config.SYMMETRY_TOL if symmetry_tol is None else symmetry_tol
    phys_tol = config.PHYSICAL_TOL if physical_tol is None else physical_tol

    asym = max_abs(arr - arr.T)
    if asym > sym_tol * max(1.0, max_abs(arr)):
        raise SymmetryError(f"Covariance matrix is not symmetric (max asymmetry {asym:.3e})",
                            {"asymmetry": asym, "tolerance": sym_tol})
    arr = 0.5 * (arr + arr.T)

    if sym_eigvals(arr, tol=np.inf)[0] <= 0.0:
        raise UnphysicalStateError(0.0, phys_tol)

    spectrum = _checked_spectrum(arr, _invariants(arr))
    if spectrum.nu_minus < 1.0 - phys_tol:
        raise UnphysicalStateError(spectrum.nu_minus, phys_tol)
    return arr


def symplectic_invariants(sigma: CovarianceMatrix) -> SymplecticInvariants:
    """
    Local and global symplectic invariants.

    Returns:
        (I1, I2, I3, I4, Delta) with Ij = det Aj, I4 = det sigma and
        Delta = I1 + I2 + 2 I3
    """
    return _invariants(_as_4x4(sigma))


def symplectic_eigenvalues(sigma: CovarianceMatrix,
                           degeneracy_tol: Optional[float] = None) -> SymplecticSpectrum:
    """Symplectic eigenvalues (nu_minus <= nu_plus) of a validated covariance."""
    arr = _as_4x4(sigma)
    return _checked_spectrum(arr, _invariants(arr), degeneracy_tol)


def invariant_spectrum(inv: SymplecticInvariants) -> SymplecticSpectrum:
    """
    Closed-form spectrum 2 nu^2 = Delta -+ sqrt(Delta^2 - 4 I4).

    Small negative discriminants are clamped to zero.
    """
    root = np.sqrt(max(inv.Delta ** 2 - 4.0 * inv.I4, 0.0))
    return SymplecticSpectrum(float(np.sqrt(max(0.5 * (inv.Delta - root), 0.0))),
                              float(np.sqrt(0.5 * (inv.Delta + root))))


def ppt_min_symplectic(sigma: CovarianceMatrix,
                       degeneracy_tol: Optional[float] = None) -> float:
    """
    Smallest symplectic eigenvalue of the partially transposed covariance.

    A two-mode Gaussian state is entangled exactly when this is below 1.
    """
    arr = partial_transpose(_as_4x4(sigma))
    return _checked_spectrum(arr, _invariants(arr), degeneracy_tol).nu_minus
