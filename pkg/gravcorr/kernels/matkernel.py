"""
Small dense real-matrix kernels: matrix exponential, symmetric eigenvalues,
linear solves and the continuous-time Lyapunov equation.

Everything here is sized for 2x2 through 16x16 systems and is a pure function
of its inputs, so the helpers are safe to call from any number of threads.
"""
import logging
from typing import Optional, Sequence, Union

import numpy as np
import scipy.linalg

from gravcorr.config import config
from gravcorr.errors import DimensionError, NoUniqueSolution, NumericalDegeneracyError, SymmetryError

logger = logging.getLogger(__name__)

RealMatrix = np.ndarray
ArrayLike = Union[np.ndarray, Sequence[Sequence[float]]]


def as_real_matrix(a: ArrayLike, name: str = "matrix") -> RealMatrix:
    """
    Coerce input to a finite 2-D float array.

    Args:
        a: Array-like of shape (rows, cols)
        name: Label used in error messages

    Returns:
        A float64 ndarray copy of the input
    """
    arr = np.array(a, dtype=float)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError(f"{name} must be a non-empty 2-D matrix, got shape {arr.shape}",
                             {"shape": list(arr.shape)})
    if not np.all(np.isfinite(arr)):
        raise DimensionError(f"{name} contains NaN or Inf entries", {"shape": list(arr.shape)})
    return arr


def _require_square(a: RealMatrix, name: str) -> None:
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {a.shape}", {"shape": list(a.shape)})


def max_abs(a: np.ndarray) -> float:
    """Max-abs (entrywise infinity) norm; 0 for empty input."""
    return float(np.max(np.abs(a))) if np.size(a) else 0.0


def mat_exp(a: ArrayLike, t: float = 1.0) -> RealMatrix:
    """
    Matrix exponential e^{A t} via ``scipy.linalg.expm``.

    Args:
        a: Square real matrix
        t: Finite real time factor

    Returns:
        e^{A t} as a new ndarray

    Raises:
        NumericalDegeneracyError: if the result overflows
    """
    a = as_real_matrix(a, "A")
    _require_square(a, "A")
    if not np.isfinite(t):
        raise DimensionError(f"Time factor must be finite, got {t}", {"t": t})

    at = a * float(t)
    if not np.any(at):
        return np.eye(at.shape[0])
    with np.errstate(over="ignore", invalid="ignore"):
        result = scipy.linalg.expm(at)
    if not np.all(np.isfinite(result)):
        norm = float(np.linalg.norm(at, 1))
        raise NumericalDegeneracyError(f"Matrix exponential overflowed (one-norm of A t {norm:.3e})",
                                       {"one_norm": norm, "t": float(t)})
    return result


def sym_eigvals(s: ArrayLike, tol: Optional[float] = None) -> np.ndarray:
    """
    Ascending eigenvalues of a real symmetric matrix.

    Raises:
        SymmetryError: if max|S - S^T| exceeds tol * max(1, max|S|)
    """
    s = as_real_matrix(s, "S")
    _require_square(s, "S")
    tol = config.KERNEL_SYMMETRY_TOL if tol is None else tol
    asym = max_abs(s - s.T)
    if asym > tol * max(1.0, max_abs(s)):
        raise SymmetryError(f"Matrix is not symmetric (max asymmetry {asym:.3e} > {tol:g})",
                            {"asymmetry": asym, "tolerance": tol})
    return np.linalg.eigvalsh(0.5 * (s + s.T))


def condition_estimate(a: ArrayLike) -> float:
    """2-norm condition number; inf for exactly singular input."""
    a = np.asarray(a, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        cond = float(np.linalg.cond(a))
    return cond if np.isfinite(cond) else float("inf")


def solve_linear(a: ArrayLike, b: Sequence[float], cond_threshold: Optional[float] = None,
                 what: str = "linear system") -> np.ndarray:
    """
    Solve A x = b for square A, refusing near-singular systems.

    Args:
        a: Square matrix
        b: Right-hand side of matching length
        cond_threshold: Condition estimate above which the system is rejected
        what: Label for the NoUniqueSolution message

    Returns:
        Solution vector x
    """
    a = as_real_matrix(a, "A")
    _require_square(a, "A")
    b = np.asarray(b, dtype=float).reshape(-1)
    if b.shape[0] != a.shape[0]:
        raise DimensionError(f"Right-hand side has length {b.shape[0]}, expected {a.shape[0]}",
                             {"rows": a.shape[0], "rhs": b.shape[0]})

    threshold = config.SINGULAR_COND if cond_threshold is None else cond_threshold
    cond = condition_estimate(a)
    if cond > threshold:
        logger.debug(f"Rejecting {what}: condition estimate {cond:.3e}")
        raise NoUniqueSolution(cond, threshold, what)
    try:
        return np.linalg.solve(a, b)
    except np.linalg.LinAlgError:
        raise NoUniqueSolution(float("inf"), threshold, what)


def lyapunov_residual(y: ArrayLike, x: ArrayLike, q: ArrayLike) -> float:
    """max|Y X + X Y^T + Q|."""
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    return max_abs(y @ x + x @ y.T + np.asarray(q, dtype=float))


def lyapunov_solve(y: ArrayLike, q: ArrayLike, cond_threshold: Optional[float] = None,
                   residual_tol: Optional[float] = None) -> RealMatrix:
    """
    Solve Y X + X Y^T + Q = 0 for symmetric X.

    The equation is vectorised (column-major) into the n^2 x n^2 system
    (I kron Y + Y kron I) vec X = -vec Q and handed to ``solve_linear``.

    Raises:
        NoUniqueSolution: when Y has eigenvalue pairs summing to zero
        NumericalDegeneracyError: if max|Y X + X Y^T + Q| is not below
            residual_tol * max(1, max|Q|)
    """
    y = as_real_matrix(y, "Y")
    q = as_real_matrix(q, "Q")
    _require_square(y, "Y")
    _require_square(q, "Q")
    if y.shape != q.shape:
        raise DimensionError(f"Y {y.shape} and Q {q.shape} must have equal size",
                             {"y_shape": list(y.shape), "q_shape": list(q.shape)})
    sym_eigvals(q, tol=max(config.KERNEL_SYMMETRY_TOL, config.SYMMETRY_TOL))

    n = y.shape[0]
    ident = np.eye(n)
    kron = np.kron(ident, y) + np.kron(y, ident)
    vec_x = solve_linear(kron, -q.reshape(-1, order="F"), cond_threshold, what="Lyapunov equation")
    x = vec_x.reshape((n, n), order="F")
    x = 0.5 * (x + x.T)

    residual = lyapunov_residual(y, x, q)
    tol = config.LYAPUNOV_RESIDUAL_TOL if residual_tol is None else residual_tol
    bound = tol * max(1.0, max_abs(q))
    logger.debug(f"Lyapunov solve n={n}: residual {residual:.3e} (bound {bound:.3e})")
    if not residual < bound:
        raise NumericalDegeneracyError(f"Lyapunov residual {residual:.3e} exceeds {bound:.3e}",
                                       {"residual": residual, "bound": bound})
    return x
