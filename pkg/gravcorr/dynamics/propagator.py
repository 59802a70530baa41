"""
Propagation of the covariance matrix under a generator pair.

sigma(tau) = e^{Y tau} sigma0 e^{Y^T tau} + 4 int_0^tau e^{Y s} D e^{Y^T s} ds

is evaluated exactly from a single exponential of the block matrix
[[Y, 4D], [0, -Y^T]] (Van Loan's construction); trajectories sample it
directly from tau = 0 so no error accumulates between samples.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Literal, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from gravcorr.config import config
from gravcorr.errors import InputError, NumericalDegeneracyError, PropagationAccuracyError, UnphysicalStateError
from gravcorr.gaussian.covariance import CovarianceMatrix, symplectic_eigenvalues, validate
from gravcorr.kernels.matkernel import lyapunov_residual, lyapunov_solve, mat_exp
from gravcorr.models.params import GeneratorPair, ModelParams

logger = logging.getLogger(__name__)

Spacing = Literal["linear", "log"]


class Trajectory(BaseModel):
    """Ordered covariance samples of one evolution."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True, protected_namespaces=())

    model_label: str
    params: Optional[ModelParams] = None
    taus: np.ndarray
    sigmas: np.ndarray
    generator: Optional[GeneratorPair] = None
    sigma0: Optional[np.ndarray] = None

    @field_validator("taus", "sigmas", mode="before")
    @classmethod
    def _as_array(cls, value) -> np.ndarray:
        arr = np.array(value, dtype=float)
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def _ordered(self) -> "Trajectory":
        if self.taus.ndim != 1 or self.sigmas.shape != (self.taus.shape[0], 4, 4):
            raise ValueError(f"taus {self.taus.shape} and sigmas {self.sigmas.shape} do not match")
        if np.any(self.taus < 0.0) or np.any(np.diff(self.taus) <= 0.0):
            raise ValueError("tau samples must be non-negative and strictly increasing")
        return self

    @property
    def samples(self) -> List[Tuple[float, np.ndarray]]:
        return [(float(t), s) for t, s in zip(self.taus, self.sigmas)]

    def __len__(self) -> int:
        return int(self.taus.shape[0])


class DivergenceReport(NamedTuple):
    slope: float
    diverging: bool


def _augmented(gen: GeneratorPair) -> np.ndarray:
    y = gen.drift
    zero = np.zeros((4, 4))
    return np.block([[y, 4.0 * gen.diffusion], [zero, -y.T]])


def propagate(gen: GeneratorPair, sigma0: CovarianceMatrix, tau: float,
              tolerance: Optional[float] = None) -> CovarianceMatrix:
    """
    Exact covariance at time tau.

    Args:
        gen: Drift/diffusion pair
        sigma0: Initial covariance (validated here)
        tau: Dimensionless time omega t, finite and >= 0
        tolerance: Allowed physicality shortfall of the result
            (default config.PROPAGATION_TOL)

    Returns:
        Symmetrised sigma(tau)

    Raises:
        PropagationAccuracyError: if the result is unphysical beyond tolerance
        NumericalDegeneracyError: if the flow overflows; the message names tau
    """
    sigma0 = validate(sigma0)
    tau = float(tau)
    if not np.isfinite(tau) or tau < 0.0:
        raise InputError(f"tau must be finite and >= 0, got {tau}", {"tau": tau})
    if tau == 0.0:
        return sigma0

    tol = config.PROPAGATION_TOL if tolerance is None else tolerance
    try:
        flow = mat_exp(_augmented(gen), tau)
    except NumericalDegeneracyError as exc:
        raise NumericalDegeneracyError(f"{exc.message} at tau={tau:.6g}", {**exc.details, "tau": tau}) from exc
    phi = flow[:4, :4]
    noise = flow[:4, 4:] @ phi.T
    sigma = phi @ sigma0 @ phi.T + noise
    sigma = 0.5 * (sigma + sigma.T)

    try:
        return validate(sigma, physical_tol=tol)
    except UnphysicalStateError as exc:
        logger.error(f"❌ Propagation lost physicality at tau={tau:.6g}: nu_minus={exc.nu_minus:.12g}")
        raise PropagationAccuracyError(tau, exc.nu_minus, tol)


def sample_times(tau_max: float, n_samples: int, spacing: Spacing = "linear",
                 log_start: Optional[float] = None) -> np.ndarray:
    """
    Sample grid for a trajectory.

    Linear grids start at 0; log grids start at log_start * tau_max
    (default config.LOG_SPACING_START) and end at tau_max.
    """
    if not np.isfinite(tau_max) or tau_max <= 0.0:
        raise InputError(f"tau_max must be positive, got {tau_max}", {"tau_max": tau_max})
    if n_samples < 2:
        raise InputError(f"n_samples must be >= 2, got {n_samples}", {"n_samples": n_samples})
    if spacing == "linear":
        return np.linspace(0.0, tau_max, n_samples)
    if spacing == "log":
        start = config.LOG_SPACING_START if log_start is None else log_start
        return np.geomspace(start * tau_max, tau_max, n_samples)
    raise InputError(f"Unknown spacing {spacing!r}", {"spacing": spacing})


def map_ordered(func, items: Sequence, max_workers: Optional[int]) -> list:
    workers = config.MAX_WORKERS if max_workers is None else max_workers
    if workers <= 1 or len(items) < 2:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items))


def evolve_series(gen: GeneratorPair, sigma0: CovarianceMatrix, tau_max: float, n_samples: int,
                  spacing: Spacing = "linear", params: Optional[ModelParams] = None,
                  chained: bool = False, log_start: Optional[float] = None,
                  max_workers: Optional[int] = None) -> Trajectory:
    """
    Sample sigma(tau) on a linear or logarithmic grid.

    Each sample is propagated from tau = 0 unless ``chained`` is set, in which
    case sample k is propagated from sample k-1.
    """
    taus = sample_times(tau_max, n_samples, spacing, log_start)
    sigma0 = validate(sigma0)

    if chained:
        sigmas = []
        current, last_tau = sigma0, 0.0
        for tau in taus:
            current = propagate(gen, current, tau - last_tau)
            sigmas.append(current)
            last_tau = tau
    else:
        sigmas = map_ordered(lambda tau: propagate(gen, sigma0, tau), list(taus), max_workers)

    logger.debug(f"Evolved {gen.model_label} over {n_samples} {spacing} samples up to tau={tau_max:g}")
    return Trajectory(model_label=gen.model_label, params=params, taus=taus, sigmas=np.stack(sigmas),
                      generator=gen, sigma0=sigma0)


def steady_state(gen: GeneratorPair, residual_tol: Optional[float] = None) -> CovarianceMatrix:
    """
    Stationary covariance solving Y sigma + sigma Y^T + 4 D = 0.

    Raises:
        NoUniqueSolution: for drifts with eigenvalue pairs summing to zero (KTM, unitary)
        NumericalDegeneracyError: if the Lyapunov residual exceeds residual_tol
    """
    q = 4.0 * gen.diffusion
    sigma = lyapunov_solve(gen.drift, q, residual_tol=residual_tol)
    residual = lyapunov_residual(gen.drift, sigma, q)
    sigma = validate(sigma)
    logger.info(f"✅ Steady state of {gen.model_label}: residual {residual:.2e}, "
                f"nu_minus={symplectic_eigenvalues(sigma).nu_minus:.6g}")
    return sigma


def propagate_mean(gen: GeneratorPair, mean0: Sequence[float], tau: float) -> np.ndarray:
    """First moments: <O>(tau) = e^{Y tau} <O>(0)."""
    mean0 = np.asarray(mean0, dtype=float).reshape(-1)
    if mean0.shape != (4,) or not np.all(np.isfinite(mean0)):
        raise InputError("mean0 must be a finite 4-vector", {"shape": list(mean0.shape)})
    return mat_exp(gen.drift, tau) @ mean0


def divergence_metric(traj: Trajectory, relative_threshold: Optional[float] = None) -> DivergenceReport:
    """
    Least-squares slope of trace sigma over the final half of a trajectory.

    The trajectory is flagged diverging when the slope exceeds
    relative_threshold * trace(sigma(tau_0)) per unit tau.
    """
    if len(traj) < 10:
        raise InputError(f"Need at least 10 samples, got {len(traj)}", {"n_samples": len(traj)})
    threshold = config.DIVERGENCE_SLOPE if relative_threshold is None else relative_threshold

    traces = np.trace(traj.sigmas, axis1=1, axis2=2)
    half = len(traj) // 2
    taus, tail = traj.taus[half:], traces[half:]
    centred = taus - taus.mean()
    slope = float(np.dot(centred, tail - tail.mean()) / np.dot(centred, centred))

    diverging = slope > threshold * float(traces[0])
    logger.debug(f"Trace slope {slope:.4e} over tau in [{taus[0]:.4g}, {taus[-1]:.4g}] -> diverging={diverging}")
    return DivergenceReport(slope=slope, diverging=diverging)
