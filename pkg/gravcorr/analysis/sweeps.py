"""
Parameter sweeps: squeezing of the initial state, the DKTM rotation
parameter alpha_tilde, and the coupling eta.

Every axis value is evolved independently (no warm starts); points run on a
thread pool and rows come back in axis order.
"""
import logging
from typing import Callable, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from gravcorr.errors import GravcorrError, InputError, NoUniqueSolution
from gravcorr.analysis.series import correlation_series, peak_discord, peak_mutual_information
from gravcorr.dynamics.propagator import Spacing, evolve_series, map_ordered, steady_state
from gravcorr.gaussian.correlations import DeltaBranch, gaussian_discord, mutual_information
from gravcorr.models.dktm import D11Convention
from gravcorr.models.model_registry import build_generators
from gravcorr.models.params import GeneratorPair, ModelParams
from gravcorr.models.states import coherent_cov, squeezed_cov
from gravcorr.utils.memory_monitor import MemoryMonitor

logger = logging.getLogger(__name__)


class SweepRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: float
    peak_discord: Optional[float] = None
    peak_tau: Optional[float] = None
    peak_mutual_information: Optional[float] = None
    asymptotic_discord: Optional[float] = None
    asymptotic_mutual_information: Optional[float] = None
    error_code: Optional[str] = None


class SweepTable(BaseModel):
    model_config = ConfigDict(frozen=True)

    axis_name: str
    axis_values: List[float]
    rows: List[SweepRow]

    @model_validator(mode="after")
    def _increasing(self) -> "SweepTable":
        if any(b <= a for a, b in zip(self.axis_values, self.axis_values[1:])):
            raise ValueError("axis values must be strictly increasing")
        if len(self.rows) != len(self.axis_values):
            raise ValueError("one row per axis value is required")
        return self

    def column(self, name: str) -> List[Optional[float]]:
        return [getattr(row, name) for row in self.rows]


def _check_axis(name: str, values: Sequence[float]) -> List[float]:
    values = [float(v) for v in values]
    if not values:
        raise InputError(f"{name} sweep needs at least one value")
    if any(not np.isfinite(v) for v in values):
        raise InputError(f"{name} sweep values must be finite", {"values": values})
    if any(b <= a for a, b in zip(values, values[1:])):
        raise InputError(f"{name} sweep values must be strictly increasing", {"values": values})
    return values


def _stationary_columns(gen: GeneratorPair, measured: int, branch: DeltaBranch) -> dict:
    try:
        sigma_ss = steady_state(gen)
    except NoUniqueSolution:
        return {}
    return {
        "asymptotic_discord": gaussian_discord(sigma_ss, measured, branch),
        "asymptotic_mutual_information": mutual_information(sigma_ss),
    }


def _evolved_row(value: float, gen: GeneratorPair, sigma0: np.ndarray, params: ModelParams,
                 tau_max: float, n_samples: int, spacing: Spacing, measured: int,
                 branch: DeltaBranch) -> SweepRow:
    traj = evolve_series(gen, sigma0, tau_max, n_samples, spacing, params=params, max_workers=1)
    series = correlation_series(traj, measured, branch, max_workers=1)
    peak = peak_discord(series)
    columns = _stationary_columns(gen, measured, branch)
    if not columns:
        # No stationary state: report where the sampled mutual information ends up.
        columns = {"asymptotic_mutual_information": float(series.mutual_information[-1])}
    return SweepRow(
        value=value,
        peak_discord=peak.d_star,
        peak_tau=peak.tau_star,
        peak_mutual_information=peak_mutual_information(series).d_star,
        **columns,
    )


def _run_sweep(axis_name: str, values: List[float], point: Callable[[float], SweepRow],
               max_workers: Optional[int]) -> SweepTable:
    logger.info(f"🔵 Sweeping {axis_name} over {len(values)} values")
    with MemoryMonitor(f"{axis_name}_sweep") as monitor:

        def guarded_point(value: float) -> SweepRow:
            try:
                return point(value)
            except GravcorrError as exc:
                logger.warning(f"⚠️ {axis_name}={value:g} failed: {exc.message}")
                return SweepRow(value=value, error_code=exc.error_code)
            finally:
                monitor.check_memory()

        rows = map_ordered(guarded_point, values, max_workers)
    failed = sum(1 for row in rows if row.error_code)
    if failed:
        logger.info(f"✅ {axis_name} sweep completed ({failed}/{len(rows)} points failed)")
    else:
        logger.info(f"✅ {axis_name} sweep completed")
    return SweepTable(axis_name=axis_name, axis_values=values, rows=rows)


def squeezing_sweep(p: ModelParams, s_values: Sequence[float], tau_max: float, n_samples: int = 500,
                    spacing: Spacing = "log", model: str = "ktm", measured: int = 2,
                    branch: DeltaBranch = "standard", dktm_d11: D11Convention = "limit-consistent",
                    max_workers: Optional[int] = None) -> SweepTable:
    """One evolution per squeezing parameter s from the squeezed product state."""
    values = _check_axis("squeezing", s_values)
    gen = build_generators(model, p, dktm_d11)

    def point(s: float) -> SweepRow:
        return _evolved_row(s, gen, squeezed_cov(s), p, tau_max, n_samples, spacing, measured, branch)

    return _run_sweep("squeezing", values, point, max_workers)


def alpha_sweep(p: ModelParams, alpha_values: Sequence[float], tau_max: Optional[float] = None,
                n_samples: int = 500, spacing: Spacing = "log", measured: int = 2,
                branch: DeltaBranch = "standard", dktm_d11: D11Convention = "limit-consistent",
                max_workers: Optional[int] = None) -> SweepTable:
    """
    Stationary discord and mutual information of the DKTM model per alpha_tilde.

    With ``tau_max`` set, each point is also evolved from a coherent start to
    record the transient peak.
    """
    values = _check_axis("alpha", alpha_values)
    if any(a <= 0.0 for a in values):
        raise InputError("alpha sweep values must be > 0", {"values": values})

    def point(alpha: float) -> SweepRow:
        params = ModelParams(**{**p.model_dump(), "alpha_tilde": alpha})
        gen = build_generators("dktm", params, dktm_d11)
        if tau_max is not None:
            return _evolved_row(alpha, gen, coherent_cov(), params, tau_max, n_samples, spacing,
                                measured, branch)
        columns = _stationary_columns(gen, measured, branch)
        if not columns:
            logger.warning(f"⚠️ alpha={alpha:g}: no unique stationary state")
            return SweepRow(value=alpha, error_code=NoUniqueSolution.error_code)
        return SweepRow(value=alpha, **columns)

    return _run_sweep("alpha", values, point, max_workers)


def eta_sweep(p: ModelParams, eta_values: Sequence[float], tau_max: float, n_samples: int = 500,
              spacing: Spacing = "log", measured: int = 2, branch: DeltaBranch = "standard",
              max_workers: Optional[int] = None) -> SweepTable:
    """KTM evolution from a coherent start for each coupling eta."""
    values = _check_axis("eta", eta_values)

    def point(eta: float) -> SweepRow:
        params = ModelParams(**{**p.model_dump(), "eta": eta})
        return _evolved_row(eta, build_generators("ktm", params), coherent_cov(), params, tau_max,
                            n_samples, spacing, measured, branch)

    return _run_sweep("eta", values, point, max_workers)
