"""
Correlation time series over trajectories, peak extraction and the
long-time discord asymptote of the KTM model.
"""
import logging
import math
from typing import List, Literal, NamedTuple, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from gravcorr.errors import DomainError, InputError, NumericalDegeneracyError
from gravcorr.dynamics.propagator import Trajectory, map_ordered, propagate
from gravcorr.gaussian.correlations import CorrelationRecord, DeltaBranch, correlation_record, gaussian_discord

logger = logging.getLogger(__name__)

GOLDEN_RATIO = 0.5 * (1.0 + math.sqrt(5.0))

Refinement = Literal["parabola", "golden", "none"]


class CorrelationSeries(BaseModel):
    """Per-sample correlation records of one trajectory."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    taus: np.ndarray
    records: List[CorrelationRecord]
    traces: np.ndarray
    measured: int = 2
    branch: DeltaBranch = "standard"
    trajectory: Optional[Trajectory] = None

    @field_validator("taus", "traces", mode="before")
    @classmethod
    def _as_array(cls, value) -> np.ndarray:
        arr = np.array(value, dtype=float)
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def _ordered(self) -> "CorrelationSeries":
        if not (len(self.taus) == len(self.records) == len(self.traces)):
            raise ValueError("taus, records and traces must have equal length")
        if np.any(np.diff(self.taus) <= 0.0):
            raise ValueError("tau samples must be strictly increasing")
        return self

    @property
    def discord(self) -> np.ndarray:
        return np.array([r.discord for r in self.records])

    @property
    def mutual_information(self) -> np.ndarray:
        return np.array([r.mutual_information for r in self.records])

    @property
    def ppt_nu_minus(self) -> np.ndarray:
        return np.array([r.ppt_nu_minus for r in self.records])

    @property
    def entangled(self) -> np.ndarray:
        return np.array([r.entangled for r in self.records], dtype=bool)

    def __len__(self) -> int:
        return len(self.records)


class Peak(NamedTuple):
    tau_star: float
    d_star: float


def _record_at(tau: float, sigma: np.ndarray, measured: int, branch: DeltaBranch) -> CorrelationRecord:
    try:
        return correlation_record(sigma, measured, branch)
    except (NumericalDegeneracyError, DomainError) as exc:
        logger.error(f"❌ Correlation analysis failed at tau={tau:.6g}: {exc.message}")
        raise type(exc)(f"{exc.message} at tau={tau:.6g}", {**exc.details, "tau": float(tau)}) from exc


def correlation_series(traj: Trajectory, measured: int = 2, branch: DeltaBranch = "standard",
                       max_workers: Optional[int] = None) -> CorrelationSeries:
    """
    Mutual information, discord, PPT witness and trace at every sample.

    Raises:
        NumericalDegeneracyError: naming the first failing sample time
    """
    records = map_ordered(lambda item: _record_at(item[0], item[1], measured, branch),
                          list(zip(traj.taus, traj.sigmas)), max_workers)
    entangled = sum(r.entangled for r in records)
    if entangled:
        logger.info(f"📊 {traj.model_label}: {entangled}/{len(records)} samples flagged entangled")
    return CorrelationSeries(
        taus=traj.taus,
        records=records,
        traces=np.trace(traj.sigmas, axis1=1, axis2=2),
        measured=measured,
        branch=branch,
        trajectory=traj,
    )


def asymptotic_ktm_discord(eta: float, tau: float) -> float:
    """
    Long-time, weak-coupling expression of the KTM discord for a coherent start.

    With x = eta tau:
    D = (1/2) [ (1 + x) ln(x / (2 + x)) + ln(1 - x^-4)
                - (x^2 / (1 + x)) ln((x^2 - x - 1) / (x^2 + x + 1)) ]

    Raises:
        DomainError: when x <= (1 + sqrt 5) / 2, where x^2 - x - 1 <= 0
    """
    x = float(eta) * float(tau)
    if not math.isfinite(x) or x <= GOLDEN_RATIO:
        raise DomainError(f"eta*tau = {x:.6g} must exceed {GOLDEN_RATIO:.6f} for the asymptote",
                          {"eta_tau": x, "bound": GOLDEN_RATIO})
    return 0.5 * ((1.0 + x) * math.log(x / (2.0 + x))
                  + math.log(1.0 - x ** -4)
                  - (x ** 2 / (1.0 + x)) * math.log((x ** 2 - x - 1.0) / (x ** 2 + x + 1.0)))


def _parabola_vertex(t: np.ndarray, d: np.ndarray) -> float:
    (x0, x1, x2), (y0, y1, y2) = t, d
    denom = (x0 - x1) * (x0 - x2) * (x1 - x2)
    a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom
    b = (x2 ** 2 * (y0 - y1) + x1 ** 2 * (y2 - y0) + x0 ** 2 * (y1 - y2)) / denom
    if a >= 0.0:
        return float(x1)
    return float(min(max(-b / (2.0 * a), x0), x2))


def _golden_max(func, lo: float, hi: float, iterations: int = 60):
    inv = 1.0 / GOLDEN_RATIO
    c, d = hi - inv * (hi - lo), lo + inv * (hi - lo)
    fc, fd = func(c), func(d)
    for _ in range(iterations):
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - inv * (hi - lo)
            fc = func(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + inv * (hi - lo)
            fd = func(d)
    return (c, fc) if fc > fd else (d, fd)


def peak_discord(series: CorrelationSeries, refine: Refinement = "parabola") -> Peak:
    """
    Global discord maximum with refinement of its location.

    ``parabola`` fits the three samples around the maximum and keeps the vertex
    inside the bracket; ``golden`` runs a golden-section search over the exact
    propagator inside the bracket (needs the series' trajectory) and may raise
    the peak value. The sampled maximum is returned as-is at the grid ends.
    """
    if len(series) < 3:
        raise InputError(f"Need at least 3 samples, got {len(series)}", {"n_samples": len(series)})
    discord = series.discord
    if not np.any(discord > 0.0):
        logger.info("📊 Flat (all-zero) discord series; returning the first sample")
        return Peak(float(series.taus[0]), float(discord[0]))

    k = int(np.argmax(discord))
    tau_k, d_k = float(series.taus[k]), float(discord[k])
    if refine == "none" or k == 0 or k == len(series) - 1:
        return Peak(tau_k, d_k)

    bracket = series.taus[k - 1:k + 2]
    if refine == "parabola":
        return Peak(_parabola_vertex(bracket, discord[k - 1:k + 2]), d_k)

    if refine == "golden":
        traj = series.trajectory
        if traj is None or traj.generator is None or traj.sigma0 is None:
            raise InputError("Golden refinement needs a series built from an evolved trajectory")

        def discord_at(tau: float) -> float:
            sigma = propagate(traj.generator, traj.sigma0, tau)
            return gaussian_discord(sigma, series.measured, series.branch)

        tau_g, d_g = _golden_max(discord_at, float(bracket[0]), float(bracket[2]))
        return Peak(tau_g, d_g) if d_g > d_k else Peak(tau_k, d_k)

    raise InputError(f"Unknown refinement {refine!r}", {"refine": refine})


def peak_mutual_information(series: CorrelationSeries) -> Peak:
    """Sampled global maximum of the mutual information."""
    mi = series.mutual_information
    k = int(np.argmax(mi))
    return Peak(float(series.taus[k]), float(mi[k]))
