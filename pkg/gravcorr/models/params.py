"""
Parameter models shared by the generator builders and the command layer.
"""
import logging
import math
from typing import NamedTuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from gravcorr.kernels.matkernel import max_abs, sym_eigvals

logger = logging.getLogger(__name__)

GRAVITATIONAL_CONSTANT = 6.674e-11  # m^3 kg^-1 s^-2

# Weak-coupling regime: warn above this eta, reject at or above 1.
ETA_WARN = 0.1


class ModelParams(BaseModel):
    """
    Dimensionless model parameters.

    Generators act on tau = omega t, so ``omega`` never enters the dynamics;
    it only converts sample times back to physical time.
    """

    model_config = ConfigDict(frozen=True)

    eta: float = Field(gt=0.0, lt=1.0)
    omega: float = Field(default=1.0, gt=0.0)
    alpha_tilde: float = Field(default=0.0, ge=0.0)
    lambda_ratio: float = Field(default=1.0, gt=0.0)

    @field_validator("eta", "omega", "alpha_tilde", "lambda_ratio")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("must be finite")
        return value

    @field_validator("eta")
    @classmethod
    def _weak_coupling(cls, value: float) -> float:
        if value > ETA_WARN:
            logger.warning(f"⚠️ eta={value:g} is outside the weak-coupling regime (eta << 1)")
        return value

    def physical_time(self, tau: float) -> float:
        """Physical time t = tau / omega."""
        return float(tau) / self.omega


class PhysicalParams(BaseModel):
    """SI parameters of the two-mass setup."""

    model_config = ConfigDict(frozen=True)

    G: float = Field(default=GRAVITATIONAL_CONSTANT, gt=0.0)
    m1: float = Field(gt=0.0)
    m2: float = Field(gt=0.0)
    d: float = Field(gt=0.0)
    omega: float = Field(gt=0.0)


class Coupling(NamedTuple):
    K: float
    eta: float


def derive_coupling(p: PhysicalParams) -> Coupling:
    """
    Linearised Newtonian spring constant and dimensionless coupling.

    K = 2 G m1 m2 / d^3 and eta = K / (m omega^2) with m = sqrt(m1 m2).
    """
    if not math.isclose(p.m1, p.m2, rel_tol=1e-12):
        logger.warning(f"⚠️ Unequal masses m1={p.m1:g}, m2={p.m2:g}; using m = sqrt(m1 m2) for eta")
    k = 2.0 * p.G * p.m1 * p.m2 / p.d ** 3
    m = math.sqrt(p.m1 * p.m2)
    return Coupling(K=k, eta=k / (m * p.omega ** 2))


class GeneratorPair(BaseModel):
    """Drift Y and diffusion D of the flow d(sigma)/dtau = Y sigma + sigma Y^T + 4 D."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True, protected_namespaces=())

    model_label: str
    drift: np.ndarray
    diffusion: np.ndarray

    @field_validator("drift", "diffusion", mode="before")
    @classmethod
    def _as_array(cls, value) -> np.ndarray:
        arr = np.array(value, dtype=float)
        if arr.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("matrix contains NaN or Inf entries")
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def _diffusion_psd(self) -> "GeneratorPair":
        if max_abs(self.diffusion - self.diffusion.T) > 1e-12:
            raise ValueError("diffusion matrix must be symmetric")
        if sym_eigvals(self.diffusion)[0] < -1e-12:
            raise ValueError("diffusion matrix must be positive semidefinite")
        return self
