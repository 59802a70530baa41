"""
Exception hierarchy shared by every gravcorr module.

Each error carries an ``error_code`` and a ``details`` dict so that the command
layer can report ``{"error_code": ..., "message": ...}`` style diagnostics and
pick the process exit code without inspecting message text.
"""
from typing import Any, Dict, Optional

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_USAGE = 2
EXIT_CAPABILITY = 3


class GravcorrError(Exception):
    """Base class for all library errors."""

    error_code: str = "GRAVCORR_ERROR"
    exit_code: int = EXIT_NUMERICAL

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details: Dict[str, Any] = dict(details or {})

    def to_detail(self) -> Dict[str, Any]:
        return {"error_code": self.error_code, "message": self.message, **self.details}


class DimensionError(GravcorrError):
    error_code = "DIMENSION_MISMATCH"


class SymmetryError(GravcorrError):
    error_code = "NOT_SYMMETRIC"


class UnphysicalStateError(GravcorrError):
    error_code = "UNPHYSICAL_STATE"

    def __init__(self, nu_minus: float, tolerance: float):
        super().__init__(
            f"Covariance violates the uncertainty bound: nu_minus={nu_minus:.12g} < 1 - {tolerance:g}",
            {"nu_minus": nu_minus, "tolerance": tolerance},
        )
        self.nu_minus = nu_minus


class NumericalDegeneracyError(GravcorrError):
    error_code = "NUMERICAL_DEGENERACY"


class DomainError(GravcorrError):
    error_code = "DOMAIN_ERROR"


class NoUniqueSolution(GravcorrError):
    error_code = "NO_UNIQUE_SOLUTION"

    def __init__(self, condition: float, threshold: float, what: str = "linear system"):
        super().__init__(
            f"The {what} has no unique solution (condition estimate {condition:.3e} > {threshold:.1e})",
            {"condition": condition, "threshold": threshold},
        )
        self.condition = condition


class PropagationAccuracyError(GravcorrError):
    error_code = "PROPAGATION_ACCURACY"

    def __init__(self, tau: float, nu_minus: float, tolerance: float):
        super().__init__(
            f"Propagated covariance at tau={tau:.6g} is unphysical (nu_minus={nu_minus:.12g}, "
            f"tolerance {tolerance:g}); try smaller tau steps",
            {"tau": tau, "nu_minus": nu_minus, "tolerance": tolerance},
        )
        self.tau = tau
        self.nu_minus = nu_minus


class InputError(GravcorrError):
    error_code = "INVALID_INPUT"


class UsageError(GravcorrError):
    error_code = "USAGE_ERROR"
    exit_code = EXIT_USAGE


class ModelCapabilityError(GravcorrError):
    error_code = "MODEL_CAPABILITY"
    exit_code = EXIT_CAPABILITY
