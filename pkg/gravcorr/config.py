"""
Configuration module for gravcorr.
Handles environment variables, numerical tolerances and run defaults.
"""
import logging
import os
from pathlib import Path
from typing import Optional

logger = logging.getLogger(__name__)

# Load environment variables from .env file if it exists
try:
    from dotenv import load_dotenv
    env_path = Path(__file__).parent.parent / '.env'
    if env_path.exists():
        load_dotenv(env_path)
        logger.debug(f"✅ Loaded environment variables from {env_path}")
except ImportError:
    # python-dotenv not installed, skip
    pass


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        return float(raw)
    except ValueError:
        logger.warning(f"⚠️ Ignoring non-numeric {name}={raw!r}, using {default}")
        return default


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        return int(raw)
    except ValueError:
        logger.warning(f"⚠️ Ignoring non-integer {name}={raw!r}, using {default}")
        return default


class Config:
    """Numerical tolerances and run defaults, overridable through GRAVCORR_* variables."""

    # Covariance matrix checks
    SYMMETRY_TOL: float = _env_float('GRAVCORR_SYMMETRY_TOL', 1e-10)
    PHYSICAL_TOL: float = _env_float('GRAVCORR_PHYSICAL_TOL', 1e-8)
    PROPAGATION_TOL: float = _env_float('GRAVCORR_PROPAGATION_TOL', 1e-6)

    # Matrix kernels
    KERNEL_SYMMETRY_TOL: float = _env_float('GRAVCORR_KERNEL_SYMMETRY_TOL', 1e-12)
    SINGULAR_COND: float = _env_float('GRAVCORR_SINGULAR_COND', 1e12)
    LYAPUNOV_RESIDUAL_TOL: float = _env_float('GRAVCORR_LYAPUNOV_RESIDUAL_TOL', 1e-10)

    # Symplectic spectra and discord
    DEGENERACY_TOL: float = _env_float('GRAVCORR_DEGENERACY_TOL', 1e-9)
    DELTA_FLOOR_TOL: float = _env_float('GRAVCORR_DELTA_FLOOR_TOL', 1e-6)

    # Trajectories and diagnostics
    LOG_SPACING_START: float = _env_float('GRAVCORR_LOG_SPACING_START', 1e-6)
    DIVERGENCE_SLOPE: float = _env_float('GRAVCORR_DIVERGENCE_SLOPE', 1e-3)
    MAX_WORKERS: int = _env_int('GRAVCORR_MAX_WORKERS', 4)

    # Logging
    DEBUG: bool = os.getenv('GRAVCORR_DEBUG', 'false').lower() == 'true'
    LOG_LEVEL: str = os.getenv('GRAVCORR_LOG_LEVEL', 'INFO').upper()
    LOG_FILE: Optional[str] = os.getenv('GRAVCORR_LOG_FILE') or None

    @classmethod
    def use_color(cls) -> bool:
        """Colour is disabled whenever NO_COLOR is present, whatever its value."""
        return 'NO_COLOR' not in os.environ

    @classmethod
    def log_level(cls) -> int:
        """Resolve the configured log level name, DEBUG when the debug flag is set."""
        if cls.DEBUG:
            return logging.DEBUG
        return getattr(logging, cls.LOG_LEVEL, logging.INFO)


# Shared instance read by every module
config = Config()
