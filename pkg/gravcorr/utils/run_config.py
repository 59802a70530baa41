"""
Run configuration shared by the sub-commands.

A run is described by a ``RunConfig``: an optional JSON file supplies the base
values and explicit command-line flags override them.
"""
import json
import logging
import math
import re
from pathlib import Path
from typing import Any, Dict, Literal, Mapping, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from gravcorr.errors import UsageError
from gravcorr.models.model_registry import build_generators
from gravcorr.models.params import GeneratorPair, ModelParams
from gravcorr.models.states import coherent_cov, squeezed_cov, thermal_cov

logger = logging.getLogger(__name__)

_STATE_PATTERN = re.compile(r"^\s*(coherent|squeezed|thermal)\s*(?:(?:\(\s*([^()]*?)\s*\))|(?::\s*(\S+)))?\s*$")


def parse_initial_state(text: str) -> Tuple[str, Optional[float]]:
    """
    Split an initial-state spec into its kind and parameter.

    ``coherent``, ``squeezed(0.5)``, ``squeezed:0.5``, ``thermal(2)``, ``thermal:2``.
    """
    match = _STATE_PATTERN.match(text)
    if not match:
        raise ValueError(f"unrecognised initial state {text!r}; use coherent, squeezed(s) or thermal(nbar)")
    kind, raw = match.group(1), match.group(2) if match.group(2) is not None else match.group(3)
    if kind == "coherent":
        if raw:
            raise ValueError("coherent takes no parameter")
        return kind, None
    if not raw:
        raise ValueError(f"{kind} needs a parameter, e.g. {kind}(0.5)")
    try:
        value = float(raw)
    except ValueError:
        raise ValueError(f"{kind} parameter {raw!r} is not a number")
    if not math.isfinite(value):
        raise ValueError(f"{kind} parameter must be finite")
    if kind == "thermal" and value < 0.0:
        raise ValueError("thermal occupation must be >= 0")
    return kind, value


class RunConfig(BaseModel):
    """Settings of one command run; field names double as JSON keys and kebab-case flags."""

    model_config = ConfigDict(extra="forbid", frozen=True, protected_namespaces=())

    model: Literal["ktm", "dktm", "unitary"] = "ktm"
    eta: float = Field(default=1e-2, gt=0.0, lt=1.0)
    omega: float = Field(default=1.0, gt=0.0)
    alpha_tilde: float = Field(default=0.0, ge=0.0)
    lambda_ratio: float = Field(default=1.0, gt=0.0)
    initial_state: str = "coherent"
    tau_max: float = Field(default=1e3, gt=0.0)
    n_samples: int = Field(default=500, ge=2)
    spacing: Literal["linear", "log"] = "log"
    measured_subsystem: Literal[1, 2] = 2
    delta_branch: Literal["standard", "paper"] = "standard"
    dktm_d11: Literal["limit-consistent", "paper"] = "limit-consistent"
    output_path: Optional[str] = None
    report_bits: bool = False

    @field_validator("eta", "omega", "alpha_tilde", "lambda_ratio", "tau_max")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("must be finite")
        return value

    @field_validator("initial_state")
    @classmethod
    def _known_state(cls, value: str) -> str:
        parse_initial_state(value)
        return value.strip()

    def model_params(self) -> ModelParams:
        return ModelParams(eta=self.eta, omega=self.omega, alpha_tilde=self.alpha_tilde,
                           lambda_ratio=self.lambda_ratio)

    def generators(self) -> GeneratorPair:
        return build_generators(self.model, self.model_params(), self.dktm_d11)

    def initial_covariance(self) -> np.ndarray:
        kind, value = parse_initial_state(self.initial_state)
        if kind == "squeezed":
            return squeezed_cov(value)
        if kind == "thermal":
            return thermal_cov(value)
        return coherent_cov()

    def output_or(self, default: str) -> Path:
        return Path(self.output_path or default)


def _validation_detail(exc: ValidationError) -> Dict[str, Any]:
    return {"errors": [{"field": ".".join(str(p) for p in err["loc"]), "message": err["msg"]}
                       for err in exc.errors()]}


def load_json_config(path: Optional[str]) -> Dict[str, Any]:
    if path is None:
        return {}
    config_path = Path(path)
    try:
        data = json.loads(config_path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise UsageError(f"Config file not found: {config_path}", {"config": str(config_path)})
    except json.JSONDecodeError as e:
        raise UsageError(f"Config file {config_path} is not valid JSON: {e.msg} (line {e.lineno})",
                         {"config": str(config_path)})
    if not isinstance(data, dict):
        raise UsageError(f"Config file {config_path} must hold a JSON object", {"config": str(config_path)})
    logger.debug(f"Loaded {len(data)} settings from {config_path}")
    return data


def build_run_config(config_path: Optional[str] = None,
                     overrides: Optional[Mapping[str, Any]] = None) -> RunConfig:
    """
    Merge a JSON config file with explicit flag values.

    Args:
        config_path: Optional path of a JSON object with RunConfig field names
        overrides: Flag values; None entries mean "not given" and are skipped

    Returns:
        RunConfig

    Raises:
        UsageError: unreadable file, unknown keys, or invalid values
    """
    data = load_json_config(config_path)
    data.update({k: v for k, v in (overrides or {}).items() if v is not None})
    try:
        return RunConfig(**data)
    except ValidationError as exc:
        detail = _validation_detail(exc)
        summary = "; ".join(f"{e['field']}: {e['message']}" for e in detail["errors"])
        raise UsageError(f"Invalid run configuration: {summary}", detail)
