"""
Shared pieces of the sub-commands: RunConfig flags, error-to-exit-code
mapping and value-list parsing.
"""
import functools
import logging
import sys
from typing import Any, Callable, Dict, List

import click
from pydantic import ValidationError

from gravcorr.errors import EXIT_USAGE, GravcorrError, UsageError
from gravcorr.utils.run_config import RunConfig, build_run_config

logger = logging.getLogger(__name__)

RUN_CONFIG_FIELDS = (
    "model", "eta", "omega", "alpha_tilde", "lambda_ratio", "initial_state", "tau_max",
    "n_samples", "spacing", "measured_subsystem", "delta_branch", "dktm_d11", "output_path",
    "report_bits",
)

_RUN_CONFIG_OPTIONS = [
    click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
                 help="JSON file with RunConfig fields; flags override it."),
    click.option("--model", type=click.Choice(["ktm", "dktm", "unitary"]), default=None),
    click.option("--eta", type=float, default=None, help="Dimensionless coupling, 0 < eta < 1."),
    click.option("--omega", type=float, default=None, help="Trap frequency; only converts tau to physical time in diagnostics."),
    click.option("--alpha-tilde", type=float, default=None, help="DKTM rotation parameter."),
    click.option("--lambda-ratio", type=float, default=None, help="Feedback-rate ratio c."),
    click.option("--initial-state", type=str, default=None,
                 help="coherent | squeezed(s) | squeezed:s | thermal(nbar) | thermal:nbar"),
    click.option("--tau-max", type=float, default=None),
    click.option("--n-samples", type=int, default=None),
    click.option("--spacing", type=click.Choice(["linear", "log"]), default=None),
    click.option("--measured-subsystem", type=click.IntRange(1, 2), default=None),
    click.option("--delta-branch", type=click.Choice(["standard", "paper"]), default=None),
    click.option("--dktm-d11", type=click.Choice(["limit-consistent", "paper"]), default=None),
    click.option("--output-path", "-o", type=click.Path(dir_okay=False), default=None),
    click.option("--report-bits", is_flag=True, default=False,
                 help="Write entropies in bits instead of nats."),
]


def run_config_options(func: Callable) -> Callable:
    """Attach the --config flag and one kebab-case flag per RunConfig field."""
    for option in reversed(_RUN_CONFIG_OPTIONS):
        func = option(func)
    return func


def run_config_from(kwargs: Dict[str, Any]) -> RunConfig:
    """Pop the RunConfig flags out of a command's kwargs and build the config."""
    config_path = kwargs.pop("config_path", None)
    overrides = {name: kwargs.pop(name, None) for name in RUN_CONFIG_FIELDS}
    # An unset --report-bits must not override a JSON "report_bits": true
    overrides["report_bits"] = overrides["report_bits"] or None
    return build_run_config(config_path, overrides)


def guarded(func: Callable) -> Callable:
    """Turn library errors into a logged diagnostic and the matching exit code."""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except GravcorrError as exc:
            logger.error(f"❌ {exc.error_code}: {exc.message}")
            logger.debug(f"Error detail: {exc.to_detail()}")
            sys.exit(exc.exit_code)
        except ValidationError as exc:
            logger.error(f"❌ INVALID_CONFIGURATION: {exc.error_count()} invalid value(s)")
            for err in exc.errors():
                logger.error(f"   {'.'.join(str(p) for p in err['loc'])}: {err['msg']}")
            sys.exit(EXIT_USAGE)
    return wrapper


def parse_values(text: str, what: str = "values") -> List[float]:
    """Comma-separated reals, e.g. ``0,0.5,1,2``."""
    items = [item.strip() for item in text.split(",") if item.strip()]
    if not items:
        raise UsageError(f"No {what} given", {what: text})
    try:
        return [float(item) for item in items]
    except ValueError:
        raise UsageError(f"Could not parse {what} {text!r}; expected comma-separated numbers", {what: text})
