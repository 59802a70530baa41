from gravcorr.errors import UsageError

model_registry = {}


def register_model(name):
    """A decorator to register a generator-pair builder under a model name."""
    def decorator(func):
        model_registry[name] = func
        return func
    return decorator


def get_model(name):
    """Look up a registered builder, raising a usage error for unknown names."""
    try:
        return model_registry[name]
    except KeyError:
        raise UsageError(
            f"Unknown model {name!r}; available: {', '.join(sorted(model_registry))}",
            {"model": name, "available": sorted(model_registry)},
        )


def build_generators(name, params, dktm_d11="limit-consistent"):
    """Build the generator pair of a registered model; ``dktm_d11`` only reaches the DKTM builder."""
    builder = get_model(name)
    if name == "dktm":
        return builder(params, d11=dktm_d11)
    return builder(params)


# Import models here to ensure they are registered upon package import.
# The act of importing the module will execute the @register_model decorator.
from . import ktm  # noqa: E402,F401
from . import dktm  # noqa: E402,F401
