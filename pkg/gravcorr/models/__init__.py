"""Generator pairs of the KTM, DKTM and unitary models, parameters and initial states."""
from .model_registry import build_generators, get_model, model_registry, register_model  # noqa: F401
