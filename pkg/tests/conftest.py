import logging

import numpy as np
import pytest

from gravcorr.models.dktm import dktm_generators
from gravcorr.models.ktm import ktm_generators, unitary_generators
from gravcorr.models.params import ModelParams


@pytest.fixture(autouse=True)
def reset_gravcorr_logger():
    """CLI runs install handlers on the package logger; hand it back to caplog afterwards."""
    yield
    logger = logging.getLogger("gravcorr")
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
    logger.propagate = True
    logger.setLevel(logging.NOTSET)


@pytest.fixture
def ktm_params():
    return ModelParams(eta=1e-2)


@pytest.fixture
def ktm(ktm_params):
    return ktm_generators(ktm_params)


@pytest.fixture
def unitary(ktm_params):
    return unitary_generators(ktm_params)


@pytest.fixture
def dktm():
    return dktm_generators(ModelParams(eta=1e-2, alpha_tilde=0.1))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
