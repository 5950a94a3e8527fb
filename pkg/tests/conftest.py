import numpy as np
import pytest

from orderloss.states import SchmidtParam


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(1234))


@pytest.fixture
def max_entangled():
    return SchmidtParam.from_alpha_sq("1/2")


@pytest.fixture
def partial():
    return SchmidtParam.from_alpha(0.6)
