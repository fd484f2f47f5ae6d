import numpy as np
import pytest

from kmslab.fock import FockSpec, HamiltonianProfile, ladder_power
from kmslab.standard_form import StandardFormContext


@pytest.fixture
def linear_spec():
    return FockSpec(dim=12, profile=HamiltonianProfile.linear(), beta=1.0)


@pytest.fixture
def linear_ctx(linear_spec):
    return StandardFormContext.from_spec(linear_spec)


@pytest.fixture
def creator(linear_spec):
    return ladder_power(linear_spec, 1)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
