import cmath

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from trilinear.qspecial import DeformationParameter
from trilinear.representation import TripleParams

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile("default")


def finite(lo, hi):
    return st.floats(min_value=lo, max_value=hi, allow_nan=False, allow_infinity=False)


def complexes(radius=10.0):
    return st.builds(complex, finite(-radius, radius), finite(-radius, radius))


def q_inside(lo=0.3, hi=0.95, max_arg=0.3):
    return st.builds(lambda r, t: cmath.rect(r, t), finite(lo, hi), finite(-max_arg, max_arg))


@pytest.fixture
def classical():
    return DeformationParameter.classical_limit()


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)


@pytest.fixture
def generic_triple():
    return TripleParams.from_values((2.1, 1.3 + 0.5j, 0.7), (0, 0, 0))
