import numpy as np
import pytest

from nctorus.cocycle import ReducedTheta, reduce_theta
from nctorus.experiments import default_theta


@pytest.fixture
def theta2():
    """Full skew matrix, d=2, irrational twist."""
    return default_theta(2)


@pytest.fixture
def red2(theta2):
    """Reduced (strictly lower triangular) form of theta2."""
    return reduce_theta(theta2)


@pytest.fixture
def quarter():
    """d=2 reduction with a rational twist 1/4: clean quarter-turn phases."""
    return ReducedTheta(np.array([[0.0, 0.0], [0.25, 0.0]]))


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(key=2024))
