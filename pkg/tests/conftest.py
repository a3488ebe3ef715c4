import numpy as np
import pytest

from reactlab import ModelParams


@pytest.fixture
def baseline():
    """Default parameter set used throughout the regression targets."""
    return ModelParams()


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_stable_2x2(rng):
    """Random real 2x2 with negative trace and positive determinant."""
    while True:
        M = rng.normal(size=(2, 2)) * rng.choice([0.1, 1.0, 10.0])
        tr = M[0, 0] + M[1, 1]
        det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
        if tr < -1e-6 and det > 1e-6:
            return M
