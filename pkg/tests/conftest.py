import numpy as np
import pytest

from smoothlab import GridFunction, sample

DX = 2.0 ** -12
L = 8.0


@pytest.fixture(scope="session")
def fine_identity():
    return sample(lambda x: x, DX, -L, L, smooth=True)


@pytest.fixture(scope="session")
def fine_square():
    return sample(lambda x: x * x, DX, -L, L, smooth=True)


def random_gridfunction(seed, n=513, dx=2.0 ** -9, origin=0.0):
    rng = np.random.default_rng(seed)
    vals = rng.uniform(-1.0, 1.0, n)
    return GridFunction(dx, origin, vals, origin, origin + (n - 1) * dx)
