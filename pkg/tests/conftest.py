import numpy as np
import pytest

from coupledfp import get_builtin


@pytest.fixture
def linear():
    return get_builtin("linear_demo")


@pytest.fixture
def affine():
    return get_builtin("affine_demo")


@pytest.fixture
def integral():
    return get_builtin("integral_demo")


def rand_points(rng, lo, hi, count, dim):
    return rng.uniform(lo, hi, size=(count, dim))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
