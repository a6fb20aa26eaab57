import numpy as np
import pytest

from mrootgeom import make_bg3, make_bg4
from mrootgeom.verify import BUILTIN_FORMS, sample_regular_directions


@pytest.fixture(scope="session")
def bg3():
    return make_bg3()


@pytest.fixture(scope="session")
def bg4():
    return make_bg4()


def regular_points(metric, tag, count, seed=1234):
    rng = np.random.default_rng(seed)
    return sample_regular_directions(metric, count, rng, BUILTIN_FORMS[tag])


@pytest.fixture(scope="session")
def bg3_points(bg3):
    return regular_points(bg3, "bg3", 60)


@pytest.fixture(scope="session")
def bg4_points(bg4):
    return regular_points(bg4, "bg4", 60)
