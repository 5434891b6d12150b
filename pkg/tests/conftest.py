import numpy as np
import pytest

from orlimax import GridSpec, calibrate_constants, euclidean, heisenberg1


@pytest.fixture(scope="session")
def e1():
    return calibrate_constants(euclidean(1))


@pytest.fixture(scope="session")
def e2():
    return calibrate_constants(euclidean(2))


@pytest.fixture(scope="session")
def h1():
    return calibrate_constants(heisenberg1(), resolution=129)


@pytest.fixture(scope="session")
def grid_e1(e1):
    return GridSpec(e1, (-2.0,), (2.0,), (257,))


@pytest.fixture(scope="session")
def grid_e2(e2):
    return GridSpec(e2, (-2.0, -2.0), (2.0, 2.0), (33, 33))


@pytest.fixture(scope="session")
def grid_h1(h1):
    return GridSpec(h1, (-1.5, -1.5, -2.0), (1.5, 1.5, 2.0), (11, 11, 11))


def assert_close(a, b, rtol=0.0, atol=0.0, msg=""):
    a = np.asarray(a)
    b = np.asarray(b)
    assert np.allclose(a, b, rtol=rtol, atol=atol), (
        f"{msg} max deviation {np.max(np.abs(a - b))}"
    )
