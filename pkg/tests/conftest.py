import numpy as np
import pytest

from mavar import catalog


@pytest.fixture(scope="session")
def six():
    return catalog.six_cycle()


@pytest.fixture(scope="session")
def three():
    return catalog.three_state_pair()


@pytest.fixture(scope="session")
def fk():
    return catalog.fk_pair()


@pytest.fixture(scope="session")
def four():
    return catalog.four_cycle_lift()


@pytest.fixture(scope="session")
def tridiag():
    return catalog.tridiag_drift()


@pytest.fixture(scope="session")
def uniform3():
    return catalog.uniform3()


@pytest.fixture
def rng():
    return np.random.default_rng(0)
