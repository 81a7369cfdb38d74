import pytest

from tenthousand.dice import frequencies, reachable_states
from tenthousand.solver import solve_backward, solve_efficient


@pytest.fixture(scope="session")
def freq():
    return frequencies()


@pytest.fixture(scope="session")
def table():
    return solve_backward()


@pytest.fixture(scope="session")
def gathered():
    return solve_efficient()


@pytest.fixture(scope="session")
def reachable():
    return reachable_states()
