import pytest

import supplyplan as sp

import helpers


@pytest.fixture(scope="session")
def cfg():
    return sp.SolverConfig()


@pytest.fixture(scope="session")
def one_arc():
    return helpers.one_arc_instance()


@pytest.fixture(scope="session")
def one_arc_scens():
    return helpers.one_arc_scens()


@pytest.fixture(scope="session")
def tight():
    return helpers.tight_instance()


@pytest.fixture(scope="session")
def tight_scens():
    return helpers.tight_scens()
