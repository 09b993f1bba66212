import pytest

from smforge import zoo


@pytest.fixture(scope="session")
def pipeline():
    return zoo.build_pipeline()


@pytest.fixture(scope="session")
def S():
    return zoo.make_S()


@pytest.fixture(scope="session")
def LR():
    return zoo.make_LR(("a", "b"))
