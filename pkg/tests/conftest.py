import pytest

from coxkit import dlcount


@pytest.fixture(scope="session")
def model3():
    return dlcount.GL2Model(3)


@pytest.fixture(scope="session")
def table3(model3):
    return dlcount.trace_table(model3)
