import pytest

from gforge import build_groupoid, load_bundled
from gforge.oracle import PointGroupoid


@pytest.fixture(scope="session")
def linear_order():
    return load_bundled("linear_order")


@pytest.fixture(scope="session")
def G2(linear_order):
    return build_groupoid(linear_order, 2)


@pytest.fixture(scope="session")
def G3(linear_order):
    return build_groupoid(linear_order, 3)


@pytest.fixture(scope="session")
def pg2(linear_order):
    return PointGroupoid.build(linear_order, 2)


@pytest.fixture(scope="session")
def pg3(linear_order):
    return PointGroupoid.build(linear_order, 3)


def pytest_terminal_summary(terminalreporter):
    from tests import test_acceptance
    if test_acceptance.VERDICTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(test_acceptance.VERDICTS):
            terminalreporter.write_line(test_acceptance.VERDICTS[n])
