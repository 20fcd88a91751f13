import random

import pytest
from hypothesis import HealthCheck, settings

from hochcalc.algebra import builtin

settings.register_profile(
    "exact",
    derandomize=True,
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("exact")

FIXTURE_NAMES = ["dual_numbers", "matrix(2)", "truncated_poly(1,3)", "group_algebra_Z2"]


@pytest.fixture(scope="session")
def dual():
    return builtin("dual_numbers")


@pytest.fixture(scope="session")
def mat2():
    return builtin("matrix(2)")


@pytest.fixture(scope="session")
def cubic():
    """K[x]/(x^3)."""
    return builtin("truncated_poly(1,2)")


@pytest.fixture(params=FIXTURE_NAMES)
def fixture_algebra(request):
    return builtin(request.param)


@pytest.fixture
def rng():
    return random.Random(20261015)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
