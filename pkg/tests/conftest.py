import pytest
from hypothesis import HealthCheck, settings

from g2calc import preset_phi0, randgen

import acceptance_log

settings.register_profile(
    "g2calc",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("g2calc")


@pytest.fixture
def phi0():
    return preset_phi0()


@pytest.fixture
def rng():
    """Seeded generator; G2CALC_SEED changes the random families."""
    return randgen.make_rng()


def pytest_terminal_summary(terminalreporter):
    if not acceptance_log.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(acceptance_log.RESULTS):
        terminalreporter.write_line(acceptance_log.RESULTS[number])
