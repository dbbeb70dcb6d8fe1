import pytest
from hypothesis import HealthCheck, settings

from hallforge.quiverrep import PRESETS

settings.register_profile(
    "hallforge", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("hallforge")


@pytest.fixture
def A1():
    return PRESETS["A1"]


@pytest.fixture
def A2():
    return PRESETS["A2"]


# one line per acceptance criterion, collected by tests/test_acceptance.py
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
