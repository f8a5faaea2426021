import pytest

from irs_routing.scene import build_bundled_scenario
from report import LINES


@pytest.fixture(scope="session")
def bundled():
    return build_bundled_scenario()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if LINES:
        terminalreporter.section("acceptance summary")
        for line in LINES:
            terminalreporter.write_line(line)
