import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mpcpn.examples import halving_net, running_example  # noqa: E402

_CRITERIA: dict[str, str] = {}


@pytest.fixture
def example():
    return running_example()


@pytest.fixture
def halving():
    return halving_net()


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    label = marker.args[0]
    failed = call.excinfo is not None
    if failed or label not in _CRITERIA:
        _CRITERIA[label] = "FAIL" if failed else "PASS"


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion covered by the test")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_CRITERIA, key=lambda s: int(s.split()[0])):
        terminalreporter.write_line(f"{_CRITERIA[label]}  criterion {label}")
