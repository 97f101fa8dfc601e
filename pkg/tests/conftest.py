import sys
from pathlib import Path

import pytest

from tafkit import fixture_path, graph

sys.path.insert(0, str(Path(__file__).parent))

GOLDEN = Path(__file__).parent / "golden"

_criteria: dict[str, list[str]] = {}


@pytest.fixture(scope="session")
def brexit_graph():
    return graph.load(fixture_path())


@pytest.fixture(scope="session")
def brexit_path():
    return Path(str(fixture_path()))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call" and not (report.when == "setup" and report.failed):
        return
    label = marker.args[0]
    _criteria.setdefault(label, []).append(report.outcome)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion this test checks")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_criteria, key=lambda s: int(s.split()[0])):
        outcomes = _criteria[label]
        ok = all(o == "passed" for o in outcomes)
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {label}")
