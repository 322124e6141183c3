import sys
from collections import OrderedDict
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_CRITERIA = OrderedDict()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion the test belongs to")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    criterion = getattr(report, "criterion", None)
    if criterion is None:
        return
    entry = _CRITERIA.setdefault(criterion, {"passed": 0, "failed": [], "skipped": 0})
    if report.passed:
        entry["passed"] += 1
    elif report.skipped:
        entry["skipped"] += 1
    else:
        entry["failed"].append(report.nodeid.split("::", 1)[-1])


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = marker.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(_CRITERIA):
        entry = _CRITERIA[criterion]
        status = "FAIL" if entry["failed"] else "PASS"
        line = f"criterion {criterion:2d}: {status} ({entry['passed']} checks passed"
        if entry["failed"]:
            line += f", {len(entry['failed'])} failed: {', '.join(entry['failed'])}"
        terminalreporter.write_line(line + ")")
