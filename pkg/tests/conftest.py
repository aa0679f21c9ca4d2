import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_results: dict[int, tuple[str, str, list]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    n, name = marker.args
    failed = report.failed or (report.when == "setup" and report.skipped)
    if report.when == "call" or failed:
        _, prev, notes = _results.get(n, (name, "PASS", []))
        status = "FAIL" if failed or prev == "FAIL" else "PASS"
        if report.when == "call":
            notes = notes + [v for k, v in item.user_properties if k == "report"]
        _results[n] = (name, status, notes)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_results):
        name, status, notes = _results[n]
        terminalreporter.write_line(f"ACCEPTANCE {n} {name}: {status}")
        for note in notes:
            terminalreporter.write_line(f"    {note}")
