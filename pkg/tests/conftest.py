"""Collects the acceptance results into one summary line per criterion."""

import re

from hypothesis import settings

# exact arithmetic in larger fields is slow on some draws; timing is not under test
settings.register_profile("exact", deadline=None)
settings.load_profile("exact")

_results: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    n = int(m.group(1))
    if report.when == "call" or report.failed:
        status = "PASS" if report.passed else "FAIL"
        if _results.get(n, ("PASS",))[0] != "FAIL":
            _results[n] = (status, m.group(2).replace("_", " "))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_results):
        status, name = _results[n]
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {name}")
