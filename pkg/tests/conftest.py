"""Collect per-criterion acceptance outcomes and print one line per criterion."""

from collections import defaultdict

import pytest

CRITERIA = {
    1: "table reproduction",
    2: "pasting CNF sweep",
    3: "closed-form colorings",
    4: "direct search, r_3(4,4) > 12",
    5: "direct search, r_4(5,5) > 33 and C(71,6) verification pass",
    6: "property suites",
}

_outcomes: dict[int, list[tuple[str, str]]] = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion this test belongs to")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _outcomes[marker.args[0]].append((item.nodeid, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n, name in CRITERIA.items():
        results = _outcomes.get(n)
        if not results:
            terminalreporter.write_line(f"criterion {n} ({name}): NOT RUN")
            continue
        passed = sum(1 for _, o in results if o == "passed")
        verdict = "PASS" if passed == len(results) else "FAIL"
        terminalreporter.write_line(f"criterion {n} ({name}): {verdict} ({passed}/{len(results)} tests passed)")
