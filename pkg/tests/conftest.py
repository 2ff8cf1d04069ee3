"""Collects one verdict per acceptance criterion and prints them after the run."""

import pytest

RESULTS = pytest.StashKey[dict]()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion implemented by the test")
    config.stash[RESULTS] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.when != "call":
        return
    number, title = mark.args
    details = "; ".join(f"{k}={v}" for k, v in item.user_properties)
    item.config.stash[RESULTS][number] = ("PASS" if report.passed else "FAIL", title, details)


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash[RESULTS]
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        verdict, title, details = results[number]
        line = f"{verdict}  criterion {number:2d}: {title}"
        terminalreporter.write_line(line + (f"  [{details}]" if details else ""))
