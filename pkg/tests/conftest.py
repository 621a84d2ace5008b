import pytest


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "criterion(num, label): acceptance criterion; prints one pass/fail line",
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    num, label = marker.args
    status = "PASS" if report.passed else "FAIL"
    line = f"criterion {num}: {status} - {label}"
    reporter = item.config.pluginmanager.get_plugin("terminalreporter")
    if reporter is not None:
        reporter.write_line(line)
    else:
        print(line)
