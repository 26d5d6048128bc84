import re

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)", report.nodeid)
    # record the call phase, or a failing setup when the call never ran
    if not m or (report.when != "call" and not report.failed):
        return
    detail = dict(report.user_properties).get("detail", "")
    _ACCEPTANCE[int(m.group(1))] = ("PASS" if report.passed else "FAIL", report.duration, detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        status, secs, detail = _ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {status} ({secs:.1f}s) {detail}".rstrip())
