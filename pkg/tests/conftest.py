# Collects the acceptance results and prints one line per criterion at the end of the run.

_criteria = {}


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        outcome = "xfail" if hasattr(report, "wasxfail") else report.outcome
        _criteria[props["criterion"]] = (outcome, props.get("detail", ""))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_criteria):
        outcome, detail = _criteria[key]
        status = {"passed": "PASS", "xfail": "FAIL (known, xfail)"}.get(outcome, "FAIL")
        terminalreporter.write_line(f"{status} criterion {key}: {detail}")
