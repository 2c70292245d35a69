"""Prints one PASS/FAIL line per acceptance criterion at session end."""

_acceptance_outcomes = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid or report.when != "call":
        return
    name = report.nodeid.split("::")[-1]
    _acceptance_outcomes[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_outcomes:
        return
    terminalreporter.write_line("")
    terminalreporter.write_line("acceptance criteria:")
    for name in sorted(_acceptance_outcomes):
        label = name.removeprefix("test_criterion_").replace("_", " ")
        outcome = _acceptance_outcomes[name]
        status = "PASS" if outcome == "passed" else outcome.upper()
        terminalreporter.write_line(f"  {label}: {status}")
