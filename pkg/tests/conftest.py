import pytest

_CRITERIA = {}


@pytest.fixture
def criterion(request):
    """Record a numbered acceptance criterion; the outcome is printed in the terminal summary."""

    def record(number, title, detail=""):
        _CRITERIA[request.node.nodeid] = (number, title, detail)

    return record


def pytest_runtest_logreport(report):
    if report.when == "call" and report.nodeid in _CRITERIA:
        number, title, detail = _CRITERIA[report.nodeid]
        _CRITERIA[report.nodeid] = (number, title, detail, "PASS" if report.passed else "FAIL")


def pytest_terminal_summary(terminalreporter):
    rows = sorted(v for v in _CRITERIA.values() if len(v) == 4)
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, detail, outcome in rows:
        line = f"{outcome} criterion {number:>2}: {title}"
        terminalreporter.write_line(f"{line} ({detail})" if detail else line)
