import pytest

_LINES = []


@pytest.fixture
def report():
    """Record one acceptance line; all lines are repeated in the terminal summary."""

    def emit(number, title, passed, detail, tolerance):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {title}: {detail} (tolerance {tolerance})"
        _LINES.append(line)
        print(line)
        return passed

    return emit


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
