import pytest

from hurstci import kernels

ACCEPTANCE_LINES = []


@pytest.fixture
def record_criterion():
    """Record a one-line PASS/FAIL verdict, printed in the terminal summary."""

    def record(number, title, passed, detail=""):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {title}"
        if detail:
            line += f" ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return record


def pytest_report_header(config):
    return f"hurstci kernel backend: {kernels.BACKEND}"


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
