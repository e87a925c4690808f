"""Shared fixtures; collects the acceptance verdicts for the terminal summary."""

import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line for an acceptance criterion."""

    def record(number: int, title: str, passed: bool, detail: str = "", seconds: float = None):
        timing = "" if seconds is None else f" [{seconds:.1f} s]"
        line = f"{'PASS' if passed else 'FAIL'} criterion {number}: {title}{timing}"
        if detail:
            line += f" -- {detail}"
        ACCEPTANCE_LINES.append((number, line))
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE_LINES, key=lambda t: t[0]):
        terminalreporter.write_line(line)
