import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    """Record one acceptance line; printed again in the terminal summary."""
    def _report(number: int, passed: bool, text: str):
        line = f"{'PASS' if passed else 'FAIL'} criterion {number:2d}: {text}"
        ACCEPTANCE_LINES.append(line)
        print(line)
    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
