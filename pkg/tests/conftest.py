"""Shared fixtures; the acceptance suite's verdict lines are echoed at the end."""

import pytest

ACCEPTANCE_LINES: dict[int, str] = {}


def record_criterion(n: int, ok: bool, text: str) -> str:
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {text}"
    ACCEPTANCE_LINES[n] = line
    print(line)
    return line


@pytest.fixture
def record():
    return record_criterion


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
