import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

_CRITERIA: dict[str, str] = {}


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion, printed after the run."""

    def record(label: str, ok: bool, detail: str) -> bool:
        _CRITERIA[label] = f"{'PASS' if ok else 'FAIL'}  {label:>3}  {detail}"
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_CRITERIA, key=lambda s: (int("".join(c for c in s if c.isdigit())), s)):
        terminalreporter.write_line(_CRITERIA[label])
