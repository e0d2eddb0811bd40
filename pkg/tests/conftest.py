from dataclasses import dataclass

import pytest


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str


_RESULTS: dict[int, CriterionResult] = {}


@pytest.fixture
def record():
    """Register the outcome of an acceptance criterion for the terminal summary."""

    def _record(number, title, passed, detail=""):
        _RESULTS[number] = CriterionResult(number, title, bool(passed), detail)
        return bool(passed)

    return _record


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        r = _RESULTS[number]
        status = "PASS" if r.passed else "FAIL"
        terminalreporter.write_line(f"{status} [{r.number}] {r.title}: {r.detail}")
