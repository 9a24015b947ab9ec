import numpy as np
import pytest

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    # fixed seed: every test run sees the same draws
    return np.random.default_rng(20250817)


@pytest.fixture
def acceptance_report():
    """Record one PASS/FAIL line per acceptance criterion.

    The lines are replayed in a terminal section after the run, so they stay
    visible without -s.
    """

    def _report(number: int, ok: bool, detail: str) -> bool:
        line = f"ACCEPTANCE {number} {'PASS' if ok else 'FAIL'} {detail}"
        print(line)
        _ACCEPTANCE_LINES.append(line)
        return ok

    return _report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
