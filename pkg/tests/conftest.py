import time

import pytest

from kolportrait.builder import trace_separatrices
from kolportrait.sweep import REPRESENTATIVES, representative


@pytest.fixture(scope="session")
def rep_skeletons():
    """Traced skeletons of the thirteen class representatives, with total wall time."""
    t = time.perf_counter()
    sks = {r: trace_separatrices(representative(r)) for r in REPRESENTATIVES}
    return sks, time.perf_counter() - t


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
