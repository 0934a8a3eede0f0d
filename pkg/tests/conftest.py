import os
import time

import pytest

from refpoly import classify

LONG = os.environ.get("REFPOLY_LONG") == "1"

long_only = pytest.mark.skipif(not LONG, reason="set REFPOLY_LONG=1 for multi-hour runs")


def _jobs():
    return max(1, int(os.environ.get("REFPOLY_JOBS", "1")))


def _timed(**kw):
    t = time.perf_counter()
    run = classify(**kw)
    run.seconds = time.perf_counter() - t
    return run


@pytest.fixture(scope="session")
def classes2():
    return _timed(n=2)


@pytest.fixture(scope="session")
def classes3():
    """The n = 3 run without lattice refinement (several minutes)."""
    return _timed(n=3, jobs=_jobs())


@pytest.fixture(scope="session")
def classes3_lattices():
    """The n = 3 run including all lattice realizations."""
    return _timed(n=3, with_lattices=True, jobs=_jobs())


ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
