import time

import numpy as np
import pytest

from liquidbridge.bridge_profile import chebyshev_sigmas, solve_T, sweep_T
from liquidbridge.config import SolverConfig
from liquidbridge.tprime import differentiate_T
from liquidbridge.variation import sweep_variation

# reference heights from the shooting oracle (DOP853 at 1e-13, bisection to 1e-10)
ORACLE_T = {
    0.085: 0.27827066382,
    0.1: 0.3111461513,
    0.5: 0.77777957333,
    1.0: 0.9970201417309,
    2.0: 1.16720848337,
}

ACCEPTANCE_LINES = []
TIMINGS = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def cfg():
    return SolverConfig()


@pytest.fixture(scope="session")
def solutions(cfg):
    cache = {}

    def get(sigma):
        if sigma not in cache:
            cache[sigma] = solve_T(sigma, cfg)
        return cache[sigma]
    return get


@pytest.fixture(scope="session")
def sweep_table(cfg):
    """The 100-point Chebyshev sweep on [0.085, 2] with T'."""
    t0 = time.perf_counter()
    table = sweep_T(chebyshev_sigmas(0.085, 2.0, 100), cfg)
    TIMINGS["sweep_T"] = time.perf_counter() - t0
    assert not table.failures
    return differentiate_T(table)


@pytest.fixture(scope="session")
def variation_report(sweep_table, cfg):
    t0 = time.perf_counter()
    report = sweep_variation(sweep_table, cfg)
    TIMINGS["sweep_variation"] = time.perf_counter() - t0
    return report


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
