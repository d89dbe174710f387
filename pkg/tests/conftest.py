import numpy as np
import pytest

from snewton import UniformGrid, minimize, radial_shooting_oracle
from snewton.gravity import NEWTONIAN

# Frozen reference values of the radial oracle (rmax 60, 12000 steps).
# Refining to 24000 steps moves epsilon by ~1e-11.
ORACLE_EPSILON = -0.16276920784
ORACLE_E = -0.0542564973
ORACLE_WIDTH = 4.6352136727


@pytest.fixture(scope="session")
def small_grid():
    return UniformGrid(32, 1.5)


@pytest.fixture(scope="session")
def ground32(small_grid):
    """Coarse ground state, good to a few 1e-3 and fast to compute."""
    return minimize(small_grid, NEWTONIAN)


@pytest.fixture(scope="session")
def coarse_oracle():
    return radial_shooting_oracle(rmax=60.0, npoints=3000)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""
    lines = request.config.stash.setdefault(_ACCEPTANCE_KEY, [])

    def record(number, title, ok, detail):
        lines.append((number, f"[{'PASS' if ok else 'FAIL'}] {number:2d}. {title}: {detail}"))
        print(lines[-1][1])
        assert ok, f"criterion {number} failed: {detail}"

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
