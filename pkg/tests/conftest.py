import pytest

from slitlab import (
    Grid,
    LensSpec,
    SlitConfig,
    WireGrid,
    find_dark_fringes,
    initial_state,
    propagate_analytic,
)

# Desk-scale defaults: far-field time 100 with packets of width 0.5 at +-5.
# The grid is sized so the spread packets stay below the 1e-10 edge guard at
# t = 100 and the lens chirp is resolved over the whole aperture.
FARFIELD_TIME = 100.0
ANALYSIS_WINDOW = (-350.0, 350.0)


@pytest.fixture(scope="session")
def default_grid():
    return Grid(65536, -2048.0, 2048.0)


@pytest.fixture(scope="session")
def symmetric_slit():
    return SlitConfig.symmetric()


@pytest.fixture(scope="session")
def farfield(symmetric_slit, default_grid):
    """Symmetric two-slit field at the screen plane (t = 100)."""
    return propagate_analytic(initial_state(symmetric_slit, default_grid), FARFIELD_TIME)


@pytest.fixture(scope="session")
def farfield_single(default_grid):
    """Single open slit (a = 1) at the screen plane."""
    cfg = SlitConfig.single_slit_a()
    return propagate_analytic(initial_state(cfg, default_grid), FARFIELD_TIME)


@pytest.fixture(scope="session")
def default_fringes(farfield):
    return find_dark_fringes(farfield, ANALYSIS_WINDOW)


@pytest.fixture(scope="session")
def default_wires(default_fringes):
    return WireGrid.from_fringe_map(default_fringes, count=10, width_fraction=0.05)


@pytest.fixture(scope="session")
def default_lens():
    return LensSpec.unit_magnification(FARFIELD_TIME, 1900.0)


# A smaller, faster configuration for propagator algebra tests. Chosen so
# that every field involved still respects the strict edge guard.
@pytest.fixture(scope="session")
def small_grid():
    return Grid(8192, -512.0, 512.0)


@pytest.fixture(scope="session")
def small_time():
    return 20.0
