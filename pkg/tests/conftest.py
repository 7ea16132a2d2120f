import numpy as np
import pytest

from llsoliton import Grid, soliton_hydro
from llsoliton.spectral import assemble_Hc, negative_eigenpair, spectral_grid


@pytest.fixture(scope="session")
def grid40():
    return Grid(40.0, 512)


@pytest.fixture(scope="session")
def grid40_fine():
    return Grid(40.0, 1024)


@pytest.fixture(scope="session")
def eigen_cache():
    """Session cache of (grid-key, c) -> EigenResult; dense eigensolves are
    the most expensive primitive the suite repeats."""
    cache = {}

    def get(c, grid=None):
        g = grid if grid is not None else spectral_grid(c)
        key = (g.L, g.n, float(c))
        if key not in cache:
            cache[key] = negative_eigenpair(g, c)
        return g, cache[key]

    return get


def smooth_pair(grid, rng, width_range=(4.0, 7.0)):
    """Random smooth decaying HydroPair for quadratic-form tests."""
    from llsoliton.grid import HydroPair

    w = rng.uniform(*width_range)
    env = np.exp(-((grid.x) / w) ** 2)
    u1 = env * np.cos(rng.uniform(0.2, 1.0) * grid.x + rng.random())
    u2 = (0.5 + rng.random()) * env * np.sin(rng.uniform(0.2, 1.0) * grid.x)
    return HydroPair(u1, u2)
