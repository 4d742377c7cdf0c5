"""Shared fixtures: curves and far-field matrices reused across the suite.

Matrix builds are the expensive part (assembly + LU + solves), so every
configuration used by more than one test is computed once per session.
"""

import numpy as np
import pytest

from plate_echo.forward import assemble_far_field_matrix
from plate_echo.geometry import make_curve
from plate_echo.imaging import NoiseModel, add_noise, evaluate_grid
from plate_echo.oracle import disk_far_field_matrix

K_WAVE = 4.0
N_DIRS = 64
QUAD_NODES = 128
EXTENT = (-4.0, 4.0, -4.0, 4.0)
RESOLUTION = (150, 150)


@pytest.fixture(scope="session")
def star_curve():
    return make_curve("star")


@pytest.fixture(scope="session")
def peanut_curve():
    return make_curve("peanut")


@pytest.fixture(scope="session")
def circle_curve():
    return make_curve("circle")


@pytest.fixture(scope="session")
def ff_star(star_curve):
    return assemble_far_field_matrix(star_curve, K_WAVE, N_DIRS, QUAD_NODES)


@pytest.fixture(scope="session")
def ff_star_256(star_curve):
    return assemble_far_field_matrix(star_curve, K_WAVE, N_DIRS, 256)


@pytest.fixture(scope="session")
def ff_peanut(peanut_curve):
    return assemble_far_field_matrix(peanut_curve, K_WAVE, N_DIRS, QUAD_NODES)


@pytest.fixture(scope="session")
def ff_peanut_256(peanut_curve):
    return assemble_far_field_matrix(peanut_curve, K_WAVE, N_DIRS, 256)


@pytest.fixture(scope="session")
def ff_disk(circle_curve):
    return assemble_far_field_matrix(circle_curve, K_WAVE, N_DIRS, QUAD_NODES)


@pytest.fixture(scope="session")
def ff_oracle():
    return disk_far_field_matrix(1.0, K_WAVE, N_DIRS)


@pytest.fixture(scope="session")
def ff_star_many_dirs(star_curve):
    # enough directions to resolve the test-vector oscillation out to
    # k*r = 400 (decay checks at radii up to 100)
    return assemble_far_field_matrix(star_curve, K_WAVE, 1024, QUAD_NODES)


@pytest.fixture(scope="session")
def benchmark_grids(ff_star, ff_peanut, star_curve, peanut_curve):
    """The eight benchmark grids: indexing (shape, delta, which)."""
    src = {"star": (ff_star, star_curve), "peanut": (ff_peanut, peanut_curve)}
    rho = {"ip": 4.0, "norm": 8.0}
    grids = {}
    for shape, deltas in (("star", (0.0, 0.02)), ("peanut", (0.1, 0.3))):
        ff, curve = src[shape]
        for delta in deltas:
            noisy = add_noise(ff, NoiseModel(delta, seed=0))
            for which in ("ip", "norm"):
                grid = evaluate_grid(noisy, EXTENT, RESOLUTION, rho[which], which)
                grids[shape, delta, which] = (grid, curve)
    return grids


@pytest.fixture(scope="session")
def sample_points():
    return np.random.default_rng(12345).uniform(-4.0, 4.0, size=(100, 2))
