"""Deterministic random admissible states and parameters."""
from __future__ import annotations

import zlib

import numpy as np

from .config import RunConfig
from .lattice import GridSpec, LatticeError, StateVector, gaussian_state, random_spinor

# 3D default grids are coarse (N=32); packets there sit at 1.6-1.9 grid spacings.
MIN_SPACINGS_3D = 1.5


def rng_for(seed: int, *labels) -> np.random.Generator:
    """Generator keyed by ``seed`` and any mix of ints/strings (stable across runs)."""
    keys = [int(seed)]
    for lab in labels:
        keys.append(zlib.crc32(lab.encode()) if isinstance(lab, str) else int(lab))
    return np.random.default_rng(keys)


def _draw(grid: GridSpec, rng: np.random.Generator):
    dx, half = grid.spacing, grid.box_length / 2
    p_span = 0.1 * grid.nyquist_momentum
    if grid.dims == 1:
        sigma = rng.uniform(max(3.2 * dx, half / 50), max(3.6 * dx, half / 16))
        x0 = rng.uniform(-half / 4, half / 4)
        p0 = rng.uniform(-p_span, p_span)
        return x0, p0, sigma, 3.0
    sigma = rng.uniform(1.6 * dx, 1.9 * dx)
    x0 = rng.uniform(-half / 20, half / 20, size=3)
    p0 = rng.uniform(-p_span, p_span, size=3)
    return x0, p0, sigma, MIN_SPACINGS_3D


def random_admissible_state(config: RunConfig, seed: int, index: int, dims: int = 1, spin=None) -> StateVector:
    """Gaussian with random center, momentum, width and spinor; same (seed, index) -> same state."""
    grid = config.line_grid() if dims == 1 else config.cube_grid()
    spin = spin if spin is not None else config.spin_spec
    rng = rng_for(seed, "state", dims, index)
    for _ in range(100):
        x0, p0, sigma, floor = _draw(grid, rng)
        chi = random_spinor(rng, spin)
        try:
            psi = gaussian_state(grid, spin, config.params, x0, p0, sigma, chi, min_spacings=floor)
        except LatticeError:
            continue
        if psi.admissibility_report.admissible:
            return psi
    raise LatticeError("could not draw an admissible state on this grid")
