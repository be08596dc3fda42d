"""
Node-resolved localization observables.

A region is a set of grid nodes (the finite stand-in for a Borel set);
a smeared observable is built from a probability kernel ``rho`` through

    E(B) = sum_x rho(B - x) Pi(x),        rho(B - x) = sum_y rho(y) 1_B(x + y)

which on the grid is a multiplication operator. The same machinery serves
momentum space (see :mod:`galilei_lab.momentum`).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import fft as sfft
from scipy.special import erfinv

from . import group as G
from .lattice import (
    POSITION,
    GridSpec,
    LatticeError,
    PhysicalParams,
    SpinSpec,
    StateVector,
    gaussian_amplitudes,
    normalized_spinor,
)


class LocalizationError(LatticeError):
    pass


# ------------------------------------------------------------------ regions

@dataclass(frozen=True)
class Box:
    lo: Tuple[float, ...]
    hi: Tuple[float, ...]


@dataclass(frozen=True)
class Ball:
    center: Tuple[float, ...]
    radius: float


def _shape_mask(grid: GridSpec, shape, space: str) -> np.ndarray:
    period = grid.box_length if space == POSITION else grid.points_per_axis * grid.momentum_spacing
    coords = grid.coordinates(space)
    if isinstance(shape, Ball):
        r2 = 0.0
        for c, c0 in zip(coords, shape.center):
            d = (c - c0 + period / 2) % period - period / 2
            r2 = r2 + d ** 2
        return np.broadcast_to(r2 < shape.radius ** 2, grid.shape)
    mask = np.ones(grid.shape, dtype=bool)
    for c, lo, hi in zip(coords, shape.lo, shape.hi):
        if hi - lo >= period:
            continue
        # half-open [lo, hi) taken periodically
        mask = mask & (((c - lo) % period) < (hi - lo))
    return mask


@dataclass(frozen=True, eq=False)
class NodeSet:
    """Indicator over grid nodes plus the shapes it was built from (if any)."""

    grid: GridSpec
    indicator: np.ndarray
    description: tuple = ()
    space: str = POSITION

    def __post_init__(self):
        ind = np.asarray(self.indicator, dtype=bool)
        if ind.shape != self.grid.shape:
            raise LocalizationError(f"indicator shape {ind.shape} != grid shape {self.grid.shape}")
        ind = ind.copy()
        ind.setflags(write=False)
        object.__setattr__(self, "indicator", ind)

    @classmethod
    def from_shapes(cls, grid: GridSpec, shapes: Sequence, space: str = POSITION):
        mask = np.zeros(grid.shape, dtype=bool)
        for s in shapes:
            if isinstance(s, Box):
                s = Box(tuple(np.atleast_1d(s.lo).astype(float)), tuple(np.atleast_1d(s.hi).astype(float)))
                if len(s.lo) != grid.dims or len(s.hi) != grid.dims:
                    raise LocalizationError("box corners must match grid dims")
            elif isinstance(s, Ball):
                s = Ball(tuple(np.atleast_1d(s.center).astype(float)), float(s.radius))
                if len(s.center) != grid.dims:
                    raise LocalizationError("ball center must match grid dims")
            else:
                raise LocalizationError(f"unsupported region shape {s!r}")
            mask = mask | _shape_mask(grid, s, space)
        return cls(grid, mask, tuple(shapes), space)

    @classmethod
    def box(cls, grid, lo, hi, space=POSITION):
        return cls.from_shapes(grid, [Box(lo, hi)], space)

    @classmethod
    def ball(cls, grid, center, radius, space=POSITION):
        return cls.from_shapes(grid, [Ball(center, radius)], space)

    @classmethod
    def whole(cls, grid, space=POSITION):
        return cls(grid, np.ones(grid.shape, dtype=bool), ("whole",), space)

    @classmethod
    def empty(cls, grid, space=POSITION):
        return cls(grid, np.zeros(grid.shape, dtype=bool), ("empty",), space)

    @property
    def count(self) -> int:
        return int(self.indicator.sum())

    @property
    def cell(self) -> float:
        return self.grid.cell_volume if self.space == POSITION else self.grid.momentum_cell_volume

    @property
    def measure(self) -> float:
        return self.cell * self.count

    def is_empty(self) -> bool:
        return self.count == 0

    def union(self, other: "NodeSet") -> "NodeSet":
        self._check(other)
        return type(self)(self.grid, self.indicator | other.indicator, self.description + other.description, self.space)

    def intersection(self, other: "NodeSet") -> "NodeSet":
        self._check(other)
        return type(self)(self.grid, self.indicator & other.indicator, (), self.space)

    def issubset(self, other: "NodeSet") -> bool:
        self._check(other)
        return bool(np.all(~self.indicator | other.indicator))

    def _check(self, other):
        if other.grid != self.grid or other.space != self.space:
            raise LocalizationError("node sets live on different grids")

    def shifted(self, steps) -> "NodeSet":
        """Translate by integer node offsets (exact cyclic permutation)."""
        steps = np.atleast_1d(np.asarray(steps, dtype=int))
        return type(self)(self.grid, np.roll(self.indicator, tuple(steps), axis=tuple(range(self.grid.dims))),
                          (), self.space)

    def rotated(self, q) -> "NodeSet":
        """Image under a grid-preserving rotation pi(u)."""
        r = G.grid_rotation_matrix(self.grid, q)
        return type(self)(self.grid, G.permute_nodes(self.indicator, self.grid, r), (), self.space)

    def diameter(self) -> float:
        """Largest periodic distance between two member nodes (brute force)."""
        pts = np.argwhere(self.indicator)
        if len(pts) < 2:
            return 0.0
        n = self.grid.points_per_axis
        d = np.abs(pts[:, None, :] - pts[None, :, :])
        d = np.minimum(d, n - d)
        step = self.grid.spacing if self.space == POSITION else self.grid.momentum_spacing
        return float(np.sqrt((d ** 2).sum(-1)).max() * step)


class Region(NodeSet):
    """Position-space node set."""

    def __init__(self, grid, indicator, description=(), space=POSITION):
        if space != POSITION:
            raise LocalizationError("Region is a position-space set")
        super().__init__(grid, indicator, description, POSITION)


# ------------------------------------------------------------------ kernels

ATOMIC = "atomic"
DENSITY = "density"


@dataclass(frozen=True, eq=False)
class NodeKernel:
    """Probability kernel over node offsets.

    ``atomic``: ``atoms`` is a list of ``(offset_steps, weight)`` with integer
    node offsets. ``density``: ``weights`` is an array over offsets laid out
    like the grid (offset 0 at the center node).
    """

    grid: GridSpec
    kind: str
    atoms: tuple = ()
    weights: Optional[np.ndarray] = None
    space: str = POSITION
    mass_tol: float = 1e-12

    def __post_init__(self):
        if self.kind == ATOMIC:
            atoms = []
            for off, w in self.atoms:
                off = tuple(int(k) for k in np.atleast_1d(off))
                if len(off) != self.grid.dims:
                    raise LocalizationError("atom offset must match grid dims")
                if w < 0:
                    raise LocalizationError("kernel weights must be nonnegative")
                atoms.append((off, float(w)))
            object.__setattr__(self, "atoms", tuple(atoms))
            total = sum(w for _, w in atoms)
        elif self.kind == DENSITY:
            w = np.asarray(self.weights, dtype=float)
            if w.shape != self.grid.shape:
                raise LocalizationError("density kernel must be an array over the grid")
            if np.any(w < 0):
                raise LocalizationError("kernel weights must be nonnegative")
            w = w.copy()
            w.setflags(write=False)
            object.__setattr__(self, "weights", w)
            total = float(w.sum())
        else:
            raise LocalizationError(f"unknown kernel kind {self.kind!r}")
        if abs(total - 1.0) > self.mass_tol:
            raise LocalizationError(f"kernel not normalized: total mass {total!r}")

    @classmethod
    def delta(cls, grid, space=POSITION):
        return cls(grid, ATOMIC, ((np.zeros(grid.dims, dtype=int), 1.0),), space=space)

    @classmethod
    def atomic(cls, grid, points, weights, space=POSITION):
        """Atoms at physical points, which must be lattice nodes."""
        atoms = [(grid.lattice_steps(p, space), w) for p, w in zip(points, weights)]
        return cls(grid, ATOMIC, tuple(atoms), space=space)

    @classmethod
    def density(cls, grid, weights, space=POSITION):
        return cls(grid, DENSITY, weights=weights, space=space)

    @classmethod
    def uniform_ball(cls, grid, radius, space=POSITION):
        mask = NodeSet.ball(grid, np.zeros(grid.dims), radius, space).indicator
        if not mask.any():
            raise LocalizationError("kernel ball contains no nodes")
        return cls.density(grid, mask / mask.sum(), space)

    @property
    def is_sharp(self) -> bool:
        return self.kind == ATOMIC and len(self.atoms) == 1 and not any(self.atoms[0][0])

    def min_weight(self) -> float:
        if self.kind == ATOMIC:
            return min(w for _, w in self.atoms)
        return float(self.weights[self.weights > 0].min())

    def as_density(self) -> np.ndarray:
        """Dense array over offsets (offset 0 at the center node)."""
        if self.kind == DENSITY:
            return self.weights
        n = self.grid.points_per_axis
        arr = np.zeros(self.grid.shape)
        for off, w in self.atoms:
            arr[tuple((k + n // 2) % n for k in off)] += w
        return arr

    def is_rotation_invariant(self, atol: float = 1e-12) -> bool:
        """Invariance under the 24 grid rotations (3D) or parity (1D)."""
        from .rotations import octahedral_quaternions

        dens = self.as_density()
        if self.grid.dims == 1:
            n = self.grid.points_per_axis
            flipped = dens[(-self.grid.node_indices + n // 2) % n]
            return bool(np.max(np.abs(flipped - dens)) <= atol)
        for q in octahedral_quaternions():
            r = G.grid_rotation_matrix(self.grid, q)
            if np.max(np.abs(G.permute_nodes(dens, self.grid, r) - dens)) > atol:
                return False
        return True


class SmearKernel(NodeKernel):
    """Position-space smearing kernel rho."""


def kernel_profile(region: NodeSet, kernel: NodeKernel) -> np.ndarray:
    """f(x) = rho(B - x) on every node, by circular correlation.

    Atomic kernels use exact cyclic shifts; density kernels use FFT correlation.
    """
    if region.grid != kernel.grid or region.space != kernel.space:
        raise LocalizationError("region and kernel live on different grids")
    ind = region.indicator.astype(float)
    axes = tuple(range(region.grid.dims))
    if kernel.kind == ATOMIC:
        f = np.zeros_like(ind)
        for off, w in kernel.atoms:
            f += w * np.roll(ind, tuple(-k for k in off), axis=axes)
        return f
    a = sfft.fftn(sfft.ifftshift(ind, axes=axes), axes=axes)
    b = sfft.fftn(sfft.ifftshift(kernel.weights, axes=axes), axes=axes)
    f = sfft.fftshift(sfft.ifftn(a * np.conj(b), axes=axes).real, axes=axes)
    return np.clip(f, 0.0, 1.0)


def kernel_profile_bruteforce(region: NodeSet, kernel: NodeKernel) -> np.ndarray:
    """Direct double sum over nodes and kernel offsets; independent check for :func:`kernel_profile`."""
    grid = region.grid
    n = grid.points_per_axis
    dens = kernel.as_density()
    ind = region.indicator
    out = np.zeros(grid.shape)
    offsets = np.argwhere(dens > 0)
    for x in np.ndindex(*grid.shape):
        total = 0.0
        for o in offsets:
            y = tuple(int(k) - n // 2 for k in o)
            target = tuple((xi + yi) % n for xi, yi in zip(x, y))
            if ind[target]:
                total += dens[tuple(o)]
        out[x] = total
    return out


def _require(psi: StateVector, space: str) -> None:
    if psi.representation != space:
        raise LocalizationError(f"expected a {space}-representation state, got {psi.representation}")


def pvm_apply(psi: StateVector, region: Region) -> StateVector:
    """(E(B) psi)(x) = 1_B(x) psi(x)."""
    _require(psi, POSITION)
    if region.grid != psi.grid:
        raise LocalizationError("region and state live on different grids")
    return psi.with_amplitudes(np.where(region.indicator[..., None], psi.amplitudes, 0))


def pvm_prob(psi: StateVector, region: Region) -> float:
    _require(psi, POSITION)
    return float(np.sum(psi.density()[region.indicator]) * psi.measure)


def povm_prob(psi: StateVector, region: Region, kernel: SmearKernel) -> float:
    """<psi|E(B)|psi> for the smeared observable."""
    _require(psi, POSITION)
    if kernel.is_sharp:
        return pvm_prob(psi, region)
    f = kernel_profile(region, kernel)
    return float(np.sum(f * psi.density()) * psi.measure)


def povm_norm(region: Region, kernel: SmearKernel) -> float:
    """Operator norm of the multiplication operator E(B): max over nodes of rho(B - x)."""
    return float(kernel_profile(region, kernel).max())


# ------------------------------------------------------------------ focusing

def _ball_probability(dims: int, r: float, sigma: float) -> float:
    from scipy.special import erf
    from scipy.stats import chi

    if dims == 1:
        return float(erf(r / (np.sqrt(2) * sigma)))
    return float(chi.cdf(r / sigma, 3))


def _sigma_for(dims: int, r: float, eps: float) -> float:
    if dims == 1:
        return r / (np.sqrt(2.0) * float(erfinv(1.0 - eps)))
    from scipy.stats import chi

    return r / float(chi.ppf(1.0 - eps, 3))


@dataclass(frozen=True)
class FocusingResult:
    state: StateVector
    sigma: float
    probability: float


def focusing_state(grid: GridSpec, spin: SpinSpec, params: PhysicalParams, r: float, eps: float,
                   chi=None, max_shrink: int = 60) -> FocusingResult:
    """Centered Gaussian whose sharp probability in the open ball B_r(0) is at least ``1 - eps``.

    The width starts from the continuum inverse (erf in 1D, chi-3 in 3D) and
    is shrunk geometrically until the grid-resolved probability clears the bar.
    """
    if not r > 5 * grid.spacing:
        raise LocalizationError(f"radius {r} is not resolved (need > 5 dx = {5 * grid.spacing})")
    if not 0 < eps < 0.5:
        raise LocalizationError("eps must lie in (0, 1/2)")
    chi = normalized_spinor(spin, chi)
    ball = Region.from_shapes(grid, [Ball(tuple(np.zeros(grid.dims)), r)])
    sigma = _sigma_for(grid.dims, r, eps)
    for _ in range(max_shrink):
        if sigma < 0.5 * grid.spacing:
            break
        amp = gaussian_amplitudes(grid, np.zeros(grid.dims), np.zeros(grid.dims), sigma, chi)
        psi = StateVector.from_amplitudes(grid, spin, amp)
        prob = pvm_prob(psi, ball)
        if prob >= 1.0 - eps:
            return FocusingResult(psi, sigma, prob)
        sigma *= 0.95
    raise LocalizationError(f"cannot focus into radius {r} with eps={eps} on this grid")


# ------------------------------------------------------------------ covariance

def covariance_defect(psi: StateVector, region: Region, element: G.GroupElement,
                      kernel: Optional[SmearKernel] = None, params: PhysicalParams = PhysicalParams()) -> float:
    """|<g psi|E(gB)|g psi> - <psi|E(B)|psi>| for translation (lattice), grid rotation or boost."""
    kernel = kernel if kernel is not None else SmearKernel.delta(region.grid)
    before = povm_prob(psi, region, kernel)
    moved = G.apply(element, psi, params)
    if element.tag == G.TRANSLATION:
        steps = psi.grid.lattice_steps(element.value)
        target = region.shifted(steps)
    elif element.tag == G.ROTATION:
        if element.spin_only:
            raise LocalizationError("spin-only rotations do not act on regions")
        target = region.rotated(element.value)
    elif element.tag == G.BOOST:
        target = region
    else:
        raise LocalizationError(f"no localization covariance law for {element.tag}")
    return abs(povm_prob(moved, target, kernel) - before)
