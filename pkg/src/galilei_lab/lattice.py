"""
Discretized one-particle Hilbert space L^2(box) (x) C^(2s+1).

Position nodes sit on the sawtooth chart ``x_c = c * dx`` with integer
``c`` in ``[-N/2, N/2)``; momentum nodes are ``p_j = 2 pi hbar j / L`` on
the same symmetric integer range. Arrays are stored in ascending node
order (not FFT order) along every spatial axis, with the spin index last.

The transform uses continuum normalization, so that

    sum |psi(x)|^2 dx^d == sum |psi_hat(p)|^2 dp^d

holds to rounding for every state.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np
from scipy import fft as sfft

POSITION = "position"
MOMENTUM = "momentum"

DEFAULT_ADMISSIBILITY_THRESHOLD = 1e-10
# Fraction of each axis (split evenly between both ends) counted as "tail".
TAIL_FRACTION = 0.10


class LatticeError(ValueError):
    """Raised for invalid grids, states or representation mismatches."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid on ``[-L/2, L/2)^dims``."""

    dims: int
    points_per_axis: int
    box_length: float
    hbar: float = 1.0

    def __post_init__(self):
        if self.dims not in (1, 3):
            raise LatticeError(f"dims must be 1 or 3, got {self.dims}")
        n = self.points_per_axis
        if n < 8 or n % 2 or n & (n - 1):
            raise LatticeError(f"points_per_axis must be a power of two >= 8, got {n}")
        if not self.box_length > 0:
            raise LatticeError(f"box_length must be positive, got {self.box_length}")
        if not self.hbar > 0:
            raise LatticeError(f"hbar must be positive, got {self.hbar}")

    @property
    def spacing(self) -> float:
        return self.box_length / self.points_per_axis

    @property
    def momentum_spacing(self) -> float:
        return 2.0 * np.pi * self.hbar / self.box_length

    @property
    def node_indices(self) -> np.ndarray:
        """Signed integer node labels ``-N/2 .. N/2-1``."""
        n = self.points_per_axis
        return np.arange(-n // 2, n // 2)

    @property
    def position_nodes(self) -> np.ndarray:
        return self.node_indices * self.spacing

    @property
    def momentum_nodes(self) -> np.ndarray:
        return self.node_indices * self.momentum_spacing

    @property
    def nyquist_momentum(self) -> float:
        return np.pi * self.hbar / self.spacing

    @property
    def shape(self) -> tuple:
        return (self.points_per_axis,) * self.dims

    @property
    def cell_volume(self) -> float:
        return self.spacing ** self.dims

    @property
    def momentum_cell_volume(self) -> float:
        return self.momentum_spacing ** self.dims

    def coordinate(self, axis: int, space: str = POSITION) -> np.ndarray:
        """Broadcastable coordinate array for ``axis`` (0-based) over the grid shape."""
        if not 0 <= axis < self.dims:
            raise LatticeError(f"axis {axis} out of range for dims={self.dims}")
        nodes = self.position_nodes if space == POSITION else self.momentum_nodes
        shape = [1] * self.dims
        shape[axis] = self.points_per_axis
        return nodes.reshape(shape)

    def coordinates(self, space: str = POSITION) -> list:
        return [self.coordinate(i, space) for i in range(self.dims)]

    def momentum_squared(self) -> np.ndarray:
        return sum(p ** 2 for p in np.broadcast_arrays(*self.coordinates(MOMENTUM)))

    def is_lattice_vector(self, a, space: str = POSITION, atol: float = 1e-9) -> bool:
        step = self.spacing if space == POSITION else self.momentum_spacing
        k = np.atleast_1d(np.asarray(a, dtype=float)) / step
        return bool(np.all(np.abs(k - np.round(k)) < atol))

    def lattice_steps(self, a, space: str = POSITION) -> np.ndarray:
        """Integer node offsets for a lattice vector ``a``; raises otherwise."""
        if not self.is_lattice_vector(a, space):
            raise LatticeError(f"{a!r} is not a {space} lattice vector")
        step = self.spacing if space == POSITION else self.momentum_spacing
        k = np.atleast_1d(np.asarray(a, dtype=float)) / step
        if k.size != self.dims:
            raise LatticeError(f"vector {a!r} does not match dims={self.dims}")
        return np.round(k).astype(int)


def make_grid(dims: int, n: int, length: float, hbar: float = 1.0) -> GridSpec:
    """Build a :class:`GridSpec`; thin functional alias used across the package."""
    return GridSpec(dims=int(dims), points_per_axis=int(n), box_length=float(length), hbar=float(hbar))


@dataclass(frozen=True)
class SpinSpec:
    """Spin label ``s`` (integer or half-integer)."""

    s: float

    def __post_init__(self):
        two_s = Fraction(self.s).limit_denominator(2) * 2
        if two_s.denominator != 1 or two_s < 0 or abs(float(two_s) - 2 * self.s) > 1e-12:
            raise LatticeError(f"spin must be a nonnegative half-integer, got {self.s}")

    @property
    def two_s(self) -> int:
        return int(round(2 * self.s))

    @property
    def dim(self) -> int:
        return self.two_s + 1


@dataclass(frozen=True)
class PhysicalParams:
    hbar: float = 1.0
    mass: float = 1.0
    e0: float = 0.0

    def __post_init__(self):
        if not self.hbar > 0:
            raise LatticeError("hbar must be positive")
        if not self.mass > 0:
            raise LatticeError("mass must be positive")
        if not np.isfinite(self.e0):
            raise LatticeError("e0 must be finite")


@dataclass(frozen=True)
class AdmissibilityReport:
    boundary_tail_mass: float
    momentum_tail_mass: float
    threshold: float = DEFAULT_ADMISSIBILITY_THRESHOLD

    @property
    def admissible(self) -> bool:
        return self.boundary_tail_mass < self.threshold and self.momentum_tail_mass < self.threshold


@dataclass(frozen=True, eq=False)
class StateVector:
    """Amplitudes over grid x spin, tagged with their representation.

    ``amplitudes`` has shape ``grid.shape + (spin.dim,)``. Instances are
    immutable; every operation returns a new state in the representation
    of its input.
    """

    grid: GridSpec
    spin: SpinSpec
    amplitudes: np.ndarray
    representation: str = POSITION
    admissibility_report: Optional[AdmissibilityReport] = field(default=None, compare=False)

    def __post_init__(self):
        if self.representation not in (POSITION, MOMENTUM):
            raise LatticeError(f"unknown representation {self.representation!r}")
        amp = np.asarray(self.amplitudes, dtype=complex)
        expected = self.grid.shape + (self.spin.dim,)
        if amp.shape != expected:
            raise LatticeError(f"amplitude shape {amp.shape} != {expected}")
        if not amp.flags.owndata or amp.flags.writeable:
            amp = amp.copy()
        object.__setattr__(self, "amplitudes", _frozen(amp))

    @classmethod
    def from_amplitudes(cls, grid, spin, amplitudes, representation=POSITION, normalize=True):
        state = cls(grid, spin, amplitudes, representation)
        if normalize:
            n = state.norm()
            if n == 0:
                raise LatticeError("cannot normalize the zero vector")
            state = state.scaled(1.0 / n)
        return state

    @property
    def measure(self) -> float:
        if self.representation == POSITION:
            return self.grid.cell_volume
        return self.grid.momentum_cell_volume

    def with_amplitudes(self, amplitudes, representation=None) -> "StateVector":
        return StateVector(self.grid, self.spin, amplitudes, representation or self.representation)

    def scaled(self, c) -> "StateVector":
        return self.with_amplitudes(self.amplitudes * c)

    def __add__(self, other: "StateVector") -> "StateVector":
        _check_compatible(self, other)
        return self.with_amplitudes(self.amplitudes + other.amplitudes)

    def __sub__(self, other: "StateVector") -> "StateVector":
        _check_compatible(self, other)
        return self.with_amplitudes(self.amplitudes - other.amplitudes)

    def __rmul__(self, c) -> "StateVector":
        return self.scaled(c)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2) * self.measure))

    def density(self) -> np.ndarray:
        """Probability density summed over spin, on the grid of the current representation."""
        return np.sum(np.abs(self.amplitudes) ** 2, axis=-1)

    def in_position(self) -> "StateVector":
        return self if self.representation == POSITION else to_position(self)

    def in_momentum(self) -> "StateVector":
        return self if self.representation == MOMENTUM else to_momentum(self)

    def in_representation(self, representation: str) -> "StateVector":
        return self.in_position() if representation == POSITION else self.in_momentum()


def _check_compatible(a: StateVector, b: StateVector) -> None:
    if a.grid != b.grid or a.spin != b.spin:
        raise LatticeError("states live on different grids or spin spaces")
    if a.representation != b.representation:
        raise LatticeError("states are in different representations")


def inner(psi: StateVector, phi: StateVector) -> complex:
    """<psi|phi>, conjugate-linear in the first slot, with the cell measure."""
    _check_compatible(psi, phi)
    return complex(np.vdot(psi.amplitudes, phi.amplitudes) * psi.measure)


def distance(psi: StateVector, phi: StateVector) -> float:
    """Hilbert-space norm of ``psi - phi`` (representations are aligned first)."""
    return (psi - phi.in_representation(psi.representation)).norm()


def _spatial_axes(grid: GridSpec) -> tuple:
    return tuple(range(grid.dims))


def to_momentum(psi: StateVector) -> StateVector:
    if psi.representation != POSITION:
        raise LatticeError("to_momentum expects a position-representation state")
    g = psi.grid
    axes = _spatial_axes(g)
    a = sfft.ifftshift(psi.amplitudes, axes=axes)
    a = sfft.fftn(a, axes=axes)
    a = sfft.fftshift(a, axes=axes)
    a *= (g.spacing / np.sqrt(2.0 * np.pi * g.hbar)) ** g.dims
    return psi.with_amplitudes(a, MOMENTUM)


def to_position(psi: StateVector) -> StateVector:
    if psi.representation != MOMENTUM:
        raise LatticeError("to_position expects a momentum-representation state")
    g = psi.grid
    axes = _spatial_axes(g)
    a = sfft.ifftshift(psi.amplitudes, axes=axes)
    a = sfft.ifftn(a, axes=axes)
    a = sfft.fftshift(a, axes=axes)
    a *= (np.sqrt(2.0 * np.pi * g.hbar) / g.spacing) ** g.dims
    return psi.with_amplitudes(a, POSITION)


def _tail_mask(grid: GridSpec, space: str) -> np.ndarray:
    half = grid.box_length / 2 if space == POSITION else grid.nyquist_momentum
    cut = (1.0 - TAIL_FRACTION) * half
    mask = np.zeros(grid.shape, dtype=bool)
    for c in grid.coordinates(space):
        mask = mask | (np.abs(c) >= cut - 1e-12 * half)
    return mask


def admissibility(psi: StateVector, threshold: float = DEFAULT_ADMISSIBILITY_THRESHOLD) -> AdmissibilityReport:
    """Tail masses near the box seam and near the Nyquist edge, as fractions of the total norm."""
    x = psi.in_position()
    p = psi.in_momentum()
    total_x = np.sum(x.density())
    total_p = np.sum(p.density())
    if total_x == 0:
        return AdmissibilityReport(0.0, 0.0, threshold)
    bx = float(np.sum(x.density()[_tail_mask(psi.grid, POSITION)]) / total_x)
    bp = float(np.sum(p.density()[_tail_mask(psi.grid, MOMENTUM)]) / total_p)
    return AdmissibilityReport(bx, bp, threshold)


def _as_vector(v, dims: int, name: str) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(v, dtype=float))
    if arr.size == 1 and dims > 1 and np.ndim(v) == 0:
        arr = np.repeat(arr, dims)
    if arr.shape != (dims,):
        raise LatticeError(f"{name} must have {dims} component(s), got {v!r}")
    return arr


def normalized_spinor(spin: SpinSpec, chi=None) -> np.ndarray:
    if chi is None:
        chi = np.zeros(spin.dim, dtype=complex)
        chi[0] = 1.0
    chi = np.asarray(chi, dtype=complex).reshape(-1)
    if chi.shape != (spin.dim,):
        raise LatticeError(f"spin amplitudes must have length {spin.dim}")
    if abs(np.linalg.norm(chi) - 1.0) > 1e-10:
        raise LatticeError("spin amplitudes must be normalized")
    return chi


def gaussian_amplitudes(grid: GridSpec, x0, p0, sigma: float, chi: np.ndarray) -> np.ndarray:
    """Unnormalized Gaussian wavepacket amplitudes, no resolvability checks.

    ``x0`` is measured in the periodic sense: the displacement to each node
    is taken as the minimum image, so packets never straddle the seam
    artificially.
    """
    x0 = _as_vector(x0, grid.dims, "x0")
    p0 = _as_vector(p0, grid.dims, "p0")
    L = grid.box_length
    env = np.ones(grid.shape)
    phase = np.zeros(grid.shape)
    for i, c in enumerate(grid.coordinates()):
        d = (c - x0[i] + L / 2) % L - L / 2
        env = env * np.exp(-d ** 2 / (4.0 * sigma ** 2))
        phase = phase + p0[i] * c / grid.hbar
    return (env * np.exp(1j * phase))[..., None] * chi


def gaussian_state(grid: GridSpec, spin: SpinSpec, params: PhysicalParams, x0=0.0, p0=0.0,
                   sigma: float = 1.0, chi=None,
                   threshold: float = DEFAULT_ADMISSIBILITY_THRESHOLD,
                   min_spacings: float = 3.0) -> StateVector:
    """Normalized Gaussian wavepacket ``exp(i p0.x/hbar) exp(-|x-x0|^2/4 sigma^2) (x) chi``.

    Parameters
    ----------
    grid, spin, params : lattice and physical constants.
    x0, p0 : float or sequence
        Packet center and mean momentum (scalars broadcast in 3D).
    sigma : float
        Position standard deviation of ``|psi|^2``.
    chi : array_like, optional
        Normalized spin amplitudes; defaults to the highest-weight basis vector.
    min_spacings : float
        Resolvability floor ``sigma > min_spacings * dx``. Coarse 3D grids need
        a lower floor (about 1.5) to leave room for negligible seam tails.

    Returns
    -------
    StateVector
        Position-representation state with an attached :class:`AdmissibilityReport`.
    """
    if abs(params.hbar - grid.hbar) > 1e-15 * params.hbar:
        raise LatticeError("grid and params disagree on hbar")
    if not sigma > min_spacings * grid.spacing:
        raise LatticeError(f"sigma={sigma} is not resolved (need > {min_spacings} dx = {min_spacings * grid.spacing})")
    x0v = _as_vector(x0, grid.dims, "x0")
    p0v = _as_vector(p0, grid.dims, "p0")
    sigma_p = grid.hbar / (2 * sigma)
    if np.any(np.abs(p0v) >= grid.nyquist_momentum - 5 * sigma_p):
        raise LatticeError("mean momentum too close to the Nyquist edge (aliasing)")
    L = grid.box_length
    seam_distance = L / 2 - np.abs((x0v + L / 2) % L - L / 2)
    if np.any(seam_distance < 5 * sigma):
        raise LatticeError("packet center lies within 5 sigma of the box seam")
    chi = normalized_spinor(spin, chi)
    psi = StateVector.from_amplitudes(grid, spin, gaussian_amplitudes(grid, x0v, p0v, sigma, chi))
    report = admissibility(psi, threshold)
    return StateVector(grid, spin, psi.amplitudes, POSITION, report)


def plane_wave(grid: GridSpec, spin: SpinSpec, node, chi=None) -> StateVector:
    """Normalized plane wave ``exp(i p_j.x/hbar)`` at momentum node label(s) ``node``."""
    j = np.atleast_1d(np.asarray(node, dtype=int))
    if j.shape != (grid.dims,):
        raise LatticeError("node label must have one integer per axis")
    chi = normalized_spinor(spin, chi)
    phase = np.zeros(grid.shape)
    for i, c in enumerate(grid.coordinates()):
        phase = phase + j[i] * grid.momentum_spacing * c / grid.hbar
    amp = np.exp(1j * phase)[..., None] * chi / np.sqrt(grid.box_length ** grid.dims)
    return StateVector(grid, spin, amp, POSITION)


def random_spinor(rng: np.random.Generator, spin: SpinSpec) -> np.ndarray:
    z = rng.normal(size=spin.dim) + 1j * rng.normal(size=spin.dim)
    return z / np.linalg.norm(z)


Number = Union[int, float, complex]


def superpose(states: Sequence[StateVector], coeffs: Sequence[Number]) -> StateVector:
    out = states[0].scaled(coeffs[0])
    for s, c in zip(states[1:], coeffs[1:]):
        out = out + s.scaled(c)
    return out
