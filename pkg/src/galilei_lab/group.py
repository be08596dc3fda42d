"""
Unitary action of the centrally extended Galilei group on lattice states,
its generators, and expectation/commutator evaluators.

Conventions (position representation, ``x`` on the sawtooth chart):

    (U(a) psi)(x)    = psi(x - a)                    momentum multiplier exp(-i p.a/hbar)
    (V(v) psi)(x)    = exp(-i m v.x/hbar) psi(x)
    (R(u) psi)(x)    = D^(s)(u) psi(pi(u)^-1 x)
    (T(t) psi)^(p)   = exp(-i t (p^2/2m + E0)/hbar) psi^(p)
    Z(lam)           = exp(-i m lam/hbar)
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import rotations as rot
from .lattice import (
    DEFAULT_ADMISSIBILITY_THRESHOLD,
    MOMENTUM,
    POSITION,
    GridSpec,
    LatticeError,
    PhysicalParams,
    StateVector,
    admissibility,
    inner,
)

TRANSLATION = "translation"
BOOST = "boost"
ROTATION = "rotation"
TIME = "time"
CENTRAL = "central"
ELEMENT_KINDS = (TRANSLATION, BOOST, ROTATION, TIME, CENTRAL)


class GroupError(LatticeError):
    pass


class InadmissibleStateError(GroupError):
    pass


@dataclass(frozen=True, eq=False)
class GroupElement:
    """One of U(a), V(v), R(u), T(t), Z(lam).

    ``value`` is a vector for translations and boosts, a unit quaternion for
    rotations and a real number for time and central elements.
    ``spin_only`` applies only D^(s)(u) for rotations.
    """

    tag: str
    value: object
    spin_only: bool = False

    def __post_init__(self):
        if self.tag not in ELEMENT_KINDS:
            raise GroupError(f"unknown group element {self.tag!r}")
        if self.tag == ROTATION:
            object.__setattr__(self, "value", rot.check_quaternion(self.value))
        elif self.tag in (TRANSLATION, BOOST):
            v = np.atleast_1d(np.asarray(self.value, dtype=float)).copy()
            if v.ndim != 1 or v.size not in (1, 3) or not np.all(np.isfinite(v)):
                raise GroupError(f"{self.tag} needs a finite 1- or 3-vector, got {self.value!r}")
            v.setflags(write=False)
            object.__setattr__(self, "value", v)
        else:
            v = float(self.value)
            if not np.isfinite(v):
                raise GroupError(f"{self.tag} parameter must be finite")
            object.__setattr__(self, "value", v)

    def inverse(self) -> "GroupElement":
        if self.tag == ROTATION:
            q = self.value
            return GroupElement(ROTATION, np.concatenate([[q[0]], -q[1:]]), self.spin_only)
        return GroupElement(self.tag, -self.value, self.spin_only)

    def __repr__(self):
        return f"{self.tag}({np.round(self.value, 6).tolist() if self.tag != TIME and self.tag != CENTRAL else self.value})"


def translation(a) -> GroupElement:
    return GroupElement(TRANSLATION, a)


def boost(v) -> GroupElement:
    return GroupElement(BOOST, v)


def rotation(q, spin_only: bool = False) -> GroupElement:
    return GroupElement(ROTATION, q, spin_only)


def time_shift(t: float) -> GroupElement:
    return GroupElement(TIME, t)


def central(lam: float) -> GroupElement:
    return GroupElement(CENTRAL, lam)


def _vector_for(grid: GridSpec, v: np.ndarray, tag: str) -> np.ndarray:
    if v.size != grid.dims:
        raise GroupError(f"{tag} vector has {v.size} components on a {grid.dims}D grid")
    return v


def _dot_coords(grid: GridSpec, v: np.ndarray, space: str) -> np.ndarray:
    out = 0.0
    for i, c in enumerate(grid.coordinates(space)):
        out = out + v[i] * c
    return np.broadcast_to(out, grid.shape)


def _multiply(psi: StateVector, factor: np.ndarray, space: str) -> StateVector:
    phi = psi.in_representation(space)
    out = phi.with_amplitudes(phi.amplitudes * factor[..., None])
    return out.in_representation(psi.representation)


def grid_rotation_matrix(grid: GridSpec, q) -> np.ndarray:
    """Integer action of pi(u) on node labels; raises if the rotation does not preserve the grid.

    On a 1D grid the line is the x axis, so pi(u) must map it to +-x.
    """
    r = rot.rotation_matrix(q)
    if grid.dims == 1:
        if abs(abs(r[0, 0]) - 1.0) > 1e-12:
            raise GroupError("rotation does not map the 1D grid (x axis) onto itself")
        return np.array([[np.round(r[0, 0])]])
    if not rot.is_signed_permutation(r):
        raise GroupError("rotation is not one of the 24 grid-preserving octahedral rotations")
    return np.round(r)


def permute_nodes(array: np.ndarray, grid: GridSpec, r_int: np.ndarray) -> np.ndarray:
    """``out[c] = array[r^-1 c]`` with node labels wrapped onto the torus.

    Works for any array whose leading axes are the grid axes; the same map
    acts identically on position and momentum arrays.
    """
    n = grid.points_per_axis
    labels = np.meshgrid(*[grid.node_indices] * grid.dims, indexing="ij")
    idx = []
    for i in range(grid.dims):
        src = sum(r_int[j, i] * labels[j] for j in range(grid.dims))  # (r^T c)_i
        idx.append(((src + n // 2) % n).astype(int))
    return array[tuple(idx)]


def rotation_pair(psi: StateVector, q) -> rot.RotationMatrixPair:
    return rot.wigner_d(psi.spin, q)


def apply(element: GroupElement, psi: StateVector, params: PhysicalParams) -> StateVector:
    """Act with a single group element; the result keeps the input's representation."""
    g = psi.grid
    tag = element.tag
    if tag == TRANSLATION:
        a = _vector_for(g, element.value, tag)
        steps = a / g.spacing
        if psi.representation == POSITION and np.all(np.abs(steps - np.round(steps)) < 1e-12):
            # lattice shift: the phase multiplier is exactly a cyclic node shift
            shift = tuple(int(k) for k in np.round(steps))
            return psi.with_amplitudes(np.roll(psi.amplitudes, shift, axis=tuple(range(g.dims))))
        return _multiply(psi, np.exp(-1j * _dot_coords(g, a, MOMENTUM) / params.hbar), MOMENTUM)
    if tag == BOOST:
        v = _vector_for(g, element.value, tag)
        return _multiply(psi, np.exp(-1j * params.mass * _dot_coords(g, v, POSITION) / params.hbar), POSITION)
    if tag == TIME:
        energy = g.momentum_squared() / (2 * params.mass) + params.e0
        return _multiply(psi, np.exp(-1j * element.value * energy / params.hbar), MOMENTUM)
    if tag == CENTRAL:
        return psi.scaled(np.exp(-1j * params.mass * element.value / params.hbar))
    # rotation
    d = rot.spin_matrix(psi.spin, element.value)
    amps = psi.amplitudes
    if not element.spin_only:
        amps = permute_nodes(amps, g, grid_rotation_matrix(g, element.value))
    return psi.with_amplitudes(np.einsum("ij,...j->...i", d, amps))


GroupWord = Sequence[GroupElement]


def apply_word(word: GroupWord, psi: StateVector, params: PhysicalParams) -> StateVector:
    """Apply ``word[0] word[1] ... word[-1]`` to ``psi`` (rightmost factor acts first)."""
    word = list(word)
    if not word:
        raise GroupError("a group word needs at least one element")
    for element in reversed(word):
        psi = apply(element, psi, params)
    return psi


# --------------------------------------------------------------------- generators

X, P, K, H, J, L, S, M = "X", "P", "K", "H", "J", "L", "S", "M"
GENERATOR_TAGS = (X, P, K, H, J, L, S, M)
_INDEXED = (X, P, K, J, L, S)
_NEEDS_ADMISSIBLE = (X, K, L, J)


@dataclass(frozen=True)
class Generator:
    """A named generator; ``index`` is 1-based for vector-valued ones."""

    tag: str
    index: int = 0

    def __post_init__(self):
        if self.tag not in GENERATOR_TAGS:
            raise GroupError(f"unknown generator {self.tag!r}")
        if self.tag in _INDEXED and self.index not in (1, 2, 3):
            raise GroupError(f"generator {self.tag} needs an axis index in 1..3")

    def __str__(self):
        return f"{self.tag}{self.index}" if self.tag in _INDEXED else self.tag


def gen(name: str) -> Generator:
    """Parse ``"X1"``, ``"H"``, ``"J3"`` etc."""
    name = name.strip()
    if len(name) == 2 and name[1].isdigit():
        return Generator(name[0], int(name[1]))
    return Generator(name)


def _check_axis(psi: StateVector, g: Generator) -> int:
    if g.tag in (X, P, K) and g.index > psi.grid.dims:
        raise GroupError(f"{g} is undefined on a {psi.grid.dims}D grid")
    if g.tag in (L, J) and psi.grid.dims != 3:
        raise GroupError(f"{g} requires a 3D grid")
    return g.index - 1


def _apply_gen(g: Generator, psi: StateVector, params: PhysicalParams) -> StateVector:
    grid = psi.grid
    if g.tag == M:
        return psi.scaled(params.mass)
    if g.tag == X:
        return _multiply(psi, np.broadcast_to(grid.coordinate(g.index - 1), grid.shape), POSITION)
    if g.tag == K:
        return _apply_gen(Generator(X, g.index), psi, params).scaled(params.mass)
    if g.tag == P:
        return _multiply(psi, np.broadcast_to(grid.coordinate(g.index - 1, MOMENTUM), grid.shape), MOMENTUM)
    if g.tag == H:
        return _multiply(psi, grid.momentum_squared() / (2 * params.mass) + params.e0, MOMENTUM)
    if g.tag == S:
        s_mat = rot.spin_generators(psi.spin, params.hbar)[g.index - 1]
        return psi.with_amplitudes(np.einsum("ij,...j->...i", s_mat, psi.amplitudes))
    i = g.index - 1
    j, k = (i + 1) % 3, (i + 2) % 3
    # L_i = X_j P_k - X_k P_j, evaluated as operator products in that order
    lj = _apply_gen(Generator(X, j + 1), _apply_gen(Generator(P, k + 1), psi, params), params)
    lk = _apply_gen(Generator(X, k + 1), _apply_gen(Generator(P, j + 1), psi, params), params)
    orbital = lj - lk
    if g.tag == L:
        return orbital
    return orbital + _apply_gen(Generator(S, g.index), psi, params)


def require_admissible(psi: StateVector, threshold: float = DEFAULT_ADMISSIBILITY_THRESHOLD) -> None:
    report = admissibility(psi, threshold)
    if not report.admissible:
        raise InadmissibleStateError(
            f"state is not admissible (boundary tail {report.boundary_tail_mass:.3g}, "
            f"momentum tail {report.momentum_tail_mass:.3g}, threshold {threshold:.3g})")


def apply_generator(g: Union[Generator, str], psi: StateVector, params: PhysicalParams,
                    threshold: float = DEFAULT_ADMISSIBILITY_THRESHOLD, check: bool = True) -> StateVector:
    """Apply a generator (unnormalized result).

    Position-containing generators (X, K, L, J) refuse inadmissible states
    unless ``check=False``.
    """
    g = gen(g) if isinstance(g, str) else g
    _check_axis(psi, g)
    if check and g.tag in _NEEDS_ADMISSIBLE:
        require_admissible(psi, threshold)
    return _apply_gen(g, psi, params)


def apply_product(gens: Sequence[Union[Generator, str]], psi: StateVector, params: PhysicalParams) -> StateVector:
    """Operator product ``g[0] g[1] ... g[-1]`` applied right to left, without admissibility checks."""
    for g in reversed(list(gens)):
        g = gen(g) if isinstance(g, str) else g
        _check_axis(psi, g)
        psi = _apply_gen(g, psi, params)
    return psi


def _needs_check(gens) -> bool:
    return any((gen(g) if isinstance(g, str) else g).tag in _NEEDS_ADMISSIBLE for g in gens)


def expect(g, psi: StateVector, params: PhysicalParams,
           threshold: float = DEFAULT_ADMISSIBILITY_THRESHOLD) -> complex:
    """<psi| g psi>; for self-adjoint ``g`` the imaginary part is rounding noise."""
    if _needs_check([g]):
        require_admissible(psi, threshold)
    return inner(psi, apply_product([g], psi, params).in_representation(psi.representation))


def variance(g, psi: StateVector, params: PhysicalParams,
             threshold: float = DEFAULT_ADMISSIBILITY_THRESHOLD) -> float:
    if _needs_check([g]):
        require_admissible(psi, threshold)
    gpsi = apply_product([g], psi, params).in_representation(psi.representation)
    mean = inner(psi, gpsi).real
    return float(inner(gpsi, gpsi).real - mean ** 2)


def commutator_apply(g1, g2, psi: StateVector, params: PhysicalParams) -> StateVector:
    a = apply_product([g1, g2], psi, params)
    b = apply_product([g2, g1], psi, params).in_representation(a.representation)
    return a - b


def commutator_expect(g1, g2, psi: StateVector, params: PhysicalParams,
                      threshold: float = DEFAULT_ADMISSIBILITY_THRESHOLD) -> complex:
    """<psi|(g1 g2 - g2 g1) psi> by operator composition."""
    if _needs_check([g1, g2]):
        require_admissible(psi, threshold)
    return inner(psi, commutator_apply(g1, g2, psi, params).in_representation(psi.representation))


def unitarity_defect(element: GroupElement, states: Sequence[StateVector], params: PhysicalParams) -> float:
    """Max deviation of <U psi_i | U psi_j> from <psi_i | psi_j> over all pairs."""
    images = [apply(element, s, params) for s in states]
    worst = 0.0
    for i in range(len(states)):
        for j in range(len(states)):
            worst = max(worst, abs(inner(images[i], images[j]) - inner(states[i], states[j])))
    return worst
