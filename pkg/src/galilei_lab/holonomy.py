"""
Boost-translation loops, mass extraction, the Weyl relation and the
time-boost composition law.

The loop ``W = V(dv) U(da) V(-dv) U(-da)`` is a pure phase here. Its
holonomy phase is reported with the central-element convention
``W = Z(lam) = exp(-i m lam / hbar)``, i.e. ``phase = -arg <psi|W psi>``,
so that ``phase = m dv.da / hbar`` for a positive mass.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import group as G
from .lattice import LatticeError, PhysicalParams, StateVector, inner


class HolonomyError(LatticeError):
    pass


@dataclass(frozen=True)
class LoopSpec:
    dv: np.ndarray
    da: np.ndarray

    def __post_init__(self):
        dv = np.atleast_1d(np.asarray(self.dv, dtype=float))
        da = np.atleast_1d(np.asarray(self.da, dtype=float))
        if dv.shape != da.shape:
            raise HolonomyError("loop velocity and displacement must have the same shape")
        object.__setattr__(self, "dv", dv)
        object.__setattr__(self, "da", da)

    @property
    def area(self) -> float:
        """dv . da, the Bargmann parameter the loop should produce."""
        return float(np.dot(self.dv, self.da))

    def scaled(self, alpha: float, beta: float) -> "LoopSpec":
        return LoopSpec(alpha * self.dv, beta * self.da)

    def word(self) -> list:
        return [G.boost(self.dv), G.translation(self.da), G.boost(-self.dv), G.translation(-self.da)]


@dataclass(frozen=True)
class PhaseEstimate:
    phase: float
    magnitude_defect: float


def loop_apply(psi: StateVector, loop: LoopSpec, params: PhysicalParams) -> StateVector:
    return G.apply_word(loop.word(), psi, params)


def loop_phase(psi: StateVector, loop: LoopSpec, params: PhysicalParams) -> PhaseEstimate:
    """Holonomy phase of the loop on ``psi``; rejects loops whose phase is not below pi."""
    overlap = inner(psi, loop_apply(psi, loop, params)) / inner(psi, psi).real
    phase = -float(np.angle(overlap))
    expected = params.mass * loop.area / params.hbar
    if abs(expected) >= np.pi or abs(phase) >= np.pi - 1e-9:
        raise HolonomyError("loop too large: holonomy phase would wrap past pi")
    return PhaseEstimate(phase, abs(abs(overlap) - 1.0))


@dataclass(frozen=True)
class MassEstimate:
    mass: float
    spread: float
    per_state: tuple


def extract_mass(states: Sequence[StateVector], loop: LoopSpec, params: PhysicalParams) -> MassEstimate:
    """Mass read off as hbar * phase / |dv.da| on each state.

    ``params.mass`` configures the representation; the estimate only sees
    overlaps. The loop orientation fixes the sign convention: flipping dv
    (or da) returns a negated mass.
    """
    if len(states) < 2:
        raise HolonomyError("mass extraction needs at least two states")
    if loop.area == 0:
        raise HolonomyError("loop encloses no area (dv . da = 0)")
    masses = [params.hbar * loop_phase(s, loop, params).phase / abs(loop.area) for s in states]
    masses = np.array(masses)
    return MassEstimate(float(masses.mean()), float(masses.max() - masses.min()), tuple(masses.tolist()))


def weyl_defect(psi: StateVector, v, a, params: PhysicalParams) -> float:
    """|| V(v)U(a) psi - exp(-i m v.a/hbar) U(a)V(v) psi ||."""
    v = np.atleast_1d(np.asarray(v, dtype=float))
    a = np.atleast_1d(np.asarray(a, dtype=float))
    lhs = G.apply_word([G.boost(v), G.translation(a)], psi, params)
    rhs = G.apply_word([G.translation(a), G.boost(v)], psi, params)
    phase = np.exp(-1j * params.mass * np.dot(v, a) / params.hbar)
    return (lhs - rhs.scaled(phase)).norm()


@dataclass(frozen=True)
class BoostMultiplierCheck:
    functional_defect: float
    origin_value: complex
    spin_spread: float
    pairs_checked: int


def boost_multiplier(psi: StateVector, v, params: PhysicalParams, amplitude_threshold: float = 1e-6) -> np.ndarray:
    """W_v(x) per node and spin component, as the ratio (V(v) psi)(x) / psi(x); NaN where |psi| is small."""
    psi = psi.in_position()
    boosted = G.apply(G.boost(v), psi, params).amplitudes
    amp = psi.amplitudes
    peak = np.abs(amp).max()
    ok = np.abs(amp) > amplitude_threshold * peak
    ratio = np.full(amp.shape, np.nan + 0j)
    ratio[ok] = boosted[ok] / amp[ok]
    return ratio


def boost_multiplier_check(psi: StateVector, v, a, params: PhysicalParams,
                           sample_points: Optional[Sequence] = None,
                           amplitude_threshold: float = 1e-6) -> BoostMultiplierCheck:
    """Check ``W_v(x + a) = exp(-i m v.a/hbar) W_v(x)`` and spin-triviality of W_v.

    ``a`` must be a lattice vector. Sample points default to every node where
    both ``x`` and ``x + a`` carry amplitude and ``x + a`` does not cross the seam.
    """
    grid = psi.grid
    steps = grid.lattice_steps(a)
    a = np.atleast_1d(np.asarray(a, dtype=float))
    v = np.atleast_1d(np.asarray(v, dtype=float))
    ratio = boost_multiplier(psi, v, params, amplitude_threshold)
    n = grid.points_per_axis

    # spin triviality: all finite spin components agree node by node
    spread = 0.0
    for x in np.ndindex(*grid.shape):
        vals = ratio[x][np.isfinite(ratio[x])]
        if vals.size > 1:
            spread = max(spread, float(np.max(np.abs(vals - vals[0]))))

    if sample_points is None:
        labels = [tuple(int(k) - n // 2 for k in x) for x in np.ndindex(*grid.shape)]
    else:
        labels = [tuple(grid.lattice_steps(p)) for p in sample_points]
    factor = np.exp(-1j * params.mass * np.dot(v, a) / params.hbar)
    worst, count = 0.0, 0
    for c in labels:
        target = tuple(ci + si for ci, si in zip(c, steps))
        if any(t < -n // 2 or t >= n // 2 for t in target):
            continue
        w_x = ratio[tuple(ci + n // 2 for ci in c)]
        w_xa = ratio[tuple(t + n // 2 for t in target)]
        both = np.isfinite(w_x) & np.isfinite(w_xa)
        if both.any():
            worst = max(worst, float(np.max(np.abs(w_xa[both] - factor * w_x[both]))))
            count += 1
    if count == 0:
        raise HolonomyError("no sample nodes carry enough amplitude")
    origin = ratio[(n // 2,) * grid.dims]
    origin = origin[np.isfinite(origin)]
    origin_value = complex(origin[0]) if origin.size else complex("nan")
    return BoostMultiplierCheck(worst, origin_value, spread, count)


def bargmann_time_boost_defect(psi: StateVector, t: float, v, params: PhysicalParams) -> float:
    """|| T(t)V(v)T(-t) psi - Z(-t|v|^2/2) U(-t v) V(v) psi ||."""
    v = np.atleast_1d(np.asarray(v, dtype=float))
    lhs = G.apply_word([G.time_shift(t), G.boost(v), G.time_shift(-t)], psi, params)
    rhs = G.apply_word([G.central(-0.5 * t * float(np.dot(v, v))), G.translation(-t * v), G.boost(v)], psi, params)
    return (lhs - rhs.in_representation(lhs.representation)).norm()


def central_commutation_defect(psi: StateVector, lam: float, element: G.GroupElement,
                               params: PhysicalParams) -> float:
    """|| Z(lam) g psi - g Z(lam) psi ||."""
    z = G.central(lam)
    return (G.apply_word([z, element], psi, params) - G.apply_word([element, z], psi, params)).norm()


def composition_defects(psi: StateVector, params: PhysicalParams, a, v, t: float, q) -> dict:
    """Defects of the five frame-composition laws on one state.

    ``q`` must be grid-compatible (on a 1D grid: a rotation mapping x to +-x).
    """
    a = np.atleast_1d(np.asarray(a, dtype=float))
    v = np.atleast_1d(np.asarray(v, dtype=float))
    r = G.rotation(q)
    r_inv = r.inverse()
    pi = G.grid_rotation_matrix(psi.grid, q)

    def d(lhs_word, rhs_word):
        lhs = G.apply_word(lhs_word, psi, params)
        rhs = G.apply_word(rhs_word, psi, params)
        return (lhs - rhs.in_representation(lhs.representation)).norm()

    return {
        "TU": d([G.time_shift(t), G.translation(a), G.time_shift(-t)], [G.translation(a)]),
        "RU": d([r, G.translation(a), r_inv], [G.translation(pi @ a)]),
        "RV": d([r, G.boost(v), r_inv], [G.boost(pi @ v)]),
        "TV": bargmann_time_boost_defect(psi, t, v, params),
        "TR": d([G.time_shift(t), r], [r, G.time_shift(t)]),
    }
