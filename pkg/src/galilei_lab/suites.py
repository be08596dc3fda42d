"""
Suite catalogue: every derived identity as an executable check.

Suites are listed in dependency order (duality toy and lattice first,
dynamics last). Each suite is a pure function of the run configuration;
its randomness comes from :func:`galilei_lab.sampling.rng_for` keyed by the
suite name, so results do not depend on scheduling.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np
from scipy.linalg import expm

from . import duality as Du
from . import dynamics as Dy
from . import group as G
from . import holonomy as Ho
from . import localization as Lo
from . import momentum as Mo
from . import rotations as Ro
from .config import RunConfig
from .lattice import (
    PhysicalParams,
    SpinSpec,
    gaussian_state,
    inner,
    make_grid,
    random_spinor,
    to_momentum,
    to_position,
)
from .sampling import random_admissible_state, rng_for

LE, GE, EQ = "<=", ">=", "=="


@dataclass
class CheckResult:
    suite: str
    name: str
    anchor: str
    measured: float
    tolerance: float
    comparison: str = LE
    runtime: float = 0.0

    @property
    def passed(self) -> bool:
        m = self.measured
        if not np.isfinite(m):
            return False
        if self.comparison == LE:
            return m <= self.tolerance
        if self.comparison == GE:
            return m >= self.tolerance
        return m == self.tolerance

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "name": self.name,
            "anchor": self.anchor,
            "measured": _jsonable(self.measured),
            "tolerance": _jsonable(self.tolerance),
            "comparison": self.comparison,
            "passed": bool(self.passed),
        }


def _jsonable(x: float):
    x = float(x)
    return x if np.isfinite(x) else repr(x)


@dataclass
class SuiteOutput:
    checks: List[CheckResult] = field(default_factory=list)
    sidecars: Dict[str, tuple] = field(default_factory=dict)  # filename -> (header, rows)
    runtime: float = 0.0


class _Recorder:
    def __init__(self, suite: str):
        self.suite = suite
        self.out = SuiteOutput()
        self._t = time.perf_counter()

    def add(self, name: str, anchor: str, measured: float, tolerance: float, comparison: str = LE):
        now = time.perf_counter()
        self.out.checks.append(CheckResult(self.suite, name, anchor, float(measured), float(tolerance),
                                           comparison, now - self._t))
        self._t = now


def _states(cfg: RunConfig, count: int, dims: int = 1, offset: int = 0, spin=None) -> list:
    return [random_admissible_state(cfg, cfg.seed, offset + k, dims, spin) for k in range(count)]


# --------------------------------------------------------------------- duality

def suite_duality(cfg: RunConfig) -> SuiteOutput:
    rec = _Recorder("duality")
    tol = cfg.tol
    h = cfg.duality_step
    K = cfg.duality_directions
    fam = Du.DualityFamily.default(cfg.duality_dim, K, cfg.duality_seed, hbar=cfg.hbar)
    eye = np.eye(K)
    rng = rng_for(cfg.seed, "duality")

    worst = max(np.abs(Du.duality_map(fam, eye[k], h) - fam.basis[k]).max() for k in range(K))
    rec.add("analytic traceless representatives D(e_k) = A_k", "duality/map", worst, tol["fd"])

    v = eye[0] + 2 * eye[1]
    rec.add("linearity D(e_1 + 2 e_2) = A_1 + 2 A_2", "duality/map",
            np.abs(Du.duality_map(fam, v, h) - (fam.basis[0] + 2 * fam.basis[1])).max(), tol["fd"])

    om = Du.connection_omega(fam, eye[0], h)
    rec.add("omega(e_1) = -(i/hbar)[A_1, .]", "duality/connection",
            np.abs(om - Du.commutator_superop(fam.basis[0], cfg.hbar)).max(), tol["fd"])

    lin = Du.DualityFamily(fam.basis, Du.linear_gauge(rng.normal(size=K)), cfg.hbar)
    quad = Du.DualityFamily(fam.basis, Du.quadratic_gauge, cfg.hbar)
    gauge_def = 0.0
    for k in range(K):
        w = rng.normal(size=K)
        base_om, base_d = Du.connection_omega(fam, w, h), Du.duality_map(fam, w, h)
        for other in (lin, quad):
            gauge_def = max(gauge_def, np.abs(Du.connection_omega(other, w, h) - base_om).max(),
                            np.abs(Du.duality_map(other, w, h) - base_d).max())
    rec.add("gauge-shift invariance (linear and |theta|^2 gauges)", "gauge/scalar-shift",
            gauge_def, tol["tight"])

    rep = Du.injectivity_check(fam, h)
    rec.add("injectivity rank, default family", "duality/injective", rep.rank, K, EQ)
    dup = list(fam.basis)
    dup[1] = dup[0]
    rec.add("rank with A_2 = A_1", "duality/injective",
            Du.injectivity_check(Du.DualityFamily(tuple(dup)), h).rank, K - 1, EQ)
    dup[1] = fam.basis[0] + 3 * np.eye(fam.dim)
    rec.add("rank with A_2 = A_1 + 3 I (quotient by scalars)", "duality/scalar-quotient",
            Du.injectivity_check(Du.DualityFamily(tuple(dup)), h).rank, K - 1, EQ)

    rhos = [Du.random_density_matrix(rng, fam.dim) for _ in range(20)]
    worst = 0.0
    for k in range(K):
        worst = max(worst, Du.derived_duality_defect(fam, eye[k], rhos, h))
    for _ in range(5):
        worst = max(worst, Du.derived_duality_defect(quad, rng.normal(size=K), rhos, h))
    rec.add("omega(v)(rho) = -(i/hbar)[D(omega(v)), rho] on 20 density matrices", "duality/commutator-form",
            worst, tol["spectral"])

    worst = 0.0
    cub = Du.DualityFamily.default(cfg.duality_dim, K, cfg.duality_seed, hbar=cfg.hbar, cubic=True)
    for _ in range(5):
        v, w = rng.normal(size=K), rng.normal(size=K)
        straight = Du.duality_map(cub, v, h)
        bent = Du.duality_map(cub, v, h, curve=lambda e, v=v, w=w: e * v + e * e * w)
        worst = max(worst, np.abs(straight - bent).max())
    rec.add("curve independence of the derivative", "duality/curve-independence",
            worst, tol["curve"])

    v = rng.normal(size=K)
    exact = sum(v[k] * cub.basis[k] for k in range(K))
    e1 = np.abs(Du.duality_map(cub, v, 1e-3) - exact).max()
    e2 = np.abs(Du.duality_map(cub, v, 5e-4) - exact).max()
    rec.add("central-difference error ratio under step halving", "duality/step-convergence",
            e1 / e2, 3.0, GE)
    return rec.out


# --------------------------------------------------------------------- lattice & spin

def suite_lattice(cfg: RunConfig) -> SuiteOutput:
    rec = _Recorder("lattice")
    tol = cfg.tol
    states = _states(cfg, cfg.n_states)
    rec.add("Parseval: position norm = momentum norm", "lattice/parseval",
            max(abs(s.norm() - to_momentum(s).norm()) for s in states), tol["exact"])
    rec.add("transform round trip", "lattice/fourier",
            max(np.abs(to_position(to_momentum(s)).amplitudes - s.amplitudes).max() for s in states),
            tol["exact"])
    a, b = states[0], states[1]
    lhs = to_momentum(a.scaled(0.3 - 0.2j) + b.scaled(1.1))
    rhs = to_momentum(a).scaled(0.3 - 0.2j) + to_momentum(b).scaled(1.1)
    rec.add("transform linearity", "lattice/plumbing", (lhs - rhs).norm(), tol["exact"])
    rec.add("random states normalized", "lattice/plumbing",
            max(abs(inner(s, s).real - 1) for s in states), tol["exact"])

    params = cfg.params
    g = make_grid(1, 256, 40.0, cfg.hbar)
    psi = gaussian_state(g, SpinSpec(0), params, 0.0, 0.0, 1.0)
    mx = G.expect("X1", psi, params).real
    rec.add("Gaussian moments <X> = 0, Var X = sigma^2", "lattice/gaussian",
            max(abs(mx), abs(G.variance("X1", psi, params) - 1.0)), tol["spectral"])
    rec.add("momentum width hbar/(2 sigma)", "lattice/fourier",
            abs(np.sqrt(G.variance("P1", psi, params)) - cfg.hbar / 2), tol["fit"])

    rng = rng_for(cfg.seed, "spin")
    rec.add("D^(1/2)(2 pi) = -I", "spin/double-cover",
            np.abs(Ro.spin_matrix(0.5, [-1.0, 0, 0, 0]) + np.eye(2)).max(), 0.0, EQ)
    worst = 0.0
    for s in (0, 0.5, 1, 1.5):
        for _ in range(50):
            d = Ro.spin_matrix(s, Ro.random_quaternion(rng))
            worst = max(worst, np.abs(d.conj().T @ d - np.eye(d.shape[0])).max())
    rec.add("D^(s)(u) unitary, s in {0,1/2,1,3/2}, 50 quaternions", "spin/wigner-D", worst, tol["exact"])
    worst = 0.0
    for s in (0.5, 1, 1.5):
        sz = Ro.spin_generators(s)[2]
        for theta in rng.uniform(-np.pi, np.pi, 5):
            q = Ro.axis_angle_quaternion([0, 0, 1], theta)
            worst = max(worst, np.abs(Ro.spin_matrix(s, q) - expm(-1j * theta * sz)).max())
    rec.add("D^(s)(z-rotation) = exp(-i theta S_z)", "spin/wigner-D", worst, tol["exact"])
    worst = 0.0
    for _ in range(20):
        q1, q2 = Ro.random_quaternion(rng), Ro.random_quaternion(rng)
        prod = _quat_mul(q1, q2)
        for s in (0.5, 1, 1.5):
            worst = max(worst, np.abs(Ro.spin_matrix(s, q1) @ Ro.spin_matrix(s, q2) - Ro.spin_matrix(s, prod)).max())
        worst = max(worst, np.abs(Ro.rotation_matrix(q1) @ Ro.rotation_matrix(q2) - Ro.rotation_matrix(prod)).max())
        worst = max(worst, np.abs(Ro.rotation_matrix(-q1) - Ro.rotation_matrix(q1)).max())
    rec.add("homomorphism D(u1)D(u2) = D(u1 u2), pi(u) = pi(-u)", "spin/homomorphism",
            worst, tol["exact"])
    return rec.out


def _quat_mul(a, b):
    w1, x1, y1, z1 = a
    w2, x2, y2, z2 = b
    return np.array([w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
                     w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
                     w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
                     w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2])


# --------------------------------------------------------------------- composition laws

def random_line_rotation(rng) -> np.ndarray:
    """A rotation preserving the x axis as a set: about x by any angle, optionally times pi about z."""
    q = Ro.axis_angle_quaternion([1, 0, 0], rng.uniform(-np.pi, np.pi))
    if rng.random() < 0.5:
        q = _quat_mul(Ro.axis_angle_quaternion([0, 0, 1], np.pi), q)
    return q / np.linalg.norm(q)


def suite_composition(cfg: RunConfig) -> SuiteOutput:
    rec = _Recorder("composition")
    tol = cfg.tol
    params = cfg.params
    rng = rng_for(cfg.seed, "composition")
    states = _states(cfg, cfg.n_states)
    worst = {k: 0.0 for k in ("TU", "RU", "RV", "TV", "TR")}
    for psi in states:
        d = Ho.composition_defects(psi, params, rng.uniform(-3, 3), rng.uniform(-1, 1),
                                   rng.uniform(-1, 1), random_line_rotation(rng))
        for k in worst:
            worst[k] = max(worst[k], d[k])
    anchors = {"TU": "composition/TU", "RU": "composition/RU", "RV": "composition/RV", "TV": "composition/TV", "TR": "composition/TR"}
    for k, v in worst.items():
        rec.add(f"{k} composition law, 1D, {len(states)} states", anchors[k], v, tol["exact"])

    # 3D: octahedral rotations, arbitrary translations and boosts
    cube = _states(cfg, 4, dims=3)
    g3 = cfg.cube_grid()
    octa = Ro.octahedral_quaternions()
    w3 = {k: 0.0 for k in worst}
    for psi in cube:
        for q in [octa[i] for i in rng.choice(len(octa), 6, replace=False)]:
            # lattice a and m v: the seam and Nyquist nodes are fixed by the node permutation
            a = rng.integers(-4, 5, 3) * g3.spacing
            v = rng.integers(-3, 4, 3) * g3.momentum_spacing / cfg.mass
            d = Ho.composition_defects(psi, params, a, v, rng.uniform(-0.5, 0.5), q)
            for k in w3:
                w3[k] = max(w3[k], d[k])
    for k in ("RU", "RV", "TR"):
        rec.add(f"{k} composition law, 3D octahedral rotations", anchors[k], w3[k], tol["exact"])

    elements = [G.translation(1.7), G.boost(-0.6), G.time_shift(0.8), G.central(2.2),
                G.rotation(random_line_rotation(rng))]
    rec.add("unitarity of every group element", "group/unitary",
            max(G.unitarity_defect(e, states[:5], params) for e in elements), tol["exact"])
    worst = 0.0
    for psi in states[:10]:
        a1, a2 = rng.uniform(-4, 4, 2)
        lhs = G.apply_word([G.translation(a2), G.translation(a1)], psi, params)
        worst = max(worst, (lhs - G.apply(G.translation(a1 + a2), psi, params)).norm())
    rec.add("U(a1)U(a2) = U(a1 + a2)", "group/translation", worst, tol["exact"])
    worst = 0.0
    for psi in states[:10]:
        lam = rng.uniform(-5, 5)
        for e in elements:
            worst = max(worst, Ho.central_commutation_defect(psi, lam, e, params))
    rec.add("Z(lambda) commutes with T, U, V, R", "group/central", worst, tol["exact"])
    psi = states[0]
    back = G.apply(G.central(2 * np.pi * cfg.hbar / cfg.mass), psi, params)
    rec.add("Z(2 pi hbar/m) = identity", "Z(lambda) = exp(-i m lambda/hbar)",
            np.abs(back.amplitudes - psi.amplitudes).max(), tol["exact"])
    spin_half = SpinSpec(0.5)
    s = random_admissible_state(cfg, cfg.seed, 999, 1, spin_half)
    turned = G.apply(G.rotation(Ro.axis_angle_quaternion(rng.normal(size=3), 2 * np.pi), spin_only=True), s, params)
    rec.add("R(2 pi) psi = -psi for s = 1/2", "spin/double-cover",
            (turned + s).norm(), tol["exact"])
    return rec.out


# --------------------------------------------------------------------- Weyl & boost form

def suite_weyl(cfg: RunConfig) -> SuiteOutput:
    rec = _Recorder("weyl")
    tol = cfg.tol
    params = cfg.params
    rng = rng_for(cfg.seed, "weyl")
    states = _states(cfg, cfg.n_states)
    worst = max(Ho.weyl_defect(psi, rng.uniform(-1.5, 1.5), rng.uniform(-5, 5), params) for psi in states)
    rec.add(f"V(v)U(a) = exp(-i m v.a/hbar) U(a)V(v), {len(states)} states", "weyl", worst, tol["exact"])
    v = 0.5
    a = 2 * np.pi * cfg.hbar / (cfg.mass * v)
    worst = 0.0
    for psi in states[:5]:
        lhs = G.apply_word([G.boost(v), G.translation(a)], psi, params)
        rhs = G.apply_word([G.translation(a), G.boost(v)], psi, params)
        worst = max(worst, (lhs - rhs).norm())
    rec.add("U and V commute when m v a = 2 pi hbar", "weyl", worst, tol["exact"])

    grid = cfg.line_grid()
    fd, origin, spread = 0.0, 0.0, 0.0
    for k in range(5):
        psi = gaussian_state(grid, cfg.spin_spec, params, 0.0, rng.uniform(-1, 1), rng.uniform(1.5, 3.0),
                             random_spinor(rng, cfg.spin_spec))
        chk = Ho.boost_multiplier_check(psi, rng.uniform(-1, 1), int(rng.integers(1, 20)) * grid.spacing, params)
        fd = max(fd, chk.functional_defect)
        origin = max(origin, abs(chk.origin_value - 1))
        spread = max(spread, chk.spin_spread)
    rec.add("W_v(x + a) = exp(-i m v.a/hbar) W_v(x)", "boost/multiplier-functional", fd, tol["exact"])
    rec.add("W_v(0) = 1", "boost/multiplier-origin", origin, tol["exact"])
    rec.add("boost multiplier trivial on spin, C(v) = I", "boost/spin-trivial", spread, tol["exact"])
    return rec.out


# --------------------------------------------------------------------- holonomy & mass

def suite_holonomy(cfg: RunConfig) -> SuiteOutput:
    rec = _Recorder("holonomy")
    tol = cfg.tol
    params = cfg.params
    loop = Ho.LoopSpec(cfg.loop_dv, cfg.loop_da)
    states = _states(cfg, cfg.mass_states, offset=100)
    est = Ho.extract_mass(states, loop, params)
    rec.add("extracted mass matches configured m (relative)", "holonomy/mass",
            abs(est.mass - cfg.mass) / cfg.mass, tol["fd"])
    rec.add(f"state-to-state mass spread over {len(states)} states", "holonomy/mass-scalar",
            est.spread, tol["tight"])
    flipped = Ho.extract_mass(states, Ho.LoopSpec(-cfg.loop_dv, cfg.loop_da), params)
    rec.add("reversing the boost orientation negates the mass", "holonomy/orientation",
            abs(flipped.mass + est.mass) / cfg.mass, tol["fd"])
    rec.add("loop operator is a pure phase", "holonomy/pure-phase",
            max(Ho.loop_phase(s, loop, params).magnitude_defect for s in states), tol["tight"])

    # bilinearity over four decades of loop size
    base = Ho.LoopSpec(1.0 / np.sqrt(cfg.mass), 1.0 / np.sqrt(cfg.mass))
    scales = [1e-4, 1e-3, 1e-2, 1e-1, 1.0]
    psi = states[0]
    phi0 = Ho.loop_phase(psi, base, params).phase
    rows, worst = [], 0.0
    for al in scales:
        for be in scales:
            ph = Ho.loop_phase(psi, base.scaled(al, be), params).phase
            worst = max(worst, abs(ph - al * be * phi0))
            rows.append([repr(al), repr(be), repr(ph), repr(al * be * phi0)])
    rec.add("loop phase bilinear over 4 decades (5x5 lattice)", "holonomy/bilinear",
            worst, tol["exact"])
    rec.out.sidecars["holonomy_sweep.csv"] = (["alpha", "beta", "phase", "bilinear_prediction"], rows)

    small = Ho.loop_phase(psi, Ho.LoopSpec(0.01, 0.01), params).phase
    rec.add("phase of the (0.01, 0.01) loop = m dv da / hbar", "holonomy/phase",
            abs(small - cfg.mass * 1e-4 / cfg.hbar), tol["exact"])

    masses = []
    L = cfg.grid.length
    for n in (128, 256, 512):
        g = make_grid(1, n, L, cfg.hbar)
        sig = max(4 * g.spacing, L / 40)
        ss = [gaussian_state(g, cfg.spin_spec, params, x, p, sig) for x, p in ((-2.0, 0.5), (3.0, -0.3))]
        masses.append(Ho.extract_mass(ss, loop, params).mass)
    rec.add("extracted mass independent of N in {128, 256, 512}", "holonomy/mass-scalar",
            (max(masses) - min(masses)) / cfg.mass, tol["fd"])

    worst = 0.0
    for s in states:
        kp = G.commutator_expect("K1", "P1", s, params) / (1j * cfg.hbar)
        worst = max(worst, abs(kp - est.mass * inner(s, s).real))
    rec.add("[K, P]/(i hbar) = extracted m <psi|psi>", "ccr/KP", worst, tol["spectral"])

    cube = _states(cfg, 3, dims=3, offset=100)
    worst = 0.0
    for s in cube:
        worst = max(worst, abs(Ho.loop_phase(s, Ho.LoopSpec([0.3, 0, 0], [0, 0.4, 0]), params).phase))
        worst = max(worst, abs(Ho.loop_phase(s, Ho.LoopSpec([0.2, -0.1, 0.3], [0.3, 0.3, -0.1]), params).phase))
    rec.add("perpendicular loops carry no holonomy (3D)", "holonomy/perpendicular", worst, tol["exact"])
    return rec.out


# --------------------------------------------------------------------- commutators

def suite_ccr(cfg: RunConfig) -> SuiteOutput:
    rec = _Recorder("ccr")
    tol = cfg.tol
    params = cfg.params
    hb, m = cfg.hbar, cfg.mass
    states = _states(cfg, cfg.n_states, offset=200)
    rec.add("[X, P] = i hbar", "ccr/XP",
            max(abs(G.commutator_expect("X1", "P1", s, params) - 1j * hb) for s in states), tol["spectral"])
    rec.add("[K, P] = i hbar m", "ccr/KP",
            max(abs(G.commutator_expect("K1", "P1", s, params) - 1j * hb * m) for s in states), tol["spectral"])
    rec.add("[H, P] = 0", "ccr/HP",
            max(abs(G.commutator_expect("H", "P1", s, params)) for s in states), tol["exact"])
    rec.add("[X, H] = (i hbar/m) P", "ccr/XH",
            max(abs(G.commutator_expect("X1", "H", s, params) - 1j * hb / m * G.expect("P1", s, params))
                for s in states), tol["spectral"])
    rec.add("[K, H] = i hbar P", "angular/time-compatibility",
            max(abs(G.commutator_expect("K1", "H", s, params) - 1j * hb * G.expect("P1", s, params))
                for s in states), tol["spectral"])
    rec.add("<M> = m", "holonomy/mass-scalar",
            max(abs(G.expect("M", s, params) - m) for s in states), tol["exact"])
    return rec.out


def suite_angular(cfg: RunConfig) -> SuiteOutput:
    rec = _Recorder("angular")
    tol = cfg.tol
    params = cfg.params
    hb = cfg.hbar
    states = _states(cfg, 3, dims=3, offset=300)
    states += _states(cfg, 2, dims=3, offset=310, spin=SpinSpec(1))
    eps = lambda i, j, k: int(np.sign((j - i) * (k - i) * (k - j)))  # noqa: E731 (Levi-Civita on 1..3)
    cyc = [(1, 2, 3), (2, 3, 1), (3, 1, 2)]

    worst = 0.0
    for s in states:
        for i, j, k in cyc:
            worst = max(worst, abs(G.commutator_expect(f"J{i}", f"J{j}", s, params)
                                   - 1j * hb * G.expect(f"J{k}", s, params)))
    rec.add("[J_i, J_j] = i hbar eps_ijk J_k", "angular/JJ", worst, tol["fit"])

    worst = 0.0
    for s in states:
        for i in (1, 2, 3):
            worst = max(worst, abs(G.commutator_expect("H", f"J{i}", s, params)))
    rec.add("[H, J_i] = 0", "angular/HJ", worst, tol["fit"])

    wx, wp, ws = 0.0, 0.0, 0.0
    for s in states:
        for i in (1, 2, 3):
            for j in (1, 2, 3):
                e_xk = sum(eps(i, j, k) * G.expect(f"X{k}", s, params) for k in (1, 2, 3) if eps(i, j, k))
                e_pk = sum(eps(i, j, k) * G.expect(f"P{k}", s, params) for k in (1, 2, 3) if eps(i, j, k))
                wx = max(wx, abs(G.commutator_expect(f"J{i}", f"X{j}", s, params) - 1j * hb * e_xk))
                wp = max(wp, abs(G.commutator_expect(f"J{i}", f"P{j}", s, params) - 1j * hb * e_pk))
                ws = max(ws, abs(G.commutator_expect(f"S{i}", f"X{j}", s, params)),
                         abs(G.commutator_expect(f"S{i}", f"P{j}", s, params)))
    rec.add("[J_i, X_j] = i hbar eps_ijk X_k", "angular/orbital-spin", wx, tol["fit"])
    rec.add("[J_i, P_j] = i hbar eps_ijk P_k", "angular/orbital-spin", wp, tol["fit"])
    rec.add("[S_i, X_j] = 0 = [S_i, P_j]", "angular/orbital-spin", ws, tol["fit"])

    worst = 0.0
    for s in states:
        for i, j, k in cyc:
            worst = max(worst, abs(G.commutator_expect(f"S{i}", f"S{j}", s, params)
                                   - 1j * hb * G.expect(f"S{k}", s, params)))
    rec.add("spin su(2): [S_i, S_j] = i hbar eps_ijk S_k", "spin/su2", worst, tol["exact"])
    return rec.out


# --------------------------------------------------------------------- localization

def suite_localization(cfg: RunConfig) -> SuiteOutput:
    rec = _Recorder("localization")
    tol = cfg.tol
    params = cfg.params
    grid = cfg.line_grid()
    spin = cfg.spin_spec
    rng = rng_for(cfg.seed, "localization")
    dx = grid.spacing
    delta = Lo.SmearKernel.delta(grid)

    boxes = []
    for _ in range(cfg.n_boxes):
        width = rng.uniform(2.5, 8.0)
        lo = rng.uniform(-grid.box_length / 4, grid.box_length / 4)
        boxes.append((lo, lo + width))
    worst = max(abs(Lo.povm_norm(Lo.Region.box(grid, [lo], [hi]), delta) - 1.0) for lo, hi in boxes)
    rec.add(f"sharp kernel: ||E(O)|| = 1 on {len(boxes)} random boxes", "localization/norm-one", worst, 0.0, EQ)

    for eps in cfg.focus_eps:
        worst_prob = 1.0
        for lo, hi in boxes:
            center = np.round((lo + hi) / 2 / dx) * dx
            r = min(center - lo, hi - center) - dx
            foc = Lo.focusing_state(grid, spin, params, r, eps)
            moved = G.apply(G.translation(center), foc.state, params)
            worst_prob = min(worst_prob, Lo.povm_prob(moved, Lo.Region.box(grid, [lo], [hi]), delta))
        rec.add(f"translated focusing states reach 1 - eps, eps = {eps:g}", "localization/focusing",
                worst_prob, 1.0 - eps, GE)

    foc = Lo.focusing_state(grid, spin, params, cfg.focus_radius, cfg.focus_eps[0])
    x0 = 17 * dx
    moved = G.apply(G.translation(x0), foc.state, params)
    rec.add("focusing probability is translation covariant", "localization/focusing",
            abs(Lo.pvm_prob(moved, Lo.Region.ball(grid, [x0], cfg.focus_radius)) - foc.probability),
            tol["exact"])

    eta = 1.0
    sep = (cfg.atom_separation_steps) * dx
    if sep <= 4 * eta + dx:
        sep = (int(np.ceil((4 * eta + dx) / dx)) + 1) * dx
    region = Lo.Region.ball(grid, [0.0], eta)
    two = Lo.SmearKernel.atomic(grid, [[0.0], [sep]], [0.5, 0.5])
    rec.add("two-atom kernel (1/2, 1/2): ||E(O)|| = 1/2", "localization/sharpness",
            abs(Lo.povm_norm(region, two) - 0.5), tol["exact"])
    brute = Lo.kernel_profile_bruteforce(region, two)
    rec.add("two-atom profile vs brute-force double sum", "localization/sharpness",
            np.abs(Lo.kernel_profile(region, two) - brute).max(), tol["exact"])
    dens = Lo.SmearKernel.uniform_ball(grid, 1.5)
    rec.add("uniform-ball kernel profile vs brute-force double sum", "localization/smeared",
            np.abs(Lo.kernel_profile(region, dens) - Lo.kernel_profile_bruteforce(region, dens)).max(),
            tol["exact"])

    worst = -1.0
    for _ in range(10):
        w = rng.uniform(0.05, 0.95)
        r_eta = rng.uniform(0.5, 3.0)
        reg = Lo.Region.ball(grid, [rng.uniform(-5, 5)], r_eta)
        gap = reg.diameter() + dx
        offset = (int(np.ceil(gap / dx)) + int(rng.integers(1, 30))) * dx
        k2 = Lo.SmearKernel.atomic(grid, [[0.0], [offset]], [w, 1 - w])
        worst = max(worst, Lo.povm_norm(reg, k2) - (1 - min(w, 1 - w)))
    rec.add("sharpness dichotomy: separated two-atom kernels have norm <= 1 - min weight",
            "localization/sharpness", max(worst, 0.0), tol["exact"])

    states = _states(cfg, 10, offset=400)
    b1 = Lo.Region.box(grid, [-6.0], [-1.0])
    b2 = Lo.Region.box(grid, [-1.0], [4.0])
    worst = max(abs(Lo.povm_prob(s, b1.union(b2), dens) - Lo.povm_prob(s, b1, dens) - Lo.povm_prob(s, b2, dens))
                for s in states)
    rec.add("additivity on disjoint regions", "localization/additivity", worst, tol["exact"])

    b = Lo.Region.box(grid, [-3.0], [5.0])
    worst = 0.0
    for s in states:
        k = int(rng.integers(-30, 30))
        worst = max(worst, Lo.covariance_defect(s, b, G.translation(k * dx), dens, params))
        worst = max(worst, Lo.covariance_defect(s, b, G.translation(k * dx), delta, params))
    rec.add("U(a)E(B)U(a)^+ = E(B + a), lattice a", "localization/translation", worst, tol["exact"])
    worst = max(max(Lo.covariance_defect(s, b, G.boost(1.7), kern, params) for kern in (delta, dens))
                for s in states)
    rec.add("V(v)E(B)V(v)^+ = E(B)", "localization/boost", worst, tol["exact"])

    g3 = cfg.cube_grid()
    cube = _states(cfg, 3, dims=3, offset=400)
    ball3 = Lo.Region.from_shapes(g3, [Lo.Ball((0.4, -0.2, 0.1), 1.3), Lo.Box((-2.0, 0.0, -1.0), (-0.5, 1.5, 0.5))])
    k3 = Lo.SmearKernel.uniform_ball(g3, 0.8)
    d3 = Lo.SmearKernel.delta(g3)
    worst = 0.0
    for s in cube:
        for q in Ro.octahedral_quaternions()[::3]:
            for kern in (d3, k3):
                worst = max(worst, Lo.covariance_defect(s, ball3, G.rotation(q), kern, params))
    rec.add("R(u)E(B)R(u)^+ = E(pi(u) B), grid rotations (3D)", "localization/rotation", worst, tol["exact"])
    rec.add("uniform-ball kernel is rotation invariant", "localization/rotation-invariant-kernel",
            0.0 if k3.is_rotation_invariant() and dens.is_rotation_invariant() else 1.0, 0.0, EQ)
    return rec.out


# --------------------------------------------------------------------- momentum observables

def suite_momentum(cfg: RunConfig) -> SuiteOutput:
    rec = _Recorder("momentum")
    tol = cfg.tol
    params = cfg.params
    grid = cfg.line_grid()
    dp = grid.momentum_spacing
    rng = rng_for(cfg.seed, "momentum")
    states = _states(cfg, cfg.n_states, offset=500)
    delta = Mo.MomentumRegion.box(grid, [-0.7], [1.3])
    nu = Mo.MomentumKernel.uniform_ball(grid, 0.4)

    rec.add("sharp momentum probabilities sum to one", "momentum/normalization",
            max(abs(Mo.momentum_prob(s, Mo.MomentumRegion.whole(grid)) - 1) for s in states), tol["exact"])
    worst = max(Mo.momentum_covariance_defect(s, delta, G.translation(rng.uniform(-5, 5)), params)
                for s in states)
    rec.add("U(a)F(D)U(a)^+ = F(D), arbitrary a", "momentum/translation", worst, tol["exact"])
    worst = 0.0
    for s in states:
        k = int(rng.integers(-12, 12))
        v = k * dp / cfg.mass
        worst = max(worst, Mo.momentum_covariance_defect(s, delta, G.boost(v), params),
                    Mo.momentum_covariance_defect(s, delta, G.boost(v), params, nu))
    rec.add("V(v)F(D)V(v)^+ = F(D - m v), lattice m v", "momentum/boost", worst, tol["exact"])

    worst = 0.0
    for s in states[:10]:
        k = int(rng.integers(-12, 12))
        hist = Mo.momentum_histogram(s)
        moved = Mo.momentum_histogram(G.apply(G.boost(k * dp / cfg.mass), s, params))
        worst = max(worst, np.abs(moved - np.roll(hist, -k)).max())
    rec.add("boost transports the momentum histogram by -m v", "momentum/boost", worst, tol["exact"])
    worst = 0.0
    for s in states[:10]:
        v = rng.uniform(-1, 1)
        shift = G.expect("P1", G.apply(G.boost(v), s, params), params) - G.expect("P1", s, params)
        worst = max(worst, abs(shift.real + cfg.mass * v))
    rec.add("non-lattice boost shifts <P> by -m v", "momentum/boost-shift", worst, tol["spectral"])

    g3 = cfg.cube_grid()
    cube = _states(cfg, 3, dims=3, offset=500)
    ball3 = Mo.MomentumRegion.ball(g3, (0.5, -0.3, 0.2), 1.1)
    worst = 0.0
    for s in cube:
        for q in Ro.octahedral_quaternions()[1::3]:
            worst = max(worst, Mo.momentum_covariance_defect(s, ball3, G.rotation(q), params))
    rec.add("R(u)F(D)R(u)^+ = F(pi(u) D), grid rotations (3D)", "momentum/rotation", worst, tol["exact"])

    sharp = Mo.MomentumKernel.delta(grid)
    rec.add("nu = delta_0 reproduces the sharp observable",
            "momentum/sharpness",
            max(abs(Mo.smeared_momentum_prob(s, delta, sharp) - Mo.momentum_prob(s, delta)) for s in states),
            0.0, EQ)
    small = Mo.MomentumRegion.ball(grid, [0.0], 0.5)
    sep = (int(np.ceil((small.diameter() + dp) / dp)) + 5) * dp
    two = Mo.MomentumKernel.atomic(grid, [[0.0], [sep]], [0.3, 0.7])
    rec.add("separated two-atom nu: ||F(D)|| <= 1 - min weight", "momentum/sharpness",
            max(Mo.smeared_momentum_norm(small, two) - 0.7, 0.0), tol["exact"])

    # absolute continuity surrogate: node probability / node measure converges as dp halves
    dens = []
    for n, L in ((256, 40.0), (512, 80.0), (1024, 160.0)):
        g = make_grid(1, n, L, cfg.hbar)
        psi = gaussian_state(g, SpinSpec(0), params, 0.0, 0.0, 1.0)
        p = Mo.momentum_prob(psi, Mo.MomentumRegion.node(g, [0]))
        dens.append(p / g.momentum_spacing)
    rec.add("single-node momentum probability shrinks linearly with node measure",
            "momentum/continuous-spectrum",
            (max(dens) - min(dens)) / max(dens), tol["spectral"])
    return rec.out


# --------------------------------------------------------------------- dynamics

def suite_dynamics(cfg: RunConfig) -> SuiteOutput:
    rec = _Recorder("dynamics")
    tol = cfg.tol
    params = cfg.params
    grid = cfg.line_grid()
    rng = rng_for(cfg.seed, "dynamics")
    m = cfg.mass

    psi0 = gaussian_state(grid, cfg.spin_spec, params, -3.0, 2.0, 1.0)
    traj = Dy.heisenberg_trajectory(psi0, params, ("X1", "P1", "H"), cfg.t_max, cfg.n_steps)
    p_mean = traj.means["P1"][0]
    rec.add("<X> slope = <P>/m", "dynamics/mechanical-momentum",
            abs(traj.slopes["X1"] - p_mean / m), tol["fit"])
    rec.add("<X> linear residual", "ccr/XH", traj.residuals["X1"], tol["spectral"])
    rec.add("<P>(t) constant", "dynamics/momentum-conserved",
            np.ptp(traj.means["P1"]), tol["exact"])
    rec.add("<H>(t) constant", "angular/time-compatibility", np.ptp(traj.means["H"]), tol["exact"])
    var_p = G.variance("P1", psi0, params)
    pred = traj.variances["X1"][0] + traj.times ** 2 * var_p / m ** 2
    rec.add("Var X(t) = Var X(0) + t^2 Var P/m^2", "dynamics/spreading",
            np.abs(traj.variances["X1"] - pred).max(), tol["fit"])
    header = traj.csv_header(1)
    rows = [[repr(float(traj.times[n]))] + [repr(float(traj.variances[c[4:]][n] if c.startswith("var_")
                                                      else traj.means[c[5:]][n])) for c in header[1:]]
            for n in range(traj.times.size)]
    rec.out.sidecars["trajectory.csv"] = (header, rows)

    rest = gaussian_state(grid, cfg.spin_spec, params, 1.0, 0.0, 1.2)
    still = Dy.heisenberg_trajectory(rest, params, ("X1",), cfg.t_max, cfg.n_steps)
    rec.add("p0 = 0: <X> constant", "dynamics/mechanical-momentum", np.ptp(still.means["X1"]), tol["tight"])

    states = _states(cfg, 6, offset=600)
    elements = [G.time_shift(0.7), G.translation(-1.3), G.boost(0.4), G.central(1.9),
                G.rotation(random_line_rotation(rng))]
    for e0 in (0.0, 3.7):
        pe = PhysicalParams(cfg.hbar, m, e0)
        rep = Dy.casimir_defect(states, elements, pe)
        rec.add(f"<C> = 2 m E0 with E0 = {e0}", "dynamics/casimir", rep.expectation_defect, tol["tight"])
        rec.add(f"C commutes with T, U, V, R, Z (E0 = {e0})", "dynamics/casimir", rep.commutation_defect,
                tol["tight"])

    # E0 only shifts a global phase: records agree across E0
    shifted = Dy.heisenberg_trajectory(psi0, PhysicalParams(cfg.hbar, m, 3.7), ("X1", "P1"), cfg.t_max, cfg.n_steps)
    diff = max(np.abs(shifted.means[k] - traj.means[k]).max() for k in ("X1", "P1"))
    diff = max(diff, np.abs(shifted.variances["X1"] - traj.variances["X1"]).max())
    rec.add("trajectories independent of E0", "dynamics/rest-energy", diff, tol["exact"])
    e0_comm = 0.0
    for s in states[:3]:
        for g1, g2 in (("X1", "H"), ("K1", "H"), ("H", "P1")):
            a = G.commutator_expect(g1, g2, s, params)
            b = G.commutator_expect(g1, g2, s, PhysicalParams(cfg.hbar, m, 3.7))
            e0_comm = max(e0_comm, abs(a - b))
    rec.add("commutators independent of E0", "gauge/scalar-shift", e0_comm, tol["spectral"])

    src = gaussian_state(grid, cfg.spin_spec, params, 0.0, 0.0, 1.0)
    rec.add("boosted packet drifts with p0/m - v (v = 1, t = 2)", "dynamics/boosted-drift",
            Dy.boost_then_evolve_consistency(src, 1.0, 2.0, params), tol["fit"])
    rec.add("boost leaves <X> unchanged at t = 0", "boost/spin-trivial",
            Dy.boost_then_evolve_consistency(src, 1.0, 0.0, params), tol["tight"])
    return rec.out


# --------------------------------------------------------------------- registry

@dataclass(frozen=True)
class SuiteSpec:
    name: str
    anchor: str
    run: Callable[[RunConfig], SuiteOutput]


CATALOGUE = (
    SuiteSpec("duality", "duality", suite_duality),
    SuiteSpec("lattice", "lattice", suite_lattice),
    SuiteSpec("localization", "localization", suite_localization),
    SuiteSpec("composition", "composition", suite_composition),
    SuiteSpec("weyl", "weyl", suite_weyl),
    SuiteSpec("holonomy", "holonomy/mass", suite_holonomy),
    SuiteSpec("ccr", "ccr", suite_ccr),
    SuiteSpec("angular", "angular", suite_angular),
    SuiteSpec("momentum", "momentum", suite_momentum),
    SuiteSpec("dynamics", "dynamics", suite_dynamics),
)
SUITES = {s.name: s for s in CATALOGUE}


def resolve_suites(names) -> list:
    names = list(names)
    if not names or "all" in names:
        return list(CATALOGUE)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise KeyError(f"unknown suite(s) {unknown}; known: {list(SUITES)}")
    return [s for s in CATALOGUE if s.name in names]


def run_suite(spec: SuiteSpec, cfg: RunConfig) -> SuiteOutput:
    t0 = time.perf_counter()
    out = spec.run(cfg)
    out.runtime = time.perf_counter() - t0
    return out


def run_one(name: str, cfg: Optional[RunConfig] = None) -> SuiteOutput:
    return run_suite(SUITES[name], cfg or RunConfig())
