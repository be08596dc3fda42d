"""
Free evolution at desk scale: Heisenberg-picture expectation trajectories,
the mechanical-momentum law and the Casimir ``C = 2mH - P^2``.

Evolution is exact in momentum space, so there is no integrator error;
the only approximation is the torus, guarded by a travel horizon.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Dict, Sequence

import numpy as np

from . import group as G
from .lattice import DEFAULT_ADMISSIBILITY_THRESHOLD, LatticeError, PhysicalParams, StateVector, admissibility, inner


class HorizonError(LatticeError):
    pass


def _mean(name: str, psi: StateVector, params: PhysicalParams) -> float:
    return float(G.expect(name, psi, params, threshold=np.inf).real)


def _var(name: str, psi: StateVector, params: PhysicalParams) -> float:
    return G.variance(name, psi, params, threshold=np.inf)


def check_horizon(psi0: StateVector, params: PhysicalParams, t_max: float, widths: float = 5.0) -> None:
    """Raise unless every axis keeps ``|<X>| + |<P>/m| t + widths * sigma(t)`` inside the half box."""
    half = psi0.grid.box_length / 2
    psi_t = G.apply(G.time_shift(t_max), psi0, params)
    for i in range(1, psi0.grid.dims + 1):
        x0 = _mean(f"X{i}", psi0, params)
        v = _mean(f"P{i}", psi0, params) / params.mass
        sigma_t = max(np.sqrt(max(_var(f"X{i}", psi0, params), 0.0)),
                      np.sqrt(max(_var(f"X{i}", psi_t, params), 0.0)))
        reach = abs(x0) + abs(v) * t_max + widths * sigma_t
        if reach >= half:
            raise HorizonError(f"axis {i}: packet reaches {reach:.3g} >= half box {half:.3g} by t={t_max}")


@dataclass
class Trajectory:
    times: np.ndarray
    means: Dict[str, np.ndarray]
    variances: Dict[str, np.ndarray]
    slopes: Dict[str, float] = field(default_factory=dict)
    intercepts: Dict[str, float] = field(default_factory=dict)
    residuals: Dict[str, float] = field(default_factory=dict)

    def csv_header(self, dims: int) -> list:
        cols = ["time"]
        cols += [f"mean_X{i}" for i in range(1, dims + 1)]
        cols += [f"mean_P{i}" for i in range(1, dims + 1)]
        cols += [f"var_X{i}" for i in range(1, dims + 1)]
        cols.append("mean_H")
        return cols

    def write_csv(self, path, dims: int = 1) -> None:
        header = self.csv_header(dims)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for n, t in enumerate(self.times):
                row = [repr(float(t))]
                for col in header[1:]:
                    if col.startswith("var_"):
                        val = self.variances[col[4:]][n]
                    else:
                        val = self.means[col[5:]][n]
                    row.append(repr(float(val)))
                w.writerow(row)


def heisenberg_trajectory(psi0: StateVector, params: PhysicalParams, generators: Sequence[str] = ("X1", "P1", "H"),
                          t_max: float = 1.0, n_steps: int = 20,
                          threshold: float = DEFAULT_ADMISSIBILITY_THRESHOLD) -> Trajectory:
    """Expectation records of ``generators`` along exact free evolution.

    Every X_i record gets an ordinary least-squares line; its slope should
    equal <P_i>/m and its max residual is the reported defect. X_i, P_i,
    Var(X_i) and H are always recorded so the CSV sidecar is complete.
    """
    if n_steps < 2:
        raise ValueError("need at least two time steps")
    if not admissibility(psi0, threshold).admissible:
        raise HorizonError("initial state is not admissible")
    check_horizon(psi0, params, t_max)
    dims = psi0.grid.dims
    names = list(dict.fromkeys(list(generators) + [f"X{i}" for i in range(1, dims + 1)]
                               + [f"P{i}" for i in range(1, dims + 1)] + ["H"]))
    times = np.linspace(0.0, t_max, n_steps + 1)
    means = {n: np.empty(times.size) for n in names}
    variances = {f"X{i}": np.empty(times.size) for i in range(1, dims + 1)}
    for k, t in enumerate(times):
        psi = G.apply(G.time_shift(t), psi0, params)
        if not admissibility(psi, threshold).admissible:
            raise HorizonError(f"state left the admissible region at t={t}")
        for n in names:
            means[n][k] = _mean(n, psi, params)
        for n in variances:
            variances[n][k] = _var(n, psi, params)
    traj = Trajectory(times, means, variances)
    for i in range(1, dims + 1):
        key = f"X{i}"
        slope, intercept = np.polyfit(times, means[key], 1)
        traj.slopes[key] = float(slope)
        traj.intercepts[key] = float(intercept)
        traj.residuals[key] = float(np.max(np.abs(means[key] - (slope * times + intercept))))
    return traj


def casimir_apply(psi: StateVector, params: PhysicalParams) -> StateVector:
    """C psi = 2m H psi - sum_i P_i P_i psi, by generator composition."""
    out = G.apply_product(["H"], psi, params).scaled(2 * params.mass)
    for i in range(1, psi.grid.dims + 1):
        out = out - G.apply_product([f"P{i}", f"P{i}"], psi, params).in_representation(out.representation)
    return out


@dataclass(frozen=True)
class CasimirReport:
    expectation_defect: float
    commutation_defect: float
    per_kind: dict


def casimir_defect(states: Sequence[StateVector], elements: Sequence[G.GroupElement],
                   params: PhysicalParams) -> CasimirReport:
    """Max |<C> - 2 m E0| over states and max ||C g psi - g C psi|| over states and elements."""
    if len(states) < 5:
        raise ValueError("casimir check needs at least five states")
    kinds = {e.tag for e in elements}
    missing = set(G.ELEMENT_KINDS) - kinds
    if missing:
        raise ValueError(f"group elements must cover every kind; missing {sorted(missing)}")
    exp_def = 0.0
    per_kind = {k: 0.0 for k in G.ELEMENT_KINDS}
    for psi in states:
        c = casimir_apply(psi, params)
        val = inner(psi, c.in_representation(psi.representation))
        exp_def = max(exp_def, abs(val - 2 * params.mass * params.e0))
        for g in elements:
            lhs = casimir_apply(G.apply(g, psi, params), params)
            rhs = G.apply(g, c, params).in_representation(lhs.representation)
            per_kind[g.tag] = max(per_kind[g.tag], (lhs - rhs).norm())
    return CasimirReport(exp_def, max(per_kind.values()), per_kind)


def boost_then_evolve_consistency(psi: StateVector, v, t: float, params: PhysicalParams) -> float:
    """|<X>(t) of V(v) psi - (x0 + (p0/m - v) t)| summed in quadrature over axes.

    With V(v) = exp(-i m v.x/hbar) the boost lowers the mean momentum by m v,
    so the packet drifts with velocity p0/m - v.
    """
    v = np.atleast_1d(np.asarray(v, dtype=float))
    boosted = G.apply(G.boost(v), psi, params)
    check_horizon(boosted, params, t)
    evolved = G.apply(G.time_shift(t), boosted, params)
    err = 0.0
    for i in range(1, psi.grid.dims + 1):
        x0 = _mean(f"X{i}", psi, params)
        p0 = _mean(f"P{i}", psi, params)
        predicted = x0 + (p0 / params.mass - v[i - 1]) * t
        err += (_mean(f"X{i}", evolved, params) - predicted) ** 2
    return float(np.sqrt(err))
