import csv

import numpy as np
import pytest

from galilei_lab import dynamics as Dy
from galilei_lab import group as G
from galilei_lab import rotations as R
from galilei_lab.lattice import PhysicalParams, SpinSpec, gaussian_state, make_grid


def test_free_packet_slope(line, half, params):
    psi = gaussian_state(line, half, params, -3.0, 2.0, 1.0)
    traj = Dy.heisenberg_trajectory(psi, params, ("X1", "P1", "H"), 4.0, 16)
    assert abs(traj.slopes["X1"] - 2.0) < 1e-6
    assert traj.residuals["X1"] <= 1e-8
    assert np.ptp(traj.means["P1"]) < 1e-12


def test_trajectory_against_analytic_gaussian(line, half):
    # oracle: <X>(t) = x0 + p0 t/m, Var X(t) = sigma^2 + (hbar t / 2 m sigma)^2
    params = PhysicalParams(mass=1.6)
    x0, p0, sigma = 2.0, -1.2, 1.3
    psi = gaussian_state(line, half, params, x0, p0, sigma)
    traj = Dy.heisenberg_trajectory(psi, params, ("X1",), 3.0, 12)
    t = traj.times
    assert np.abs(traj.means["X1"] - (x0 + p0 * t / 1.6)).max() < 1e-8
    assert np.abs(traj.variances["X1"] - (sigma ** 2 + (t / (2 * 1.6 * sigma)) ** 2)).max() < 1e-6


def test_packet_at_rest_stays(line, half, params):
    psi = gaussian_state(line, half, params, 1.0, 0.0, 1.2)
    traj = Dy.heisenberg_trajectory(psi, params, ("X1",), 4.0, 16)
    assert np.ptp(traj.means["X1"]) < 1e-10


def test_horizon_guard(line, half, params):
    psi = gaussian_state(line, half, params, 20.0, 3.0, 1.0)
    with pytest.raises(Dy.HorizonError):
        Dy.heisenberg_trajectory(psi, params, ("X1",), 10.0, 10)


def test_csv_columns(line, half, params, tmp_path):
    psi = gaussian_state(line, half, params, 0.0, 1.0, 1.0)
    traj = Dy.heisenberg_trajectory(psi, params, ("X1",), 1.0, 4)
    out = tmp_path / "traj.csv"
    traj.write_csv(out)
    with open(out) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["time", "mean_X1", "mean_P1", "var_X1", "mean_H"]
    assert len(rows) == 6
    assert float(rows[-1][0]) == 1.0


def _elements():
    return [G.time_shift(0.6), G.translation(-1.1), G.boost(0.35), G.central(0.8),
            G.rotation(R.axis_angle_quaternion([1, 0, 0], 0.9))]


@pytest.mark.parametrize("e0", [0.0, 3.7])
def test_casimir(states, e0):
    params = PhysicalParams(e0=e0)
    rep = Dy.casimir_defect(states[:5], _elements(), params)
    assert rep.expectation_defect <= 1e-10
    assert rep.commutation_defect <= 1e-10
    assert set(rep.per_kind) == set(G.ELEMENT_KINDS)


def test_casimir_expectation_value(states):
    params = PhysicalParams(mass=2.0, e0=3.7)
    c = Dy.casimir_apply(states[0], params)
    from galilei_lab.lattice import inner

    assert abs(inner(states[0], c.in_representation(states[0].representation)) - 2 * 2.0 * 3.7) < 1e-10


def test_casimir_requires_all_kinds(states, params):
    with pytest.raises(ValueError):
        Dy.casimir_defect(states[:5], _elements()[:4], params)
    with pytest.raises(ValueError):
        Dy.casimir_defect(states[:4], _elements(), params)


def test_boosted_drift(line, half, params):
    psi = gaussian_state(line, half, params, 0.0, 0.0, 1.0)
    # drift magnitude |v| t = 2, checked against the prediction x0 + (p0/m - v) t
    assert Dy.boost_then_evolve_consistency(psi, 1.0, 2.0, params) < 1e-6
    boosted = G.apply(G.boost(1.0), psi, params)
    moved = G.apply(G.time_shift(2.0), boosted, params)
    assert abs(abs(G.expect("X1", moved, params).real) - 2.0) < 1e-6


def test_boost_keeps_position_at_t0(line, half, params):
    psi = gaussian_state(line, half, params, 1.5, 0.4, 1.0)
    assert Dy.boost_then_evolve_consistency(psi, 0.7, 0.0, params) < 1e-10


def test_zero_boost_reduces_to_free_motion(line, half, params):
    psi = gaussian_state(line, half, params, -1.0, 0.8, 1.0)
    traj = Dy.heisenberg_trajectory(psi, params, ("X1",), 2.0, 8)
    assert Dy.boost_then_evolve_consistency(psi, 0.0, 2.0, params) < 1e-8
    assert abs(traj.means["X1"][-1] - (-1.0 + 0.8 * 2.0)) < 1e-8


def test_rest_energy_does_not_change_records(line, half):
    psi = gaussian_state(line, half, PhysicalParams(), -2.0, 1.0, 1.0)
    a = Dy.heisenberg_trajectory(psi, PhysicalParams(), ("X1", "P1"), 2.0, 8)
    b = Dy.heisenberg_trajectory(psi, PhysicalParams(e0=3.7), ("X1", "P1"), 2.0, 8)
    assert np.abs(a.means["X1"] - b.means["X1"]).max() < 1e-12
    assert np.abs(b.means["H"] - a.means["H"] - 3.7).max() < 1e-12


def test_trajectory_3d(cube_states, params):
    psi = cube_states[0]
    traj = Dy.heisenberg_trajectory(psi, params, ("X1", "X2", "X3"), 0.5, 5)
    for i in (1, 2, 3):
        p = traj.means[f"P{i}"][0]
        assert abs(traj.slopes[f"X{i}"] - p / params.mass) < 1e-6
    assert traj.csv_header(3)[:4] == ["time", "mean_X1", "mean_X2", "mean_X3"]


def test_needs_two_steps(line, half, params):
    psi = gaussian_state(line, half, params, 0.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        Dy.heisenberg_trajectory(psi, params, ("X1",), 1.0, 1)


def test_spin_does_not_enter_free_motion():
    g = make_grid(1, 256, 40.0)
    params = PhysicalParams()
    a = gaussian_state(g, SpinSpec(0), params, 0.0, 1.0, 1.0)
    b = gaussian_state(g, SpinSpec(1.5), params, 0.0, 1.0, 1.0)
    ta = Dy.heisenberg_trajectory(a, params, ("X1",), 1.0, 4)
    tb = Dy.heisenberg_trajectory(b, params, ("X1",), 1.0, 4)
    assert np.abs(ta.means["X1"] - tb.means["X1"]).max() < 1e-13
