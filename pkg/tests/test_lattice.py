import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import erf

from galilei_lab.lattice import (
    LatticeError,
    PhysicalParams,
    SpinSpec,
    StateVector,
    admissibility,
    gaussian_amplitudes,
    gaussian_state,
    inner,
    make_grid,
    plane_wave,
    random_spinor,
    to_momentum,
    to_position,
)


def test_grid_nodes_small():
    g = make_grid(1, 8, 8.0)
    assert g.spacing == 1.0
    assert np.array_equal(g.position_nodes, np.arange(-4, 4, dtype=float))
    assert np.allclose(g.momentum_nodes, 2 * np.pi / 8 * np.arange(-4, 4))


def test_grid_cube_shape():
    g = make_grid(3, 64, 20.0)
    assert g.shape == (64, 64, 64)
    assert g.spacing == 0.3125


@pytest.mark.parametrize("n", [6, 12, 4, 0])
def test_grid_rejects_bad_sizes(n):
    with pytest.raises(LatticeError):
        make_grid(1, n, 10.0)


def test_gaussian_moments_by_quadrature():
    # oracle: plain numpy quadrature on the raw amplitude array
    g = make_grid(1, 256, 40.0)
    psi = gaussian_state(g, SpinSpec(0), PhysicalParams(), 0.0, 0.0, 1.0)
    dens = np.sum(np.abs(psi.amplitudes) ** 2, axis=-1) * g.spacing
    x = g.position_nodes
    mean = np.sum(x * dens)
    assert abs(mean) < 1e-8
    assert abs(np.sum((x - mean) ** 2 * dens) - 1.0) < 1e-8


def test_gaussian_mean_momentum_by_quadrature():
    g = make_grid(1, 256, 40.0)
    psi = gaussian_state(g, SpinSpec(0), PhysicalParams(), 0.0, 2.0, 1.0)
    pk = to_momentum(psi)
    dens = np.sum(np.abs(pk.amplitudes) ** 2, axis=-1) * g.momentum_spacing
    assert abs(np.sum(g.momentum_nodes * dens) - 2.0) < 1e-8


def test_gaussian_rejects_unresolved_width():
    g = make_grid(1, 256, 40.0)
    with pytest.raises(LatticeError):
        gaussian_state(g, SpinSpec(0), PhysicalParams(), 0.0, 0.0, 2.9 * g.spacing)


def test_gaussian_rejects_hbar_mismatch():
    g = make_grid(1, 256, 40.0, hbar=2.0)
    with pytest.raises(LatticeError):
        gaussian_state(g, SpinSpec(0), PhysicalParams(hbar=1.0), 0.0, 0.0, 1.0)


def test_momentum_width_matches_analytic():
    g = make_grid(1, 512, 80.0)
    sigma = 1.3
    pk = to_momentum(gaussian_state(g, SpinSpec(0), PhysicalParams(), 0.0, 0.0, sigma))
    dens = np.sum(np.abs(pk.amplitudes) ** 2, axis=-1) * g.momentum_spacing
    sigma_p = np.sqrt(np.sum(g.momentum_nodes ** 2 * dens))
    assert abs(sigma_p - 1 / (2 * sigma)) < 1e-6


def test_inner_normalized_and_hermitian(states):
    for s in states:
        assert abs(inner(s, s) - 1) < 1e-12
    a, b = states[0], states[1]
    assert abs(inner(a, b) - np.conj(inner(b, a))) < 1e-15


def test_far_apart_gaussians_are_orthogonal(line, half):
    sigma = 1.0
    a = gaussian_state(line, half, PhysicalParams(), -10 * sigma, 0.0, sigma)
    b = gaussian_state(line, half, PhysicalParams(), 10 * sigma, 0.0, sigma)
    # analytic overlap exp(-d^2 / 8 sigma^2) with d = 20 sigma
    assert abs(inner(a, b)) < 1e-12
    assert np.exp(-400 / 8) < 1e-12


def test_plane_wave_is_a_momentum_delta(line, half):
    pw = plane_wave(line, half, [7])
    pk = to_momentum(pw)
    dens = np.sum(np.abs(pk.amplitudes) ** 2, axis=-1) * line.momentum_spacing
    j = int(np.argmax(dens))
    assert line.momentum_nodes[j] == pytest.approx(7 * line.momentum_spacing)
    assert abs(dens[j] - 1) < 1e-12
    dens[j] = 0
    assert dens.max() < 1e-24


def test_round_trip_identity(states):
    for s in states:
        back = to_position(to_momentum(s))
        assert np.abs(back.amplitudes - s.amplitudes).max() < 1e-12


def test_round_trip_identity_3d(cube_states):
    s = cube_states[0]
    assert np.abs(to_position(to_momentum(s)).amplitudes - s.amplitudes).max() < 1e-12


def test_admissible_centered_gaussian(line, half):
    psi = gaussian_state(line, half, PhysicalParams(), 0.0, 0.0, 2.0)
    assert admissibility(psi).admissible
    assert psi.admissibility_report.admissible


def test_seam_gaussian_is_inadmissible(line, half):
    amp = gaussian_amplitudes(line, [-40.0], [0.0], 2.0, np.array([1, 0], dtype=complex))
    psi = StateVector.from_amplitudes(line, half, amp)
    assert not admissibility(psi).admissible
    with pytest.raises(LatticeError):
        gaussian_state(line, half, PhysicalParams(), -40.0, 0.0, 2.0)


def test_nyquist_plane_wave_is_inadmissible(line, half):
    psi = plane_wave(line, half, [-line.points_per_axis // 2])
    rep = admissibility(psi)
    assert not rep.admissible
    assert rep.momentum_tail_mass > 0.99


def test_state_arrays_are_frozen(states):
    with pytest.raises(ValueError):
        states[0].amplitudes[0, 0] = 1.0


def test_ball_probability_against_erf():
    # node-resolved oracle: region edges sit on half-nodes so the node sum is a midpoint rule
    n = 16384
    dx = 3 / 2048.5
    g = make_grid(1, n, n * dx)
    from galilei_lab.localization import Region, pvm_prob

    psi = gaussian_state(g, SpinSpec(0), PhysicalParams(), 0.0, 0.0, 1.0)
    p = pvm_prob(psi, Region.ball(g, [0.0], 3.0))
    assert abs(p - erf(3 / np.sqrt(2))) < 1e-8


@settings(max_examples=25, deadline=None)
@given(st.floats(-10, 10), st.floats(-2, 2), st.floats(0.8, 3.0), st.integers(0, 2 ** 31))
def test_parseval_and_linearity(x0, p0, sigma, seed):
    g = make_grid(1, 256, 60.0)
    spin = SpinSpec(1)
    rng = np.random.default_rng(seed)
    a = gaussian_state(g, spin, PhysicalParams(), x0, p0, sigma, random_spinor(rng, spin))
    b = gaussian_state(g, spin, PhysicalParams(), -x0 / 2, -p0, sigma, random_spinor(rng, spin))
    c = complex(rng.normal(), rng.normal())
    assert abs(a.norm() - to_momentum(a).norm()) < 1e-12
    lhs = to_momentum(a.scaled(c) + b)
    rhs = to_momentum(a).scaled(c) + to_momentum(b)
    assert (lhs - rhs).norm() < 1e-12
    assert abs(inner(to_momentum(a), to_momentum(b)) - inner(a, b)) < 1e-12
