import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from galilei_lab import group as G
from galilei_lab import localization as Lo
from galilei_lab import rotations as R
from galilei_lab.lattice import PhysicalParams, SpinSpec, make_grid


def test_pvm_whole_and_empty(states, line):
    psi = states[0]
    assert np.array_equal(Lo.pvm_apply(psi, Lo.Region.whole(line)).amplitudes, psi.amplitudes)
    assert np.all(Lo.pvm_apply(psi, Lo.Region.empty(line)).amplitudes == 0)


def test_delta_kernel_is_the_sharp_observable(states, line):
    delta = Lo.SmearKernel.delta(line)
    b = Lo.Region.box(line, [-4.0], [7.5])
    for psi in states:
        assert Lo.povm_prob(psi, b, delta) == Lo.pvm_prob(psi, b)


def test_whole_box_has_probability_one(states, line):
    dens = Lo.SmearKernel.uniform_ball(line, 2.0)
    two = Lo.SmearKernel.atomic(line, [[0.0], [20 * line.spacing]], [0.25, 0.75])
    for psi in states[:3]:
        for k in (dens, two):
            assert abs(Lo.povm_prob(psi, Lo.Region.whole(line), k) - 1) < 1e-12


def test_two_atom_half_probability(line, params):
    # psi sits inside B - x1 and far outside B - x2
    from galilei_lab.lattice import gaussian_state

    b = Lo.Region.box(line, [-5.0], [5.0])
    x1, x2 = 0.0, 20.0
    kern = Lo.SmearKernel.atomic(line, [[x1], [x2]], [0.5, 0.5])
    psi = gaussian_state(line, SpinSpec(0.5), params, 0.0, 0.0, 0.6)
    # direct sum over the two atoms: E(B) = 1/2 1_{B - x1} + 1/2 1_{B - x2}
    p1 = Lo.pvm_prob(psi, b.shifted(line.lattice_steps([-x1])))
    p2 = Lo.pvm_prob(psi, b.shifted(line.lattice_steps([-x2])))
    assert abs(Lo.povm_prob(psi, b, kern) - 0.5 * (p1 + p2)) < 1e-14
    assert abs(Lo.povm_prob(psi, b, kern) - 0.5) < 1e-10


@pytest.mark.parametrize("lo,hi", [(-3.0, 2.0), (0.0, 0.2), (10.0, 30.0), (-39.0, 39.0)])
def test_sharp_norm_is_one(line, lo, hi):
    assert Lo.povm_norm(Lo.Region.box(line, [lo], [hi]), Lo.SmearKernel.delta(line)) == 1.0


def test_two_atom_norm_is_half(line):
    eta = 1.0
    # smallest lattice separation with |x1 - x2| >= 4 eta + dx
    sep = np.ceil((4 * eta + line.spacing) / line.spacing) * line.spacing
    b = Lo.Region.ball(line, [0.0], eta)
    kern = Lo.SmearKernel.atomic(line, [[0.0], [sep]], [0.5, 0.5])
    assert abs(Lo.povm_norm(b, kern) - 0.5) < 1e-12
    assert np.abs(Lo.kernel_profile(b, kern) - Lo.kernel_profile_bruteforce(b, kern)).max() < 1e-12


def test_uniform_kernel_profile_against_double_sum(line):
    b = Lo.Region.ball(line, [1.0], 0.7)
    kern = Lo.SmearKernel.uniform_ball(line, 1.5)
    prof = Lo.kernel_profile(b, kern)
    assert np.abs(prof - Lo.kernel_profile_bruteforce(b, kern)).max() < 1e-12
    # r < R: the norm is the fraction of kernel nodes a region translate can cover
    assert abs(prof.max() - b.count / kern.as_density().astype(bool).sum()) < 1e-12


def test_kernel_must_be_normalized(line):
    with pytest.raises(Lo.LocalizationError):
        Lo.SmearKernel.atomic(line, [[0.0], [line.spacing]], [0.5, 0.6])


@pytest.mark.parametrize("eps", [1e-2, 1e-4, 1e-6])
def test_focusing(line, half, params, eps):
    foc = Lo.focusing_state(line, half, params, 2.0, eps)
    assert foc.probability >= 1 - eps
    assert Lo.pvm_prob(foc.state, Lo.Region.ball(line, [0.0], 2.0)) == foc.probability


def test_focusing_needs_narrower_packets_for_smaller_eps(line, half, params):
    widths = [Lo.focusing_state(line, half, params, 2.0, e).sigma for e in (1e-2, 1e-4, 1e-6)]
    assert widths[0] > widths[1] > widths[2]


def test_focusing_translation_covariance(line, half, params):
    foc = Lo.focusing_state(line, half, params, 2.0, 1e-4)
    for x0 in (47 * line.spacing, -11 * line.spacing):
        moved = G.apply(G.translation(x0), foc.state, params)
        p = Lo.pvm_prob(moved, Lo.Region.ball(line, [x0], 2.0))
        assert abs(p - foc.probability) < 1e-12


def test_focusing_rejects_unresolved_radius(line, half, params):
    with pytest.raises(Lo.LocalizationError):
        Lo.focusing_state(line, half, params, 4 * line.spacing, 1e-2)


def test_focusing_3d(cube, half, params):
    foc = Lo.focusing_state(cube, half, params, 2.5, 1e-2)
    assert foc.probability >= 0.99


def test_covariance_translation_boost(states, line, params):
    b = Lo.Region.box(line, [-2.0], [6.0])
    kern = Lo.SmearKernel.uniform_ball(line, 1.0)
    for psi in states:
        assert Lo.covariance_defect(psi, b, G.translation(3 * line.spacing), kern, params) < 1e-12
        assert Lo.covariance_defect(psi, b, G.boost(1.7), kern, params) < 1e-12
        assert Lo.covariance_defect(psi, b, G.boost(1.7), None, params) < 1e-12


def test_covariance_rotation_3d(cube_states, cube, params):
    region = Lo.Region.ball(cube, [0.5, -0.3, 0.2], 1.4)
    kern = Lo.SmearKernel.uniform_ball(cube, 0.8)
    for q in R.octahedral_quaternions():
        assert Lo.covariance_defect(cube_states[0], region, G.rotation(q), kern, params) < 1e-12


def test_region_set_algebra(line):
    a = Lo.Region.box(line, [-5.0], [0.0])
    b = Lo.Region.box(line, [0.0], [5.0])
    assert a.intersection(b).is_empty
    assert a.union(b).count == a.count + b.count
    assert a.issubset(a.union(b))
    assert a.shifted([line.lattice_steps([5.0])[0]]).count == a.count


@settings(max_examples=25, deadline=None)
@given(st.floats(-30, 30), st.floats(0.3, 8.0), st.floats(0.2, 3.0), st.floats(0.05, 0.95), st.integers(-60, 60))
def test_profile_oracles_agree(center, radius, smear, weight, offset):
    g = make_grid(1, 256, 80.0)
    region = Lo.Region.ball(g, [center], radius)
    for kern in (Lo.SmearKernel.uniform_ball(g, smear),
                 Lo.SmearKernel.atomic(g, [[0.0], [offset * g.spacing]], [weight, 1 - weight])):
        prof = Lo.kernel_profile(region, kern)
        assert np.abs(prof - Lo.kernel_profile_bruteforce(region, kern)).max() < 1e-12
        assert prof.min() >= -1e-15 and prof.max() <= 1 + 1e-12


@settings(max_examples=25, deadline=None)
@given(st.floats(0.2, 3.0), st.floats(0.05, 0.95), st.integers(1, 40))
def test_sharpness_dichotomy(eta, weight, extra):
    g = make_grid(1, 256, 80.0)
    region = Lo.Region.ball(g, [0.0], eta)
    steps = int(np.ceil((region.diameter() + g.spacing) / g.spacing)) + extra
    kern = Lo.SmearKernel.atomic(g, [[0.0], [steps * g.spacing]], [weight, 1 - weight])
    assert not kern.is_sharp
    assert Lo.povm_norm(region, kern) <= 1 - kern.min_weight() + 1e-12


@settings(max_examples=20, deadline=None)
@given(st.floats(-20, -1), st.floats(0.5, 5), st.floats(0.5, 5), st.integers(0, 7))
def test_additivity_on_disjoint_boxes(lo, w1, w2, k):
    g = make_grid(1, 512, 80.0)
    from galilei_lab.config import RunConfig
    from galilei_lab.sampling import random_admissible_state

    psi = random_admissible_state(RunConfig(), 3, k)
    b1 = Lo.Region.box(g, [lo], [lo + w1])
    b2 = Lo.Region.box(g, [lo + w1], [lo + w1 + w2])
    kern = Lo.SmearKernel.uniform_ball(g, 1.2)
    total = Lo.povm_prob(psi, b1.union(b2), kern)
    assert abs(total - Lo.povm_prob(psi, b1, kern) - Lo.povm_prob(psi, b2, kern)) < 1e-12


def test_rotation_invariant_kernels(cube, line):
    assert Lo.SmearKernel.uniform_ball(cube, 1.0).is_rotation_invariant()
    assert Lo.SmearKernel.uniform_ball(line, 1.0).is_rotation_invariant()
    assert not Lo.SmearKernel.atomic(line, [[0.0], [line.spacing]], [0.5, 0.5]).is_rotation_invariant()


def test_physical_params_default_is_unit():
    assert PhysicalParams() == PhysicalParams(1.0, 1.0, 0.0)
