import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from galilei_lab import rotations as R

SPINS = [0, 0.5, 1, 1.5, 2]

quaternions = st.lists(st.floats(-1, 1), min_size=4, max_size=4).filter(
    lambda q: np.linalg.norm(q) > 0.1).map(lambda q: np.array(q) / np.linalg.norm(q))


def qmul(a, b):
    # oracle: product via 2x2 SU(2) matrices
    m = R.su2_matrix(a) @ R.su2_matrix(b)
    w = (m[0, 0] + m[1, 1]).real / 2
    z = -(m[0, 0] - m[1, 1]).imag / 2
    x = -(m[0, 1] + m[1, 0]).imag / 2
    y = -(m[0, 1] - m[1, 0]).real / 2
    return np.array([w, x, y, z])


def test_identity_quaternion():
    pair = R.wigner_d(0.5, [1, 0, 0, 0])
    assert np.array_equal(pair.spin, np.eye(2))
    assert np.allclose(pair.spatial, np.eye(3))


@pytest.mark.parametrize("theta", [0.3, -1.1, 2.5, np.pi])
def test_spin_half_z_rotation(theta):
    d = R.spin_matrix(0.5, R.axis_angle_quaternion([0, 0, 1], theta))
    assert np.allclose(d, np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)]), atol=1e-15)
    sz = np.diag([0.5, -0.5])
    assert np.abs(d - expm(-1j * theta * sz)).max() < 1e-14


def test_full_turn_is_minus_identity():
    assert np.array_equal(R.spin_matrix(0.5, [-1.0, 0, 0, 0]), -np.eye(2))
    q = R.axis_angle_quaternion([0.3, -1.0, 0.5], 2 * np.pi)
    assert np.abs(R.spin_matrix(0.5, q) + np.eye(2)).max() < 1e-15


@pytest.mark.parametrize("s", SPINS)
def test_unitary_on_random_quaternions(s):
    rng = np.random.default_rng(3)
    for _ in range(50):
        d = R.spin_matrix(s, R.random_quaternion(rng))
        assert np.abs(d.conj().T @ d - np.eye(d.shape[0])).max() < 1e-12


def test_spin_one_matches_vector_rotation():
    # spin-1 in the spherical basis is unitarily equivalent to the 3x3 rotation
    rng = np.random.default_rng(5)
    q = R.random_quaternion(rng)
    d1, rot = R.spin_matrix(1, q), R.rotation_matrix(q)
    ang = lambda m: np.sort(np.angle(np.linalg.eigvals(m)))  # noqa: E731
    assert np.abs(ang(d1) - ang(rot)).max() < 1e-10


@pytest.mark.parametrize("s", SPINS)
def test_generators_su2(s):
    sx, sy, sz = R.spin_generators(s)
    assert np.abs(sx @ sy - sy @ sx - 1j * sz).max() < 1e-13
    assert np.abs(sx @ sx + sy @ sy + sz @ sz - s * (s + 1) * np.eye(int(2 * s + 1))).max() < 1e-12
    assert np.allclose(np.diag(sz), np.arange(s, -s - 1, -1))


@settings(max_examples=30, deadline=None)
@given(quaternions, quaternions, st.sampled_from(SPINS))
def test_homomorphism(q1, q2, s):
    prod = qmul(q1, q2)
    assert np.abs(R.spin_matrix(s, q1) @ R.spin_matrix(s, q2) - R.spin_matrix(s, prod)).max() < 1e-12
    assert np.abs(R.rotation_matrix(q1) @ R.rotation_matrix(q2) - R.rotation_matrix(prod)).max() < 1e-12


@settings(max_examples=30, deadline=None)
@given(quaternions, st.sampled_from(SPINS))
def test_double_cover_parity(q, s):
    a, b = R.wigner_d(s, q), R.wigner_d(s, -q)
    assert np.abs(a.spatial - b.spatial).max() < 1e-14
    assert np.abs(b.spin - (-1) ** int(2 * s) * a.spin).max() < 1e-13


@settings(max_examples=30, deadline=None)
@given(quaternions)
def test_rotation_matrix_is_special_orthogonal(q):
    r = R.rotation_matrix(q)
    assert np.abs(r.T @ r - np.eye(3)).max() < 1e-14
    assert abs(np.linalg.det(r) - 1) < 1e-13
    back = R.quaternion_from_matrix(r)
    assert min(np.abs(back - q).max(), np.abs(back + q).max()) < 1e-10


def test_octahedral_group():
    qs = R.octahedral_quaternions()
    assert len(qs) == 24
    mats = {tuple(np.rint(R.rotation_matrix(q)).astype(int).ravel()) for q in qs}
    assert len(mats) == 24
    assert all(R.is_signed_permutation(R.rotation_matrix(q)) for q in qs)


def test_rejects_non_unit_quaternion():
    with pytest.raises(ValueError):
        R.check_quaternion([1.0, 1.0, 0, 0])
