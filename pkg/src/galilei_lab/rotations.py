"""
SU(2) elements as unit quaternions, the double cover SU(2) -> SO(3), and
spin-s representation matrices built as the symmetric tensor power of the
defining 2x2 matrix.

Basis ordering for spin matrices is ``m = s, s-1, ..., -s``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .lattice import LatticeError, SpinSpec

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def check_quaternion(q, atol: float = 1e-12) -> np.ndarray:
    q = np.asarray(q, dtype=float).reshape(-1)
    if q.shape != (4,) or not np.all(np.isfinite(q)):
        raise LatticeError(f"quaternion must be 4 finite reals, got {q!r}")
    if abs(np.linalg.norm(q) - 1.0) > atol:
        raise LatticeError(f"quaternion is not normalized: |q| = {np.linalg.norm(q)!r}")
    return q


def axis_angle_quaternion(axis, angle: float) -> np.ndarray:
    """Unit quaternion ``(cos a/2, sin a/2 n)`` for rotation by ``angle`` about ``axis``."""
    n = np.asarray(axis, dtype=float)
    n = n / np.linalg.norm(n)
    return np.concatenate([[np.cos(angle / 2)], np.sin(angle / 2) * n])


def random_quaternion(rng: np.random.Generator) -> np.ndarray:
    q = rng.normal(size=4)
    return q / np.linalg.norm(q)


def su2_matrix(q) -> np.ndarray:
    """Defining representation: ``w I - i (x sx + y sy + z sz)``."""
    w, x, y, z = check_quaternion(q)
    return np.array([[w - 1j * z, -1j * x - y],
                     [-1j * x + y, w + 1j * z]])


def rotation_matrix(q) -> np.ndarray:
    """pi(u) in SO(3) for the quaternion ``q``; ``rotation_matrix(-q) == rotation_matrix(q)``."""
    w, x, y, z = check_quaternion(q)
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])


@lru_cache(maxsize=None)
def _symmetric_isometry(two_s: int) -> np.ndarray:
    """Columns are the normalized symmetric states |s, m> inside (C^2)^(x 2s)."""
    n = two_s
    iso = np.zeros((2 ** n, n + 1))
    for bits in itertools.product((0, 1), repeat=n):
        downs = sum(bits)  # bit 0 is spin-up
        idx = int("".join(map(str, bits)), 2) if n else 0
        iso[idx, downs] = 1.0
    iso /= np.linalg.norm(iso, axis=0)
    iso.setflags(write=False)
    return iso


def _tensor_power(m: np.ndarray, n: int) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for _ in range(n):
        out = np.kron(out, m)
    return out


def spin_matrix(s, q) -> np.ndarray:
    """D^(s)(u) for the SU(2) element with quaternion ``q``."""
    spin = s if isinstance(s, SpinSpec) else SpinSpec(s)
    iso = _symmetric_isometry(spin.two_s)
    return iso.T @ _tensor_power(su2_matrix(q), spin.two_s) @ iso


@lru_cache(maxsize=None)
def _spin_generators(two_s: int) -> tuple:
    iso = _symmetric_isometry(two_s)
    gens = []
    for sigma in PAULI:
        total = np.zeros((2 ** two_s, 2 ** two_s), dtype=complex)
        for site in range(two_s):
            ops = [np.eye(2)] * two_s
            ops[site] = sigma / 2
            term = np.ones((1, 1), dtype=complex)
            for o in ops:
                term = np.kron(term, o)
            total += term
        g = iso.T @ total @ iso
        g.setflags(write=False)
        gens.append(g)
    return tuple(gens)


def spin_generators(s, hbar: float = 1.0) -> tuple:
    """(S_x, S_y, S_z) for spin ``s`` in units of ``hbar``."""
    spin = s if isinstance(s, SpinSpec) else SpinSpec(s)
    return tuple(hbar * g for g in _spin_generators(spin.two_s))


@dataclass(frozen=True)
class RotationMatrixPair:
    spatial: np.ndarray
    spin: np.ndarray


def wigner_d(s, q) -> RotationMatrixPair:
    """Spatial rotation pi(u) together with the spin-s matrix D^(s)(u)."""
    spin = s if isinstance(s, SpinSpec) else SpinSpec(s)
    q = check_quaternion(q)
    return RotationMatrixPair(rotation_matrix(q), spin_matrix(spin, q))


def quaternion_from_matrix(r: np.ndarray) -> np.ndarray:
    """One of the two unit quaternions covering the SO(3) matrix ``r``."""
    r = np.asarray(r, dtype=float)
    tr = np.trace(r)
    # Pick the largest diagonal combination for numerical stability.
    cands = [tr, r[0, 0], r[1, 1], r[2, 2]]
    k = int(np.argmax(cands))
    if k == 0:
        w = np.sqrt(1 + tr) / 2
        q = [w, (r[2, 1] - r[1, 2]) / (4 * w), (r[0, 2] - r[2, 0]) / (4 * w), (r[1, 0] - r[0, 1]) / (4 * w)]
    elif k == 1:
        x = np.sqrt(1 + r[0, 0] - r[1, 1] - r[2, 2]) / 2
        q = [(r[2, 1] - r[1, 2]) / (4 * x), x, (r[0, 1] + r[1, 0]) / (4 * x), (r[0, 2] + r[2, 0]) / (4 * x)]
    elif k == 2:
        y = np.sqrt(1 - r[0, 0] + r[1, 1] - r[2, 2]) / 2
        q = [(r[0, 2] - r[2, 0]) / (4 * y), (r[0, 1] + r[1, 0]) / (4 * y), y, (r[1, 2] + r[2, 1]) / (4 * y)]
    else:
        z = np.sqrt(1 - r[0, 0] - r[1, 1] + r[2, 2]) / 2
        q = [(r[1, 0] - r[0, 1]) / (4 * z), (r[0, 2] + r[2, 0]) / (4 * z), (r[1, 2] + r[2, 1]) / (4 * z), z]
    q = np.asarray(q)
    return q / np.linalg.norm(q)


@lru_cache(maxsize=None)
def _octahedral() -> tuple:
    mats = []
    for perm in itertools.permutations(range(3)):
        for signs in itertools.product((1, -1), repeat=3):
            m = np.zeros((3, 3))
            for row, col in enumerate(perm):
                m[row, col] = signs[row]
            if np.linalg.det(m) > 0:
                mats.append(m)
    quats = [quaternion_from_matrix(m) for m in mats]
    # Snap to exact values: entries are 0, +-1/2, +-1/sqrt2 or +-1.
    snapped = []
    for q in quats:
        exact = np.array([_snap(c) for c in q])
        snapped.append(exact / np.linalg.norm(exact))
    return tuple(snapped)


def _snap(c: float) -> float:
    for v in (0.0, 0.5, 1 / np.sqrt(2), 1.0):
        if abs(abs(c) - v) < 1e-9:
            return float(np.copysign(v, c)) if v else 0.0
    return c


def octahedral_quaternions() -> list:
    """The 24 proper rotations that map the cubic grid onto itself (one quaternion each)."""
    return [q.copy() for q in _octahedral()]


def is_signed_permutation(r: np.ndarray, atol: float = 1e-12) -> bool:
    r = np.asarray(r)
    rounded = np.round(r)
    if np.max(np.abs(r - rounded)) > atol:
        return False
    return bool(np.all(np.sum(np.abs(rounded), axis=0) == 1) and np.all(np.sum(np.abs(rounded), axis=1) == 1))
