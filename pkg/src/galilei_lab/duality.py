"""
Finite-dimensional model of the reference-state family and its duality map.

A family assigns to each parameter point ``theta`` (a point of the
reference-state manifold, near equilibrium ``theta = 0``) a Hermitian
representative

    A(theta) = sum_k theta_k A_k + sum_k theta_k^3 C_k + c(theta) I

with reversible generator ``G_theta(rho) = -(i/hbar) [A(theta), rho]``.
The cubic terms are optional and exist only to give finite differences a
nonzero truncation error; they do not change derivatives at ``theta = 0``.

Superoperators act on row-major vectorized density matrices:
``vec(A rho B) = (A kron B^T) vec(rho)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

H_MIN, H_MAX = 1e-7, 1e-3
DEFAULT_STEP = 1e-5

Gauge = Callable[[np.ndarray], float]


class DualityError(ValueError):
    pass


def zero_gauge(theta: np.ndarray) -> float:
    return 0.0


def linear_gauge(coeffs: Sequence[float]) -> Gauge:
    c = np.asarray(coeffs, dtype=float)
    return lambda theta: float(c @ theta)


def quadratic_gauge(theta: np.ndarray) -> float:
    return float(theta @ theta)


GAUGES = {"zero": zero_gauge, "quadratic": quadratic_gauge}


def traceless_part(a: np.ndarray) -> np.ndarray:
    d = a.shape[0]
    return a - np.trace(a) / d * np.eye(d)


def hs_orthonormal_basis(dim: int, count: int, seed: int = 0) -> list:
    """``count`` traceless Hermitian matrices, orthonormal in Re tr(A B)."""
    if count > dim * dim - 1:
        raise DualityError(f"at most {dim * dim - 1} independent traceless Hermitian {dim}x{dim} matrices")
    rng = np.random.default_rng(seed)
    basis = []
    while len(basis) < count:
        z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        a = traceless_part((z + z.conj().T) / 2)
        for b in basis:
            a = a - np.real(np.trace(b @ a)) * b
        nrm = np.sqrt(np.real(np.trace(a @ a)))
        if nrm > 1e-8:
            basis.append(a / nrm)
    return basis


@dataclass(frozen=True, eq=False)
class DualityFamily:
    basis: tuple
    gauge: Gauge = zero_gauge
    hbar: float = 1.0
    cubic: Optional[tuple] = None
    herm_tol: float = 1e-12

    def __post_init__(self):
        mats = tuple(np.array(a, dtype=complex) for a in self.basis)
        if not mats:
            raise DualityError("family needs at least one basis observable")
        d = mats[0].shape[0]
        for a in mats:
            if a.shape != (d, d):
                raise DualityError("basis observables must be square matrices of one size")
            if np.max(np.abs(a - a.conj().T)) > self.herm_tol:
                raise DualityError("basis observables must be Hermitian")
            a.setflags(write=False)
        object.__setattr__(self, "basis", mats)
        if self.cubic is not None:
            cub = tuple(np.array(c, dtype=complex) for c in self.cubic)
            if len(cub) != len(mats):
                raise DualityError("need one cubic term per basis direction")
            object.__setattr__(self, "cubic", cub)

    @classmethod
    def default(cls, dim: int = 8, count: int = 10, seed: int = 0, gauge: Gauge = zero_gauge,
                hbar: float = 1.0, cubic: bool = False) -> "DualityFamily":
        basis = hs_orthonormal_basis(dim, count, seed)
        cub = tuple(hs_orthonormal_basis(dim, count, seed + 1)) if cubic else None
        return cls(tuple(basis), gauge, hbar, cub)

    @property
    def dim(self) -> int:
        return self.basis[0].shape[0]

    @property
    def n_directions(self) -> int:
        return len(self.basis)

    def invariant_violations(self, tol: float = 1e-12) -> list:
        """Which of tracelessness / linear independence fail (empty list for a valid family)."""
        out = []
        for k, a in enumerate(self.basis):
            if abs(np.trace(a)) > tol:
                out.append(f"A_{k + 1} is not traceless")
        flat = np.array([np.concatenate([a.real.ravel(), a.imag.ravel()]) for a in self.basis])
        if np.linalg.matrix_rank(flat, tol=1e-9) < len(self.basis):
            out.append("basis observables are linearly dependent")
        return out

    def observable(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        if theta.shape != (self.n_directions,):
            raise DualityError(f"parameter vector must have {self.n_directions} components")
        a = np.tensordot(theta, np.array(self.basis), axes=1)
        if self.cubic is not None:
            a = a + np.tensordot(theta ** 3, np.array(self.cubic), axes=1)
        return a + self.gauge(theta) * np.eye(self.dim)

    def generator(self, theta) -> np.ndarray:
        """Superoperator of rho -> -(i/hbar)[A(theta), rho]."""
        return commutator_superop(self.observable(theta), self.hbar)


def commutator_superop(a: np.ndarray, hbar: float = 1.0) -> np.ndarray:
    eye = np.eye(a.shape[0])
    return -1j / hbar * (np.kron(a, eye) - np.kron(eye, a.T))


def apply_superop(superop: np.ndarray, rho: np.ndarray) -> np.ndarray:
    d = rho.shape[0]
    return (superop @ rho.reshape(-1)).reshape(d, d)


def _check_step(h: float) -> None:
    if not H_MIN <= h <= H_MAX:
        raise DualityError(f"finite-difference step {h} outside [{H_MIN}, {H_MAX}]")


def _line(v):
    v = np.asarray(v, dtype=float)
    return lambda eps: eps * v


def connection_omega(family: DualityFamily, v, h: float = DEFAULT_STEP,
                     curve: Optional[Callable[[float], np.ndarray]] = None) -> np.ndarray:
    """Central difference of theta -> G_theta along ``v`` (or along ``curve``) at theta = 0."""
    _check_step(h)
    c = curve or _line(v)
    return (family.generator(c(h)) - family.generator(c(-h))) / (2 * h)


def duality_map(family: DualityFamily, v, h: float = DEFAULT_STEP,
                curve: Optional[Callable[[float], np.ndarray]] = None) -> np.ndarray:
    """Traceless representative of the derivative of theta -> [A(theta)] along ``v``.

    ``curve`` (eps -> theta, with ``curve(0) = 0``) replaces the straight
    line ``eps * v``; only its tangent at 0 should matter.
    """
    _check_step(h)
    c = curve or _line(v)
    deriv = (family.observable(c(h)) - family.observable(c(-h))) / (2 * h)
    return traceless_part(deriv)


@dataclass(frozen=True)
class InjectivityReport:
    injective: bool
    rank: int
    singular_values: tuple = field(default=())


def injectivity_check(family: DualityFamily, h: float = DEFAULT_STEP, rtol: float = 1e-8) -> InjectivityReport:
    """Rank of v -> D(v) over the coordinate directions."""
    cols = []
    for k in range(family.n_directions):
        e = np.zeros(family.n_directions)
        e[k] = 1.0
        d = duality_map(family, e, h)
        cols.append(np.concatenate([d.real.ravel(), d.imag.ravel()]))
    sv = np.linalg.svd(np.array(cols).T, compute_uv=False)
    rank = int(np.sum(sv > rtol * max(sv.max(), 1e-300)))
    return InjectivityReport(rank == family.n_directions, rank, tuple(sv.tolist()))


def random_density_matrix(rng: np.random.Generator, dim: int) -> np.ndarray:
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = z @ z.conj().T
    return rho / np.trace(rho).real


def derived_duality_defect(family: DualityFamily, v, rhos: Sequence[np.ndarray], h: float = DEFAULT_STEP) -> float:
    """max_rho || omega(v)(rho) + (i/hbar)[D(omega(v)), rho] ||_F."""
    omega = connection_omega(family, v, h)
    d = duality_map(family, v, h)
    worst = 0.0
    for rho in rhos:
        lhs = apply_superop(omega, rho)
        rhs = -1j / family.hbar * (d @ rho - rho @ d)
        worst = max(worst, float(np.linalg.norm(lhs - rhs)))
    return worst
