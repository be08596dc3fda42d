"""Sharp and smeared momentum observables and their covariance laws."""
from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from . import group as G
from .lattice import MOMENTUM, GridSpec, PhysicalParams, StateVector
from .localization import LocalizationError, NodeKernel, NodeSet, kernel_profile


class MomentumRegion(NodeSet):
    """Node set over the momentum lattice."""

    def __init__(self, grid, indicator, description=(), space=MOMENTUM):
        if space != MOMENTUM:
            raise LocalizationError("MomentumRegion is a momentum-space set")
        super().__init__(grid, indicator, description, MOMENTUM)

    @classmethod
    def box(cls, grid, lo, hi, space=MOMENTUM):
        return super().box(grid, lo, hi, MOMENTUM)

    @classmethod
    def ball(cls, grid, center, radius, space=MOMENTUM):
        return super().ball(grid, center, radius, MOMENTUM)

    @classmethod
    def whole(cls, grid, space=MOMENTUM):
        return super().whole(grid, MOMENTUM)

    @classmethod
    def empty(cls, grid, space=MOMENTUM):
        return super().empty(grid, MOMENTUM)

    @classmethod
    def node(cls, grid: GridSpec, label: Sequence[int]):
        """Single momentum node ``p_j`` given by its signed integer label(s)."""
        n = grid.points_per_axis
        ind = np.zeros(grid.shape, dtype=bool)
        ind[tuple((int(j) + n // 2) % n for j in np.atleast_1d(label))] = True
        return cls(grid, ind)


class MomentumKernel(NodeKernel):
    """Smearing kernel nu over momentum-lattice offsets."""

    @classmethod
    def delta(cls, grid, space=MOMENTUM):
        return super().delta(grid, MOMENTUM)

    @classmethod
    def atomic(cls, grid, points, weights, space=MOMENTUM):
        return super().atomic(grid, points, weights, MOMENTUM)

    @classmethod
    def density(cls, grid, weights, space=MOMENTUM):
        return super().density(grid, weights, MOMENTUM)

    @classmethod
    def uniform_ball(cls, grid, radius, space=MOMENTUM):
        return super().uniform_ball(grid, radius, MOMENTUM)


def _momentum_density(psi: StateVector) -> np.ndarray:
    return psi.in_momentum().density()


def momentum_histogram(psi: StateVector) -> np.ndarray:
    """Probability per momentum node, ``|psi_hat(p)|^2 dp^d`` summed over spin."""
    return _momentum_density(psi) * psi.grid.momentum_cell_volume


def momentum_prob(psi: StateVector, region: MomentumRegion) -> float:
    """Sharp momentum probability: spectral measure of P on ``region``."""
    if region.grid != psi.grid:
        raise LocalizationError("region and state live on different grids")
    return float(np.sum(momentum_histogram(psi)[region.indicator]))


def smeared_momentum_prob(psi: StateVector, region: MomentumRegion, kernel: MomentumKernel) -> float:
    """<psi|F(Delta)|psi> with F(Delta) = sum_p nu(Delta - p) Pi_P(p)."""
    if kernel.is_sharp:
        return momentum_prob(psi, region)
    return float(np.sum(kernel_profile(region, kernel) * momentum_histogram(psi)))


def smeared_momentum_norm(region: MomentumRegion, kernel: MomentumKernel) -> float:
    return float(kernel_profile(region, kernel).max())


def momentum_covariance_defect(psi: StateVector, region: MomentumRegion, element: G.GroupElement,
                               params: PhysicalParams = PhysicalParams(),
                               kernel: Optional[MomentumKernel] = None) -> float:
    """Defect of the momentum covariance laws.

    translation: ``U F(D) U^+ = F(D)``; boost: ``V F(D) V^+ = F(D - m v)``
    (``m v`` must be a momentum-lattice vector); rotation: ``R F(D) R^+ = F(pi(u) D)``.
    """
    grid = psi.grid

    def prob(state, reg):
        if kernel is None:
            return momentum_prob(state, reg)
        return smeared_momentum_prob(state, reg, kernel)

    before = prob(psi, region)
    moved = G.apply(element, psi, params)
    if element.tag == G.TRANSLATION:
        target = region
    elif element.tag == G.BOOST:
        shift = params.mass * np.asarray(element.value)
        if not grid.is_lattice_vector(shift, MOMENTUM):
            raise LocalizationError("boost shift m v is not a momentum-lattice vector")
        target = region.shifted(-grid.lattice_steps(shift, MOMENTUM))
    elif element.tag == G.ROTATION:
        if element.spin_only:
            raise LocalizationError("spin-only rotations do not act on momentum regions")
        target = region.rotated(element.value)
    else:
        raise LocalizationError(f"no momentum covariance law for {element.tag}")
    return abs(prob(moved, target) - before)
