"""
galilei_lab: finite-grid checks of the Bargmann-extended Galilei group.

States live on a periodic box with an exact spectral momentum
representation; group elements act as exact unitaries, so composition
laws, the Weyl relation and the loop holonomy hold to rounding error,
while unbounded generators are tested at the expectation level on
admissible (well-resolved) states.
"""
from .config import ConfigError, RunConfig, load_config
from .duality import DualityFamily, connection_omega, duality_map, injectivity_check
from .dynamics import casimir_defect, heisenberg_trajectory
from .group import GroupElement, apply, apply_generator, apply_word, commutator_expect, expect
from .holonomy import LoopSpec, extract_mass, loop_phase
from .lattice import (
    GridSpec,
    PhysicalParams,
    SpinSpec,
    StateVector,
    admissibility,
    gaussian_state,
    inner,
    make_grid,
    to_momentum,
    to_position,
)
from .localization import NodeKernel, Region, SmearKernel, focusing_state, povm_norm, povm_prob, pvm_prob
from .momentum import MomentumKernel, MomentumRegion, momentum_prob, smeared_momentum_prob
from .report import emit_report, run_suites
from .rotations import spin_matrix, wigner_d
from .sampling import random_admissible_state

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "RunConfig", "load_config",
    "DualityFamily", "connection_omega", "duality_map", "injectivity_check",
    "casimir_defect", "heisenberg_trajectory",
    "GroupElement", "apply", "apply_generator", "apply_word", "commutator_expect", "expect",
    "LoopSpec", "extract_mass", "loop_phase",
    "GridSpec", "PhysicalParams", "SpinSpec", "StateVector", "admissibility", "gaussian_state", "inner",
    "make_grid", "to_momentum", "to_position",
    "NodeKernel", "Region", "SmearKernel", "focusing_state", "povm_norm", "povm_prob", "pvm_prob",
    "MomentumKernel", "MomentumRegion", "momentum_prob", "smeared_momentum_prob",
    "emit_report", "run_suites",
    "spin_matrix", "wigner_d",
    "random_admissible_state",
]
