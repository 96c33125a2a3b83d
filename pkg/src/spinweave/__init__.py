"""Schur-Weyl decomposition and symmetric coupling of spin-1/2 systems."""
from .errors import (CommutationError, ConstructionError, DegeneracyError, DomainError,
                     PreconditionError, SizeError, SpinWeaveError, UnsupportedError)
from .linalg_core import DEFAULT_TOL, Tolerance, eigenspaces, joint_eigenbasis, restrict
from .spin_system import SpinSystem, casimir_projector, total_angular_momentum
from .sym_group import Permutation, conjugacy_classes, perm_operator
from .schur_weyl import TwoRowPartition, decompose, hook_dimension, multiplicity
from .coupled_states import listed_states, max_j_state, second_j_states
from .rff_basis import RffBasisOperator, expand_rff, rff_basis
from .mlo import (MissingLabelOperator, build_csco, conjugation_symmetry, is_symmetric_coupling,
                  k_operator, mlo_n4, mlo_second_j)

__version__ = "0.1.0"

__all__ = [
    "SpinWeaveError", "SizeError", "DomainError", "PreconditionError", "CommutationError",
    "DegeneracyError", "ConstructionError", "UnsupportedError",
    "Tolerance", "DEFAULT_TOL", "eigenspaces", "joint_eigenbasis", "restrict",
    "SpinSystem", "casimir_projector", "total_angular_momentum",
    "Permutation", "conjugacy_classes", "perm_operator",
    "TwoRowPartition", "decompose", "hook_dimension", "multiplicity",
    "listed_states", "max_j_state", "second_j_states",
    "RffBasisOperator", "expand_rff", "rff_basis",
    "MissingLabelOperator", "build_csco", "conjugation_symmetry", "is_symmetric_coupling",
    "k_operator", "mlo_n4", "mlo_second_j",
]
