"""Two-row partitions and the numerical Wedderburn decomposition.

All combinatorics is in exact integer arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DegeneracyError, DomainError, PreconditionError
from .linalg_core import DEFAULT_TOL, Tolerance, complex_pair, joint_eigenbasis, max_abs
from .spin_system import SpinSystem, half_integer, total_angular_momentum


@dataclass(frozen=True, order=True)
class TwoRowPartition:
    """Young diagram ``(nu1, nu2)`` labelling one Schur-Weyl block."""

    nu1: int
    nu2: int

    def __post_init__(self):
        if self.nu2 < 0 or self.nu1 < self.nu2:
            raise DomainError(f"({self.nu1}, {self.nu2}) is not a two-row partition")

    @classmethod
    def from_j(cls, j, n: int) -> "TwoRowPartition":
        j = half_integer(j)
        nu1 = Fraction(n, 2) + j
        nu2 = Fraction(n, 2) - j
        if nu1.denominator != 1 or nu2 < 0:
            raise DomainError(f"j={j} does not occur for N={n}")
        return cls(int(nu1), int(nu2))

    @property
    def n(self) -> int:
        return self.nu1 + self.nu2

    @property
    def j(self) -> Fraction:
        return Fraction(self.nu1 - self.nu2, 2)

    @property
    def r(self) -> int:
        """Dimension of the rotation-group factor, ``2j + 1``."""
        return self.nu1 - self.nu2 + 1

    @property
    def s(self) -> int:
        """Dimension of the symmetric-group factor."""
        return (math.factorial(self.n) * (self.nu1 - self.nu2 + 1)
                // (math.factorial(self.nu1 + 1) * math.factorial(self.nu2)))

    def as_tuple(self) -> tuple[int, int]:
        return (self.nu1, self.nu2)

    def __str__(self) -> str:
        return f"({self.nu1},{self.nu2})"


def two_row_partitions(n: int) -> list[TwoRowPartition]:
    """Partitions of ``n`` into at most two rows, largest ``nu1`` first."""
    if n < 1:
        raise DomainError("n must be positive")
    return [TwoRowPartition(n - k, k) for k in range(n // 2 + 1)]


def multiplicity(j, n: int) -> int:
    """Number of copies of spin ``j`` in ``n`` spin-1/2 constituents."""
    j = half_integer(j)
    top = Fraction(n, 2)
    if j < 0 or j > top or (top - j).denominator != 1:
        raise DomainError(f"j={j} does not occur for N={n}")
    a = int(top + j)
    b = int(top - j)
    return math.factorial(n) * int(2 * j + 1) // (math.factorial(a + 1) * math.factorial(b))


def integer_partitions(n: int, largest: Optional[int] = None):
    """All partitions of ``n`` as non-increasing tuples, reverse-lexicographic."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in integer_partitions(n - first, first):
            yield (first,) + rest


def hook_dimension(partition: Sequence[int]) -> int:
    """Number of standard Young tableaux of the given shape (hook-length formula)."""
    rows = [int(r) for r in partition]
    if not rows or any(r <= 0 for r in rows) or any(a < b for a, b in zip(rows, rows[1:])):
        raise DomainError(f"{tuple(partition)} is not a partition with positive parts")
    cols = [sum(1 for r in rows if r > c) for c in range(rows[0])]
    hooks = 1
    for i, r in enumerate(rows):
        for c in range(r):
            hooks *= (r - c - 1) + (cols[c] - i - 1) + 1
    return math.factorial(sum(rows)) // hooks


@dataclass
class LabeledState:
    m: Fraction
    lam: Optional[int]
    eigenvalues: tuple
    vector: np.ndarray


@dataclass
class Block:
    partition: TwoRowPartition
    states: list[LabeledState] = field(default_factory=list)

    @property
    def basis(self) -> np.ndarray:
        return np.column_stack([s.vector for s in self.states])


@dataclass
class BlockDecomposition:
    n_sites: int
    blocks: list[Block]

    def block(self, partition: TwoRowPartition) -> Block:
        for b in self.blocks:
            if b.partition == partition:
                return b
        raise KeyError(partition)

    def to_json(self) -> list[dict]:
        out = []
        for b in self.blocks:
            labels = []
            for st in b.states:
                labels.append({
                    "m": float(st.m),
                    "lambda": st.lam,
                    "eigenvalues": [complex_pair(v) for v in st.eigenvalues],
                })
            p = b.partition
            out.append({"nu": list(p.as_tuple()), "j": float(p.j), "r": p.r, "s": p.s,
                        "labels": labels})
        return out


# lambda_of(j, extra_eigenvalues) -> int label or None to keep the raw tuple
LambdaMap = Callable[[Fraction, tuple], Optional[int]]


def _snap_j(casimir: float, n: int) -> Fraction:
    j = (-1 + math.sqrt(max(0.0, 1 + 4 * casimir))) / 2
    return half_integer(round(2 * j) / 2)


def decompose(sys: SpinSystem, csco: Sequence[np.ndarray], tol: Tolerance = DEFAULT_TOL,
              lambda_of: Optional[LambdaMap] = None) -> BlockDecomposition:
    """Split the space into Schur-Weyl blocks using a complete set of commuting operators.

    ``csco[0]`` must be ``J^2`` and ``csco[1]`` must be ``J_z``; the remaining
    operators resolve the multiplicity.  Every joint eigenspace has to be one
    dimensional, otherwise :class:`DegeneracyError` names the first offending
    label.
    """
    if len(csco) < 2:
        raise PreconditionError("a CSCO needs at least J^2 and J_z")
    j_vec, j_sq, _ = total_angular_momentum(sys)
    if max_abs(csco[0] - j_sq) > tol.abs_tol or max_abs(csco[1] - j_vec.z) > tol.abs_tol:
        raise PreconditionError("the first two CSCO operators must be J^2 and J_z")
    spaces = joint_eigenbasis(csco, tol)
    by_partition: dict[TwoRowPartition, Block] = {}
    for label, basis in spaces:
        if basis.shape[1] != 1:
            raise DegeneracyError(
                f"joint label {label} is {basis.shape[1]}-fold degenerate",
                label=label, multiplicity=basis.shape[1],
            )
        j = _snap_j(label[0], sys.n_sites)
        m = half_integer(round(2 * label[1]) / 2)
        extra = tuple(label[2:])
        lam = lambda_of(j, extra) if lambda_of is not None else None
        part = TwoRowPartition.from_j(j, sys.n_sites)
        block = by_partition.setdefault(part, Block(part))
        block.states.append(LabeledState(m, lam, tuple(label), basis[:, 0]))
    blocks = []
    for part in two_row_partitions(sys.n_sites):
        block = by_partition.get(part)
        if block is None:  # pragma: no cover - every block occurs for spin-1/2 sites
            continue
        block.states.sort(key=lambda st: (-st.m, st.lam if st.lam is not None else 0,
                                          tuple(np.real(st.eigenvalues[2:]))))
        blocks.append(block)
    return BlockDecomposition(sys.n_sites, blocks)
