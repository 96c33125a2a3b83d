"""Missing-label operators, complete commuting sets, and their symmetry analysis.

An MLO lifts the multiplicity degeneracy left by ``J^2`` and ``J_z``.  The
constructions here are built from permutation operators, so they commute
with every collective rotation; each one is checked on construction
(Hermitian, rotation scalar, non-degenerate on its target blocks).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .errors import (CommutationError, ConstructionError, DegeneracyError, DomainError,
                     PreconditionError, UnsupportedError)
from .linalg_core import (DEFAULT_TOL, Tolerance, commutator, complex_pair, eigenspaces,
                          is_hermitian, joint_eigenbasis, max_abs, subspace_basis)
from .rff_basis import n4_generators, q_n4
from .schur_weyl import TwoRowPartition
from .spin_system import (SpinSystem, casimir_projector, half_integer, omega, sigma_dot,
                          sigma_triple, total_angular_momentum)
from .sym_group import (Permutation, apply_permutation, conjugacy_classes,
                        conjugate_by, cyclic_operator, cyclic_subgroups, fourier_projectors,
                        perm_operator)

CONSTRUCTIONS = ("cyclic_fourier", "k_triple_product", "n4_j1", "n4_j0", "binary")
CSCO_KINDS = ("sym", "binary_12_34", "binary_13_24", "binary_14_23")


@dataclass
class MissingLabelOperator:
    matrix: np.ndarray
    target_partition: Optional[TwoRowPartition]
    coefficients: dict[int, float]
    construction: str

    def __post_init__(self):
        if self.construction not in CONSTRUCTIONS:
            raise DomainError(f"unknown construction tag {self.construction!r}")


# -- block bases ----------------------------------------------------------------

def _m_indices(m: Fraction, n: int) -> np.ndarray:
    # |0> is spin up, so m = N/2 - (number of ones)
    ones = int(Fraction(n, 2) - m)
    index = np.arange(2 ** n)
    popcount = np.array([bin(i).count("1") for i in index])
    return index[popcount == ones]


def spin_block_basis(j, sys: SpinSystem, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the total-spin-``j`` subspace (dimension ``r * s``)."""
    return subspace_basis(casimir_projector(j, sys), tol)


def jm_basis(j, m, sys: SpinSystem, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the ``(j, m)`` subspace, dimension ``s(nu)``.

    ``J_z`` is diagonal in the product basis, so the Casimir projector is
    diagonalised only on the product states of the requested ``m``.
    """
    j = half_integer(j)
    m = half_integer(m)
    if abs(m) > j or (j - m).denominator != 1:
        raise DomainError(f"m={m} is not a projection of j={j}")
    idx = _m_indices(m, sys.n_sites)
    proj = casimir_projector(j, sys)[np.ix_(idx, idx)]
    sub = subspace_basis(proj, tol)
    out = np.zeros((sys.dim, sub.shape[1]), dtype=complex)
    out[idx] = sub
    return out


def _ms(j: Fraction) -> list[Fraction]:
    return [j - k for k in range(int(2 * j) + 1)]


def block_spectra(matrix: np.ndarray, partition: TwoRowPartition, sys: SpinSystem,
                  tol: Tolerance = DEFAULT_TOL) -> list[tuple[Fraction, np.ndarray]]:
    """Eigenvalues (ascending) of ``matrix`` on each ``(j, m)`` block of ``partition``."""
    out = []
    for m in _ms(partition.j):
        b = jm_basis(partition.j, m, sys, tol)
        sub = b.conj().T @ matrix @ b
        out.append((m, np.linalg.eigvalsh((sub + sub.conj().T) / 2)))
    return out


def min_gap(matrix: np.ndarray, partition: TwoRowPartition, sys: SpinSystem,
            tol: Tolerance = DEFAULT_TOL) -> float:
    """Smallest spacing between eigenvalues within any ``(j, m)`` block; ``inf`` if ``s = 1``."""
    gap = math.inf
    for _, values in block_spectra(matrix, partition, sys, tol):
        if len(values) > 1:
            gap = min(gap, float(np.min(np.diff(values))))
    return gap


def _check_scalar(matrix: np.ndarray, sys: SpinSystem, tol: Tolerance) -> None:
    j_vec, j_sq, _ = total_angular_momentum(sys)
    for name, op in (("J^2", j_sq), ("J_z", j_vec.z)):
        dev = max_abs(commutator(matrix, op))
        if dev > tol.abs_tol:
            raise PreconditionError(f"operator does not commute with {name}: {dev:.3e}",
                                    deviation=dev)


def _validated(mlo: MissingLabelOperator, sys: SpinSystem,
               tol: Tolerance) -> MissingLabelOperator:
    if not is_hermitian(mlo.matrix, tol.abs_tol):
        dev = max_abs(mlo.matrix - mlo.matrix.conj().T)
        raise ConstructionError("MLO is not Hermitian", name=mlo.construction, deviation=dev)
    _check_scalar(mlo.matrix, sys, tol)
    if mlo.target_partition is not None:
        gap = min_gap(mlo.matrix, mlo.target_partition, sys, tol)
        if gap <= tol.degeneracy_tol:
            raise DegeneracyError(
                f"{mlo.construction} MLO is degenerate on {mlo.target_partition}: gap {gap:.3e}",
                label=mlo.target_partition.as_tuple())
    return mlo


def _agree(name: str, a: np.ndarray, b: np.ndarray, tol: Tolerance) -> None:
    dev = max_abs(a - b)
    if dev > tol.abs_tol:
        raise ConstructionError(f"the two forms of {name} differ by {dev:.3e}",
                                name=name, deviation=dev)


# -- the constructions -------------------------------------------------------------

def k_operator(sys: SpinSystem, tol: Tolerance = DEFAULT_TOL) -> MissingLabelOperator:
    """``K = (-i/sqrt3)(P_231 - P_312) = sigma_1.(sigma_2 x sigma_3) / sqrt12``."""
    if sys.n_sites != 3:
        raise DomainError("K is defined for three sites")
    perm_form = (-1j / math.sqrt(3)) * (perm_operator(Permutation.parse("231"), sys)
                                        - perm_operator(Permutation.parse("312"), sys))
    pauli_form = sigma_triple(1, 2, 3, sys) / math.sqrt(12)
    _agree("K", perm_form, pauli_form, tol)
    mlo = MissingLabelOperator(perm_form, TwoRowPartition(2, 1), {1: 1.0, 2: -1.0},
                               "k_triple_product")
    return _validated(mlo, sys, tol)


def default_q(n: int) -> dict[int, float]:
    """``q_lam = j2 + 1 - lam`` with ``j2 = N/2 - 1``."""
    return {lam: n / 2 - lam for lam in range(1, n)}


def gamma_coefficients(n: int, q: Optional[dict[int, float]] = None) -> np.ndarray:
    """``gamma_k = (1/N) sum_lam q_lam omega_N^(k lam)`` for ``k = 1..N`` (index ``k-1``)."""
    q = default_q(n) if q is None else q
    return np.array([sum(q[lam] * omega(n, k * lam) for lam in range(1, n)) / n
                     for k in range(1, n + 1)])


def mlo_second_j_gamma_form(sys: SpinSystem) -> np.ndarray:
    """``sum_k gamma_k C^k`` with the default weights.

    Since ``q_{N-lam} = -q_lam`` the coefficients are purely imaginary and
    this operator is exactly the negative of the projector form.
    """
    n = sys.n_sites
    gamma = gamma_coefficients(n)
    c = cyclic_operator(sys)
    out = np.zeros((sys.dim, sys.dim), dtype=complex)
    power = sys.identity()
    for k in range(1, n + 1):
        power = power @ c
        out += gamma[k - 1] * power
    return out


def mlo_second_j(sys: SpinSystem, q: Optional[dict[int, float]] = None,
                 tol: Tolerance = DEFAULT_TOL) -> MissingLabelOperator:
    """``M_j2 = sum_lam q_lam P_c(lam)`` targeting the ``(N-1, 1)`` block."""
    n = sys.n_sites
    if n < 3:
        raise DomainError("the cyclic MLO needs N >= 3")
    given = q is not None
    q = default_q(n) if q is None else {int(k): float(v) for k, v in q.items()}
    if sorted(q) != list(range(1, n)):
        raise DomainError(f"q must be given for lambda = 1..{n - 1}")
    values = sorted(q.values())
    if any(b - a <= tol.degeneracy_tol for a, b in zip(values, values[1:])):
        raise DegeneracyError("q values must be pairwise distinct", label=tuple(values))
    proj = fourier_projectors(Permutation.cyclic_shift(n), sys)
    matrix = sum(q[lam] * proj[lam - 1] for lam in range(1, n))
    if not given:
        _agree("M_j2 (projector vs gamma form)", matrix, -mlo_second_j_gamma_form(sys), tol)
    mlo = MissingLabelOperator(matrix, TwoRowPartition(n - 1, 1), q, "cyclic_fourier")
    return _validated(mlo, sys, tol)


def mlo_n4(tol: Tolerance = DEFAULT_TOL) -> tuple[MissingLabelOperator, MissingLabelOperator]:
    """``(M_j1, M_j0)`` for four sites, built from the ``K_i`` combinations.

    ``M_j1 = -(K1+K2+K3+K4)/4`` and ``M_j0 = (K1-K2+K3-K4)/sqrt48``, checked
    against ``Q^(3,1)_11 - Q^(3,1)_33`` and ``Q^(2,2)_11 - Q^(2,2)_22``.
    """
    sys = SpinSystem(4)
    ks = n4_generators(sys, tol).K
    m1 = -(ks[0] + ks[1] + ks[2] + ks[3]) / 4
    m0 = (ks[0] - ks[1] + ks[2] - ks[3]) / math.sqrt(48)
    q = {op.key: op.matrix for op in q_n4(tol)}
    _agree("M_j1", m1, q[((3, 1), 1, 1)] - q[((3, 1), 3, 3)], tol)
    _agree("M_j0", m0, q[((2, 2), 1, 1)] - q[((2, 2), 2, 2)], tol)
    a = _validated(MissingLabelOperator(m1, TwoRowPartition(3, 1), {1: 1.0, 2: 0.0, 3: -1.0},
                                        "n4_j1"), sys, tol)
    b = _validated(MissingLabelOperator(m0, TwoRowPartition(2, 2), {1: 1.0, 2: -1.0},
                                        "n4_j0"), sys, tol)
    return a, b


def pair_casimir(k: int, l: int, sys: SpinSystem) -> np.ndarray:
    """``J^2_kl = (3 I + sigma_k . sigma_l) / 2``."""
    return (3 * sys.identity() + sigma_dot(k, l, sys)) / 2


# -- complete sets -----------------------------------------------------------------

LambdaMap = Callable[[Fraction, tuple], Optional[int]]


@dataclass
class CscoSet:
    name: str
    operators: list[np.ndarray]
    lambda_of: Optional[LambdaMap] = None
    labels: list[str] = field(default_factory=list)


def _lambda_n3(j: Fraction, extra: tuple) -> Optional[int]:
    if j != Fraction(1, 2):
        return None
    return 1 if extra[0] > 0 else 2


def _lambda_n4(j: Fraction, extra: tuple) -> Optional[int]:
    if j == 1:
        return int(round(2 - extra[0]))
    if j == 0:
        return int(round((3 - extra[1]) / 2))
    return None


_BINARY_PAIRS = {"binary_12_34": ((1, 2), (3, 4)), "binary_13_24": ((1, 3), (2, 4)),
                 "binary_14_23": ((1, 4), (2, 3))}


def normalize_kind(kind: str) -> str:
    kind = kind.replace("-", "_")
    if kind not in CSCO_KINDS:
        raise DomainError(f"unknown CSCO {kind!r}; choose from {', '.join(CSCO_KINDS)}")
    return kind


def build_csco(kind: str, sys: SpinSystem, tol: Tolerance = DEFAULT_TOL) -> CscoSet:
    """``{J^2, J_z, ...}`` for the symmetric or one of the binary couplings.

    For one or two sites ``J^2`` and ``J_z`` are already complete and the
    symmetric set falls back to them.
    """
    kind = normalize_kind(kind)
    n = sys.n_sites
    j_vec, j_sq, _ = total_angular_momentum(sys)
    ops = [np.asarray(j_sq), np.asarray(j_vec.z)]
    labels = ["J^2", "J_z"]
    lam = None
    if kind == "sym":
        if n == 3:
            ops.append(k_operator(sys, tol).matrix)
            labels.append("K")
            lam = _lambda_n3
        elif n == 4:
            m1, m0 = mlo_n4(tol)
            ops += [m1.matrix, m0.matrix]
            labels += ["M_j1", "M_j0"]
            lam = _lambda_n4
        elif n > 4:
            raise UnsupportedError(f"no complete symmetric set is constructed for N={n}")
    else:
        if n != 4:
            raise DomainError("the binary sets are defined for four sites")
        for a, b in _BINARY_PAIRS[kind]:
            ops.append(pair_casimir(a, b, sys))
            labels.append(f"J^2_{a}{b}")
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            dev = max_abs(commutator(ops[i], ops[j]))
            if dev > tol.abs_tol:  # pragma: no cover - transcription guard
                raise CommutationError(f"{labels[i]} and {labels[j]} do not commute",
                                       pair=(i, j), deviation=dev)
    return CscoSet(kind, ops, lam, labels)


def csco_mlos(csco: CscoSet) -> list[np.ndarray]:
    """Operators beyond ``J^2`` and ``J_z``."""
    return csco.operators[2:]


def is_complete(csco: CscoSet, tol: Tolerance = DEFAULT_TOL) -> bool:
    return all(b.shape[1] == 1 for _, b in joint_eigenbasis(csco.operators, tol))


# -- fitting and the symmetric-coupling predicate --------------------------------

def affine_fit(x: np.ndarray, target: np.ndarray) -> tuple[complex, complex, float]:
    """Least-squares ``alpha, beta`` with ``alpha x + beta I ~ target``; max residual entry."""
    x = np.asarray(x, dtype=complex)
    target = np.asarray(target, dtype=complex)
    design = np.column_stack([x.ravel(), np.eye(x.shape[0]).ravel()])
    (alpha, beta), *_ = np.linalg.lstsq(design, target.ravel(), rcond=None)
    residual = max_abs(alpha * x + beta * np.eye(x.shape[0]) - target)
    return complex(alpha), complex(beta), residual


@dataclass
class SymmetricCoupling:
    symmetric: bool
    generator: Optional[Permutation]
    coefficients: list[complex]
    all_generators: list[Permutation]
    residual: float
    nondegenerate: bool

    def __bool__(self) -> bool:
        return self.symmetric

    def to_json(self) -> dict:
        return {"symmetric": self.symmetric,
                "generator": None if self.generator is None else str(self.generator),
                "coefficients": [complex_pair(c) for c in self.coefficients],
                "all_generators": [str(g) for g in self.all_generators],
                "residual": float(f"{self.residual:.3e}"),
                "nondegenerate": self.nondegenerate}


def _matrix_of(m: Union[MissingLabelOperator, np.ndarray]) -> np.ndarray:
    return m.matrix if isinstance(m, MissingLabelOperator) else np.asarray(m, dtype=complex)


def is_symmetric_coupling(m, nu: TwoRowPartition, sys: SpinSystem,
                          tol: Tolerance = DEFAULT_TOL) -> SymmetricCoupling:
    """Does some cyclic subgroup of order ``s(nu) + 1`` generate ``m`` on block ``nu``?

    Every cyclic subgroup of that order in ``S_N`` is tried.  On the block,
    ``m`` must be a linear combination of ``C^0 .. C^(order-1)`` and must
    have ``s(nu)`` distinct eigenvalues on each ``(j, m)`` piece.  The
    witness is the smallest successful generator; ``all_generators`` lists
    every one that works.
    """
    matrix = _matrix_of(m)
    n = sys.n_sites
    if nu.n != n:
        raise DomainError(f"{nu} is not a partition of {n}")
    _check_scalar(matrix, sys, tol)
    order = nu.s + 1
    if order > n:
        raise UnsupportedError(f"a cyclic subgroup of order {order} needs more than {n} sites")
    nondegenerate = nu.s == 1 or min_gap(matrix, nu, sys, tol) > tol.degeneracy_tol
    basis = spin_block_basis(nu.j, sys, tol)
    target = basis.conj().T @ matrix @ basis
    hits: list[tuple[Permutation, np.ndarray, float]] = []
    best = math.inf
    for gen, _members in cyclic_subgroups(n, order):
        powers, cur = [], basis
        for _ in range(order):
            powers.append(basis.conj().T @ cur)
            cur = apply_permutation(gen, cur)
        design = np.column_stack([p.ravel() for p in powers])
        coeffs, *_ = np.linalg.lstsq(design, target.ravel(), rcond=None)
        residual = max_abs(design @ coeffs - target.ravel())
        best = min(best, residual)
        if residual <= tol.abs_tol:
            hits.append((gen, coeffs, residual))
    symmetric = bool(hits) and nondegenerate
    if hits:
        gen, coeffs, residual = hits[0]
        return SymmetricCoupling(symmetric, gen if symmetric else None,
                                 [complex(c) for c in coeffs] if symmetric else [],
                                 [h[0] for h in hits] if symmetric else [],
                                 residual, nondegenerate)
    return SymmetricCoupling(False, None, [], [], best, nondegenerate)


# -- conjugation symmetry ------------------------------------------------------------

INVARIANT, ANTISYMMETRIC, NEITHER = "invariant", "antisymmetric", "neither"


def classify(conjugated: np.ndarray, m: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> str:
    if max_abs(conjugated - m) <= tol.abs_tol:
        return INVARIANT
    if max_abs(conjugated + m) <= tol.abs_tol:
        return ANTISYMMETRIC
    return NEITHER


@dataclass
class ClassVerdict:
    cycle_type: tuple[int, ...]
    label: str
    verdict: str
    per_element: dict[str, str]


@dataclass
class SymmetryReport:
    n: int
    classes: list[ClassVerdict]

    def verdict_for(self, p: Union[Permutation, str]) -> str:
        key = str(p)
        for c in self.classes:
            if key in c.per_element:
                return c.per_element[key]
        raise KeyError(key)

    def class_verdict(self, label: str) -> str:
        for c in self.classes:
            if c.label == label:
                return c.verdict
        raise KeyError(label)

    def count(self, verdict: str = INVARIANT) -> int:
        return sum(v == verdict for c in self.classes for v in c.per_element.values())

    def to_json(self, operator: str) -> dict:
        return {"operator": operator,
                "classes": [{"cycle_type": list(c.cycle_type), "label": c.label,
                             "verdict": c.verdict,
                             "per_element": [{"perm": p, "verdict": v}
                                             for p, v in sorted(c.per_element.items())]}
                            for c in self.classes]}


def conjugation_symmetry(m, n: int, tol: Tolerance = DEFAULT_TOL) -> SymmetryReport:
    """Compare ``P_g m P_g^dagger`` with ``+m`` and ``-m`` for every ``g`` in ``S_n``.

    A class gets the verdict shared by all its elements, otherwise "neither".
    """
    matrix = _matrix_of(m)
    if matrix.shape != (2 ** n, 2 ** n):
        raise DomainError(f"operator of shape {matrix.shape} does not act on {n} sites")
    out = []
    for cls in conjugacy_classes(n):
        per = {str(g): classify(conjugate_by(g, matrix), matrix, tol) for g in cls.members}
        verdicts = set(per.values())
        out.append(ClassVerdict(cls.cycle_type, cls.label,
                                verdicts.pop() if len(verdicts) == 1 else NEITHER, per))
    return SymmetryReport(n, out)


def invariance_count(ops: Sequence, n: int, tol: Tolerance = DEFAULT_TOL) -> int:
    """Total number of group elements leaving each operator invariant, summed over ``ops``."""
    return sum(conjugation_symmetry(op, n, tol).count(INVARIANT) for op in ops)


def block_restriction(m, j, sys: SpinSystem, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    basis = spin_block_basis(j, sys, tol)
    return basis.conj().T @ _matrix_of(m) @ basis


def block_spectrum(m, j, sys: SpinSystem, tol: Tolerance = DEFAULT_TOL) -> list[tuple[float, int]]:
    """``(eigenvalue, multiplicity)`` of ``m`` on the total-spin-``j`` subspace."""
    sub = block_restriction(m, j, sys, tol)
    return [(float(v), b.shape[1]) for v, b in eigenspaces(sub, tol)]


__all__ = [
    "MissingLabelOperator", "CscoSet", "SymmetricCoupling", "SymmetryReport", "ClassVerdict",
    "k_operator", "mlo_second_j", "mlo_second_j_gamma_form", "gamma_coefficients", "default_q",
    "mlo_n4", "pair_casimir", "build_csco", "csco_mlos", "is_complete", "affine_fit",
    "is_symmetric_coupling", "conjugation_symmetry", "invariance_count", "classify",
    "spin_block_basis", "jm_basis", "block_spectra", "block_spectrum", "block_restriction",
    "min_gap", "normalize_kind", "INVARIANT", "ANTISYMMETRIC", "NEITHER",
]
