"""Reference-frame-free basis operators ``Q^nu_{k l}``.

Each operator is a matrix unit ``|k><l|`` on the symmetric-group factor of
block ``nu`` tensored with the identity on the rotation factor, so the family
obeys ``Q^nu_{kl} Q^nu'_{k'l'} = delta_{nu nu'} delta_{l k'} Q^nu_{k l'}``
and commutes with every collective rotation.

For three and four sites the operators are built along several independent
routes (coupled-ket outer products, permutation-operator expansions, Pauli
forms) and every route is compared against the first before anything is
returned.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
import numpy as np

from .coupled_states import (max_j_state, n3_states, n4_states, second_j_from_max,
                             second_j_states)
from .errors import ConstructionError, DomainError, PreconditionError
from .linalg_core import DEFAULT_TOL, Tolerance, commutator, max_abs
from .schur_weyl import TwoRowPartition
from .spin_system import (SpinSystem, casimir_projector, omega, sigma_dot, sigma_triple,
                          total_angular_momentum)
from .sym_group import Permutation, perm_operator, transposition_operator


@dataclass
class RffBasisOperator:
    partition: TwoRowPartition
    k: int
    ell: int
    matrix: np.ndarray
    # route name -> max-entry deviation from ``matrix``
    routes: dict[str, float] = field(default_factory=dict)
    reference: str = "reference"

    @property
    def key(self) -> tuple[tuple[int, int], int, int]:
        return (self.partition.as_tuple(), self.k, self.ell)

    @property
    def max_route_deviation(self) -> float:
        return max(self.routes.values(), default=0.0)

    def routes_agree(self, tol: float = DEFAULT_TOL.abs_tol) -> bool:
        return self.max_route_deviation <= tol

    def dagger(self) -> "RffBasisOperator":
        return RffBasisOperator(self.partition, self.ell, self.k, self.matrix.conj().T,
                                dict(self.routes), self.reference)

    def __str__(self) -> str:
        return f"Q^{self.partition}_{{{self.k}{self.ell}}}"


def _from_routes(partition, k, ell, routes: dict[str, np.ndarray],
                 tol: Tolerance) -> RffBasisOperator:
    names = list(routes)
    reference = routes[names[0]]
    deviations = {name: max_abs(routes[name] - reference) for name in names[1:]}
    op = RffBasisOperator(partition, k, ell, reference, deviations, names[0])
    if op.max_route_deviation > tol.abs_tol:
        worst = max(deviations, key=deviations.get)
        raise ConstructionError(
            f"{op}: route '{worst}' deviates from '{names[0]}' by {deviations[worst]:.3e}",
            name=str(op), deviation=deviations[worst],
        )
    return op


def _outer_sum(kets_k, kets_l) -> np.ndarray:
    return sum(np.outer(a, b.conj()) for a, b in zip(kets_k, kets_l))


# -- second-largest spin, any N ------------------------------------------------

def q_from_second_j(lam: int, lam_prime: int, sys: SpinSystem) -> RffBasisOperator:
    """``Q^(N-1,1)_{lam lam'} = sum_m |j2, m; lam><j2, m; lam'|``."""
    n = sys.n_sites
    for label in (lam, lam_prime):
        if not 1 <= label <= n - 1:
            raise DomainError(f"lambda {label} out of range 1..{n - 1}")
    j2 = Fraction(n, 2) - 1
    ms = [j2 - i for i in range(int(2 * j2) + 1)]
    left = [second_j_states(m, lam, sys).amplitudes for m in ms]
    right = [second_j_states(m, lam_prime, sys).amplitudes for m in ms]
    return RffBasisOperator(TwoRowPartition(n - 1, 1), lam, lam_prime, _outer_sum(left, right))


def q_second_j(sys: SpinSystem, tol: Tolerance = DEFAULT_TOL) -> list[RffBasisOperator]:
    """All ``Q^(N-1,1)_{lam lam'}``, row-major, each built from two ket routes.

    The reference uses the graded lowering of ``|0_N>``; the second route
    reaches the same kets from the maximal-spin multiplet.
    """
    n = sys.n_sites
    if n < 2:
        raise DomainError("the second-largest spin needs at least two sites")
    j2 = Fraction(n, 2) - 1
    ms = [j2 - i for i in range(int(2 * j2) + 1)]
    graded = {lam: [second_j_states(m, lam, sys).amplitudes for m in ms] for lam in range(1, n)}
    lowered = {lam: [second_j_from_max(m, lam, sys) for m in ms] for lam in range(1, n)}
    part = TwoRowPartition(n - 1, 1)
    return [_from_routes(part, a, b, {"graded": _outer_sum(graded[a], graded[b]),
                                      "from_max": _outer_sum(lowered[a], lowered[b])}, tol)
            for a in range(1, n) for b in range(1, n)]


# -- three sites --------------------------------------------------------------

def _s3_inverse_fourier() -> np.ndarray:
    w = omega(3)
    return np.array([[1, 1, 1], [1, w ** 2, w], [1, w, w ** 2]]) / 3


def q_n3(tol: Tolerance = DEFAULT_TOL) -> list[RffBasisOperator]:
    """``[Q^(3,0)_11, Q^(2,1)_11, Q^(2,1)_22, Q^(2,1)_12, Q^(2,1)_21]``.

    The reference route inverts the cyclic and the transposition halves of
    ``S_3`` by a 3-point discrete Fourier transform.
    """
    sys = SpinSystem(3)
    eye = sys.identity()
    P = lambda s: perm_operator(Permutation.parse(s), sys)  # noqa: E731
    f = _s3_inverse_fourier()
    cyc = [P("123"), P("231"), P("312")]
    tra = [P("213"), P("132"), P("321")]
    fourier_c = [sum(f[r, i] * cyc[i] for i in range(3)) for r in range(3)]
    fourier_t = [sum(f[r, i] * tra[i] for i in range(3)) for r in range(3)]

    dots = sigma_dot(1, 2, sys) + sigma_dot(2, 3, sys) + sigma_dot(3, 1, sys)
    triple = sigma_triple(1, 2, 3, sys)
    w = omega(3)
    pauli = {
        (3, 0, 1, 1): eye / 2 + dots / 6,
        (2, 1, 1, 1): eye / 4 - dots / 12 + triple / math.sqrt(48),
        (2, 1, 2, 2): eye / 4 - dots / 12 - triple / math.sqrt(48),
        (2, 1, 1, 2): (sigma_dot(1, 2, sys) + w ** 2 * sigma_dot(2, 3, sys)
                       + w * sigma_dot(3, 1, sys)) / 6,
    }
    pauli[(2, 1, 2, 1)] = pauli[(2, 1, 1, 2)].conj().T

    top = [max_j_state(Fraction(3, 2) - i, sys).amplitudes for i in range(4)]
    ms = (Fraction(1, 2), Fraction(-1, 2))
    kets = {lam: [n3_states(m, lam).amplitudes for m in ms] for lam in (1, 2)}

    out = [_from_routes(TwoRowPartition(3, 0), 1, 1,
                        {"fourier": fourier_c[0], "fourier_transpositions": fourier_t[0],
                         "pauli": pauli[(3, 0, 1, 1)], "states": _outer_sum(top, top)}, tol)]
    reference = {(1, 1): fourier_c[1], (2, 2): fourier_c[2],
                 (1, 2): fourier_t[1], (2, 1): fourier_t[2]}
    for k, l in ((1, 1), (2, 2), (1, 2), (2, 1)):
        out.append(_from_routes(TwoRowPartition(2, 1), k, l,
                                {"fourier": reference[(k, l)], "pauli": pauli[(2, 1, k, l)],
                                 "states": _outer_sum(kets[k], kets[l])}, tol))
    return out


def s3_expansions() -> dict[str, dict[tuple, complex]]:
    """Coefficients of every ``S_3`` operator over the five basis operators."""
    w = omega(3)
    q30, q11, q22, q12, q21 = ((3, 0), 1, 1), ((2, 1), 1, 1), ((2, 1), 2, 2), \
        ((2, 1), 1, 2), ((2, 1), 2, 1)
    return {
        "123": {q30: 1, q11: 1, q22: 1},
        "231": {q30: 1, q11: w, q22: w ** 2},
        "312": {q30: 1, q11: w ** 2, q22: w},
        "213": {q30: 1, q12: 1, q21: 1},
        "132": {q30: 1, q12: w, q21: w ** 2},
        "321": {q30: 1, q12: w ** 2, q21: w},
    }


# -- four sites ---------------------------------------------------------------

@dataclass
class HermitianGenerators:
    """Lists are 0-based: ``K[0]`` is ``K_1``."""

    A_plus: list[np.ndarray]
    A_minus: list[np.ndarray]
    K: list[np.ndarray]
    L: list[np.ndarray]


_A_PAIRS = (("2134", "1243"), ("3214", "1432"), ("1324", "4231"))
_K_PAIRS = (("1342", "1423"), ("3241", "4213"), ("2431", "4132"), ("2314", "3124"))
_L_PERMS = ("2143", "3412", "4321")
_K_TRIPLES = ((2, 3, 4), (3, 4, 1), (4, 1, 2), (1, 2, 3))
_L_PAIRS = (((1, 2), (3, 4)), ((1, 3), (2, 4)), ((2, 3), (4, 1)))


def n4_generators(sys: SpinSystem, tol: Tolerance = DEFAULT_TOL) -> HermitianGenerators:
    """Hermitian combinations ``A+-_j``, ``K_j``, ``L_j`` of four-site permutations.

    The ``K`` and ``L`` operators are cross-checked against
    ``K_j = -(1/2) s_a.(s_b x s_c)`` and ``L = (1/4)(I + s.s)(I + s.s)``.
    """
    if sys.n_sites != 4:
        raise DomainError("the A/K/L generators are defined for four sites")
    eye = sys.identity()
    P = lambda s: perm_operator(Permutation.parse(s), sys)  # noqa: E731
    a_plus = [P(x) + P(y) for x, y in _A_PAIRS]
    a_minus = [P(x) - P(y) for x, y in _A_PAIRS]
    ks = [1j * (P(x) - P(y)) for x, y in _K_PAIRS]
    ls = [P(x) for x in _L_PERMS]
    for i, (k, abc) in enumerate(zip(ks, _K_TRIPLES), start=1):
        dev = max_abs(k + sigma_triple(*abc, sys) / 2)
        if dev > tol.abs_tol:  # pragma: no cover - transcription guard
            raise ConstructionError(f"K_{i} disagrees with its Pauli form", f"K_{i}", dev)
    for i, (l_op, (ab, cd)) in enumerate(zip(ls, _L_PAIRS), start=1):
        pauli = (eye + sigma_dot(*ab, sys)) @ (eye + sigma_dot(*cd, sys)) / 4
        dev = max_abs(l_op - pauli)
        if dev > tol.abs_tol:  # pragma: no cover
            raise ConstructionError(f"L_{i} disagrees with its Pauli form", f"L_{i}", dev)
    return HermitianGenerators(a_plus, a_minus, ks, ls)


def _n4_routes(sys: SpinSystem) -> dict[tuple, dict[str, np.ndarray]]:
    """All listed constructions of the fourteen operators, keyed ``(nu1, nu2, k, l)``."""
    eye = sys.identity()
    P = lambda s: perm_operator(Permutation.parse(s), sys)  # noqa: E731
    T = lambda i, j: transposition_operator(i, j, sys)  # noqa: E731
    w3 = omega(3)
    w4 = lambda p: omega(4, p)  # noqa: E731

    c1, c2, c3 = P("2341"), P("2413"), P("3421")
    c = {1: (c1, P("3412"), P("4123")), 2: (c2, P("4321"), P("3142")),
         3: (c3, P("2143"), P("4312"))}  # (C, C^2, C^3)
    d = {1: (P("1342"), P("1423")), 2: (P("3241"), P("4213")),
         3: (P("2431"), P("4132")), 4: (P("2314"), P("3124"))}  # (D, D^2)
    g = n4_generators(sys)
    ap, am, ks, ls = g.A_plus, g.A_minus, g.K, g.L
    k_sum = ks[0] + ks[1] + ks[2] + ks[3]
    k_alt = ks[0] - ks[1] + ks[2] - ks[3]

    routes: dict[tuple, dict[str, np.ndarray]] = {}

    def kets(j, lam):
        ms = (1, 0, -1) if j == 1 else (0,)
        return [n4_states(j, m, lam).amplitudes for m in ms]

    routes[(4, 0, 1, 1)] = {
        "even": (eye + sum(c[k][1] for k in (1, 2, 3))
                 + sum(d[l][0] + d[l][1] for l in (1, 2, 3, 4))) / 12,
        "odd": (sum(c[k][0] + c[k][2] for k in (1, 2, 3))
                + sum(T(i, j) for i in range(1, 5) for j in range(1, i))) / 12,
        "akl": -eye / 4 + (ap[0] + ap[1] + ap[2]) / 6 + (ls[0] + ls[1] + ls[2]) / 12,
        "states": casimir_projector(2, sys),
    }
    d_diff = sum(d[l][0] - d[l][1] for l in (1, 2, 3, 4))
    for k, sign in ((1, -1), (3, +1)):
        routes[(3, 1, k, k)] = {
            "even": (eye - c[1][1]) / 4 + sign * 1j / 8 * d_diff,
            "odd": (T(1, 2) + T(2, 3) + T(3, 4) + T(4, 1)) / 8
                   - (c[2][0] + c[2][2] + c[3][0] + c[3][2]) / 8
                   + sign * 1j / 4 * (c[1][0] - c[1][2]),
            "akl": eye / 4 + sign * k_sum / 8 - ls[1] / 4,
            "states": _outer_sum(kets(1, k), kets(1, k)),
        }
    routes[(3, 1, 2, 2)] = {
        "even": (eye + c[1][1] - c[2][1] - c[3][1]) / 4,
        "odd": (T(1, 3) + T(2, 4) - c[1][0] - c[1][2]) / 4,
        "akl": eye / 4 - (ls[0] - ls[1] + ls[2]) / 4,
        "states": _outer_sum(kets(1, 2), kets(1, 2)),
    }
    routes[(3, 1, 1, 3)] = {
        "even": sum((-1) ** l * (d[l][0] + d[l][1]) for l in (1, 2, 3, 4)) / 8
                + 1j / 4 * (c[2][1] - c[3][1]),
        "odd": (T(1, 3) - T(2, 4)) / 4
               - 1j / 8 * (T(1, 2) - T(2, 3) + T(3, 4) - T(4, 1))
               - 1j / 8 * (c[2][0] + c[2][2] - c[3][0] - c[3][2]),
        # the listed A/K/L form is the adjoint of this one
        "akl": (am[1] - 1j * ls[0] + 1j * ls[2]) / 4,
        "states": _outer_sum(kets(1, 1), kets(1, 3)),
    }
    for (k, l), sign in (((1, 2), +1), ((2, 3), -1)):
        routes[(3, 1, k, l)] = {
            "even": ((1 + sign * 1j) * sum(w4(3 * i) * d[i][0] for i in (1, 2, 3, 4))
                     + (1 - sign * 1j) * sum(w4(3 * i) * d[i][1] for i in (1, 2, 3, 4))) / 8,
            "odd": ((1 + 1j) * (T(1, 2) - T(3, 4)) + (1 - 1j) * (T(2, 3) - T(4, 1))) / 8
                   - sign * ((1 - 1j) * (c[2][0] - c[2][2])
                             + (1 + 1j) * (c[3][0] - c[3][2])) / 8,
            "akl": ((1 + 1j) * am[0] + (1 - 1j) * am[2]
                    - sign * (1j * ks[0] + ks[1] - 1j * ks[2] - ks[3])) / 8,
            "states": _outer_sum(kets(1, k), kets(1, l)),
        }
    for lam, sign in ((1, +1), (2, -1)):
        routes[(2, 2, lam, lam)] = {
            "even": (eye + sum(c[k][1] for k in (1, 2, 3))) / 12
                    + w3 ** lam / 12 * (d[1][0] + d[2][1] + d[3][0] + d[4][1])
                    + w3 ** (2 * lam) / 12 * (d[1][1] + d[2][0] + d[3][1] + d[4][0]),
            "akl": eye / 4 - (ap[0] + ap[1] + ap[2]) / 12
                   + sign * k_alt / (8 * math.sqrt(3)) + (ls[0] + ls[1] + ls[2]) / 12,
            "states": _outer_sum(kets(0, lam), kets(0, lam)),
        }
    routes[(2, 2, 1, 2)] = {
        "odd": (c[3][0] + c[3][2] + T(1, 2) + T(3, 4)) / 12
               + w3 / 12 * (c[1][0] + c[1][2] + T(1, 3) + T(2, 4))
               + w3 ** 2 / 12 * (c[2][0] + c[2][2] + T(2, 3) + T(4, 1)),
        "akl": (ap[0] + w3 * ap[1] + w3 ** 2 * ap[2]
                - (ls[0] + w3 * ls[1] + w3 ** 2 * ls[2])) / 6,
        "states": _outer_sum(kets(0, 1), kets(0, 2)),
    }
    for nu1, nu2, k, l in [(3, 1, 1, 2), (3, 1, 2, 3), (3, 1, 1, 3), (2, 2, 1, 2)]:
        routes[(nu1, nu2, l, k)] = {name: m.conj().T for name, m in routes[(nu1, nu2, k, l)].items()}
    return routes


N4_ORDER = [(4, 0, 1, 1)] + [(3, 1, k, l) for k in (1, 2, 3) for l in (1, 2, 3)] \
    + [(2, 2, k, l) for k in (1, 2) for l in (1, 2)]


def q_n4(tol: Tolerance = DEFAULT_TOL) -> list[RffBasisOperator]:
    """The fourteen basis operators of four sites, ``(4,0)``, ``(3,1)``, ``(2,2)`` row-major.

    Each operator carries the deviation of every listed route from the first
    permutation-operator form.
    """
    routes = _n4_routes(SpinSystem(4))
    return [_from_routes(TwoRowPartition(key[0], key[1]), key[2], key[3], routes[key], tol)
            for key in N4_ORDER]


# -- any supported N ------------------------------------------------------------

def rff_basis(sys: SpinSystem, tol: Tolerance = DEFAULT_TOL) -> list[RffBasisOperator]:
    """Complete basis of the rotation commutant for ``N <= 4``."""
    n = sys.n_sites
    if n == 1:
        return [RffBasisOperator(TwoRowPartition(1, 0), 1, 1, sys.identity())]
    if n == 2:
        return [RffBasisOperator(TwoRowPartition(2, 0), 1, 1, casimir_projector(1, sys)),
                RffBasisOperator(TwoRowPartition(1, 1), 1, 1, casimir_projector(0, sys))]
    if n == 3:
        return q_n3(tol)
    if n == 4:
        return q_n4(tol)
    raise DomainError(f"a complete basis is only constructed for N <= 4, got N={n}")


def rff_defect(op: np.ndarray, sys: SpinSystem) -> float:
    """Largest commutator entry of ``op`` with ``J_x``, ``J_y``, ``J_z``."""
    j_vec, _, _ = total_angular_momentum(sys)
    return max(max_abs(commutator(op, comp)) for comp in j_vec)


def expand_rff(op, sys: SpinSystem, tol: Tolerance = DEFAULT_TOL) -> dict[tuple, complex]:
    """Coefficients of a rotation-invariant operator over the ``Q`` basis.

    Uses ``c = tr(Q^dagger op) / r(nu)``; keys are ``((nu1, nu2), k, l)``.
    """
    op = np.asarray(op, dtype=complex)
    defect = rff_defect(op, sys)
    if defect > tol.abs_tol:
        raise PreconditionError(
            f"operator does not commute with collective rotations: max|[op, J]| = {defect:.3e}",
            deviation=defect,
        )
    coeffs = {}
    total = np.zeros_like(op)
    for q in rff_basis(sys, tol):
        c = np.vdot(q.matrix, op) / q.partition.r
        coeffs[q.key] = complex(c)
        total += c * q.matrix
    residual = max_abs(total - op)
    if residual > tol.abs_tol:  # pragma: no cover - completeness guard
        raise ConstructionError(f"Q expansion leaves residual {residual:.3e}",
                                name="expand_rff", deviation=residual)
    return coeffs


def from_expansion(coeffs: dict[tuple, complex], sys: SpinSystem,
                   tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    by_key = {q.key: q.matrix for q in rff_basis(sys, tol)}
    return sum(c * by_key[key] for key, c in coeffs.items())


def rff_report(ops: list[RffBasisOperator], tol: Tolerance = DEFAULT_TOL) -> list[dict]:
    return [{"nu": list(q.partition.as_tuple()), "k": q.k, "l": q.ell,
             "construction_routes_agree": q.routes_agree(tol.abs_tol),
             "max_route_deviation": float(f"{q.max_route_deviation:.3e}"),
             "routes": [q.reference] + list(q.routes)} for q in ops]
