"""Named invariant suites run by ``spinweave verify``.

Each suite takes a system size and a tolerance and returns a list of
:class:`Check` records.  Suites that do not apply at a given ``N`` return an
empty list rather than failing.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import coupled_states as cs
from . import mlo
from .errors import DomainError
from .linalg_core import DEFAULT_TOL, Tolerance, commutator, eigenspaces, max_abs
from .rff_basis import q_second_j, rff_basis
from .schur_weyl import (TwoRowPartition, decompose, hook_dimension, integer_partitions,
                         multiplicity, two_row_partitions)
from .spin_system import SpinSystem, casimir_eigenvalue, omega, total_angular_momentum
from .sym_group import (ENUMERATION_CAP, Permutation, all_permutations, cyclic_operator,
                        fourier_projectors, perm_operator, transposition_operator)


@dataclass
class Check:
    name: str
    passed: bool
    deviation: float

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed,
                "deviation": float(f"{self.deviation:.3e}")}


def _dev(name: str, deviation: float, limit: float) -> Check:
    return Check(name, bool(deviation <= limit), float(deviation))


def _exact(name: str, ok: bool) -> Check:
    return Check(name, bool(ok), 0.0 if ok else 1.0)


# -- suites -------------------------------------------------------------------------

def suite_dimensions(n: int, tol: Tolerance) -> list[Check]:
    parts = two_row_partitions(n)
    checks = [_exact("sum r*s = 2^N", sum(p.r * p.s for p in parts) == 2 ** n),
              _exact("s equals multiplicity", all(p.s == multiplicity(p.j, n) for p in parts))]
    if n <= ENUMERATION_CAP:
        checks.append(_exact("sum of squared hook dimensions = N!",
                             sum(hook_dimension(lam) ** 2 for lam in integer_partitions(n))
                             == math.factorial(n)))
        checks.append(_exact("two-row hook dimension = s",
                             all(hook_dimension([x for x in p.as_tuple() if x]) == p.s
                                 for p in parts)))
    sys = SpinSystem(n)
    _, j_sq, _ = total_angular_momentum(sys)
    spaces = eigenspaces(j_sq, tol)
    counted = {round(v, 6): b.shape[1] for v, b in spaces}
    ok = all(counted.get(round(casimir_eigenvalue(p.j), 6)) == p.r * p.s for p in parts)
    checks.append(_exact("J^2 eigenspace dimensions = r*s", ok and len(spaces) == len(parts)))
    return checks


def suite_groups(n: int, tol: Tolerance) -> list[Check]:
    if n > 6:
        return []
    sys = SpinSystem(n)
    rng = random.Random(12345)
    perms = list(all_permutations(n))
    worst = 0.0
    for _ in range(200):
        p, q = rng.choice(perms), rng.choice(perms)
        worst = max(worst, max_abs(perm_operator(p * q, sys)
                                   - perm_operator(p, sys) @ perm_operator(q, sys)))
    checks = [_dev("homomorphism on 200 random pairs", worst, tol.abs_tol)]
    if n >= 2:
        worst = max(max_abs(perm_operator(Permutation.transposition(n, k, l), sys)
                            - transposition_operator(k, l, sys))
                    for k in range(1, n + 1) for l in range(k + 1, n + 1))
        checks.append(_dev("transposition Pauli form", worst, tol.abs_tol))
    proj = fourier_projectors(Permutation.cyclic_shift(n), sys)
    checks.append(_dev("cyclic projectors resolve identity", max_abs(sum(proj) - sys.identity()),
                       tol.abs_tol))
    checks.append(_dev("cyclic projectors idempotent", max(max_abs(p @ p - p) for p in proj),
                       tol.abs_tol))
    return checks


def suite_rff(n: int, tol: Tolerance) -> list[Check]:
    sys = SpinSystem(n)
    if n <= 4:
        ops = rff_basis(sys, tol)
    else:
        ops = q_second_j(sys, tol)
    checks = [_exact(f"{len(ops)} operators constructed", len(ops) > 0)]
    checks.append(_dev("construction routes agree", max(q.max_route_deviation for q in ops),
                       tol.abs_tol))
    by_key = {q.key: q for q in ops}
    passed, worst = 0, 0.0
    for a in ops:
        for b in ops:
            expected = np.zeros_like(a.matrix)
            if a.partition == b.partition and a.ell == b.k:
                expected = by_key[(a.partition.as_tuple(), a.k, b.ell)].matrix
            d = max_abs(a.matrix @ b.matrix - expected)
            worst = max(worst, d)
            passed += d <= tol.abs_tol
    total = len(ops) ** 2
    checks.append(Check(f"closure {passed}/{total}", passed == total, worst))
    worst = max(max_abs(q.dagger().matrix - by_key[(q.partition.as_tuple(), q.ell, q.k)].matrix)
                for q in ops)
    checks.append(_dev("hermitian conjugation Q_kl^dagger = Q_lk", worst, tol.abs_tol))
    j_vec, _, _ = total_angular_momentum(sys)
    worst = max(max_abs(commutator(q.matrix, c)) for q in ops for c in j_vec)
    checks.append(_dev("commutes with J_x, J_y, J_z", worst, tol.abs_tol))
    if n <= 4:
        total_op = sum(q.matrix for q in ops if q.k == q.ell)
        checks.append(_dev("diagonal operators resolve identity",
                           max_abs(total_op - sys.identity()), tol.abs_tol))
        stack = np.array([perm_operator(p, sys).ravel() for p in all_permutations(n)])
        sv = np.linalg.svd(stack, compute_uv=False)
        rank = int(np.sum(sv > tol.abs_tol))
        checks.append(_exact(f"permutation operators span rank {rank} = {len(ops)}",
                             rank == len(ops)))
    return checks


def suite_second_j(n: int, tol: Tolerance) -> list[Check]:
    if n < 3:
        return []
    sys = SpinSystem(n)
    j2 = Fraction(n, 2) - 1
    ms = [j2 - k for k in range(int(2 * j2) + 1)]
    kets = [cs.second_j_states(m, lam, sys) for lam in range(1, n) for m in ms]
    basis = np.column_stack([k.amplitudes for k in kets])
    checks = [_dev("orthonormality", max_abs(basis.conj().T @ basis - np.eye(len(kets))),
                   tol.abs_tol)]
    c = cyclic_operator(sys)
    worst = max(max_abs(c @ k.amplitudes - omega(n, k.lam) * k.amplitudes) for k in kets)
    checks.append(_dev("C|j2,m;lam> = omega^lam |j2,m;lam>", worst, tol.abs_tol))
    j_vec, j_sq, _ = total_angular_momentum(sys)
    worst = max(max(max_abs(j_sq @ k.amplitudes - casimir_eigenvalue(j2) * k.amplitudes),
                    max_abs(j_vec.z @ k.amplitudes - float(k.m) * k.amplitudes)) for k in kets)
    checks.append(_dev("J^2 and J_z eigenrelations", worst, tol.abs_tol))
    worst = max(max_abs(cs.second_j_from_max(k.m, k.lam, sys) - k.amplitudes) for k in kets)
    checks.append(_dev("lowering route from the maximal spin agrees", worst, tol.abs_tol))
    worst = 0.0
    for m in ms:
        pyr = [cs.pyramid_states(l, m, sys).amplitudes for l in range(1, n + 1)]
        for a in range(n):
            for b in range(n):
                exact = cs.pyramid_overlap(a + 1, b + 1, j2, m, m)
                worst = max(worst, abs(np.vdot(pyr[a], pyr[b]) - exact))
    checks.append(_dev("pyramid overlaps match the closed form", worst, tol.abs_tol))
    m_op = mlo.mlo_second_j(sys, tol=tol)
    spectrum = mlo.block_spectrum(m_op, j2, sys, tol)
    expected = sorted((float(j2 + 1 - lam), int(2 * j2 + 1)) for lam in range(1, n))
    ok = len(spectrum) == len(expected) and all(
        abs(v - ev) <= tol.abs_tol * 10 and mult == em
        for (v, mult), (ev, em) in zip(spectrum, expected))
    checks.append(_exact("cyclic MLO spectrum j2+1-lam, each r times", ok))
    gamma = mlo.gamma_coefficients(n)
    worst = max(abs(gamma[n - 1]), max(abs(gamma[n - k - 1] + gamma[k - 1]) for k in range(1, n)))
    checks.append(_dev("gamma_N = 0 and gamma_(N-k) = -gamma_k", worst, tol.abs_tol))
    return checks


def _matches(decomposition, kets, tol: Tolerance) -> float:
    found = {}
    for block in decomposition.blocks:
        for st in block.states:
            found[(block.partition.j, st.m, st.lam)] = st.vector
    worst = 0.0
    for k in kets:
        v = found.get((k.j, k.m, k.lam))
        worst = max(worst, 1.0 if v is None else 1 - cs.fidelity(v, k.amplitudes))
    return worst


def suite_states(n: int, tol: Tolerance) -> list[Check]:
    if n not in (3, 4):
        return []
    sys = SpinSystem(n)
    kets = cs.listed_states(n)
    basis = np.column_stack([k.amplitudes for k in kets])
    checks = [_dev("listed kets orthonormal", max_abs(basis.conj().T @ basis - np.eye(2 ** n)),
                   tol.abs_tol)]
    csco = mlo.build_csco("sym", sys, tol)
    d = decompose(sys, csco.operators, tol, csco.lambda_of)
    checks.append(_dev("CSCO_sym eigenvectors reproduce the listed kets (1 - fidelity)",
                       _matches(d, kets, tol), tol.abs_tol))
    return checks


def suite_mlo(n: int, tol: Tolerance) -> list[Check]:
    sys = SpinSystem(n) if n >= 3 else None
    checks: list[Check] = []
    if n == 3:
        k = mlo.k_operator(sys, tol)
        checks.append(_exact("K spectrum on j=1/2 is {+1 x2, -1 x2}",
                             _spectrum_is(mlo.block_spectrum(k, Fraction(1, 2), sys, tol),
                                          [(-1, 2), (1, 2)], tol)))
        checks.append(_dev("K annihilates j=3/2",
                           max_abs(mlo.block_restriction(k, Fraction(3, 2), sys, tol)),
                           tol.abs_tol))
        w = mlo.is_symmetric_coupling(k, TwoRowPartition(2, 1), sys, tol)
        checks.append(_exact("K couples (2,1) symmetrically via 231",
                             w.symmetric and str(w.generator) == "231"))
    if n == 4:
        m1, m0 = mlo.mlo_n4(tol)
        checks.append(_exact("M_j1 spectrum on j=1 is {+1, 0, -1} x3",
                             _spectrum_is(mlo.block_spectrum(m1, 1, sys, tol),
                                          [(-1, 3), (0, 3), (1, 3)], tol)))
        checks.append(_exact("M_j0 spectrum on j=0 is {+1, -1}",
                             _spectrum_is(mlo.block_spectrum(m0, 0, sys, tol),
                                          [(-1, 1), (1, 1)], tol)))
        checks.append(_dev("M_j1 annihilates j=2", max_abs(mlo.block_restriction(m1, 2, sys, tol)),
                           tol.abs_tol))
        g = mlo.block_restriction(mlo.mlo_second_j_gamma_form(sys), 1, sys, tol)
        _, _, res = mlo.affine_fit(g, mlo.block_restriction(m1, 1, sys, tol))
        checks.append(_dev("gamma form matches M_j1 on j=1 (affine fit)", res, tol.abs_tol))
        s1 = mlo.conjugation_symmetry(m1, 4, tol)
        checks.append(_exact("M_j1 invariant under C_4",
                             all(s1.verdict_for(p) == mlo.INVARIANT
                                 for p in ("1234", "2341", "3412", "4123"))))
        s0 = mlo.conjugation_symmetry(m0, 4, tol)
        expected = {"31": mlo.INVARIANT, "2^2": mlo.INVARIANT,
                    "21^2": mlo.ANTISYMMETRIC, "4": mlo.ANTISYMMETRIC}
        checks.append(_exact("M_j0 class verdicts",
                             all(s0.class_verdict(c) == v for c, v in expected.items())))
        for m, nu, gen in ((m1, TwoRowPartition(3, 1), "2341"), (m0, TwoRowPartition(2, 2), None)):
            w = mlo.is_symmetric_coupling(m, nu, sys, tol)
            ok = w.symmetric and (gen is None or str(w.generator) == gen)
            checks.append(_exact(f"{m.construction} couples {nu} symmetrically", ok))
        binary = mlo.build_csco("binary_12_34", sys, tol)
        w = mlo.is_symmetric_coupling(binary.operators[2], TwoRowPartition(3, 1), sys, tol)
        checks.append(_exact("binary J^2_12 is not a symmetric coupling of (3,1)", not w.symmetric))
        nb = mlo.invariance_count(mlo.csco_mlos(binary), 4, tol)
        ns = mlo.invariance_count([m1, m0], 4, tol)
        checks.append(_exact(f"binary MLOs less symmetric ({nb} < {ns} invariant elements)",
                             nb < ns))
        for kind in mlo.CSCO_KINDS:
            checks.append(_exact(f"{kind} is complete",
                                 mlo.is_complete(mlo.build_csco(kind, sys, tol), tol)))
    if n >= 3:
        m = mlo.mlo_second_j(sys, tol=tol)
        j_vec, j_sq, _ = total_angular_momentum(sys)
        worst = max(max_abs(commutator(m.matrix, c)) for c in list(j_vec) + [j_sq])
        checks.append(_dev("cyclic MLO commutes with J and J^2", worst, tol.abs_tol))
        if n <= ENUMERATION_CAP:
            w = mlo.is_symmetric_coupling(m, TwoRowPartition(n - 1, 1), sys, tol)
            checks.append(_exact(f"cyclic MLO couples ({n - 1},1) symmetrically", w.symmetric))
    return checks


def suite_symmetry(n: int, tol: Tolerance) -> list[Check]:
    """Element-level conjugation verdicts for the four-site MLOs.

    The 3-cycle listed among the antisymmetric elements of ``M_j1`` cannot
    be one (its cube is the identity), so the transposition ``1432`` from the
    same class is checked in its place.
    """
    if n != 4:
        return []
    m1, m0 = mlo.mlo_n4(tol)
    s1 = mlo.conjugation_symmetry(m1, 4, tol)
    checks = [_exact(f"M_j1 antisymmetric under {p}", s1.verdict_for(p) == mlo.ANTISYMMETRIC)
              for p in ("3214", "1432", "4321", "2143")]
    s0 = mlo.conjugation_symmetry(m0, 4, tol)
    checks.append(_exact("M_j0 antisymmetric under every odd permutation",
                         all((s0.verdict_for(p) == mlo.ANTISYMMETRIC) == (p.parity < 0)
                             for p in all_permutations(4))))
    return checks


def _spectrum_is(spectrum, expected, tol: Tolerance) -> bool:
    return len(spectrum) == len(expected) and all(
        abs(v - ev) <= 10 * tol.abs_tol and mult == em
        for (v, mult), (ev, em) in zip(spectrum, expected))


SUITES: dict[str, Callable[[int, Tolerance], list[Check]]] = {
    "dimensions": suite_dimensions,
    "groups": suite_groups,
    "mlo": suite_mlo,
    "rff": suite_rff,
    "second-j": suite_second_j,
    "states": suite_states,
    "symmetry": suite_symmetry,
}


def run_suites(n: int, names=None, tol: Tolerance = DEFAULT_TOL) -> dict:
    """Run the named suites (all by default); the report is sorted by suite name."""
    names = sorted(SUITES) if not names else sorted(set(names))
    unknown = [s for s in names if s not in SUITES]
    if unknown:
        raise DomainError(f"unknown suite(s) {', '.join(unknown)}; choose from "
                          f"{', '.join(sorted(SUITES))}")
    report = []
    for name in names:
        checks = SUITES[name](n, tol)
        report.append({"suite": name, "passed": all(c.passed for c in checks),
                       "checks": [c.to_json() for c in checks]})
    return {"n": n, "passed": all(s["passed"] for s in report), "suites": report}
