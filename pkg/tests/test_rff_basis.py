import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from _oracles import I2, X, Z, chain, dot, perm_loop, rotation, site, total_j, triple, w
from spinweave.errors import DomainError, PreconditionError
from spinweave.rff_basis import (N4_ORDER, expand_rff, from_expansion, n4_generators, q_from_second_j,
                                 q_n3, q_n4, q_second_j, rff_basis, rff_defect, rff_report,
                                 s3_expansions)
from spinweave.spin_system import SpinSystem

ATOL = 1e-12


def P(s):
    return perm_loop(tuple(int(c) for c in s))


def by_key(ops):
    return {q.key: q.matrix for q in ops}


def closure_deviation(ops):
    worst = 0.0
    for a, b in itertools.product(ops, repeat=2):
        want = 0
        if a.partition == b.partition and a.ell == b.k:
            want = by_key(ops)[(a.partition.as_tuple(), a.k, b.ell)]
        worst = max(worst, np.abs(a.matrix @ b.matrix - want).max())
    return worst


@pytest.fixture(scope="module")
def n3():
    return q_n3()


@pytest.fixture(scope="module")
def n4():
    return q_n4()


class TestN3:
    def test_keys(self, n3):
        assert [q.key for q in n3] == [((3, 0), 1, 1), ((2, 1), 1, 1), ((2, 1), 2, 2),
                                       ((2, 1), 1, 2), ((2, 1), 2, 1)]

    def test_routes_agree(self, n3):
        for q in n3:
            assert q.max_route_deviation <= ATOL, str(q)

    def test_symmetric_pauli_form(self, n3):
        want = np.eye(8) / 2 + (dot(1, 2, 3) + dot(2, 3, 3) + dot(3, 1, 3)) / 6
        assert np.abs(n3[0].matrix - want).max() < ATOL

    def test_difference_is_projected_triple(self, n3):
        q = by_key(n3)
        diff = q[((2, 1), 1, 1)] - q[((2, 1), 2, 2)]
        assert np.abs(diff - triple(1, 2, 3, 3) / math.sqrt(12)).max() < ATOL

    def test_expansions_reconstruct_s3(self, n3):
        q = by_key(n3)
        for name, coeffs in s3_expansions().items():
            recon = sum(c * q[k] for k, c in coeffs.items())
            assert np.abs(recon - P(name)).max() < ATOL, name

    def test_p132_line(self, n3):
        q = by_key(n3)
        recon = q[((3, 0), 1, 1)] + w(3) * q[((2, 1), 1, 2)] + w(3, 2) * q[((2, 1), 2, 1)]
        assert np.abs(recon - P("132")).max() < ATOL

    def test_closure_25(self, n3):
        assert closure_deviation(n3) <= ATOL

    def test_hermitian_conjugation_and_trace(self, n3):
        q = by_key(n3)
        for (nu, k, l), m in q.items():
            assert np.abs(m.conj().T - q[(nu, l, k)]).max() < ATOL
            if k == l:
                assert abs(np.trace(m) - (nu[0] - nu[1] + 1)) < ATOL


class TestN4:
    def test_count_and_order(self, n4):
        assert len(n4) == 14 == 1 + 9 + 4
        assert [(q.partition.nu1, q.partition.nu2, q.k, q.ell) for q in n4] == N4_ORDER

    def test_routes(self, n4):
        for q in n4:
            assert len(q.routes) >= 2
            assert q.max_route_deviation <= ATOL, (str(q), q.routes)

    def test_closure_196(self, n4):
        assert closure_deviation(n4) <= ATOL

    def test_completeness(self, n4):
        assert np.abs(sum(q.matrix for q in n4 if q.k == q.ell) - np.eye(16)).max() < ATOL

    def test_q31_22_forms(self, n4):
        q = by_key(n4)[((3, 1), 2, 2)]
        c1, c2, c3 = P("2341"), P("2413"), P("3421")
        first = (np.eye(16) + c1 @ c1 - c2 @ c2 - c3 @ c3) / 4
        second = (P("3214") + P("1432") - c1 - c1 @ c1 @ c1) / 4
        assert np.abs(q - first).max() < ATOL and np.abs(q - second).max() < ATOL

    def test_q40_akl(self, n4):
        g = n4_generators(SpinSystem(4))
        want = -np.eye(16) / 4 + sum(g.A_plus) / 6 + sum(g.L) / 12
        assert np.abs(by_key(n4)[((4, 0), 1, 1)] - want).max() < ATOL

    def test_q22_closure_example(self, n4):
        q = by_key(n4)
        assert np.abs(q[((2, 2), 1, 2)] @ q[((2, 2), 2, 1)] - q[((2, 2), 1, 1)]).max() < ATOL

    def test_dagger(self, n4):
        q = n4[3]
        assert q.dagger().key == (q.partition.as_tuple(), q.ell, q.k)


class TestGenerators:
    def test_definitions(self, sys4):
        g = n4_generators(sys4)
        assert np.abs(g.L[0] - (np.eye(16) + dot(1, 2, 4)) @ (np.eye(16) + dot(3, 4, 4)) / 4).max() < ATOL
        assert np.abs(g.L[0] - P("2143")).max() < ATOL
        assert np.abs(g.K[0] - 1j * (P("1342") - P("1423"))).max() < ATOL
        assert np.abs(g.A_plus[0] - (P("2134") + P("1243"))).max() < ATOL
        assert np.abs(g.K[3] + triple(1, 2, 3, 4) / 2).max() < ATOL

    def test_invariants(self, sys4):
        g = n4_generators(sys4)
        for m in g.A_plus + g.A_minus + g.K + g.L:
            assert np.abs(m - m.conj().T).max() < ATOL
        for k in g.K:
            assert abs(np.trace(k)) < ATOL
        for l_op in g.L:
            assert np.abs(l_op @ l_op - np.eye(16)).max() < ATOL

    def test_wrong_size(self, sys3):
        with pytest.raises(DomainError):
            n4_generators(sys3)


class TestSecondJFamily:
    def test_commutes_n5(self):
        s = SpinSystem(5)
        comps = total_j(5)
        for a in range(1, 5):
            for b in range(1, 5):
                q = q_from_second_j(a, b, s).matrix
                for c in comps:
                    assert np.abs(q @ c - c @ q).max() < 1e-10

    def test_closure_example_n4(self, sys4):
        q = lambda a, b: q_from_second_j(a, b, sys4).matrix  # noqa: E731
        assert np.abs(q(1, 2) @ q(2, 3) - q(1, 3)).max() < 1e-10
        assert np.abs(q(1, 2) @ q(1, 3)).max() < 1e-10

    def test_trace_n6(self):
        s = SpinSystem(6)
        for lam in range(1, 6):
            assert abs(np.trace(q_from_second_j(lam, lam, s).matrix) - 5) < 1e-10

    def test_agrees_with_n4_basis(self, sys4, n4):
        q = by_key(n4)
        for a in (1, 2, 3):
            for b in (1, 2, 3):
                assert np.abs(q_from_second_j(a, b, sys4).matrix - q[((3, 1), a, b)]).max() < 1e-10

    def test_family_routes(self):
        ops = q_second_j(SpinSystem(5))
        assert len(ops) == 16
        assert all(q.routes_agree(1e-10) for q in ops)

    def test_label_range(self, sys4):
        with pytest.raises(DomainError):
            q_from_second_j(0, 1, sys4)
        with pytest.raises(DomainError):
            q_from_second_j(1, 4, sys4)


class TestRotationInvariance:
    @pytest.mark.parametrize("n", [3, 4])
    def test_random_rotations(self, n, rng):
        ops = rff_basis(SpinSystem(n))
        for _ in range(20):
            u = rotation(rng.normal(size=3), rng.uniform(0, 2 * math.pi), n)
            for q in ops:
                assert np.abs(u @ q.matrix - q.matrix @ u).max() < 1e-10

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_generators(self, n):
        for q in rff_basis(SpinSystem(n)):
            for c in total_j(n):
                assert np.abs(q.matrix @ c - c @ q.matrix).max() < 1e-10

    def test_too_large(self):
        with pytest.raises(DomainError):
            rff_basis(SpinSystem(5))


class TestExpand:
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_identity(self, n):
        coeffs = expand_rff(np.eye(2 ** n), SpinSystem(n))
        for (nu, k, l), c in coeffs.items():
            assert abs(c - (1 if k == l else 0)) < 1e-12

    def test_p231(self, sys3):
        coeffs = expand_rff(P("231"), sys3)
        want = {((3, 0), 1, 1): 1, ((2, 1), 1, 1): w(3), ((2, 1), 2, 2): w(3, 2)}
        for key, c in coeffs.items():
            assert abs(c - want.get(key, 0)) < 1e-12, key

    def test_round_trip(self, sys4, rng):
        perms = ["".join(map(str, p)) for p in itertools.permutations(range(1, 5))]
        mix = sum((rng.normal() + 1j * rng.normal()) * P(p) for p in perms)
        coeffs = expand_rff(mix, sys4)
        assert np.abs(from_expansion(coeffs, sys4) - mix).max() < 1e-10

    def test_non_rff(self, sys3):
        op = site(Z, 1, 3)
        with pytest.raises(PreconditionError) as info:
            expand_rff(op, sys3)
        assert info.value.deviation == pytest.approx(rff_defect(op, sys3))
        assert info.value.deviation > 0.5


def test_permutation_span_rank():
    mats = np.array([perm_loop(p).ravel() for p in itertools.permutations(range(1, 5))])
    sv = np.linalg.svd(mats, compute_uv=False)
    assert int(np.sum(sv > 1e-10)) == 14


def test_report(n4):
    rep = rff_report(n4)
    assert len(rep) == 14 and all(r["construction_routes_agree"] for r in rep)
    assert rep[0]["routes"][0] == "even"
