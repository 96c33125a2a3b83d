import math
from fractions import Fraction

import numpy as np
import pytest

from _oracles import j_squared, total_j
from spinweave.errors import DegeneracyError, DomainError, PreconditionError
from spinweave.mlo import build_csco
from spinweave.schur_weyl import (TwoRowPartition, decompose, hook_dimension, integer_partitions,
                                  multiplicity, two_row_partitions)
from spinweave.spin_system import SpinSystem


def brute_partitions(n):
    # independent enumeration: all non-increasing tuples via recursion on the last part
    out = set()

    def grow(prefix, remaining):
        if remaining == 0:
            out.add(tuple(prefix))
            return
        cap = prefix[-1] if prefix else remaining
        for k in range(1, min(cap, remaining) + 1):
            grow(prefix + [k], remaining - k)

    grow([], n)
    return out


def count_tableaux(shape):
    # fill 1..n in order: each number goes to the end of a row that stays a partition
    shape = list(shape)

    def rec(filled):
        if filled == shape:
            return 1
        total = 0
        for i, target in enumerate(shape):
            if filled[i] < target and (i == 0 or filled[i - 1] > filled[i]):
                filled[i] += 1
                total += rec(filled)
                filled[i] -= 1
        return total

    return rec([0] * len(shape))


class TestPartitions:
    def test_n4(self):
        assert [p.as_tuple() for p in two_row_partitions(4)] == [(4, 0), (3, 1), (2, 2)]

    def test_n3(self):
        assert [p.as_tuple() for p in two_row_partitions(3)] == [(3, 0), (2, 1)]

    def test_n1(self):
        assert [p.as_tuple() for p in two_row_partitions(1)] == [(1, 0)]

    @pytest.mark.parametrize("n", range(1, 11))
    def test_count(self, n):
        assert len(two_row_partitions(n)) == (n // 2 + 1 if n % 2 == 0 else (n + 1) // 2)

    def test_invalid(self):
        with pytest.raises(DomainError):
            two_row_partitions(0)
        with pytest.raises(DomainError):
            TwoRowPartition(1, 2)

    def test_fields(self):
        p = TwoRowPartition(3, 1)
        assert (p.n, p.j, p.r, p.s) == (4, 1, 3, 3)
        assert TwoRowPartition.from_j(Fraction(1, 2), 3) == TwoRowPartition(2, 1)

    @pytest.mark.parametrize("n", range(1, 11))
    def test_dimension_sum(self, n):
        assert sum(p.r * p.s for p in two_row_partitions(n)) == 2 ** n

    @pytest.mark.parametrize("n", range(2, 11))
    def test_s_matches_hook(self, n):
        for p in two_row_partitions(n):
            shape = [p.nu1, p.nu2] if p.nu2 else [p.nu1]
            assert p.s == hook_dimension(shape)


class TestMultiplicity:
    def test_examples(self):
        assert multiplicity(1, 4) == 3
        assert multiplicity(Fraction(1, 2), 5) == 5
        assert multiplicity("1/2", 3) == 2

    @pytest.mark.parametrize("n", range(1, 9))
    def test_maximal_spin_unique(self, n):
        assert multiplicity(Fraction(n, 2), n) == 1

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_matches_casimir_eigenvalue_count(self, n):
        vals = np.linalg.eigvalsh(j_squared(n))
        for p in two_row_partitions(n):
            j = float(p.j)
            count = int(np.sum(np.abs(vals - j * (j + 1)) < 1e-8))
            assert count == multiplicity(p.j, n) * p.r

    @pytest.mark.parametrize("j", [3, Fraction(3, 2), -1])
    def test_domain(self, j):
        with pytest.raises(DomainError):
            multiplicity(j, 4)


class TestHook:
    def test_examples(self):
        assert hook_dimension([2, 1]) == 2
        assert all(hook_dimension([n]) == 1 for n in range(1, 8))

    def test_sum_of_squares_n4(self):
        assert sum(hook_dimension(p) ** 2 for p in integer_partitions(4)) == 24

    @pytest.mark.parametrize("n", range(1, 7))
    def test_sum_of_squares(self, n):
        assert sum(hook_dimension(p) ** 2 for p in integer_partitions(n)) == math.factorial(n)

    @pytest.mark.parametrize("n", range(1, 8))
    def test_partitions_against_brute(self, n):
        got = list(integer_partitions(n))
        assert len(got) == len(set(got)) and set(got) == brute_partitions(n)

    @pytest.mark.parametrize("shape", [(3, 2), (2, 2, 1), (4, 1, 1), (3, 3), (2, 1, 1, 1)])
    def test_against_tableau_count(self, shape):
        assert hook_dimension(shape) == count_tableaux(shape)

    @pytest.mark.parametrize("bad", [[], [1, 2], [2, 0], [-1]])
    def test_invalid(self, bad):
        with pytest.raises(DomainError):
            hook_dimension(bad)


class TestDecompose:
    def test_n2(self, sys2):
        jx, jy, jz = total_j(2)
        d = decompose(sys2, [j_squared(2), jz])
        assert [b.partition.as_tuple() for b in d.blocks] == [(2, 0), (1, 1)]
        assert [len(b.states) for b in d.blocks] == [3, 1]
        assert [float(s.m) for s in d.blocks[0].states] == [1.0, 0.0, -1.0]

    def test_n3_with_k(self, sys3):
        csco = build_csco("sym", sys3)
        d = decompose(sys3, csco.operators, lambda_of=csco.lambda_of)
        assert [(b.partition.as_tuple(), len(b.states)) for b in d.blocks] == [((3, 0), 4), ((2, 1), 4)]
        lams = sorted((float(s.m), s.lam) for s in d.blocks[1].states)
        assert lams == [(-0.5, 1), (-0.5, 2), (0.5, 1), (0.5, 2)]

    def test_n4_sym(self, sys4):
        csco = build_csco("sym", sys4)
        d = decompose(sys4, csco.operators, lambda_of=csco.lambda_of)
        assert [len(b.states) for b in d.blocks] == [5, 9, 2]
        basis = np.column_stack([b.basis for b in d.blocks])
        assert np.abs(basis.conj().T @ basis - np.eye(16)).max() < 1e-10

    def test_block_bases_are_eigenvectors(self, sys4):
        csco = build_csco("sym", sys4)
        d = decompose(sys4, csco.operators)
        for b in d.blocks:
            for st in b.states:
                for op, val in zip(csco.operators, st.eigenvalues):
                    assert np.abs(op @ st.vector - val * st.vector).max() < 1e-10

    def test_incomplete_csco(self, sys3):
        with pytest.raises(DegeneracyError) as info:
            decompose(sys3, [j_squared(3), total_j(3)[2]])
        assert info.value.multiplicity == 2
        assert info.value.label[0] == pytest.approx(0.75)

    def test_first_two_must_be_casimir_and_jz(self, sys2):
        jx, _, jz = total_j(2)
        with pytest.raises(PreconditionError):
            decompose(sys2, [jz, j_squared(2)])
        with pytest.raises(PreconditionError):
            decompose(sys2, [j_squared(2)])

    def test_json(self, sys3):
        csco = build_csco("sym", sys3)
        out = decompose(sys3, csco.operators, lambda_of=csco.lambda_of).to_json()
        assert out[1]["nu"] == [2, 1] and out[1]["j"] == 0.5 and out[1]["r"] == 2 and out[1]["s"] == 2
        assert {lab["lambda"] for lab in out[1]["labels"]} == {1, 2}
        assert sum(ob["r"] * ob["s"] for ob in out) == 8

    def test_block_lookup(self, sys2):
        d = decompose(sys2, [j_squared(2), total_j(2)[2]])
        assert d.block(TwoRowPartition(1, 1)).states[0].m == 0
        with pytest.raises(KeyError):
            d.block(TwoRowPartition(3, 0))
