import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from _oracles import X, Z, ket, perm_loop
from spinweave.errors import CommutationError, PreconditionError, SizeError
from spinweave.linalg_core import (DEFAULT_TOL, Tolerance, canonical_basis, eigensystem,
                                   eigenspaces, fix_phase, joint_eigenbasis, kron, kron_all,
                                   matrix_from_json, matrix_to_json, max_sites, restrict,
                                   subspace_basis, complex_pair)


def random_unitary(rng, d):
    q, r = np.linalg.qr(rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)))
    return q * (np.diag(r) / abs(np.diag(r)))


def random_hermitian(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (a + a.conj().T) / 2


class TestTolerance:
    def test_defaults(self):
        assert DEFAULT_TOL.abs_tol == 1e-10
        assert DEFAULT_TOL.degeneracy_tol == 1e-8

    def test_abs_must_be_below_degeneracy(self):
        with pytest.raises(ValueError):
            Tolerance(1e-6, 1e-8)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            Tolerance(-1.0, 1e-8)


class TestKron:
    def test_identity(self):
        assert np.array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))

    def test_bit_flip_on_both_sites(self):
        assert np.allclose(kron(X, X) @ ket("00"), ket("11"))

    def test_entry_formula(self, rng):
        a = rng.normal(size=(3, 3))
        b = rng.normal(size=(2, 2))
        out = kron(a, b)
        for i, j, k, l in np.ndindex(3, 3, 2, 2):
            assert out[i * 2 + k, j * 2 + l] == a[i, j] * b[k, l]

    def test_mixed_product(self, rng):
        a, b, c, d = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(4))
        assert np.allclose(kron(a, b) @ kron(c, d), kron(a @ c, b @ d), atol=1e-12)

    def test_associative_exactly(self, rng):
        # integer entries keep every product exact, so equality is bitwise
        a, b, c = (rng.integers(-9, 9, size=(2, 2)) + 1j * rng.integers(-9, 9, size=(2, 2))
                   for _ in range(3))
        assert np.array_equal(kron(kron(a, b), c), kron(a, kron(b, c)))

    def test_rejects_non_square(self):
        with pytest.raises(PreconditionError):
            kron(np.ones((2, 3)), np.eye(2))

    def test_size_cap(self):
        big = np.eye(2 ** 7)
        with pytest.raises(SizeError):
            kron(big, big)

    def test_kron_all(self):
        assert kron_all([Z, Z, Z]).shape == (8, 8)


class TestSiteCap:
    def test_env_lowers_cap(self, monkeypatch):
        monkeypatch.setenv("SPINWEAVE_MAX_N", "5")
        assert max_sites() == 5

    def test_env_cannot_raise_above_hard_cap(self, monkeypatch):
        monkeypatch.setenv("SPINWEAVE_MAX_N", "40")
        assert max_sites() == 12

    def test_spin_system_respects_env(self, monkeypatch):
        from spinweave import SpinSystem
        monkeypatch.setenv("SPINWEAVE_MAX_N", "3")
        with pytest.raises(SizeError):
            SpinSystem(4)


class TestEigensystem:
    def test_diag(self):
        values = [v for v, _ in eigensystem(np.diag([1.0, -1.0]))]
        assert values == [-1.0, 1.0]

    def test_triplet_projector(self):
        swap = perm_loop((2, 1))
        values = sorted(v for v, _ in eigensystem((np.eye(4) + swap) / 2))
        assert np.allclose(values, [0, 1, 1, 1])
        # rank by direct construction: the three symmetric product combinations
        sym = np.column_stack([ket("00"), ket("11"), (ket("01") + ket("10")) / np.sqrt(2)])
        assert np.allclose(sym @ sym.conj().T, (np.eye(4) + swap) / 2)

    def test_cyclic_on_j_half_block(self, sys3):
        from spinweave.mlo import spin_block_basis
        from spinweave.sym_group import Permutation, perm_operator
        from _oracles import w
        b = spin_block_basis(0.5, sys3)
        sub = restrict(perm_operator(Permutation.parse("231"), sys3), b)
        spaces = eigenspaces(sub)
        got = sorted((round(np.angle(v), 9), basis.shape[1]) for v, basis in spaces)
        want = sorted((round(np.angle(w(3, p)), 9), 2) for p in (1, 2))
        assert got == want

    def test_non_normal_rejected(self):
        with pytest.raises(PreconditionError) as info:
            eigensystem(np.array([[0, 1], [0, 0]]))
        assert info.value.deviation == pytest.approx(1.0)

    def test_ordering_real_then_imag(self):
        m = np.diag([1j, -1, 1, -1j, 0])
        values = [v for v, _ in eigensystem(m)]
        assert values == [-1, -1j, 0, 1j, 1]

    def test_phase_convention(self, rng):
        h = random_hermitian(rng, 6)
        for _, v in eigensystem(h):
            first = v[np.flatnonzero(np.abs(v) > 1e-10)[0]]
            assert abs(first.imag) < 1e-12 and first.real > 0

    @settings(max_examples=25, deadline=None)
    @given(st.integers(min_value=1, max_value=12), st.integers(min_value=0, max_value=10 ** 6))
    def test_hermitian_reconstruction(self, d, seed):
        h = random_hermitian(np.random.default_rng(seed), d)
        pairs = eigensystem(h)
        vecs = np.column_stack([v for _, v in pairs])
        recon = sum(val * np.outer(v, v.conj()) for val, v in pairs)
        assert np.abs(recon - h).max() <= 1e-10
        assert np.abs(vecs.conj().T @ vecs - np.eye(d)).max() <= 1e-10

    @settings(max_examples=20, deadline=None)
    @given(st.integers(min_value=2, max_value=8), st.integers(min_value=0, max_value=10 ** 6))
    def test_normal_matrix_eigenpairs(self, d, seed):
        rng = np.random.default_rng(seed)
        u = random_unitary(rng, d)
        m = u @ np.diag(np.exp(1j * rng.uniform(0, 6, d))) @ u.conj().T
        for val, v in eigensystem(m):
            assert np.abs(m @ v - val * v).max() <= 1e-10

    def test_degenerate_basis_is_basis_independent(self, rng):
        # the same projector written in two different bases gives the same output
        u = random_unitary(rng, 5)
        p = u[:, :3] @ u[:, :3].conj().T
        mix = random_unitary(rng, 3)
        alt = (u[:, :3] @ mix)
        a = canonical_basis(u[:, :3])
        b = canonical_basis(alt)
        assert np.abs(a - b).max() < 1e-12
        assert np.abs(subspace_basis(p) - a).max() < 1e-10


class TestJointEigenbasis:
    def test_two_sites(self, sys2):
        from spinweave import total_angular_momentum
        j, j_sq, _ = total_angular_momentum(sys2)
        spaces = joint_eigenbasis([j_sq, j.z])
        labels = sorted((round(a, 9), round(b, 9)) for (a, b), _ in spaces)
        assert labels == [(0, 0), (2, -1), (2, 0), (2, 1)]
        assert all(b.shape[1] == 1 for _, b in spaces)

    def test_union_orthonormal_and_complete(self, sys3):
        from spinweave.mlo import build_csco
        spaces = joint_eigenbasis(build_csco("sym", sys3).operators)
        basis = np.column_stack([b for _, b in spaces])
        assert basis.shape == (8, 8)
        assert np.abs(basis.conj().T @ basis - np.eye(8)).max() < 1e-10

    def test_n4_sym_sixteen_labels(self, sys4):
        from spinweave.mlo import build_csco
        spaces = joint_eigenbasis(build_csco("sym", sys4).operators)
        assert len(spaces) == 16 and all(b.shape[1] == 1 for _, b in spaces)

    def test_non_commuting_pair_named(self):
        with pytest.raises(CommutationError) as info:
            joint_eigenbasis([np.diag([1.0, 0, 0]), Z_embed(), X_embed()])
        assert info.value.pair == (1, 2)
        assert info.value.deviation == pytest.approx(2.0)

    def test_sequential_refinement_labels(self):
        a = np.diag([1.0, 1.0, 2.0])
        b = np.diag([5.0, 3.0, 3.0])
        labels = [lab for lab, _ in joint_eigenbasis([a, b])]
        assert labels == [(1.0, 3.0), (1.0, 5.0), (2.0, 3.0)]


def Z_embed():
    out = np.zeros((3, 3), dtype=complex)
    out[1:, 1:] = Z
    return out


def X_embed():
    out = np.zeros((3, 3), dtype=complex)
    out[1:, 1:] = X
    return out


class TestRestrict:
    def test_identity(self, rng):
        u = random_unitary(rng, 6)[:, :4]
        assert np.allclose(restrict(np.eye(6), u), np.eye(4), atol=1e-12)

    def test_entries(self, rng):
        u = random_unitary(rng, 4)[:, :2]
        m = random_hermitian(rng, 4)
        r = restrict(m, [u[:, 0], u[:, 1]])
        assert r[0, 1] == pytest.approx(np.vdot(u[:, 0], m @ u[:, 1]))

    def test_non_orthonormal_rejected(self):
        with pytest.raises(PreconditionError):
            restrict(np.eye(2), np.array([[1.0, 1.0], [0.0, 1.0]]))

    def test_spectrum_submultiset(self, rng):
        u = random_unitary(rng, 6)
        vals = np.array([1.0, 2.0, 3.0, 4.0, 5.0, 6.0])
        m = u @ np.diag(vals) @ u.conj().T
        sub = np.linalg.eigvalsh(restrict(m, u[:, [1, 4]]))
        assert np.allclose(sub, [2.0, 5.0])


class TestJson:
    def test_round_trip(self, rng):
        m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        obj = json.loads(json.dumps(matrix_to_json(m)))
        assert obj["dim"] == 4 and len(obj["entries"]) == 16
        assert np.abs(matrix_from_json(obj) - m).max() < 1e-14

    def test_row_major(self):
        m = np.array([[1, 2], [3, 4j]])
        assert matrix_to_json(m)["entries"] == [[1.0, 0.0], [2.0, 0.0], [3.0, 0.0], [0.0, 4.0]]

    def test_pair_digits_and_noise(self):
        assert complex_pair(1 / 3 + 0j) == [0.333333333333333, 0.0]
        assert complex_pair(-1e-17 + 2e-20j) == [0.0, 0.0]

    def test_fix_phase_zero_vector(self):
        v = np.zeros(3, dtype=complex)
        assert np.array_equal(fix_phase(v), v)
