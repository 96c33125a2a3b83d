"""Dense complex matrix kernel.

Operators are plain ``numpy`` arrays of dtype ``complex128``.  Everything
here is deterministic: eigenvalues come out sorted, degenerate eigenspaces are
given a canonical basis, and eigenvectors carry a fixed phase.
"""
from __future__ import annotations

import functools
import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

from .errors import CommutationError, PreconditionError, SizeError

HARD_MAX_SITES = 12

# canonical Gram-Schmidt accepts a seed once its residual exceeds this; see
# canonical_basis for why a single pass always completes
_SEED_THRESHOLD = 1e-3
_NOISE_FLOOR = 1e-14


@dataclass(frozen=True)
class Tolerance:
    """Absolute tolerance for equality tests plus a clustering tolerance."""

    abs_tol: float = 1e-10
    degeneracy_tol: float = 1e-8

    def __post_init__(self):
        if self.abs_tol < 0 or self.degeneracy_tol < 0:
            raise ValueError("tolerances must be non-negative")
        if not self.abs_tol < self.degeneracy_tol:
            raise ValueError(
                f"abs_tol ({self.abs_tol}) must be smaller than "
                f"degeneracy_tol ({self.degeneracy_tol})"
            )


DEFAULT_TOL = Tolerance()


def max_sites() -> int:
    """Site cap, overridable through ``SPINWEAVE_MAX_N`` but never above 12."""
    raw = os.environ.get("SPINWEAVE_MAX_N")
    if raw is None:
        return HARD_MAX_SITES
    try:
        value = int(raw)
    except ValueError:
        raise SizeError(f"SPINWEAVE_MAX_N must be an integer, got {raw!r}")
    return max(1, min(value, HARD_MAX_SITES))


def check_dimension(dim: int) -> None:
    cap = 2 ** max_sites()
    if dim > cap:
        raise SizeError(f"matrix dimension {dim} exceeds the cap {cap}")


def max_abs(m) -> float:
    """Max-entry norm; 0.0 for empty input."""
    m = np.asarray(m)
    return float(np.max(np.abs(m))) if m.size else 0.0


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def frozen(m: np.ndarray) -> np.ndarray:
    """Mark an array read-only so cached operators keep value semantics."""
    m.setflags(write=False)
    return m


def _require_square(m: np.ndarray, name: str = "matrix") -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise PreconditionError(f"{name} must be square, got shape {m.shape}")


def kron(a, b) -> np.ndarray:
    """Kronecker product of two square matrices."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    _require_square(a, "a")
    _require_square(b, "b")
    check_dimension(a.shape[0] * b.shape[0])
    return np.kron(a, b)


def kron_all(factors: Sequence[np.ndarray]) -> np.ndarray:
    return functools.reduce(kron, factors, np.eye(1, dtype=complex))


def normality_defect(m: np.ndarray) -> float:
    return max_abs(m @ m.conj().T - m.conj().T @ m)


def is_hermitian(m: np.ndarray, tol: float = DEFAULT_TOL.abs_tol) -> bool:
    return max_abs(m - m.conj().T) <= tol


def fix_phase(v: np.ndarray, tol: float = DEFAULT_TOL.abs_tol) -> np.ndarray:
    """Rotate ``v`` so that its first entry with modulus above ``tol`` is real positive."""
    idx = np.flatnonzero(np.abs(v) > tol)
    if idx.size == 0:
        return v
    z = v[idx[0]]
    return v * (abs(z) / z)


def canonical_basis(basis: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Deterministic orthonormal basis of ``span(basis)``.

    Standard basis vectors are projected onto the subspace in index order and
    Gram-Schmidt orthogonalised; a seed is kept when its residual exceeds
    ``1e-3``.  The remaining projector always has some diagonal entry of at
    least ``1/dim`` and residuals never grow, so one pass suffices for any
    dimension up to the site cap.  The result depends only on the subspace,
    not on the particular basis handed in.
    """
    basis = np.asarray(basis, dtype=complex)
    dim, k = basis.shape
    out = np.zeros((dim, k), dtype=complex)
    found = 0
    for i in range(dim):
        if found == k:
            break
        w = basis @ basis[i].conj()
        if found:
            prev = out[:, :found]
            w = w - prev @ (prev.conj().T @ w)
            # second pass keeps orthogonality at machine precision
            w = w - prev @ (prev.conj().T @ w)
        norm = np.linalg.norm(w)
        if norm > _SEED_THRESHOLD:
            out[:, found] = fix_phase(w / norm, tol.abs_tol)
            found += 1
    if found < k:  # pragma: no cover - excluded by the trace argument above
        raise PreconditionError("could not build a canonical basis; input not orthonormal?")
    return out


def _cmp_complex(tol: float):
    def cmp(a: complex, b: complex) -> int:
        if abs(a.real - b.real) >= tol:
            return -1 if a.real < b.real else 1
        if abs(a.imag - b.imag) >= tol:
            return -1 if a.imag < b.imag else 1
        return 0

    return cmp


def _split_sorted(indices: list[int], coords: np.ndarray, tol: float) -> list[list[int]]:
    indices = sorted(indices, key=lambda i: coords[i])
    groups = [[indices[0]]]
    for prev, cur in zip(indices, indices[1:]):
        if coords[cur] - coords[prev] < tol:
            groups[-1].append(cur)
        else:
            groups.append([cur])
    return groups


def _clusters(values: np.ndarray, tol: float) -> list[list[int]]:
    """Group eigenvalues whose real and imaginary parts chain within ``tol``."""
    if len(values) == 0:
        return []
    groups = []
    for by_real in _split_sorted(list(range(len(values))), values.real, tol):
        groups.extend(_split_sorted(by_real, values.imag, tol))
    return groups


def eigenspaces(m, tol: Tolerance = DEFAULT_TOL) -> list[tuple[complex, np.ndarray]]:
    """Eigenvalue clusters of a normal matrix with canonical orthonormal bases.

    Returns ``(eigenvalue, basis)`` pairs sorted by (real, imaginary) part;
    ``basis`` holds the eigenvectors as columns.  Eigenvalues of Hermitian
    input are returned as floats.
    """
    m = np.asarray(m, dtype=complex)
    _require_square(m)
    defect = normality_defect(m)
    if defect > tol.abs_tol:
        raise PreconditionError(
            f"matrix is not normal: max|[m, m^dagger]| = {defect:.3e}", deviation=defect
        )
    hermitian = is_hermitian(m, tol.abs_tol)
    if hermitian:
        values, vectors = np.linalg.eigh((m + m.conj().T) / 2)
        values = values.astype(complex)
    else:
        # the complex Schur form of a normal matrix is diagonal
        t, vectors = scipy.linalg.schur(m, output="complex")
        values = np.diag(t).copy()
    spaces = []
    for group in _clusters(values, tol.degeneracy_tol):
        value = complex(np.mean(values[group]))
        basis = canonical_basis(vectors[:, group], tol)
        spaces.append((value, basis))
    key = functools.cmp_to_key(_cmp_complex(tol.degeneracy_tol))
    spaces.sort(key=lambda pair: key(pair[0]))
    if hermitian:
        spaces = [(float(v.real), b) for v, b in spaces]
    return spaces


def eigensystem(m, tol: Tolerance = DEFAULT_TOL) -> list[tuple[complex, np.ndarray]]:
    """Flat list of ``(eigenvalue, unit eigenvector)`` pairs of a normal matrix."""
    return [(value, basis[:, i]) for value, basis in eigenspaces(m, tol)
            for i in range(basis.shape[1])]


def joint_eigenbasis(ops: Sequence[np.ndarray], tol: Tolerance = DEFAULT_TOL):
    """Common eigenspaces of pairwise commuting normal operators.

    The space is split by the first operator, each piece is refined by the
    second one, and so on.  Returns ``(label, basis)`` pairs where ``label``
    is the tuple of eigenvalues in operator order.
    """
    ops = [np.asarray(op, dtype=complex) for op in ops]
    if not ops:
        raise ValueError("joint_eigenbasis needs at least one operator")
    dim = ops[0].shape[0]
    for i, a in enumerate(ops):
        _require_square(a, f"operator {i}")
        if a.shape[0] != dim:
            raise PreconditionError(f"operator {i} has dimension {a.shape[0]}, expected {dim}")
        defect = normality_defect(a)
        if defect > tol.abs_tol:
            raise PreconditionError(
                f"operator {i} is not normal: max|[m, m^dagger]| = {defect:.3e}",
                deviation=defect,
            )
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            dev = max_abs(commutator(ops[i], ops[j]))
            if dev > tol.abs_tol:
                raise CommutationError(
                    f"operators {i} and {j} do not commute: max|[A, B]| = {dev:.3e}",
                    pair=(i, j),
                    deviation=dev,
                )

    blocks = [((), np.eye(dim, dtype=complex))]
    for op in ops:
        refined = []
        for label, basis in blocks:
            sub = basis.conj().T @ op @ basis
            for value, vecs in eigenspaces(sub, tol):
                refined.append((label + (value,), basis @ vecs))
        blocks = refined
    return [(label, canonical_basis(basis, tol)) for label, basis in blocks]


def as_basis(basis) -> np.ndarray:
    """Accept a ``dim x k`` array of columns or a sequence of vectors."""
    if isinstance(basis, np.ndarray) and basis.ndim == 2:
        return basis.astype(complex, copy=False)
    return np.column_stack([np.asarray(v, dtype=complex) for v in basis])


def orthonormality_defect(basis: np.ndarray) -> float:
    return max_abs(basis.conj().T @ basis - np.eye(basis.shape[1]))


def restrict(op, basis, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Matrix of ``op`` in an orthonormal basis: ``result[k, l] = <b_k|op|b_l>``."""
    basis = as_basis(basis)
    defect = orthonormality_defect(basis)
    if defect > tol.abs_tol:
        raise PreconditionError(
            f"basis is not orthonormal: max|B^dagger B - I| = {defect:.3e}", deviation=defect
        )
    return basis.conj().T @ np.asarray(op, dtype=complex) @ basis


def subspace_basis(projector: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Canonical orthonormal basis of the range of a Hermitian projector."""
    for value, vecs in eigenspaces(projector, tol):
        if abs(value - 1.0) < tol.degeneracy_tol:
            return vecs
    return np.zeros((projector.shape[0], 0), dtype=complex)


# -- JSON form ---------------------------------------------------------------

def complex_pair(z: complex) -> list[float]:
    """``[re, im]`` with 15 significant digits.

    Components below ``1e-14`` are rounding noise for the O(1) quantities
    handled here and are written as zero, which keeps output byte-stable.
    """
    z = complex(z)
    return [clean_float(z.real), clean_float(z.imag)]


def clean_float(x: float, digits: int = 15) -> float:
    x = float(x)
    if abs(x) < _NOISE_FLOOR:
        return 0.0
    return float(f"{x:.{digits}g}") + 0.0


def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=complex)
    _require_square(m)
    return {"dim": int(m.shape[0]), "entries": [complex_pair(z) for z in m.ravel()]}


def matrix_from_json(obj: dict) -> np.ndarray:
    dim = int(obj["dim"])
    entries = obj["entries"]
    if len(entries) != dim * dim:
        raise ValueError(f"expected {dim * dim} entries, got {len(entries)}")
    flat = np.array([complex(re, im) for re, im in entries], dtype=complex)
    return flat.reshape(dim, dim)
