"""Permutations of the sites, their operators, and cyclic-group machinery.

A permutation is written by its image list ``i_1 i_2 ... i_N``, so
``Permutation.parse("231")`` sends 1 -> 2, 2 -> 3, 3 -> 1.  Its operator puts
the content of site ``p(l)`` onto site ``l``::

    P_p |x_1 x_2 ... x_N> = |x_p(1) x_p(2) ... x_p(N)>

This is the action under which ``P_231`` equals the Pauli expression
``[I + s1.s2 + s2.s3 + s3.s1 + i s1.(s2 x s3)] / 4`` and under which the
Fourier kets built from ``Sigma_-(lam)`` are eigenvectors of ``P_23..N1``
with eigenvalue ``omega_N^lam``.  The module checks this once at import.
"""
from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import ConstructionError, DomainError, SizeError
from .linalg_core import Tolerance, DEFAULT_TOL, frozen, max_abs
from .spin_system import SpinSystem, omega, sigma_dot, sigma_triple

ENUMERATION_CAP = 8


@dataclass(frozen=True, order=True)
class Permutation:
    """Bijection of ``{1..N}`` stored as its image tuple."""

    image: tuple[int, ...]

    def __post_init__(self):
        image = tuple(int(i) for i in self.image)
        object.__setattr__(self, "image", image)
        if sorted(image) != list(range(1, len(image) + 1)):
            raise DomainError(f"{image} is not a permutation of 1..{len(image)}")

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        """From ``"2341"`` or, for ten or more sites, ``"2,3,...,1"``."""
        text = text.strip()
        parts = text.split(",") if "," in text else list(text)
        return cls(tuple(int(p) for p in parts))

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def cyclic_shift(cls, n: int) -> "Permutation":
        """``P_23..N1``."""
        return cls(tuple(range(2, n + 1)) + (1,))

    @classmethod
    def transposition(cls, n: int, k: int, l: int) -> "Permutation":
        image = list(range(1, n + 1))
        image[k - 1], image[l - 1] = l, k
        return cls(tuple(image))

    @property
    def n(self) -> int:
        return len(self.image)

    def __str__(self) -> str:
        sep = "," if self.n >= 10 else ""
        return sep.join(str(i) for i in self.image)

    def __call__(self, i: int) -> int:
        return self.image[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Product matching operator multiplication.

        ``perm_operator(p * q) == perm_operator(p) @ perm_operator(q)``: on
        kets ``q`` acts first, and on labels ``(p * q)(l) = q(p(l))``.
        """
        if self.n != other.n:
            raise DomainError("cannot compose permutations of different degree")
        return Permutation(tuple(other.image[i - 1] for i in self.image))

    def __pow__(self, k: int) -> "Permutation":
        if k < 0:
            return self.inverse() ** (-k)
        out = Permutation.identity(self.n)
        for _ in range(k):
            out = out * self
        return out

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for pos, img in enumerate(self.image, start=1):
            inv[img - 1] = pos
        return Permutation(tuple(inv))

    def cycles(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for start in range(1, self.n + 1):
            if start in seen:
                continue
            cyc, i = [], start
            while i not in seen:
                seen.add(i)
                cyc.append(i)
                i = self(i)
            out.append(tuple(cyc))
        return out

    @property
    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    @property
    def parity(self) -> int:
        return (-1) ** (self.n - len(self.cycles()))

    @property
    def order(self) -> int:
        return math.lcm(*self.cycle_type)

    def is_identity(self) -> bool:
        return self.image == tuple(range(1, self.n + 1))


@dataclass(frozen=True)
class ConjugacyClass:
    cycle_type: tuple[int, ...]
    members: tuple[Permutation, ...]

    @property
    def label(self) -> str:
        """Exponent notation such as ``21^2`` or ``1^4``."""
        parts = []
        for length in sorted(set(self.cycle_type), reverse=True):
            count = self.cycle_type.count(length)
            parts.append(f"{length}" if count == 1 else f"{length}^{count}")
        return "".join(parts)

    def __len__(self) -> int:
        return len(self.members)


def all_permutations(n: int) -> Iterator[Permutation]:
    if n > ENUMERATION_CAP:
        raise SizeError(f"refusing to enumerate S_{n}; cap is {ENUMERATION_CAP}")
    for image in itertools.permutations(range(1, n + 1)):
        yield Permutation(image)


def perm_targets(p: Permutation) -> np.ndarray:
    """Index map of ``P_p``: basis state ``i`` goes to ``targets[i]``."""
    n = p.n
    index = np.arange(2 ** n)
    shifts = n - 1 - np.arange(n)
    bits = (index[:, None] >> shifts) & 1
    new_bits = bits[:, np.array(p.image) - 1]
    return (new_bits << shifts).sum(axis=1)


def conjugate_by(p: Permutation, m: np.ndarray) -> np.ndarray:
    """``P_p m P_p^dagger`` by index gathering, without forming ``P_p``."""
    source = np.empty(2 ** p.n, dtype=int)
    source[perm_targets(p)] = np.arange(2 ** p.n)
    return m[np.ix_(source, source)]


def apply_permutation(p: Permutation, vecs: np.ndarray) -> np.ndarray:
    """``P_p @ vecs`` for a vector or a matrix of columns."""
    out = np.empty_like(vecs)
    out[perm_targets(p)] = vecs
    return out


@functools.lru_cache(maxsize=256)
def _perm_matrix(image: tuple[int, ...]) -> np.ndarray:
    dim = 2 ** len(image)
    m = np.zeros((dim, dim), dtype=complex)
    m[perm_targets(Permutation(image)), np.arange(dim)] = 1.0
    return frozen(m)


def perm_operator(p: Permutation, sys: SpinSystem) -> np.ndarray:
    """Unitary operator of ``p`` on the qubit space."""
    if p.n != sys.n_sites:
        raise DomainError(f"permutation of degree {p.n} does not act on {sys.n_sites} sites")
    return _perm_matrix(p.image)


def transposition_operator(k: int, l: int, sys: SpinSystem) -> np.ndarray:
    """``(I + sigma_k . sigma_l) / 2``."""
    if k == l:
        raise DomainError("a transposition needs two distinct sites")
    for s in (k, l):
        if not 1 <= s <= sys.n_sites:
            raise IndexError(f"site {s} out of range 1..{sys.n_sites}")
    return (sys.identity() + sigma_dot(k, l, sys)) / 2


def _class_sort_key(cycle_type: tuple[int, ...]):
    moved = sum(c for c in cycle_type if c > 1)
    return (moved, -cycle_type[0])


def conjugacy_classes(n: int) -> list[ConjugacyClass]:
    """Classes of ``S_n`` grouped by cycle type, identity first."""
    groups: dict[tuple[int, ...], list[Permutation]] = {}
    for p in all_permutations(n):
        groups.setdefault(p.cycle_type, []).append(p)
    return [ConjugacyClass(ct, tuple(groups[ct])) for ct in sorted(groups, key=_class_sort_key)]


def generated_subgroup(generator: Permutation) -> list[Permutation]:
    """``[g, g^2, ..., g^order = e]``."""
    out, cur = [], generator
    while True:
        out.append(cur)
        if cur.is_identity():
            return out
        cur = cur * generator


def cyclic_subgroups(n: int, order: int) -> list[tuple[Permutation, frozenset]]:
    """Distinct cyclic subgroups of ``S_n`` of the given order.

    Each subgroup is reported once, with its lexicographically smallest
    generator, and the list is sorted by that generator.
    """
    found: dict[frozenset, Permutation] = {}
    for p in all_permutations(n):
        if p.order != order:
            continue
        members = frozenset(generated_subgroup(p))
        if members not in found or p < found[members]:
            found[members] = p
    return sorted(((g, m) for m, g in found.items()), key=lambda pair: pair[0])


def cyclic_operator(sys: SpinSystem) -> np.ndarray:
    """``C = P_23..N1``."""
    return perm_operator(Permutation.cyclic_shift(sys.n_sites), sys)


def fourier_projectors(generator: Permutation, sys: SpinSystem) -> list[np.ndarray]:
    """``P_c(lam) = (1/N) sum_k omega_N^(-k lam) C^k`` for ``lam = 1..N`` (list index lam-1)."""
    n = sys.n_sites
    if generator.order != n:
        raise DomainError(f"generator {generator} has order {generator.order}, need {n}")
    c = perm_operator(generator, sys)
    powers = [sys.identity()]
    for _ in range(n - 1):
        powers.append(powers[-1] @ c)
    # C^N = identity = powers[0]
    out = []
    for lam in range(1, n + 1):
        acc = np.zeros((sys.dim, sys.dim), dtype=complex)
        for k in range(1, n + 1):
            acc += omega(n, -k * lam) * powers[k % n]
        out.append(acc / n)
    return out


def _validate_convention(tol: Tolerance = DEFAULT_TOL) -> None:
    sys = SpinSystem(3)
    pauli = (sys.identity() + sigma_dot(1, 2, sys) + sigma_dot(2, 3, sys)
             + sigma_dot(3, 1, sys) + 1j * sigma_triple(1, 2, 3, sys)) / 4
    dev = max_abs(perm_operator(Permutation.parse("231"), sys) - pauli)
    if dev > tol.abs_tol:  # pragma: no cover - guards the site-action convention
        raise ConstructionError("permutation site action disagrees with its Pauli form",
                                name="P_231", deviation=dev)
    for k, l in ((1, 2), (2, 3), (1, 3)):
        p = Permutation.transposition(3, k, l)
        dev = max_abs(perm_operator(p, sys) - transposition_operator(k, l, sys))
        if dev > tol.abs_tol:  # pragma: no cover
            raise ConstructionError("transposition operator disagrees with its Pauli form",
                                    name=str(p), deviation=dev)


_validate_convention()
