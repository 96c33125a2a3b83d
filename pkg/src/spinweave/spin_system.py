"""Spin operators on the N-site qubit space.

Basis ordering: site 1 is the most significant qubit, ``|0>`` is m = +1/2 and
``|1>`` is m = -1/2.  All operators are in units with hbar = 1.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError, SizeError
from .linalg_core import frozen, max_sites

SIGMA = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}
# single-site J_- = |1><0|
SIGMA_LOWER = np.array([[0, 0], [1, 0]], dtype=complex)
AXES = ("x", "y", "z")


def omega(d: int, power: int = 1) -> complex:
    """``exp(2 pi i power / d)``, exact for the quarter turns."""
    power %= d
    if (4 * power) % d == 0:
        return (1, 1j, -1, -1j)[(4 * power) // d]
    return complex(np.exp(2j * np.pi * power / d))


def half_integer(x) -> Fraction:
    """Parse ``x`` (int, float, Fraction or ``"1/2"``) as an exact half-integer."""
    value = Fraction(x).limit_denominator(64) if not isinstance(x, str) else Fraction(x)
    if (2 * value).denominator != 1:
        raise DomainError(f"{x!r} is not a half-integer")
    return value


@dataclass(frozen=True)
class SpinSystem:
    """N spin-1/2 constituents."""

    n_sites: int

    def __post_init__(self):
        if not isinstance(self.n_sites, (int, np.integer)) or self.n_sites < 1:
            raise DomainError(f"n_sites must be a positive integer, got {self.n_sites!r}")
        if self.n_sites > max_sites():
            raise SizeError(f"n_sites={self.n_sites} exceeds the site cap {max_sites()}")

    @property
    def dim(self) -> int:
        return 2 ** self.n_sites

    @property
    def j_values(self) -> list[Fraction]:
        """Allowed total spins N/2, N/2 - 1, ... down to 0 or 1/2."""
        top = Fraction(self.n_sites, 2)
        return [top - k for k in range(self.n_sites // 2 + 1)]

    def identity(self) -> np.ndarray:
        return np.eye(self.dim, dtype=complex)

    def basis_ket(self, bits: str) -> np.ndarray:
        """Product ket from a bit string such as ``"0110"``."""
        if len(bits) != self.n_sites or set(bits) - {"0", "1"}:
            raise DomainError(f"{bits!r} is not a {self.n_sites}-site bit string")
        v = np.zeros(self.dim, dtype=complex)
        v[int(bits, 2)] = 1.0
        return v


@dataclass(frozen=True)
class VectorOperator:
    """Three Cartesian components of a vector operator."""

    x: np.ndarray
    y: np.ndarray
    z: np.ndarray

    def __iter__(self):
        return iter((self.x, self.y, self.z))

    def dot(self, a) -> np.ndarray:
        """``a . V`` for a numerical 3-vector ``a``."""
        return a[0] * self.x + a[1] * self.y + a[2] * self.z

    def component(self, axis: str) -> np.ndarray:
        return getattr(self, axis)

    def dagger(self) -> "VectorOperator":
        return VectorOperator(self.x.conj().T, self.y.conj().T, self.z.conj().T)


def _site_op(op: np.ndarray, site: int, n: int) -> np.ndarray:
    left = np.eye(2 ** (site - 1), dtype=complex)
    right = np.eye(2 ** (n - site), dtype=complex)
    return np.kron(np.kron(left, op), right)


@functools.lru_cache(maxsize=None)
def _pauli(axis: str, site: int, n: int) -> np.ndarray:
    return frozen(_site_op(SIGMA[axis], site, n))


@functools.lru_cache(maxsize=None)
def _lower(site: int, n: int) -> np.ndarray:
    return frozen(_site_op(SIGMA_LOWER, site, n))


def _check_site(site: int, sys: SpinSystem) -> None:
    if not 1 <= site <= sys.n_sites:
        raise IndexError(f"site {site} out of range 1..{sys.n_sites}")


def pauli_at(axis: str, site: int, sys: SpinSystem) -> np.ndarray:
    """Pauli matrix ``sigma_axis`` acting on one site of the full space."""
    if axis not in SIGMA:
        raise DomainError(f"axis must be one of x, y, z; got {axis!r}")
    _check_site(site, sys)
    return _pauli(axis, site, sys.n_sites)


def lowering_at(site: int, sys: SpinSystem) -> np.ndarray:
    """Single-site lowering operator ``J_{site,-}``."""
    _check_site(site, sys)
    return _lower(site, sys.n_sites)


def spin_vector(site: int, sys: SpinSystem) -> VectorOperator:
    """``J_site = sigma_site / 2``."""
    return VectorOperator(*(pauli_at(a, site, sys) / 2 for a in AXES))


def sigma_dot(k: int, l: int, sys: SpinSystem) -> np.ndarray:
    """``sigma_k . sigma_l``."""
    return sum(pauli_at(a, k, sys) @ pauli_at(a, l, sys) for a in AXES)


def sigma_triple(a: int, b: int, c: int, sys: SpinSystem) -> np.ndarray:
    """Scalar triple product ``sigma_a . (sigma_b x sigma_c)``."""
    out = np.zeros((sys.dim, sys.dim), dtype=complex)
    for i, j, k in itertools.permutations(range(3)):
        sign = 1 if (i, j, k) in ((0, 1, 2), (1, 2, 0), (2, 0, 1)) else -1
        out += sign * (pauli_at(AXES[i], a, sys) @ pauli_at(AXES[j], b, sys)
                       @ pauli_at(AXES[k], c, sys))
    return out


@functools.lru_cache(maxsize=None)
def _total(n: int):
    sys = SpinSystem(n)
    comps = [frozen(sum(pauli_at(a, l, sys) for l in range(1, n + 1)) / 2) for a in AXES]
    j = VectorOperator(*comps)
    j_sq = frozen(j.x @ j.x + j.y @ j.y + j.z @ j.z)
    j_minus = frozen(j.x - 1j * j.y)
    return j, j_sq, j_minus


def total_angular_momentum(sys: SpinSystem):
    """``(J, J^2, J_-)`` for the whole system."""
    return _total(sys.n_sites)


def graded_sigma(lam: int, sys: SpinSystem):
    """Fourier-graded spin ``Sigma(lam) = sum_l omega_N^(lam l) J_l`` and its lowering part.

    ``lam = N`` gives back the total angular momentum.
    """
    n = sys.n_sites
    if not 1 <= lam <= n:
        raise IndexError(f"lambda {lam} out of range 1..{n}")
    phases = [omega(n, lam * l) for l in range(1, n + 1)]
    comps = [sum(ph * pauli_at(a, l, sys) for ph, l in zip(phases, range(1, n + 1))) / 2
             for a in AXES]
    sigma_minus = sum(ph * lowering_at(l, sys) for ph, l in zip(phases, range(1, n + 1)))
    return VectorOperator(*comps), sigma_minus


def casimir_eigenvalue(j) -> float:
    j = Fraction(j)
    return float(j * (j + 1))


def check_j(j, sys: SpinSystem) -> Fraction:
    value = half_integer(j)
    if value not in sys.j_values:
        allowed = ", ".join(str(v) for v in sys.j_values)
        raise DomainError(f"j={value} is not allowed for N={sys.n_sites}; choose from {allowed}")
    return value


def casimir_projector(j, sys: SpinSystem) -> np.ndarray:
    """Projector onto total spin ``j`` as a polynomial in ``J^2``."""
    j = check_j(j, sys)
    _, j_sq, _ = total_angular_momentum(sys)
    eye = sys.identity()
    target = casimir_eigenvalue(j)
    out = eye.copy()
    for other in sys.j_values:
        if other == j:
            continue
        c = casimir_eigenvalue(other)
        out = out @ (j_sq - c * eye) / (target - c)
    return out
