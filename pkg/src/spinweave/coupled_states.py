"""Coupled angular momentum kets.

Covers the maximal-spin ladder, the cyclically labelled second-largest spin
family for any N, its non-orthogonal "pyramid" constituents, and the
explicit N = 3 and N = 4 lists (transcribed with their printed signs).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import DomainError, PreconditionError
from .linalg_core import DEFAULT_TOL, Tolerance, complex_pair, max_abs
from .spin_system import (SpinSystem, half_integer, lowering_at, omega,
                          total_angular_momentum)


@dataclass
class CoupledKet:
    j: Fraction
    m: Fraction
    lam: Optional[int]
    amplitudes: np.ndarray

    def to_json(self) -> dict:
        return {"j": float(self.j), "m": float(self.m), "lambda": self.lam,
                "amplitudes": [complex_pair(z) for z in self.amplitudes]}


@dataclass
class PyramidKet:
    ell: int
    j2: Fraction
    m2: Fraction
    amplitudes: np.ndarray


def _check_m(m, j) -> Fraction:
    m = half_integer(m)
    if abs(m) > j or (j - m).denominator != 1:
        raise DomainError(f"m={m} is not a projection of j={j}")
    return m


def top_state(sys: SpinSystem) -> np.ndarray:
    """``|0_N>``, all spins up."""
    v = np.zeros(sys.dim, dtype=complex)
    v[0] = 1.0
    return v


def _lower_times(v: np.ndarray, k: int, sys: SpinSystem) -> np.ndarray:
    _, _, j_minus = total_angular_momentum(sys)
    for _ in range(k):
        v = j_minus @ v
    return v


def max_j_state(m, sys: SpinSystem) -> CoupledKet:
    """``|N/2, m>`` from repeated lowering of ``|0_N>``.

    Normalisation ``sqrt((j+m)! / ((2j)! (j-m)!))``.
    """
    j1 = Fraction(sys.n_sites, 2)
    m = _check_m(m, j1)
    k = int(j1 - m)
    norm = math.sqrt(math.factorial(int(j1 + m))
                     / (math.factorial(int(2 * j1)) * math.factorial(k)))
    return CoupledKet(j1, m, None, norm * _lower_times(top_state(sys), k, sys))


def fourier_weights(n: int) -> np.ndarray:
    """Rows ``lam = 1..N-1`` of ``omega_N^(lam l)``, ``l = 1..N``."""
    return np.array([[omega(n, lam * l) for l in range(1, n + 1)] for lam in range(1, n)])


def check_weights(weights: np.ndarray, n: int, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Validate a ``(N-1) x N`` coefficient array for the graded lowering operators.

    Rows must be orthogonal with squared norm ``N`` and sum to zero, i.e.
    together with the all-ones row they form ``sqrt(N)`` times a unitary.
    """
    w = np.asarray(weights, dtype=complex)
    if w.shape != (n - 1, n):
        raise DomainError(f"weights must have shape {(n - 1, n)}, got {w.shape}")
    dev = max(max_abs(w @ w.conj().T / n - np.eye(n - 1)), max_abs(w.sum(axis=1)))
    if dev > tol.abs_tol:
        raise PreconditionError("weights do not complete the all-ones row to a unitary",
                                deviation=dev)
    return w


def graded_lowering(row: np.ndarray, sys: SpinSystem) -> np.ndarray:
    """``sum_l row[l] J_{l,-}``."""
    return sum(row[l - 1] * lowering_at(l, sys) for l in range(1, sys.n_sites + 1))


def second_j_states(m, lam: int, sys: SpinSystem, weights=None) -> CoupledKet:
    """``|j2, m; lam>`` with ``j2 = N/2 - 1``.

    ``weights`` replaces the Fourier phases ``omega_N^(lam l)`` with the rows
    of any other admissible coefficient array (see :func:`check_weights`).
    """
    n = sys.n_sites
    if n < 2:
        raise DomainError("the second-largest spin needs at least two sites")
    if lam == n:
        raise DomainError("lambda = N labels the maximal spin, not the second-largest family")
    if not 1 <= lam <= n - 1:
        raise DomainError(f"lambda {lam} out of range 1..{n - 1}")
    j2 = Fraction(n, 2) - 1
    m = _check_m(m, j2)
    w = fourier_weights(n) if weights is None else check_weights(weights, n)
    k = int(j2 - m)
    norm = math.sqrt(math.factorial(int(j2 + m))
                     / (n * math.factorial(int(2 * j2)) * math.factorial(k)))
    v = graded_lowering(w[lam - 1], sys) @ _lower_times(top_state(sys), k, sys)
    return CoupledKet(j2, m, lam, norm * v)


def second_j_from_max(m, lam: int, sys: SpinSystem) -> np.ndarray:
    """Same ket, reached as ``Sigma_-(lam) |j1, m+1>`` with its own prefactor."""
    n = sys.n_sites
    j1 = Fraction(n, 2)
    j2 = j1 - 1
    m = _check_m(m, j2)
    pref = math.sqrt((2 * j1 - 1) / ((j1 + m + 1) * (j1 + m)))
    lower = graded_lowering(fourier_weights(n)[lam - 1], sys)
    return pref * (lower @ max_j_state(m + 1, sys).amplitudes)


def pyramid_states(ell: int, m2, sys: SpinSystem) -> PyramidKet:
    """``|ell; j2, m2>``: a single lowered site, lowered further by ``J_-``.

    Their Fourier sum over ``ell`` reproduces :func:`second_j_states`.
    """
    n = sys.n_sites
    if not 1 <= ell <= n:
        raise IndexError(f"site {ell} out of range 1..{n}")
    j2 = Fraction(n, 2) - 1
    m2 = _check_m(m2, j2)
    k = int(j2 - m2)
    norm = math.sqrt(math.factorial(int(j2 + m2))
                     / (math.factorial(int(2 * j2)) * math.factorial(k)))
    v = _lower_times(lowering_at(ell, sys) @ top_state(sys), k, sys)
    return PyramidKet(ell, j2, m2, norm * v)


def pyramid_overlap(ell: int, ell_prime: int, j2, m2, m2_prime) -> float:
    """Closed form of ``<ell; j2, m2 | ell'; j2, m2'>``."""
    if m2 != m2_prime:
        return 0.0
    return float((ell == ell_prime) + Fraction(j2 - m2) / (j2 + m2 + 1))


def _ket(bits: str) -> np.ndarray:
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1.0
    return v


def n3_states(m, lam: int) -> CoupledKet:
    """The listed ``j = 1/2`` kets of three spins."""
    m = half_integer(m)
    if m not in (Fraction(1, 2), Fraction(-1, 2)) or lam not in (1, 2):
        raise DomainError("N=3 j=1/2 kets need m = +-1/2 and lambda in {1, 2}")
    w = lambda p: omega(3, p)  # noqa: E731
    if m > 0:
        v = (_ket("100") * w(lam) + _ket("010") * w(2 * lam) + _ket("001")) / math.sqrt(3)
    else:
        v = -(_ket("011") * w(lam) + _ket("101") * w(2 * lam) + _ket("110")) / math.sqrt(3)
    return CoupledKet(Fraction(1, 2), m, lam, v)


def n4_states(j, m, lam: int) -> CoupledKet:
    """The listed ``j = 1`` (lambda 1..3) and ``j = 0`` (lambda 1..2) kets of four spins."""
    j = half_integer(j)
    m = half_integer(m)
    if j == 1:
        if lam not in (1, 2, 3) or m not in (-1, 0, 1):
            raise DomainError("N=4 j=1 kets need m in {-1, 0, 1} and lambda in {1, 2, 3}")
        w = lambda p: omega(4, p)  # noqa: E731
        if m == 1:
            v = (_ket("1000") * w(lam) + _ket("0100") * w(2 * lam)
                 + _ket("0010") * w(3 * lam) + _ket("0001")) / 2
        elif m == 0:
            v = ((_ket("1001") - _ket("0110")) * (w(lam) + 1)
                 + (_ket("0101") - _ket("1010")) * (w(2 * lam) + 1)
                 + (_ket("0011") - _ket("1100")) * (w(3 * lam) + 1)) / math.sqrt(8)
        else:
            v = -(_ket("0111") * w(lam) + _ket("1011") * w(2 * lam)
                  + _ket("1101") * w(3 * lam) + _ket("1110")) / 2
    elif j == 0:
        if lam not in (1, 2) or m != 0:
            raise DomainError("N=4 j=0 kets need m = 0 and lambda in {1, 2}")
        w = lambda p: omega(3, p)  # noqa: E731
        v = ((_ket("1001") + _ket("0110")) * w(lam)
             + (_ket("0101") + _ket("1010")) * w(2 * lam)
             + (_ket("0011") + _ket("1100"))) / math.sqrt(6)
    else:
        raise DomainError("explicit N=4 kets are listed for j = 1 and j = 0 only")
    return CoupledKet(j, m, lam, v)


def listed_states(n: int) -> list[CoupledKet]:
    """Every ket of the N = 3 or N = 4 symmetric coupling, j desc, m desc, lambda asc.

    The maximal-spin kets come from :func:`max_j_state`.
    """
    sys = SpinSystem(n)
    top = Fraction(n, 2)
    out = [max_j_state(top - k, sys) for k in range(n + 1)]
    if n == 3:
        out += [n3_states(m, lam) for m in (Fraction(1, 2), Fraction(-1, 2)) for lam in (1, 2)]
    elif n == 4:
        out += [n4_states(1, m, lam) for m in (1, 0, -1) for lam in (1, 2, 3)]
        out += [n4_states(0, 0, lam) for lam in (1, 2)]
    else:
        raise DomainError("explicit state lists exist for N = 3 and N = 4 only")
    return out


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """``|<a|b>|^2`` for unit vectors; insensitive to global phase."""
    return float(abs(np.vdot(a, b)) ** 2)
