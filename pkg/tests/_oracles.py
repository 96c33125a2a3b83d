"""Independent reference constructions used by the tests.

Nothing here calls into spinweave: operators are assembled from explicit
loops over basis states or from chained ``np.kron`` of 2x2 matrices.
"""
import cmath
import itertools
import math

import numpy as np

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"x": X, "y": Y, "z": Z}


def w(d, p=1):
    return cmath.exp(2j * math.pi * p / d)


def ket(bits):
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1.0
    return v


def chain(*factors):
    out = np.array([[1.0 + 0j]])
    for f in factors:
        out = np.kron(out, f)
    return out


def site(op, k, n):
    return chain(*[op if i == k else I2 for i in range(1, n + 1)])


def dot(k, l, n):
    return sum(site(s, k, n) @ site(s, l, n) for s in (X, Y, Z))


def triple(a, b, c, n):
    """sigma_a . (sigma_b x sigma_c) via the Levi-Civita symbol."""
    ops = (X, Y, Z)
    out = 0
    for i, j, k in itertools.permutations(range(3)):
        eps = np.linalg.det(np.eye(3)[[i, j, k]])
        out = out + eps * site(ops[i], a, n) @ site(ops[j], b, n) @ site(ops[k], c, n)
    return out


def perm_loop(image):
    """Operator sending |x_1..x_N> to |x_p(1)..x_p(N)> by an explicit loop."""
    n = len(image)
    m = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for bits in itertools.product("01", repeat=n):
        out = "".join(bits[image[l] - 1] for l in range(n))
        m[int(out, 2), int("".join(bits), 2)] = 1.0
    return m


def total_j(n):
    comps = [sum(site(s, l, n) for l in range(1, n + 1)) / 2 for s in (X, Y, Z)]
    return comps


def j_squared(n):
    jx, jy, jz = total_j(n)
    return jx @ jx + jy @ jy + jz @ jz


def j_minus(n):
    lower = np.array([[0, 0], [1, 0]], dtype=complex)
    return sum(site(lower, l, n) for l in range(1, n + 1))


def spin_projector_by_eigh(j, n):
    """Projector on total spin j from an eigendecomposition of J^2."""
    vals, vecs = np.linalg.eigh(j_squared(n))
    sel = vecs[:, np.abs(vals - j * (j + 1)) < 1e-6]
    return sel @ sel.conj().T


def rotation(axis, angle, n):
    """exp(-i angle n.J) built as a product of single-site 2x2 rotations."""
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    gen = axis[0] * X + axis[1] * Y + axis[2] * Z
    u = math.cos(angle / 2) * I2 - 1j * math.sin(angle / 2) * gen
    return chain(*[u] * n)


def phase_free_equal(a, b, tol=1e-10):
    return abs(abs(np.vdot(a, b)) - 1) < tol


def cg(j1, m1, j2, m2, j, m):
    from sympy import S
    from sympy.physics.quantum.cg import CG
    return float(CG(S(j1), S(m1), S(j2), S(m2), S(j), S(m)).doit())
