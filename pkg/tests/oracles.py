"""Independent reference computations used as test oracles."""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import numpy as np
from scipy.integrate import quad

from ruminkit._poly import Poly
from ruminkit.lie_core import GroupPoint, bch_multiply, heisenberg

X, Y, Z = (Poly.var(3, i) for i in range(3))


def gauss_solve(M: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Solve a square system by plain Gaussian elimination; None when singular."""
    n = len(M)
    a = [list(map(Fraction, row)) + [Fraction(r)] for row, r in zip(M, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col] / a[col][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] / a[i][i] for i in range(n)]


def bfs_optimum(c, A, b):
    """min c.x s.t. A x = b, x >= 0 by enumerating every basic feasible solution.

    Assumes A has full row rank and the feasible set is bounded. Returns None if infeasible.
    """
    m, n = len(A), len(c)
    best = None
    for cols in combinations(range(n), m):
        B = [[A[i][j] for j in cols] for i in range(m)]
        xb = gauss_solve(B, b)
        if xb is None or any(v < 0 for v in xb):
            continue
        val = sum((Fraction(c[j]) * v for j, v in zip(cols, xb)), Fraction(0))
        if best is None or val < best:
            best = val
    return best


def bfs_optimum_inequalities(c, A, b):
    """min c.x s.t. A x <= b, x >= 0, via slack variables and BFS enumeration."""
    m = len(A)
    Aeq = [list(row) + [int(i == k) for k in range(m)] for i, row in enumerate(A)]
    return bfs_optimum(list(c) + [0] * m, Aeq, b)


def act_symbolic(frame, op, polys):
    """Apply an operator matrix to a column of polynomials through the frame fields.

    Each PBW monomial acts rightmost factor first; no operator composition is used.
    """
    nv = frame.dim
    out = []
    for row in op.entries:
        acc = Poly(nv)
        for e, f in zip(row, polys):
            for mono, c in e.terms.items():
                g = f
                for i in reversed(e.ring.monomial_word(mono)):
                    g = frame.apply(i, g)
                acc = acc + g * Poly.const(nv, c)
        out.append(acc)
    return out


# Heisenberg line integrals, written out in exponential coordinates


def theta3(x, v):
    """Contact form dz + (y dx - x dy)/2 in exponential coordinates."""
    return v[2] + 0.5 * (x[1] * v[0] - x[0] * v[1])


def omega_from_theta(rc, f1, f2):
    """E_0^1 coordinates of f1 theta^1 + f2 theta^2."""
    out = []
    for a in range(rc.dim(1)):
        e = rc.e0_vector(1, a)
        s = e[0] + e[1]
        out.append((f1 if e[0] else f2) * Poly.const(3, 1 / s))
    return out


def g_by_hand(f1, f2):
    # (d omega)_{12} = X1 f2 - X2 f1 and (d theta)_{12} = -1
    x1f2 = f2.diff(0) - Poly.const(3, Fraction(1, 2)) * Y * f2.diff(2)
    x2f1 = f1.diff(1) + Poly.const(3, Fraction(1, 2)) * X * f1.diff(2)
    return -(x1f2 - x2f1)


def correction_by_quad(g, vertices):
    total = 0.0
    for a, b in zip(vertices[:-1], vertices[1:]):
        a, b = np.array(a, dtype=float), np.array(b, dtype=float)
        v = b - a
        total += quad(lambda s: float(g(list(a + s * v))) * theta3(a + s * v, v), 0, 1, epsabs=1e-13)[0]
    return total


def horizontal_loop(h):
    """Two commutator squares of opposite orientation: closed and horizontal."""
    alg = heisenberg(1)
    steps = [(h, 0, 0), (0, h, 0), (-h, 0, 0), (0, -h, 0), (0, h, 0), (h, 0, 0), (0, -h, 0), (-h, 0, 0)]
    p = GroupPoint([Fraction(1, 3), Fraction(-1, 5), Fraction(1, 7)])
    out = [p]
    for s in steps:
        p = bch_multiply(alg, p, GroupPoint(s))
        out.append(p)
    return [list(q.coords) for q in out]
