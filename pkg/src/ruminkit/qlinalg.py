"""Exact linear algebra over the rationals on dense list-of-lists matrices."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


def zeros(rows: int, cols: int) -> Matrix:
    return [[Fraction(0)] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = Fraction(1)
    return m


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in r] for r in rows]


def shape(a: Matrix, cols: int | None = None) -> tuple[int, int]:
    """Shape of ``a``; ``cols`` disambiguates matrices with zero rows."""
    if not a:
        return 0, cols or 0
    return len(a), len(a[0])


def transpose(a: Matrix, cols: int = 0) -> Matrix:
    if not a:
        return [[] for _ in range(cols)]
    return [list(r) for r in zip(*a)]


def matmul(a: Matrix, b: Matrix, inner: int | None = None, cols: int | None = None) -> Matrix:
    n = len(a)
    k = len(b) if inner is None else inner
    m = (len(b[0]) if b else 0) if cols is None else cols
    out = zeros(n, m)
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            x = ai[t]
            if x:
                bt = b[t]
                for j in range(m):
                    y = bt[j]
                    if y:
                        oi[j] += x * y
    return out


def add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scale(a: Matrix, s) -> Matrix:
    s = Fraction(s)
    return [[x * s for x in r] for r in a]


def is_zero(a: Matrix) -> bool:
    return all(x == 0 for r in a for x in r)


def rref(a: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns; pivots chosen leftmost, topmost."""
    m = [list(r) for r in a]
    rows = len(m)
    cols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: Matrix) -> int:
    if not a or not a[0]:
        return 0
    return len(rref(a)[1])


def nullspace(a: Matrix, cols: int | None = None) -> list[list[Fraction]]:
    """Basis of {x : a x = 0}, one vector per free column, in column order."""
    n = cols if cols is not None else (len(a[0]) if a else 0)
    if not a:
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    r, pivots = rref(a)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, pc in enumerate(pivots):
            v[pc] = -r[row][f]
        basis.append(v)
    return basis


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(r) + e for r, e in zip(a, identity(n))]
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in r]


def solve(a: Matrix, b: Sequence) -> list[Fraction]:
    """Solve a square nonsingular system exactly."""
    n = len(a)
    aug = [list(r) + [Fraction(x)] for r, x in zip(a, b)]
    r, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n] for row in r]


def pinv(a: Matrix, cols: int | None = None) -> Matrix:
    """Moore-Penrose pseudo-inverse through a full-rank factorization a = C F."""
    rows = len(a)
    n = cols if cols is not None else (len(a[0]) if a else 0)
    if rows == 0 or n == 0:
        return zeros(n, rows)
    r, pivots = rref(a)
    k = len(pivots)
    if k == 0:
        return zeros(n, rows)
    f = r[:k]
    c = [[a[i][p] for p in pivots] for i in range(rows)]
    ft = transpose(f)
    ct = transpose(c)
    ffi = inverse(matmul(f, ft))
    cci = inverse(matmul(ct, c))
    return matmul(matmul(ft, ffi), matmul(cci, ct))


def matvec(a: Matrix, v: Sequence) -> list[Fraction]:
    return [sum((x * y for x, y in zip(r, v)), Fraction(0)) for r in a]
