"""Finite-difference discretization of the Rumin differential.

Each left-invariant field X_i = sum_a P_ia(x) d/dx_a becomes
sum_a diag(P_ia) D_a with D_a the centred difference along coordinate a, and a
PBW monomial becomes the product of these matrices in the same order.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
import scipy.sparse as sp

from ..lie_core import FrameExpression, left_invariant_frame
from ..opalg import EnvelopingElement
from ..rumin import RuminComplex
from .grid import Grid, GridError

Multi = tuple[int, ...]


class Lattice:
    """Unbounded lattice origin + multi * spacing carrying the frame stencils."""

    def __init__(self, frame: FrameExpression, origin: Sequence[Fraction], spacing: Sequence[Fraction],
                 exact: bool = False):
        self.frame = frame
        self.n = frame.dim
        self.origin = tuple(Fraction(o) for o in origin)
        self.spacing = tuple(Fraction(s) for s in spacing)
        self.exact = exact
        self._fields: dict[tuple[int, Multi], dict[Multi, object]] = {}
        self._words: dict[tuple[tuple[int, ...], Multi], dict[Multi, object]] = {}
        self._num = (lambda v: v) if exact else float
        self._half_inv = [self._num(1 / (2 * s)) for s in self.spacing]

    @classmethod
    def of_grid(cls, grid: Grid, exact: bool = False, frame: FrameExpression | None = None) -> Lattice:
        return cls(frame or left_invariant_frame(grid.alg), grid.origin, grid.spacing, exact)

    def coord(self, p: Multi):
        if self.exact:
            return tuple(o + k * s for o, k, s in zip(self.origin, p, self.spacing))
        return tuple(float(o) + k * float(s) for o, k, s in zip(self.origin, p, self.spacing))

    def field_row(self, i: int, p: Multi) -> dict[Multi, object]:
        key = (i, p)
        hit = self._fields.get(key)
        if hit is not None:
            return hit
        x = self.coord(p)
        row: dict[Multi, object] = {}
        for a, poly in enumerate(self.frame.coeffs[i]):
            if poly.is_zero():
                continue
            c = self._num(poly(x))
            if c == 0:
                continue
            w = c * self._half_inv[a]
            up = p[:a] + (p[a] + 1,) + p[a + 1:]
            dn = p[:a] + (p[a] - 1,) + p[a + 1:]
            row[up] = row.get(up, 0) + w
            row[dn] = row.get(dn, 0) - w
        self._fields[key] = row
        return row

    def word_row(self, word: tuple[int, ...], p: Multi) -> dict[Multi, object]:
        """Stencil of X_{w1}(X_{w2}(...(X_{wr} f))) at p."""
        if not word:
            return {p: 1}
        key = (word, p)
        hit = self._words.get(key)
        if hit is not None:
            return hit
        out: dict[Multi, object] = {}
        for q, v in self.field_row(word[0], p).items():
            for q2, v2 in self.word_row(word[1:], q).items():
                out[q2] = out.get(q2, 0) + v * v2
        out = {q: v for q, v in out.items() if v != 0}
        self._words[key] = out
        return out

    def element_row(self, e: EnvelopingElement, p: Multi) -> dict[Multi, object]:
        out: dict[Multi, object] = {}
        ring = e.ring
        for m, c in e.terms.items():
            c = self._num(c)
            for q, v in self.word_row(ring.monomial_word(m), p).items():
                out[q] = out.get(q, 0) + c * v
        return out


def stencil_margin(rc: RuminComplex, k: int) -> int:
    """Widest reach of the d_c^k stencil: the largest derivative count of any term."""
    return max((sum(m) for r in rc.dc[k].entries for e in r for m in e.terms), default=0)


@dataclass
class DiscreteOperator:
    """Sparse map from degree-k grid forms to degree-(k+1) grid forms.

    DOF index = point_index * basis_dim + basis. Rows at points inside the stencil
    margin are zero: the operator is only meaningful on ``valid`` points.
    """

    grid: Grid
    degree: int
    src_dim: int
    dst_dim: int
    margin: int
    matrix: sp.csr_matrix
    valid: np.ndarray
    exact_rows: dict[int, dict[int, Fraction]] | None = None
    provenance: str = ""

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    def apply(self, values: np.ndarray) -> np.ndarray:
        """Apply to an (npoints, src_dim) array, returning (npoints, dst_dim)."""
        out = self.matrix @ np.asarray(values, dtype=float).reshape(-1)
        return out.reshape(self.grid.npoints, self.dst_dim)

    def apply_exact(self, values) -> list[list[Fraction]]:
        if self.exact_rows is None:
            raise ValueError("operator was assembled in float mode")
        flat = [Fraction(v) for row in values for v in row]
        out = [[Fraction(0)] * self.dst_dim for _ in range(self.grid.npoints)]
        for r, row in self.exact_rows.items():
            out[r // self.dst_dim][r % self.dst_dim] = sum((v * flat[c] for c, v in row.items()), Fraction(0))
        return out

    def transpose_exact(self) -> dict[int, dict[int, Fraction]]:
        if self.exact_rows is None:
            raise ValueError("operator was assembled in float mode")
        cols: dict[int, dict[int, Fraction]] = {}
        for r, row in self.exact_rows.items():
            for c, v in row.items():
                cols.setdefault(c, {})[r] = v
        return cols


def discretize_dc(rc: RuminComplex, grid: Grid, k: int, exact: bool = False,
                  lattice: Lattice | None = None) -> DiscreteOperator:
    if not 0 <= k < rc.n:
        raise ValueError(f"no Rumin differential in degree {k}")
    if grid.alg is not rc.alg and grid.alg.name != rc.alg.name:
        raise ValueError("grid and complex use different algebras")
    r = stencil_margin(rc, k)
    valid = grid.margin_mask(r)
    if not valid.any():
        raise GridError(f"grid {grid.shape} has no point with stencil margin {r} for d_c^{k}")
    lattice = lattice or Lattice.of_grid(grid, exact=exact)
    src, dst = rc.dim(k), rc.dim(k + 1)
    dc = rc.dc[k]
    rows_i, cols_i, data = [], [], []
    exact_rows: dict[int, dict[int, Fraction]] | None = {} if exact else None
    for pidx in np.flatnonzero(valid):
        p = grid.multi(int(pidx))
        for b in range(dst):
            row: dict[int, object] = {}
            for a in range(src):
                e = dc.entries[b][a]
                if not e:
                    continue
                for q, v in lattice.element_row(e, p).items():
                    col = grid.index(q) * src + a
                    row[col] = row.get(col, 0) + v
            ridx = int(pidx) * dst + b
            row = {c: v for c, v in row.items() if v != 0}
            if exact_rows is not None and row:
                exact_rows[ridx] = row
            for c, v in row.items():
                rows_i.append(ridx)
                cols_i.append(c)
                data.append(float(v))
    mat = sp.csr_matrix((data, (rows_i, cols_i)), shape=(grid.npoints * dst, grid.npoints * src))
    return DiscreteOperator(grid, k, src, dst, r, mat, valid, exact_rows,
                            provenance=f"d_c^{k} of {rc.alg.name}, centred differences, margin {r}")


def apply_dc_at(rc: RuminComplex, lattice: Lattice, k: int,
                f: Callable[[Multi], Sequence]) -> Callable[[Multi], list]:
    """Lazily evaluate the discrete d_c^k of a lattice function, memoized per point.

    Lets refinement studies evaluate composites at a few points of very fine lattices.
    """
    dc = rc.dc[k]
    src, dst = rc.dim(k), rc.dim(k + 1)
    memo: dict[Multi, list] = {}
    fmemo: dict[Multi, Sequence] = {}

    def fval(q):
        v = fmemo.get(q)
        if v is None:
            v = fmemo[q] = f(q)
        return v

    def g(p: Multi) -> list:
        hit = memo.get(p)
        if hit is not None:
            return hit
        out = []
        for b in range(dst):
            s = 0
            for a in range(src):
                e = dc.entries[b][a]
                if e:
                    for q, v in lattice.element_row(e, p).items():
                        s = s + v * fval(q)[a]
            out.append(s)
        memo[p] = out
        return out

    return g


def dc_squared_sup(rc: RuminComplex, k: int, func: Callable, h, points: Sequence[Sequence]) -> float:
    """max over ``points`` of |D_c^{k+1} D_c^k omega| on the lattice of step h through the origin.

    ``func(coords)`` returns the E_0^k coefficients of omega at float coordinates; every
    point must be a lattice point for this h (so for all finer ones too).
    """
    if not 0 <= k < rc.n - 1:
        raise ValueError(f"d_c o d_c needs 0 <= k < {rc.n - 1}")
    h = Fraction(h)
    lattice = Lattice(left_invariant_frame(rc.alg), [0] * rc.n, [h ** w for w in rc.alg.layers])
    g = apply_dc_at(rc, lattice, k, lambda q: func(lattice.coord(q)))
    gg = apply_dc_at(rc, lattice, k + 1, g)
    worst = 0.0
    for x in points:
        ratios = [Fraction(c) / s for c, s in zip(x, lattice.spacing)]
        if any(r.denominator != 1 for r in ratios):
            raise GridError(f"{tuple(x)} is not a point of the lattice with h={h}")
        worst = max(worst, max((abs(float(v)) for v in gg(tuple(int(r) for r in ratios))), default=0.0))
    return worst
