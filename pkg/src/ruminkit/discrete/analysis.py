"""Metric and regularity evaluators on grids: CC distance, Hoelder and Sobolev
norms, and the line-integral correction for Rumin 1-forms on the Heisenberg group."""
from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import shortest_path

from .._poly import Poly
from ..lie_core import StratifiedLieAlgebra, bch_multiply_float, left_invariant_frame
from ..rumin import RuminComplex
from .currents import DiscreteForm
from .grid import Grid, GridError
from .norms import dc_operator


def _group_mul(alg: StratifiedLieAlgebra, p, q) -> np.ndarray:
    """Vectorized group law; p and q are (N, n) or (n,) float arrays."""
    p, q = np.asarray(p, dtype=float), np.asarray(q, dtype=float)
    out = bch_multiply_float(alg, list(p.T), list(q.T))
    shape = np.broadcast_shapes(p.shape, q.shape)
    return np.stack([np.broadcast_to(np.asarray(c, dtype=float), shape[:-1]) for c in out], axis=-1)


def _snap(grid: Grid, pts: np.ndarray) -> np.ndarray:
    """Flat index of the nearest grid point (ties round up), -1 outside the box."""
    origin = np.array([float(o) for o in grid.origin])
    spacing = np.array([float(s) for s in grid.spacing])
    idx = np.floor((pts - origin) / spacing + 0.5 + 1e-12).astype(int)
    inside = np.all((idx >= 0) & (idx < np.array(grid.shape)), axis=1)
    flat = np.full(len(pts), -1)
    flat[inside] = np.ravel_multi_index(tuple(idx[inside].T), grid.shape)
    return flat


def horizontal_graph(grid: Grid) -> sp.csr_matrix:
    """Edges p -> nearest(p exp(+-h X_i)) for the first-layer generators."""
    alg = grid.alg
    pts = grid.coords_float
    h = float(grid.h)
    src, dst = [], []
    for i in alg.layer_indices(1):
        for sgn in (1.0, -1.0):
            step = np.zeros(alg.dim)
            step[i] = sgn * h
            target = _snap(grid, _group_mul(alg, pts, step))
            ok = (target >= 0) & (target != np.arange(grid.npoints))
            src.append(np.flatnonzero(ok))
            dst.append(target[ok])
    src, dst = np.concatenate(src), np.concatenate(dst)
    return sp.csr_matrix((np.ones(len(src)), (src, dst)), shape=(grid.npoints, grid.npoints))


def cc_distance(alg: StratifiedLieAlgebra, grid: Grid, p: Sequence[int], q: Sequence[int]) -> float:
    """Graph distance along snapped horizontal steps of length h; an upper proxy for d_CC."""
    if alg.name != grid.alg.name:
        raise ValueError("grid and algebra differ")
    for m in (p, q):
        if not grid.contains(m):
            raise GridError(f"{tuple(m)} is not a grid index")
    a, b = grid.index(p), grid.index(q)
    if a == b:
        return 0.0
    hops = shortest_path(horizontal_graph(grid), method="D", unweighted=True, indices=a)[b]
    if not np.isfinite(hops):
        raise GridError(f"{tuple(q)} is unreachable from {tuple(p)} by horizontal steps inside the box")
    return float(hops) * float(grid.h)


def homogeneous_norm(alg: StratifiedLieAlgebra, x: np.ndarray) -> np.ndarray:
    """max over coordinates of |x_a|^(1/layer(a)); x is (..., n)."""
    x = np.asarray(x, dtype=float)
    w = np.array([float(l) for l in alg.layers])
    return np.max(np.abs(x) ** (1.0 / w), axis=-1)


def holder_seminorm(grid: Grid, f: DiscreteForm, alpha: float) -> float:
    if not 0 < alpha < 1:
        raise ValueError("Hoelder exponent must lie in (0, 1)")
    alg = grid.alg
    pts = grid.coords_float
    vals = np.asarray(f.values, dtype=float)
    best = 0.0
    for i in range(grid.npoints - 1):
        rest = pts[i + 1:]
        rel = _group_mul(alg, -pts[i], rest)                 # x^{-1} y
        dist = homogeneous_norm(alg, rel) ** alpha
        diff = np.max(np.abs(vals[i + 1:] - vals[i]), axis=1)
        best = max(best, float(np.max(diff / dist)))
    return best


def lp_norm(grid: Grid, values: np.ndarray, p: float, mask: np.ndarray | None = None) -> float:
    """(h^Q sum |v|^p)^(1/p) with the pointwise l-infinity fiber norm."""
    v = np.max(np.abs(np.asarray(values, dtype=float)), axis=1, initial=0.0)
    if mask is not None:
        v = v[mask]
    return float((float(grid.cell_volume) * np.sum(v ** p)) ** (1.0 / p))


def sobolev_norm(rc: RuminComplex, grid: Grid, f: DiscreteForm, p: float) -> float:
    """|f|_p + |D_c f|_p, the second term over points where the stencil fits."""
    if not 1 <= p < np.inf:
        raise ValueError("p must lie in [1, inf)")
    total = lp_norm(grid, f.values, p)
    if f.degree < rc.n:
        op = dc_operator(rc, grid, f.degree)
        total += lp_norm(grid, op.apply(f.values), p, mask=op.valid)
    return total


# --------------------------------------------------------------------------- Heisenberg line integrals


class CorrectedIntegral(NamedTuple):
    corrected: float
    uncorrected: float
    correction: float            # the integral of g * theta that was subtracted


def _check_heisenberg(rc: RuminComplex) -> None:
    alg = rc.alg
    if alg.layer_dims != (2, 1) or alg.c(0, 1) != {2: 1}:
        raise ValueError("boundary correction is implemented for heisenberg(1) only")


def _lift_horizontal(rc: RuminComplex, omega: Sequence[Poly]) -> list[Poly]:
    """Coefficients of the Rumin 1-form on theta^1..theta^n."""
    if len(omega) != rc.dim(1) or not all(isinstance(c, Poly) for c in omega):
        raise ValueError("omega must be a sequence of Poly coefficients, one per E_0^1 basis vector")
    n = rc.n
    out = [Poly(n) for _ in range(n)]
    for a, c in enumerate(omega):
        for i, v in enumerate(rc.e0_vector(1, a)):
            if v:
                out[i] = out[i] + c * Poly.const(n, v)
    return out


def contact_extraction(rc: RuminComplex, omega: Sequence[Poly]) -> Poly:
    """g = (d omega)_{12} / (d theta)_{12}: the multiple of theta whose removal
    makes the extension's differential Rumin-compatible."""
    _check_heisenberg(rc)
    frame = left_invariant_frame(rc.alg)
    f = _lift_horizontal(rc, omega)
    d12 = frame.apply(0, f[1]) - frame.apply(1, f[0])
    dtheta12 = -rc.alg.c(0, 1)[2]
    return d12 * Poly.const(rc.n, Fraction(1) / dtheta12)


def _coframe_on(frame, x: np.ndarray, v: np.ndarray) -> np.ndarray:
    """theta(v) at the points x (rows): solve F(x)^T a = v."""
    n = x.shape[1]
    F = np.empty((len(x), n, n))
    for i in range(n):
        for a in range(n):
            F[:, i, a] = frame.coeffs[i][a].evaluate_float(x.T)
    return np.linalg.solve(np.transpose(F, (0, 2, 1)), np.broadcast_to(v, x.shape)[..., None])[..., 0]


def heisenberg_boundary_correction(rc: RuminComplex, vertices: Sequence[Sequence], omega: Sequence[Poly],
                                   nodes: int = 24) -> CorrectedIntegral:
    """Integrate omega - g theta along a closed polyline (straight in exponential coordinates)."""
    _check_heisenberg(rc)
    pts = np.array([[float(c) for c in v] for v in vertices])
    if len(pts) < 2 or not np.allclose(pts[0], pts[-1], atol=1e-14):
        raise ValueError("curve must be closed: first and last vertex must agree")
    f = _lift_horizontal(rc, omega)
    g = contact_extraction(rc, omega)
    frame = left_invariant_frame(rc.alg)
    t, w = np.polynomial.legendre.leggauss(nodes)
    t, w = (t + 1) / 2, w / 2
    plain = corr = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        v = b - a
        x = a + t[:, None] * v
        th = _coframe_on(frame, x, v)
        form = sum(fi.evaluate_float(x.T) * th[:, i] for i, fi in enumerate(f))
        plain += float(np.dot(w, form))
        corr += float(np.dot(w, g.evaluate_float(x.T) * th[:, 2]))
    return CorrectedIntegral(plain - corr, plain, corr)
