"""Mass, boundary, normal mass and flat norm of discrete Rumin currents.

Forms are measured in the coordinatewise sup norm, so the mass is the l1 norm
of the coefficients and both flat-norm problems are linear programs.
"""
from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

from ..lp import FLOAT_TOL, LinearProgram, LpError, LpSolution, solve_lp
from ..rumin import RuminComplex, rumin_pairing
from .currents import DiscreteCurrent, DiscreteForm
from .grid import Grid, GridError
from .operators import DiscreteOperator, discretize_dc


class MarginError(GridError):
    def __init__(self, message: str, offending: list[tuple[int, ...]]):
        super().__init__(message)
        self.offending = offending


def dc_operator(rc: RuminComplex, grid: Grid, k: int, exact: bool = False) -> DiscreteOperator:
    """Cached discretize_dc; an exact assembly also serves float requests."""
    cache = rc.__dict__.setdefault("_discrete_cache", {})
    hit = cache.get((grid, k, True)) or (None if exact else cache.get((grid, k, False)))
    if hit is None:
        hit = discretize_dc(rc, grid, k, exact=exact)
        cache[(grid, k, exact)] = hit
    return hit


def mass(T: DiscreteCurrent):
    return sum((abs(v) for v in T.coeffs.values()), Fraction(0) if T.is_exact else 0.0)


def check_margin(T: DiscreteCurrent, op: DiscreteOperator) -> None:
    bad = [p for p in T.support() if not op.valid[p]]
    if bad:
        multis = [T.grid.multi(p) for p in bad]
        raise MarginError(
            f"current support within {op.margin} points of the grid edge at {[list(m) for m in multis]}", multis
        )


def boundary(rc: RuminComplex, grid: Grid, T: DiscreteCurrent) -> DiscreteCurrent:
    """Transpose action of the discrete d_c^{m-1}: <bT, w> = <T, D_c w>."""
    m = T.dimension
    if m == 0:
        raise ValueError("0-currents have no boundary")
    if not T.coeffs:
        return DiscreteCurrent.zero(rc, grid, m - 1)
    exact = T.is_exact
    op = dc_operator(rc, grid, m - 1, exact=exact)
    check_margin(T, op)
    if exact:
        out: dict[int, Fraction] = {}
        for r, t in T.by_dof().items():
            for c, v in op.exact_rows.get(r, {}).items():
                out[c] = out.get(c, 0) + t * v
        return DiscreteCurrent.from_vector(grid, m - 1, rc.dim(m - 1),
                                           _dense_from_dict(out, grid.npoints * rc.dim(m - 1)))
    vec = op.matrix.T @ T.to_vector()
    return DiscreteCurrent.from_vector(grid, m - 1, rc.dim(m - 1), vec)


def _dense_from_dict(d: dict[int, object], n: int) -> list:
    out = [0] * n
    for i, v in d.items():
        out[i] = v
    return out


def normal_mass(rc: RuminComplex, grid: Grid, T: DiscreteCurrent):
    if T.dimension == 0:
        return mass(T)
    return mass(T) + mass(boundary(rc, grid, T))


class FlatNorm(NamedTuple):
    value: object
    S: DiscreteCurrent
    R: DiscreteCurrent
    solution: LpSolution


def _flat_setup(rc: RuminComplex, grid: Grid, T: DiscreteCurrent, exact: bool):
    m = T.dimension
    if m >= rc.n:
        raise ValueError(f"flat norm of an {m}-current needs (m+1)-currents; top degree is {rc.n}")
    op = dc_operator(rc, grid, m, exact=exact)
    if exact:
        rows = op.exact_rows                        # j -> {i: D_ji}
    else:
        mat = op.matrix.tocsr()
        rows = {}
        for j in range(mat.shape[0]):
            lo, hi = mat.indptr[j], mat.indptr[j + 1]
            if hi > lo:
                rows[j] = dict(zip(mat.indices[lo:hi].tolist(), mat.data[lo:hi].tolist()))
    t = T.by_dof()
    if exact:
        t = {i: Fraction(v) for i, v in t.items()}
    else:
        t = {i: float(v) for i, v in t.items()}
    rel = set(t)
    for row in rows.values():
        rel.update(row)
    rel = sorted(rel)
    rvars = sorted(rows)
    return m, t, rel, rvars, rows


def _float_structure(rc: RuminComplex, grid: Grid, m: int):
    """Cached (B, rvars) with B[i, q] = D_c^m[rvars[q], i] restricted to rows that exist."""
    cache = rc.__dict__.setdefault("_discrete_cache", {})
    key = (grid, m, "flat")
    if key not in cache:
        mat = dc_operator(rc, grid, m).matrix.tocsr()
        rvars = np.flatnonzero(np.diff(mat.indptr))
        cache[key] = (sp.csc_matrix(mat[rvars].T), rvars)
    return cache[key]


def _flat_primal_float(rc: RuminComplex, grid: Grid, T: DiscreteCurrent) -> FlatNorm:
    m = T.dimension
    B, rvars = _float_structure(rc, grid, m)
    ns, nr = B.shape
    t = T.to_vector().astype(float)
    eye = sp.identity(ns, format="csc")
    A = sp.hstack([eye, -eye, B, -B], format="csc")
    res = linprog(np.ones(2 * ns + 2 * nr), A_eq=A, b_eq=t, bounds=(0, None), method="highs-ds",
                  options={"primal_feasibility_tolerance": FLOAT_TOL, "dual_feasibility_tolerance": FLOAT_TOL})
    if res.status != 0:
        raise LpError(f"flat-norm LP failed: {res.message}")
    x = res.x
    y = res.eqlin.marginals
    sol = LpSolution("optimal", "float", x=x.tolist(), y=y.tolist(), value=float(res.fun),
                     dual_value=float(y @ t), cs_residual=float(np.max(np.abs(x * res.lower.marginals), initial=0.0)),
                     iterations=int(getattr(res, "nit", 0)), meta={"pivot_rule": "dual steepest-edge (HiGHS)"})
    S = DiscreteCurrent.from_vector(grid, m, rc.dim(m), x[:ns] - x[ns:2 * ns])
    rv = np.zeros(grid.npoints * rc.dim(m + 1))
    rv[rvars] = x[2 * ns:2 * ns + nr] - x[2 * ns + nr:]
    R = DiscreteCurrent.from_vector(grid, m + 1, rc.dim(m + 1), rv)
    return FlatNorm(sol.value, S, R, sol)


def _flat_dual_float(rc: RuminComplex, grid: Grid, T: DiscreteCurrent) -> LpSolution:
    B, rvars = _float_structure(rc, grid, T.dimension)
    t = T.to_vector().astype(float)
    Bt = sp.csr_matrix(B.T)
    nr = Bt.shape[0]
    res = linprog(-t, A_ub=sp.vstack([Bt, -Bt], format="csr"), b_ub=np.ones(2 * nr), bounds=(-1, 1),
                  method="highs-ds",
                  options={"primal_feasibility_tolerance": FLOAT_TOL, "dual_feasibility_tolerance": FLOAT_TOL})
    if res.status != 0:
        raise LpError(f"flat-norm dual LP failed: {res.message}")
    dual = -(float(np.sum(res.ineqlin.marginals)) - float(np.sum(res.lower.marginals)) + float(np.sum(res.upper.marginals)))
    return LpSolution("optimal", "float", x=res.x.tolist(), y=(-res.ineqlin.marginals).tolist(), value=-float(res.fun),
                      dual_value=dual, iterations=int(getattr(res, "nit", 0)),
                      meta={"pivot_rule": "dual steepest-edge (HiGHS)"})


def flat_primal_lp(rc: RuminComplex, grid: Grid, T: DiscreteCurrent, exact: bool = True):
    """The flat-norm LP over (s+, s-, r+, r-) with the DOF maps (rel, rvars)."""
    m, t, rel, rvars, rows = _flat_setup(rc, grid, T, exact)
    pos = {i: k for k, i in enumerate(rel)}
    ns, nr = len(rel), len(rvars)
    A = [{k: 1, ns + k: -1} for k in range(ns)]
    for q, j in enumerate(rvars):
        for i, v in rows[j].items():
            A[pos[i]][2 * ns + q] = v
            A[pos[i]][2 * ns + nr + q] = -v
    b = [t.get(i, 0) for i in rel]
    return LinearProgram([1] * (2 * ns + 2 * nr), A, b, ["=="] * ns), rel, rvars


def flat_norm_primal(rc: RuminComplex, grid: Grid, T: DiscreteCurrent, mode: str = "exact") -> FlatNorm:
    """min M(S) + M(R) subject to T = S + bR."""
    if mode == "float":
        return _flat_primal_float(rc, grid, T)
    m = T.dimension
    lp, rel, rvars = flat_primal_lp(rc, grid, T, exact=True)
    ns, nr = len(rel), len(rvars)
    sol = solve_lp(lp, mode)
    if not sol.optimal:
        raise LpError(f"flat-norm LP returned status {sol.status}")
    x = sol.x
    S = DiscreteCurrent(grid, m, rc.dim(m), {})
    for k, i in enumerate(rel):
        v = x[k] - x[ns + k]
        if v != 0:
            S.coeffs[(i // rc.dim(m), i % rc.dim(m))] = v
    R = DiscreteCurrent(grid, m + 1, rc.dim(m + 1), {})
    for q, j in enumerate(rvars):
        v = x[2 * ns + q] - x[2 * ns + nr + q]
        if v != 0:
            R.coeffs[(j // rc.dim(m + 1), j % rc.dim(m + 1))] = v
    return FlatNorm(sol.value, S, R, sol)


def flat_dual_solution(rc: RuminComplex, grid: Grid, T: DiscreteCurrent, mode: str = "exact") -> LpSolution:
    """max T(w) subject to |w| <= 1 and |D_c w| <= 1, on the DOFs the problem touches."""
    if mode == "float":
        return _flat_dual_float(rc, grid, T)
    exact = mode == "exact"
    m, t, rel, rvars, rows = _flat_setup(rc, grid, T, exact)
    pos = {i: k for k, i in enumerate(rel)}
    A, b, senses = [], [], []
    for j in rvars:
        row = {pos[i]: v for i, v in rows[j].items()}
        A += [row, dict(row)]
        b += [1, -1]
        senses += ["<=", ">="]
    c = [t.get(i, 0) for i in rel]
    lp = LinearProgram(c, A, b, senses, bounds=[(-1, 1)] * len(rel), maximize=True)
    sol = solve_lp(lp, mode)
    if not sol.optimal:
        raise LpError(f"flat-norm dual LP returned status {sol.status}")
    sol.meta["dofs"] = rel
    return sol


def flat_norm_dual(rc: RuminComplex, grid: Grid, T: DiscreteCurrent, mode: str = "exact"):
    if not T.coeffs:
        return Fraction(0) if mode == "exact" else 0.0
    return flat_dual_solution(rc, grid, T, mode).value


def flat_norm(rc: RuminComplex, grid: Grid, T: DiscreteCurrent, mode: str = "float"):
    if not T.coeffs:
        return Fraction(0) if mode == "exact" else 0.0
    return flat_norm_primal(rc, grid, T, mode).value


# --------------------------------------------------------------------------- diffuse currents


def pairing_matrix(rc: RuminComplex, k: int) -> list[list[Fraction]]:
    """P[b][a] = <e_b^k, e_a^{n-k}> (top coefficient of the wedge)."""
    n = rc.n
    out = []
    for b in range(rc.dim(k)):
        eb = [Fraction(int(i == b)) for i in range(rc.dim(k))]
        row = []
        for a in range(rc.dim(n - k)):
            ea = [Fraction(int(i == a)) for i in range(rc.dim(n - k))]
            row.append(rumin_pairing(rc, k, eb, ea))
        out.append(row)
    return out


def diffuse_current(rc: RuminComplex, grid: Grid, phi: DiscreteForm) -> DiscreteCurrent:
    """P(phi): w -> Riemann sum of phi ^ w with cell volume h**Q."""
    k = phi.degree
    m = rc.n - k
    P = pairing_matrix(rc, k)
    vol = grid.cell_volume
    coeffs: dict[tuple[int, int], object] = {}
    if phi.is_exact:
        for p in range(grid.npoints):
            for a in range(rc.dim(m)):
                v = sum((phi.values[p, b] * P[b][a] for b in range(rc.dim(k))), Fraction(0)) * vol
                if v:
                    coeffs[(p, a)] = v
    else:
        Pf = np.array(P, dtype=float).reshape(rc.dim(k), rc.dim(m))
        vals = np.asarray(phi.values, dtype=float) @ Pf * float(vol)
        for p, a in zip(*np.nonzero(vals)):
            coeffs[(int(p), int(a))] = float(vals[p, a])
    return DiscreteCurrent(grid, m, rc.dim(m), coeffs)
