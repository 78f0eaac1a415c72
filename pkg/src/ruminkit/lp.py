"""Linear programs with primal and dual certificates.

Exact mode takes the optimal basis found by HiGHS in floating point, refactors it
over Fractions and finishes with Bland-rule revised simplex steps, so every reported
number is certified exactly. If that basis is unusable it runs a two-phase sparse
tableau simplex from scratch. Float mode calls the HiGHS dual simplex through scipy.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction

import highspy
import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

FLOAT_TOL = 1e-9


class LpError(RuntimeError):
    """Solver breakdown or a request that needs an optimal solution."""


@dataclass
class LinearProgram:
    """min (or max) c.x  s.t.  A_i.x (sense_i) b_i,  lo_j <= x_j <= hi_j.

    ``A`` is a list of sparse rows {column: coefficient}; senses are "<=", ">=", "==".
    Bounds default to x >= 0; use None for an infinite bound.
    """

    c: list
    A: list[dict[int, object]]
    b: list
    senses: list[str]
    bounds: list[tuple[object, object]] | None = None
    maximize: bool = False

    def __post_init__(self):
        n = len(self.c)
        if self.bounds is None:
            self.bounds = [(0, None)] * n
        if not (len(self.A) == len(self.b) == len(self.senses)):
            raise ValueError("A, b and senses must have the same length")
        if len(self.bounds) != n:
            raise ValueError("one bound pair per variable")
        for row in self.A:
            if any(not 0 <= j < n for j in row):
                raise ValueError("constraint column out of range")
        for s in self.senses:
            if s not in ("<=", ">=", "=="):
                raise ValueError(f"unknown sense {s!r}")
        for x in list(self.c) + list(self.b) + [v for r in self.A for v in r.values()]:
            if isinstance(x, float) and not math.isfinite(x):
                raise ValueError("LP data must be finite")

    @property
    def n(self) -> int:
        return len(self.c)

    @property
    def m(self) -> int:
        return len(self.b)

    @classmethod
    def from_dense(cls, c, A, b, senses, bounds=None, maximize=False) -> LinearProgram:
        rows = [{j: v for j, v in enumerate(r) if v != 0} for r in A]
        return cls(list(c), rows, list(b), list(senses), bounds, maximize)

    def dump(self) -> str:
        """LP in CPLEX-style text, for cross-checking with external solvers."""
        def term(v, j):
            return f"{'+' if v >= 0 else '-'} {abs(v)} x{j}"

        lines = ["Maximize" if self.maximize else "Minimize",
                 " obj: " + " ".join(term(v, j) for j, v in enumerate(self.c) if v != 0), "Subject To"]
        for i, (row, s, rhs) in enumerate(zip(self.A, self.senses, self.b)):
            op = {"<=": "<=", ">=": ">=", "==": "="}[s]
            body = " ".join(term(v, j) for j, v in sorted(row.items())) or "0 x0"
            lines.append(f" c{i}: {body} {op} {rhs}")
        lines.append("Bounds")
        for j, (lo, hi) in enumerate(self.bounds):
            lo_s = "-inf" if lo is None else str(lo)
            hi_s = "+inf" if hi is None else str(hi)
            lines.append(f" {lo_s} <= x{j} <= {hi_s}")
        lines.append("End")
        return "\n".join(lines)


@dataclass
class LpSolution:
    status: str                      # optimal | unbounded | infeasible
    mode: str
    x: list | None = None
    y: list | None = None            # one multiplier per constraint row
    value: object = None
    dual_value: object = None
    cs_residual: object = None
    iterations: int = 0
    meta: dict = field(default_factory=dict)

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


def duality_gap(sol: LpSolution):
    if not sol.optimal:
        raise LpError(f"no duality gap for a {sol.status} LP")
    return abs(sol.value - sol.dual_value)


def solve_lp(lp: LinearProgram, mode: str = "exact", max_iter: int = 200_000,
             warm_start: bool = True) -> LpSolution:
    """Solve ``lp``. In exact mode ``warm_start`` lets a floating-point basis seed the
    rational simplex; the answer is certified in exact arithmetic either way."""
    if mode == "exact":
        return _solve_exact(lp, max_iter, warm_start)
    if mode == "float":
        return _solve_float(lp)
    raise ValueError(f"mode must be 'exact' or 'float', got {mode!r}")


# --------------------------------------------------------------------------- exact


class _Tableau:
    """Rows of B^{-1}[A | I] kept sparse; the trailing identity block tracks B^{-1}."""

    def __init__(self, rows: list[dict[int, Fraction]], rhs: list[Fraction], basis: list[int], ncols: int):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.ncols = ncols
        self.pivots = 0

    def pivot(self, r: int, j: int, obj_rows: list[dict[int, Fraction]], obj_vals: list[list[Fraction]]):
        prow = self.rows[r]
        inv = 1 / prow[j]
        prow = {k: v * inv for k, v in prow.items()}
        prow[j] = Fraction(1)
        self.rows[r] = prow
        self.rhs[r] *= inv
        br = self.rhs[r]
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row.get(j)
            if f:
                for k, v in prow.items():
                    nv = row.get(k, 0) - f * v
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
                self.rhs[i] -= f * br
        for obj, val in zip(obj_rows, obj_vals):
            f = obj.get(j)
            if f:
                for k, v in prow.items():
                    nv = obj.get(k, 0) - f * v
                    if nv:
                        obj[k] = nv
                    else:
                        obj.pop(k, None)
                val[0] -= f * br
        self.basis[r] = j
        self.pivots += 1

    def run(self, obj: dict[int, Fraction], val: list[Fraction], allowed: int, max_iter: int,
            extra_objs=()) -> str:
        """Bland's rule on columns < allowed. Returns 'optimal' or 'unbounded'."""
        while True:
            if self.pivots > max_iter:
                raise LpError("exact simplex exceeded its iteration budget")
            entering = min((k for k, v in obj.items() if k < allowed and v < 0), default=None)
            if entering is None:
                return "optimal"
            best = None
            for i, row in enumerate(self.rows):
                a = row.get(entering)
                if a is not None and a > 0:
                    ratio = self.rhs[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return "unbounded"
            objs = [obj] + [o for o, _ in extra_objs]
            vals = [val] + [v for _, v in extra_objs]
            self.pivot(best[1], entering, objs, vals)


def _standardize(lp: LinearProgram):
    """Return (columns, costs, rows, rhs, recover) for min c.x, Ax = b, x >= 0."""
    sgn = -1 if lp.maximize else 1
    cols_cost: list[Fraction] = []
    recover: list[list[tuple[int, Fraction]]] = []   # original var = offset + sum coef*std var
    offsets: list[Fraction] = []
    bound_rows: list[tuple[int, Fraction]] = []
    for j, (lo, hi) in enumerate(lp.bounds):
        cj = Fraction(lp.c[j]) * sgn
        lo = None if lo is None else Fraction(lo)
        hi = None if hi is None else Fraction(hi)
        if lo is not None:
            k = len(cols_cost)
            cols_cost.append(cj)
            recover.append([(k, Fraction(1))])
            offsets.append(lo)
            if hi is not None:
                bound_rows.append((k, hi - lo))
        elif hi is not None:
            k = len(cols_cost)
            cols_cost.append(-cj)
            recover.append([(k, Fraction(-1))])
            offsets.append(hi)
        else:
            k = len(cols_cost)
            cols_cost += [cj, -cj]
            recover.append([(k, Fraction(1)), (k + 1, Fraction(-1))])
            offsets.append(Fraction(0))

    rows: list[dict[int, Fraction]] = []
    rhs: list[Fraction] = []
    row_sign: list[int] = []
    for row, s, bi in zip(lp.A, lp.senses, lp.b):
        r: dict[int, Fraction] = {}
        b = Fraction(bi)
        for j, v in row.items():
            v = Fraction(v)
            b -= v * offsets[j]
            for k, coef in recover[j]:
                r[k] = r.get(k, 0) + v * coef
        r = {k: v for k, v in r.items() if v}
        if s != "==":
            k = len(cols_cost)
            cols_cost.append(Fraction(0))
            r[k] = Fraction(1) if s == "<=" else Fraction(-1)
        rows.append(r)
        rhs.append(b)
    n_orig_rows = len(rows)
    for k, width in bound_rows:
        slack = len(cols_cost)
        cols_cost.append(Fraction(0))
        rows.append({k: Fraction(1), slack: Fraction(1)})
        rhs.append(width)
    for i in range(len(rows)):
        if rhs[i] < 0:
            rows[i] = {k: -v for k, v in rows[i].items()}
            rhs[i] = -rhs[i]
            row_sign.append(-1)
        else:
            row_sign.append(1)
    const = sum((Fraction(lp.c[j]) * sgn * offsets[j] for j in range(lp.n)), Fraction(0))
    return cols_cost, rows, rhs, recover, offsets, row_sign, n_orig_rows, const


class _SparseLU:
    """Exact sparse elimination of a square matrix given by sparse columns.

    Pivots follow a Markowitz-style greedy order (sparsest column, then sparsest
    row), which keeps bases that are mostly unit columns nearly free to factor.
    """

    def __init__(self, columns: list[dict[int, Fraction]], m: int):
        rows: list[dict[int, Fraction]] = [{} for _ in range(m)]
        cols: list[set[int]] = [set() for _ in range(m)]
        for q, col in enumerate(columns):
            for i, v in col.items():
                rows[i][q] = v
                cols[q].add(i)
        heap = [(len(cols[q]), q) for q in range(m)]
        heapq.heapify(heap)
        done_col = [False] * m
        active = [True] * m
        self.steps: list[tuple[int, int, dict[int, Fraction], list[tuple[int, Fraction]]]] = []
        while heap:
            cnt, q = heapq.heappop(heap)
            if done_col[q] or cnt != len(cols[q]):
                continue
            if cnt == 0:
                raise ZeroDivisionError("singular basis")
            p = min(cols[q], key=lambda i: (len(rows[i]), i))
            prow = rows[p]
            piv = prow[q]
            elim = []
            for i in list(cols[q]):
                if i == p:
                    continue
                row = rows[i]
                f = row[q] / piv
                elim.append((i, f))
                for k, v in prow.items():
                    nv = row.get(k, 0) - f * v
                    if nv:
                        if k not in row:
                            cols[k].add(i)
                        row[k] = nv
                    else:
                        row.pop(k, None)
                        cols[k].discard(i)
                for k in prow:
                    if k != q and not done_col[k]:
                        heapq.heappush(heap, (len(cols[k]), k))
            for k in prow:
                cols[k].discard(p)
                if k != q and not done_col[k]:
                    heapq.heappush(heap, (len(cols[k]), k))
            done_col[q] = True
            active[p] = False
            self.steps.append((p, q, prow, elim))
        if len(self.steps) != m:
            raise ZeroDivisionError("singular basis")

    def solve(self, rhs: dict[int, Fraction]) -> dict[int, Fraction]:
        """z with B z = rhs, indexed by basis position."""
        r = dict(rhs)
        for p, _, _, elim in self.steps:
            rp = r.get(p)
            if rp:
                for i, f in elim:
                    nv = r.get(i, 0) - f * rp
                    if nv:
                        r[i] = nv
                    else:
                        r.pop(i, None)
        z: dict[int, Fraction] = {}
        for p, q, prow, _ in reversed(self.steps):
            acc = r.get(p, 0)
            for k, v in prow.items():
                if k != q and k in z:
                    acc -= v * z[k]
            if acc:
                z[q] = acc / prow[q]
        return z

    def solve_transpose(self, c: dict[int, Fraction]) -> dict[int, Fraction]:
        """y with B^T y = c, indexed by row."""
        acc: dict[int, Fraction] = {}
        w: dict[int, Fraction] = {}
        for p, q, prow, _ in self.steps:
            val = (c.get(q, 0) - acc.get(q, 0)) / prow[q]
            if val:
                w[p] = val
                for k, v in prow.items():
                    if k != q:
                        acc[k] = acc.get(k, 0) + val * v
        for p, _, _, elim in reversed(self.steps):
            t = w.get(p, 0)
            for i, f in elim:
                wi = w.get(i)
                if wi:
                    t -= f * wi
            if t:
                w[p] = t
            else:
                w.pop(p, None)
        return w


def _float_basis(cost: list[Fraction], rows: list[dict[int, Fraction]], rhs: list[Fraction]) -> list[int] | None:
    """Optimal basis of min c.x, Ax = b, x >= 0 from HiGHS; row i's logical is encoded as -1 - i."""
    m, n = len(rows), len(cost)
    if m == 0:
        return None
    starts, idx, vals = [0], [], []
    by_col: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for i, r in enumerate(rows):
        for k, v in r.items():
            by_col[k].append((i, float(v)))
    for col in by_col:
        for i, v in col:
            idx.append(i)
            vals.append(v)
        starts.append(len(idx))
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("primal_feasibility_tolerance", FLOAT_TOL)
    h.setOptionValue("dual_feasibility_tolerance", FLOAT_TOL)
    lp = highspy.HighsLp()
    lp.num_col_, lp.num_row_ = n, m
    lp.col_cost_ = np.array([float(c) for c in cost])
    lp.col_lower_ = np.zeros(n)
    lp.col_upper_ = np.full(n, highspy.kHighsInf)
    b = np.array([float(v) for v in rhs])
    lp.row_lower_, lp.row_upper_ = b, b
    lp.a_matrix_.format_ = highspy.MatrixFormat.kColwise
    lp.a_matrix_.start_ = np.array(starts, dtype=np.int32)
    lp.a_matrix_.index_ = np.array(idx, dtype=np.int32)
    lp.a_matrix_.value_ = np.array(vals)
    h.passModel(lp)
    h.run()
    if h.getModelStatus() != highspy.HighsModelStatus.kOptimal:
        return None
    basis = h.getBasis()
    basic = highspy.HighsBasisStatus.kBasic
    out = [k for k, st in enumerate(basis.col_status) if st == basic]
    out += [-1 - i for i, st in enumerate(basis.row_status) if st == basic]
    return out if len(out) == m else None


def _revised_exact(cost, rows, rhs, basis: list[int], max_iter: int):
    """Exact revised simplex (Bland) from a given basis. None if that basis is primal infeasible."""
    m, n = len(rows), len(cost)
    cols: list[dict[int, Fraction]] = [{} for _ in range(n)]
    for i, r in enumerate(rows):
        for k, v in r.items():
            cols[k][i] = v

    def column(k):
        return cols[k] if k >= 0 else {-1 - k: Fraction(1)}

    b = {i: v for i, v in enumerate(rhs) if v}
    iters = 0
    while True:
        try:
            lu = _SparseLU([column(k) for k in basis], m)
        except ZeroDivisionError:
            return None
        xb = lu.solve(b)
        if any(v < 0 for v in xb.values()) or any(basis[q] < 0 and xb.get(q) for q in range(m)):
            return None
        y = lu.solve_transpose({q: cost[k] for q, k in enumerate(basis) if k >= 0 and cost[k]})
        inb = set(basis)
        red = {}
        entering = None
        for k in range(n):
            d = cost[k] - sum((v * y.get(i, 0) for i, v in cols[k].items()), Fraction(0))
            if d:
                red[k] = d
            if entering is None and d < 0 and k not in inb:
                entering = k
        if entering is None:
            xs = [Fraction(0)] * n
            for q, k in enumerate(basis):
                if k >= 0:
                    xs[k] = xb.get(q, Fraction(0))
            ystd = [y.get(i, Fraction(0)) for i in range(m)]
            return xs, ystd, red, iters
        if iters >= max_iter:
            raise LpError("exact simplex exceeded its iteration budget")
        u = lu.solve(cols[entering])
        best = None
        for q, uq in u.items():
            if basis[q] < 0:
                key = (Fraction(0), -1)          # a zero logical leaves first
            elif uq > 0:
                key = (xb.get(q, Fraction(0)) / uq, basis[q])
            else:
                continue
            if best is None or key < best[0]:
                best = (key, q)
        if best is None:
            return "unbounded"
        basis = list(basis)
        basis[best[1]] = entering
        iters += 1


def _solve_exact(lp: LinearProgram, max_iter: int, warm_start: bool = True) -> LpSolution:
    cost, rows, rhs, recover, offsets, row_sign, n_orig, const = _standardize(lp)
    m = len(rows)
    nstd = len(cost)
    if warm_start:
        basis = _float_basis(cost, rows, rhs)
        res = _revised_exact(cost, rows, rhs, basis, max_iter) if basis is not None else None
        if res == "unbounded":
            return LpSolution("unbounded", "exact", meta={"pivot_rule": "bland (revised)"})
        if res is not None:
            xs, ystd, red, iters = res
            cs = sum((abs(xs[k] * red.get(k, 0)) for k in range(nstd)), Fraction(0))
            meta = {"pivot_rule": "bland (revised)", "warm_start": "float basis", "rows": m, "columns": nstd}
            return _exact_solution(lp, xs, ystd, cost, rhs, recover, offsets, row_sign, n_orig, const,
                                   cs, iters, meta)
    return _solve_tableau(lp, max_iter, cost, rows, rhs, recover, offsets, row_sign, n_orig, const)


def _exact_solution(lp, xs, ystd, cost, rhs, recover, offsets, row_sign, n_orig, const, cs, iters, meta):
    nstd = len(cost)
    x = [offsets[j] + sum((coef * xs[k] for k, coef in recover[j]), Fraction(0)) for j in range(lp.n)]
    sgn = -1 if lp.maximize else 1
    value_std = sum((cost[k] * xs[k] for k in range(nstd)), Fraction(0))
    dual_std = sum((y * b for y, b in zip(ystd, rhs)), Fraction(0))
    y = [sgn * row_sign[i] * ystd[i] for i in range(n_orig)]
    return LpSolution("optimal", "exact", x=x, y=y, value=sgn * (value_std + const),
                      dual_value=sgn * (dual_std + const), cs_residual=cs, iterations=iters, meta=meta)


def _solve_tableau(lp, max_iter, cost, rows, rhs, recover, offsets, row_sign, n_orig, const) -> LpSolution:
    m = len(rows)
    nstd = len(cost)
    rows = [dict(r) for r in rows]

    # unit columns give a free starting basis; artificials cover the other rows
    col_rows: dict[int, list[int]] = {}
    for i, r in enumerate(rows):
        for k in r:
            col_rows.setdefault(k, []).append(i)
    basis: list[int | None] = [None] * m
    for k in range(nstd):
        rs = col_rows.get(k, [])
        if len(rs) == 1 and rows[rs[0]][k] == 1 and basis[rs[0]] is None:
            basis[rs[0]] = k
    art_start = nstd
    n_art = 0
    for i in range(m):
        if basis[i] is None:
            k = art_start + n_art
            rows[i][k] = Fraction(1)
            basis[i] = k
            n_art += 1
    shadow = art_start + n_art  # B^{-1} block columns
    # B0 is the identity (unit columns), so the shadow block starts as I
    for i in range(m):
        rows[i][shadow + i] = Fraction(1)
    tab = _Tableau(rows, list(rhs), list(basis), shadow + m)

    def objective(costs: dict[int, Fraction]):
        obj = dict(costs)
        val = [Fraction(0)]
        for i, b in enumerate(tab.basis):
            cb = costs.get(b, 0)
            if cb:
                for k, v in tab.rows[i].items():
                    nv = obj.get(k, 0) - cb * v
                    if nv:
                        obj[k] = nv
                    else:
                        obj.pop(k, None)
                val[0] -= cb * tab.rhs[i]
        return obj, val

    phase2_costs = {k: c for k, c in enumerate(cost) if c}
    if n_art:
        obj1, val1 = objective({art_start + a: Fraction(1) for a in range(n_art)})
        obj2, val2 = objective(phase2_costs)
        tab.run(obj1, val1, shadow, max_iter, extra_objs=[(obj2, val2)])
        if -val1[0] > 0:
            return LpSolution("infeasible", "exact", iterations=tab.pivots, meta={"pivot_rule": "bland"})
        for i in range(m):
            if tab.basis[i] >= art_start:
                j = next((k for k in sorted(tab.rows[i]) if k < art_start), None)
                if j is not None:
                    tab.pivot(i, j, [obj2], [val2])
        # artificial columns may never re-enter
        for a in range(n_art):
            obj2.pop(art_start + a, None)
    else:
        obj2, val2 = objective(phase2_costs)
    status = tab.run(obj2, val2, art_start, max_iter)
    meta = {"pivot_rule": "bland", "rows": m, "columns": nstd}
    if status == "unbounded":
        return LpSolution("unbounded", "exact", iterations=tab.pivots, meta=meta)

    xs = [Fraction(0)] * nstd
    for i, b in enumerate(tab.basis):
        if b < nstd:
            xs[b] = tab.rhs[i]
    # y = c_B^T B^{-1}; shadow columns hold B^{-1}
    ystd = [Fraction(0)] * m
    for i, b in enumerate(tab.basis):
        cb = cost[b] if b < nstd else Fraction(0)
        if cb:
            for k, v in tab.rows[i].items():
                if k >= shadow:
                    ystd[k - shadow] += cb * v
    cs = sum((abs(xs[k] * obj2.get(k, 0)) for k in range(nstd)), Fraction(0))
    return _exact_solution(lp, xs, ystd, cost, rhs, recover, offsets, row_sign, n_orig, const,
                           cs, tab.pivots, meta)


# --------------------------------------------------------------------------- float


def _solve_float(lp: LinearProgram) -> LpSolution:
    n = lp.n
    sgn = -1.0 if lp.maximize else 1.0
    c = np.array([float(v) for v in lp.c]) * sgn
    ub_rows, ub_b, eq_rows, eq_b, where = [], [], [], [], []
    for i, (row, s, bi) in enumerate(zip(lp.A, lp.senses, lp.b)):
        r = {j: float(v) for j, v in row.items()}
        if s == "==":
            where.append(("eq", len(eq_rows), 1.0))
            eq_rows.append(r)
            eq_b.append(float(bi))
        elif s == "<=":
            where.append(("ub", len(ub_rows), 1.0))
            ub_rows.append(r)
            ub_b.append(float(bi))
        else:
            where.append(("ub", len(ub_rows), -1.0))
            ub_rows.append({j: -v for j, v in r.items()})
            ub_b.append(-float(bi))

    def to_csr(rows):
        if not rows:
            return None
        data, ri, ci = [], [], []
        for i, r in enumerate(rows):
            for j, v in r.items():
                ri.append(i)
                ci.append(j)
                data.append(v)
        return sp.csr_matrix((data, (ri, ci)), shape=(len(rows), n))

    bounds = [(None if lo is None else float(lo), None if hi is None else float(hi)) for lo, hi in lp.bounds]
    res = linprog(
        c, A_ub=to_csr(ub_rows), b_ub=np.array(ub_b) if ub_rows else None,
        A_eq=to_csr(eq_rows), b_eq=np.array(eq_b) if eq_rows else None,
        bounds=bounds, method="highs-ds",
        options={"primal_feasibility_tolerance": FLOAT_TOL, "dual_feasibility_tolerance": FLOAT_TOL},
    )
    meta = {"pivot_rule": "dual steepest-edge (HiGHS)", "message": res.message}
    if res.status == 2:
        return LpSolution("infeasible", "float", meta=meta)
    if res.status == 3:
        return LpSolution("unbounded", "float", meta=meta)
    if res.status != 0:
        raise LpError(f"float LP failed: {res.message}")

    y_ub = res.ineqlin.marginals if ub_rows else np.zeros(0)
    y_eq = res.eqlin.marginals if eq_rows else np.zeros(0)
    y = []
    for kind, idx, s in where:
        y.append(float(sgn * s * (y_eq[idx] if kind == "eq" else y_ub[idx])))
    lo_m = res.lower.marginals
    up_m = res.upper.marginals
    dual = float(np.dot(y_ub, ub_b)) + float(np.dot(y_eq, eq_b))
    for j, (lo, hi) in enumerate(bounds):
        if lo is not None and lo_m[j]:
            dual += lo_m[j] * lo
        if hi is not None and up_m[j]:
            dual += up_m[j] * hi
    x = np.asarray(res.x)
    cs = 0.0
    if ub_rows:
        slack = np.array(ub_b) - to_csr(ub_rows) @ x
        cs += float(np.max(np.abs(slack * y_ub), initial=0.0))
    for j, (lo, hi) in enumerate(bounds):
        if lo is not None:
            cs = max(cs, abs((x[j] - lo) * lo_m[j]))
        if hi is not None:
            cs = max(cs, abs((hi - x[j]) * up_m[j]))
    return LpSolution("optimal", "float", x=[float(v) for v in x], y=y, value=sgn * float(res.fun), dual_value=sgn * dual,
                      cs_residual=cs, iterations=int(getattr(res, "nit", 0)), meta=meta)
