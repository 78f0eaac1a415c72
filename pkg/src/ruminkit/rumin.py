"""The Rumin complex (E_0, d_c) of a stratified Lie algebra, computed exactly.

Forms are written in the left-invariant coframe theta^1..theta^n dual to the
declared basis, with monomials theta^I for increasing multi-indices I in
lexicographic order. Coefficient functions are acted on by PBW operators.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Sequence

from . import qlinalg
from .lie_core import StratifiedLieAlgebra, homogeneous_dimension, require_valid
from .opalg import EnvelopingAlgebra, OperatorMatrix, distinct_orders, op_compose


def sort_sign(indices: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the permutation sorting ``indices`` (0 if an index repeats)."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return 0, ()
    sign = 1
    # insertion sort counting transpositions
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(idx)


@dataclass(frozen=True)
class GradedFormBasis:
    n: int
    layers: tuple[int, ...]

    @cached_property
    def monomials(self) -> tuple[tuple[tuple[int, ...], ...], ...]:
        return tuple(tuple(combinations(range(self.n), k)) for k in range(self.n + 1))

    @cached_property
    def index(self) -> tuple[dict[tuple[int, ...], int], ...]:
        return tuple({m: i for i, m in enumerate(ms)} for ms in self.monomials)

    def dim(self, k: int) -> int:
        return comb(self.n, k) if 0 <= k <= self.n else 0

    def weight(self, mono: Sequence[int]) -> int:
        return sum(self.layers[i] for i in mono)

    def weights(self, k: int) -> tuple[int, ...]:
        if not 0 <= k <= self.n:
            return ()
        return tuple(self.weight(m) for m in self.monomials[k])

    def label(self, mono: Sequence[int]) -> str:
        return "∧".join(f"θ{i + 1}" for i in mono) if mono else "1"


def wedge(basis: GradedFormBasis, k: int, a: Sequence, l: int, b: Sequence) -> list:
    """Exterior product of a k-form and an l-form given in monomial coordinates."""
    out = [Fraction(0)] * basis.dim(k + l)
    if k + l > basis.n:
        return out
    idx = basis.index[k + l]
    for i, x in enumerate(a):
        if not x:
            continue
        mi = basis.monomials[k][i]
        for j, y in enumerate(b):
            if not y:
                continue
            s, m = sort_sign(mi + basis.monomials[l][j])
            if s:
                out[idx[m]] += s * x * y
    return out


# --------------------------------------------------------------------------- differentials


def _basis(alg: StratifiedLieAlgebra) -> GradedFormBasis:
    return GradedFormBasis(alg.dim, alg.layers)


def ce_differential(alg: StratifiedLieAlgebra, k: int) -> qlinalg.Matrix:
    """Algebraic part d_0 : Lambda^k -> Lambda^{k+1}, with d theta^a = -sum_{i<j} c^a_ij theta^i ^ theta^j."""
    basis = _basis(alg)
    n = alg.dim
    rows, cols = basis.dim(k + 1), basis.dim(k)
    out = qlinalg.zeros(rows, cols)
    if rows == 0 or cols == 0:
        return out
    dtheta: list[list[tuple[Fraction, int, int]]] = [[] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            for a, c in alg.c(i, j).items():
                if c:
                    dtheta[a].append((-c, i, j))
    idx = basis.index[k + 1]
    for col, mono in enumerate(basis.monomials[k]):
        for p, a in enumerate(mono):
            sign_p = -1 if p % 2 else 1
            for c, i, j in dtheta[a]:
                s, m = sort_sign(mono[:p] + (i, j) + mono[p + 1:])
                if s:
                    out[idx[m]][col] += sign_p * s * c
    return out


def full_differential(alg: StratifiedLieAlgebra, k: int, ring: EnvelopingAlgebra | None = None) -> OperatorMatrix:
    """d(f theta^I) = sum_i (X_i f) theta^i ^ theta^I + f d_0 theta^I."""
    ring = ring or EnvelopingAlgebra(alg)
    basis = _basis(alg)
    d0 = ce_differential(alg, k)
    rows, cols = basis.dim(k + 1), basis.dim(k)
    out = OperatorMatrix.from_scalar(ring, d0, rows, cols, basis.weights(k + 1), basis.weights(k))
    if rows == 0:
        return out
    idx = basis.index[k + 1]
    for col, mono in enumerate(basis.monomials[k]):
        for i in range(alg.dim):
            s, m = sort_sign((i,) + mono)
            if s:
                r = idx[m]
                out.entries[r][col] = out.entries[r][col] + ring.gen(i) * s
    return out


def d0_pseudo_inverse(d0: qlinalg.Matrix, rows: int | None = None, cols: int | None = None) -> qlinalg.Matrix:
    """Exact Moore-Penrose inverse (orthonormal monomial inner product)."""
    c = cols if cols is not None else (len(d0[0]) if d0 else 0)
    if d0 and c == 0:
        return []
    return qlinalg.pinv(d0, cols=c)


def penrose_identities(a: qlinalg.Matrix, ap: qlinalg.Matrix) -> dict[str, bool]:
    if not a or not a[0]:
        return {"a_ap_a": True, "ap_a_ap": True, "a_ap_sym": True, "ap_a_sym": True}
    aap = qlinalg.matmul(a, ap)
    apa = qlinalg.matmul(ap, a)
    return {
        "a_ap_a": qlinalg.matmul(aap, a) == a,
        "ap_a_ap": qlinalg.matmul(apa, ap) == ap,
        "a_ap_sym": aap == qlinalg.transpose(aap),
        "ap_a_sym": apa == qlinalg.transpose(apa),
    }


# --------------------------------------------------------------------------- projection


@dataclass
class _Differentials:
    ring: EnvelopingAlgebra
    basis: GradedFormBasis
    d0: list[qlinalg.Matrix]
    d0_pinv: list[qlinalg.Matrix]
    d: list[OperatorMatrix]

    def d0_pinv_op(self, k: int) -> OperatorMatrix:
        """pinv(d_0) as an operator Lambda^{k+1} -> Lambda^k."""
        b = self.basis
        return OperatorMatrix.from_scalar(self.ring, self.d0_pinv[k], b.dim(k), b.dim(k + 1),
                                          b.weights(k), b.weights(k + 1))


def _differentials(alg: StratifiedLieAlgebra, ring: EnvelopingAlgebra) -> _Differentials:
    basis = _basis(alg)
    n = alg.dim
    d0 = [ce_differential(alg, k) for k in range(n)]
    d0p = [d0_pseudo_inverse(d0[k], basis.dim(k + 1), basis.dim(k)) for k in range(n)]
    d = [full_differential(alg, k, ring) for k in range(n)]
    return _Differentials(ring, basis, d0, d0p, d)


def _transfer(diffs: _Differentials, k: int) -> OperatorMatrix:
    """T = 1 - d0^+ d - d d0^+ on Lambda^k."""
    b = diffs.basis
    n = b.n
    t = OperatorMatrix.identity(diffs.ring, b.dim(k), b.weights(k))
    if k < n:
        t = t - op_compose(diffs.d0_pinv_op(k), diffs.d[k])
    if k > 0:
        t = t - op_compose(diffs.d[k - 1], diffs.d0_pinv_op(k - 1))
    return t


@dataclass
class ProjectionData:
    proj: list[OperatorMatrix]
    homotopy: list[OperatorMatrix | None]  # homotopy[k] : Lambda^k -> Lambda^{k-1}
    iterations: int


def rumin_projection(alg: StratifiedLieAlgebra, ring: EnvelopingAlgebra | None = None,
                     _diffs: _Differentials | None = None) -> ProjectionData:
    """Iterate P <- P o T from P = 1 until every degree stabilizes.

    Returns P_E per degree and A with 1 - P_E = A d + d A.
    """
    ring = ring or EnvelopingAlgebra(alg)
    diffs = _diffs or _differentials(alg, ring)
    n = alg.dim
    cap = n * alg.step
    ts = [_transfer(diffs, k) for k in range(n + 1)]
    powers = [OperatorMatrix.identity(ring, diffs.basis.dim(k), diffs.basis.weights(k)) for k in range(n + 1)]
    sums = [OperatorMatrix.zeros(ring, diffs.basis.dim(k), diffs.basis.dim(k)) for k in range(n + 1)]
    for it in range(cap + 1):
        nxt = [op_compose(p, t) for p, t in zip(powers, ts)]
        sums = [s + p for s, p in zip(sums, powers)]
        if all(a == b for a, b in zip(nxt, powers)):
            homotopy: list[OperatorMatrix | None] = [None]
            for k in range(1, n + 1):
                homotopy.append(op_compose(diffs.d0_pinv_op(k - 1), sums[k]))
            return ProjectionData(powers, homotopy, it)
        powers = nxt
    raise RuntimeError(f"projection iteration did not stabilize within {cap} steps")


# --------------------------------------------------------------------------- complex


@dataclass
class RuminComplex:
    alg: StratifiedLieAlgebra
    ring: EnvelopingAlgebra
    basis: GradedFormBasis
    d0: list[qlinalg.Matrix]
    d0_pinv: list[qlinalg.Matrix]
    d: list[OperatorMatrix]
    proj: list[OperatorMatrix]
    homotopy: list[OperatorMatrix | None]
    e0: list[qlinalg.Matrix]          # e0[k]: columns are E_0^k basis vectors in Lambda^k
    e0_weights: list[tuple[int, ...]]
    e0_coords: list[qlinalg.Matrix]   # left inverse of e0[k]
    dc: list[OperatorMatrix]          # dc[k] : E_0^k -> E_0^{k+1}
    Q: int
    delta: int
    projection_iterations: int = 0
    betti: list[int] = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.alg.dim

    def dim(self, k: int) -> int:
        return len(self.e0_weights[k]) if 0 <= k <= self.n else 0

    def weights(self, k: int) -> list[int]:
        return sorted(set(self.e0_weights[k]))

    def dc_orders(self, k: int) -> list[int]:
        return distinct_orders(self.dc[k]) if k < self.n else []

    def e0_vector(self, k: int, a: int) -> list[Fraction]:
        return [row[a] for row in self.e0[k]]

    def to_lambda(self, k: int, coords: Sequence) -> list[Fraction]:
        return [sum((Fraction(x) * y for x, y in zip(row, coords)), Fraction(0)) for row in self.e0[k]]

    def e0_labels(self, k: int) -> list[str]:
        labels = []
        for a in range(self.dim(k)):
            v = self.e0_vector(k, a)
            parts = []
            for i, c in enumerate(v):
                if c:
                    lab = self.basis.label(self.basis.monomials[k][i])
                    parts.append(lab if c == 1 else f"-{lab}" if c == -1 else f"{c}*{lab}")
            labels.append("+".join(parts).replace("+-", "-"))
        return labels

    def table(self) -> dict:
        return {
            "algebra": self.alg.name,
            "Q": self.Q,
            "delta": self.delta,
            "degrees": [
                {"degree": k, "dim": self.dim(k), "weights": self.weights(k), "dc_orders": self.dc_orders(k)}
                for k in range(self.n + 1)
            ],
        }


def _e0_basis(basis: GradedFormBasis, d0_k, d0_prev, k: int):
    dim = basis.dim(k)
    rows = [list(r) for r in d0_k] if d0_k else []
    if d0_prev:
        rows += qlinalg.transpose(d0_prev)
    weights = basis.weights(k)
    vecs: list[list[Fraction]] = []
    ws: list[int] = []
    for w in sorted(set(weights)):
        cols = [i for i in range(dim) if weights[i] == w]
        sub = [[r[c] for c in cols] for r in rows]
        sub = [r for r in sub if any(r)]
        for v in qlinalg.nullspace(sub, cols=len(cols)):
            full = [Fraction(0)] * dim
            for c, x in zip(cols, v):
                full[c] = x
            vecs.append(full)
            ws.append(w)
    v = [[vec[i] for vec in vecs] for i in range(dim)]  # columns are basis vectors
    return v, tuple(ws)


def build_rumin_complex(alg: StratifiedLieAlgebra) -> RuminComplex:
    require_valid(alg)
    ring = EnvelopingAlgebra(alg)
    diffs = _differentials(alg, ring)
    basis = diffs.basis
    n = alg.dim
    pdata = rumin_projection(alg, ring, diffs)

    e0, e0w, coords, betti = [], [], [], []
    for k in range(n + 1):
        d0_k = diffs.d0[k] if k < n else []
        d0_prev = diffs.d0[k - 1] if k > 0 else []
        v, ws = _e0_basis(basis, d0_k, d0_prev, k)
        e0.append(v)
        e0w.append(ws)
        if ws:
            vt = qlinalg.transpose(v)
            coords.append(qlinalg.matmul(qlinalg.inverse(qlinalg.matmul(vt, v)), vt))
        else:
            coords.append([])
        ker = basis.dim(k) - (qlinalg.rank(d0_k) if d0_k else 0)
        im = qlinalg.rank(d0_prev) if d0_prev else 0
        betti.append(ker - im)

    dc = []
    for k in range(n):
        vk = OperatorMatrix.from_scalar(ring, e0[k], basis.dim(k), len(e0w[k]), basis.weights(k), e0w[k])
        ck = OperatorMatrix.from_scalar(ring, coords[k + 1], len(e0w[k + 1]), basis.dim(k + 1),
                                        e0w[k + 1], basis.weights(k + 1))
        m = op_compose(ck, op_compose(diffs.d[k], op_compose(pdata.proj[k], vk)))
        m.row_weights, m.col_weights = e0w[k + 1], e0w[k]
        dc.append(m)

    delta = max((w for m in dc for w in distinct_orders(m)), default=0)
    return RuminComplex(
        alg=alg, ring=ring, basis=basis, d0=diffs.d0, d0_pinv=diffs.d0_pinv, d=diffs.d,
        proj=pdata.proj, homotopy=pdata.homotopy, e0=e0, e0_weights=e0w, e0_coords=coords,
        dc=dc, Q=homogeneous_dimension(alg), delta=delta,
        projection_iterations=pdata.iterations, betti=betti,
    )


# --------------------------------------------------------------------------- verification


@dataclass
class VerificationReport:
    checks: dict[str, bool | None] = field(default_factory=dict)
    details: dict[str, str] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(v is not False for v in self.checks.values())

    def failed(self) -> list[str]:
        return [k for k, v in self.checks.items() if v is False]


def verify_complex(rc: RuminComplex) -> VerificationReport:
    rep = VerificationReport()
    n = rc.n
    ring = rc.ring
    b = rc.basis

    def record(name, ok, detail=""):
        prev = rep.checks.get(name, True)
        rep.checks[name] = bool(ok) and prev is not False
        if not ok and detail:
            rep.details.setdefault(name, detail)

    rep.checks["dc_squared"] = True
    for k in range(n - 1):
        sq = op_compose(rc.dc[k + 1], rc.dc[k])
        record("dc_squared", sq.is_zero(), f"d_c^{k + 1} o d_c^{k} != 0")

    rep.checks["d0_squared"] = True
    rep.checks["d_squared"] = True
    for k in range(n - 1):
        record("d0_squared", qlinalg.is_zero(qlinalg.matmul(rc.d0[k + 1], rc.d0[k], inner=b.dim(k + 1), cols=b.dim(k))),
               f"degree {k}")
        record("d_squared", op_compose(rc.d[k + 1], rc.d[k]).is_zero(), f"degree {k}")

    rep.checks["penrose"] = True
    for k in range(n):
        ids = penrose_identities(rc.d0[k], rc.d0_pinv[k])
        record("penrose", all(ids.values()), f"degree {k}: {ids}")

    rep.checks["projection_idempotent"] = True
    rep.checks["projection_chain_map"] = True
    rep.checks["projection_homotopy"] = True
    for k in range(n + 1):
        p = rc.proj[k]
        record("projection_idempotent", op_compose(p, p) == p, f"degree {k}")
        if k < n:
            record("projection_chain_map", op_compose(rc.d[k], p) == op_compose(rc.proj[k + 1], rc.d[k]), f"degree {k}")
        lhs = OperatorMatrix.identity(ring, b.dim(k)) - p
        rhs = OperatorMatrix.zeros(ring, b.dim(k), b.dim(k))
        if k < n:
            rhs = rhs + op_compose(rc.homotopy[k + 1], rc.d[k])
        if k > 0:
            rhs = rhs + op_compose(rc.d[k - 1], rc.homotopy[k])
        record("projection_homotopy", lhs == rhs, f"degree {k}")

    rep.checks["weight_homogeneous"] = True
    for k in range(n):
        record("weight_homogeneous", rc.dc[k].weight_bookkeeping_ok(), f"d_c^{k}")

    rep.checks["betti_dims"] = all(rc.dim(k) == rc.betti[k] for k in range(n + 1))

    if n >= 2:
        rep.checks["delta_bound"] = rc.delta <= rc.Q - 1
        if rep.checks["delta_bound"] is False:
            rep.details["delta_bound"] = f"delta={rc.delta} > Q-1={rc.Q - 1}"
    else:
        rep.checks["delta_bound"] = None
        rep.details["delta_bound"] = (
            f"out of hypothesis: dim 1 gives delta={rc.delta} > Q-1={rc.Q - 1}; bound checked for dim >= 2 only"
        )
    euler = sum((-1) ** k * rc.dim(k) for k in range(n + 1))
    rep.checks["euler_characteristic"] = euler == 0
    rep.details.setdefault("orders", "; ".join(f"deg {k}: {rc.dc_orders(k)}" for k in range(n)))
    return rep


def rumin_pairing(rc: RuminComplex, k: int, alpha: Sequence, beta: Sequence) -> Fraction:
    """Top-degree coefficient of alpha ^ beta for alpha in E_0^k, beta in E_0^{n-k} (E_0 coordinates)."""
    if len(alpha) != rc.dim(k) or len(beta) != rc.dim(rc.n - k):
        raise ValueError("pairing needs forms of complementary degree in E_0 coordinates")
    a = rc.to_lambda(k, alpha)
    bb = rc.to_lambda(rc.n - k, beta)
    return wedge(rc.basis, k, a, rc.n - k, bb)[0]
