"""Stratified Lie algebras and the group structure they induce.

Points of the group are written in exponential coordinates of the first kind,
so the group law is the Baker-Campbell-Hausdorff series, which terminates for
nilpotent algebras and keeps rational inputs rational.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

from . import qlinalg
from ._poly import Poly

Bracket = dict[tuple[int, int], dict[int, Fraction]]


class AlgebraInputError(ValueError):
    """Malformed algebra data (bad indices, layer sizes, unparsable rationals)."""


@dataclass(frozen=True)
class StratifiedLieAlgebra:
    """Structure constants on a layer-ordered basis X_0..X_{n-1} (0-based internally).

    ``brackets`` holds the constants as declared; both (i, j) and (j, i) may be present,
    which is what lets validation detect antisymmetry failures.
    """

    name: str
    layer_dims: tuple[int, ...]
    brackets: Mapping[tuple[int, int], Mapping[int, Fraction]] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return sum(self.layer_dims)

    @property
    def step(self) -> int:
        return len(self.layer_dims)

    @property
    def layers(self) -> tuple[int, ...]:
        """Layer (1-based weight) of each basis vector."""
        return tuple(w for w, d in enumerate(self.layer_dims, start=1) for _ in range(d))

    def layer_indices(self, layer: int) -> list[int]:
        start = sum(self.layer_dims[: layer - 1])
        return list(range(start, start + self.layer_dims[layer - 1]))

    def c(self, i: int, j: int) -> dict[int, Fraction]:
        """Coefficients of [X_i, X_j] (antisymmetric completion of the declared data)."""
        if (i, j) in self.brackets:
            return dict(self.brackets[(i, j)])
        if (j, i) in self.brackets:
            return {k: -v for k, v in self.brackets[(j, i)].items()}
        return {}

    @property
    def is_abelian(self) -> bool:
        return not any(any(v != 0 for v in cs.values()) for cs in self.brackets.values())

    def bracket(self, u: Sequence, v: Sequence) -> list:
        """[u, v] for coordinate vectors over any commutative ring (Fraction, Poly, float)."""
        out = [0] * self.dim
        for (i, j), cs in self._table:
            a, b = u[i], v[j]
            if _zero(a) or _zero(b):
                continue
            ab = a * b
            for k, ck in cs:
                out[k] = out[k] + ck * ab
        return out

    @cached_property
    def _table(self):
        entries = []
        for i in range(self.dim):
            for j in range(self.dim):
                cs = [(k, v) for k, v in sorted(self.c(i, j).items()) if v != 0]
                if cs:
                    entries.append(((i, j), cs))
        return entries

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "layer_dims": list(self.layer_dims),
            "brackets": [
                {"i": i + 1, "j": j + 1, "coeffs": {str(k + 1): str(v) for k, v in sorted(cs.items())}}
                for (i, j), cs in sorted(self.brackets.items())
            ],
        }



def _zero(x) -> bool:
    if isinstance(x, Poly):
        return x.is_zero()
    try:
        return bool(x == 0)
    except ValueError:          # numpy arrays of coordinates
        return False


@dataclass(frozen=True)
class GroupPoint:
    coords: tuple[Fraction, ...]

    def __init__(self, coords: Iterable):
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in coords))

    def __neg__(self) -> GroupPoint:
        return GroupPoint(-c for c in self.coords)

    def __len__(self) -> int:
        return len(self.coords)


@dataclass
class ValidationReport:
    failures: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def failed_axioms(self) -> set[str]:
        return {a for a, _ in self.failures}

    def __str__(self) -> str:
        if self.ok:
            return "all axioms hold (antisymmetry, jacobi, grading, generation)"
        return "\n".join(f"{a}: {d}" for a, d in self.failures)


# --------------------------------------------------------------------------- validation


def _check_structure(alg: StratifiedLieAlgebra) -> None:
    if not alg.layer_dims or any((not isinstance(d, int)) or d <= 0 for d in alg.layer_dims):
        raise AlgebraInputError(f"layer_dims must be positive integers, got {alg.layer_dims!r}")
    n = alg.dim
    for (i, j), cs in alg.brackets.items():
        if not (0 <= i < n and 0 <= j < n):
            raise AlgebraInputError(f"bracket index ({i + 1}, {j + 1}) outside 1..{n}")
        for k in cs:
            if not 0 <= k < n:
                raise AlgebraInputError(f"coefficient index {k + 1} in [X{i + 1}, X{j + 1}] outside 1..{n}")


def validate_algebra(alg: StratifiedLieAlgebra) -> ValidationReport:
    """Check antisymmetry, Jacobi, grading and generation exactly.

    Raises AlgebraInputError for malformed index data; axiom failures are reported.
    """
    _check_structure(alg)
    rep = ValidationReport()
    n = alg.dim
    lay = alg.layers

    for (i, j), cs in alg.brackets.items():
        if i == j and any(v != 0 for v in cs.values()):
            rep.failures.append(("antisymmetry", f"[X{i + 1}, X{i + 1}] != 0"))
        if (j, i) in alg.brackets and i < j:
            other = alg.brackets[(j, i)]
            for k in set(cs) | set(other):
                if cs.get(k, 0) != -other.get(k, 0):
                    rep.failures.append(
                        ("antisymmetry", f"c^{k + 1}_{{{i + 1}{j + 1}}} != -c^{k + 1}_{{{j + 1}{i + 1}}}")
                    )

    def br(u, v):
        return alg.bracket(u, v)

    basis = [[Fraction(int(a == b)) for a in range(n)] for b in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                x, y, z = basis[i], basis[j], basis[k]
                terms = [br(x, br(y, z)), br(y, br(z, x)), br(z, br(x, y))]
                s = [a + b + c for a, b, c in zip(*terms)]
                if any(v != 0 for v in s):
                    rep.failures.append(("jacobi", f"fails on (X{i + 1}, X{j + 1}, X{k + 1})"))

    for i in range(n):
        for j in range(n):
            for k, v in alg.c(i, j).items():
                if v != 0 and lay[k] != lay[i] + lay[j]:
                    rep.failures.append(
                        ("grading", f"[X{i + 1}, X{j + 1}] has X{k + 1} component outside layer {lay[i] + lay[j]}")
                    )

    for m in range(1, alg.step):
        target = alg.layer_indices(m + 1)
        vecs = []
        for i in alg.layer_indices(1):
            for j in alg.layer_indices(m):
                cs = alg.c(i, j)
                vecs.append([cs.get(k, Fraction(0)) for k in target])
        if qlinalg.rank(vecs) != len(target):
            rep.failures.append(("generation", f"layer {m + 1} is not spanned by [g_1, g_{m}]"))
    return rep


def require_valid(alg: StratifiedLieAlgebra) -> StratifiedLieAlgebra:
    rep = validate_algebra(alg)
    if not rep.ok:
        raise ValueError(f"algebra {alg.name!r} fails validation:\n{rep}")
    return alg


def homogeneous_dimension(alg: StratifiedLieAlgebra) -> int:
    return sum(i * d for i, d in enumerate(alg.layer_dims, start=1))


# --------------------------------------------------------------------------- BCH


def _tensor_mul(a: dict, b: dict, depth: int) -> dict:
    out: dict[tuple[int, ...], Fraction] = {}
    for w1, c1 in a.items():
        for w2, c2 in b.items():
            if len(w1) + len(w2) <= depth:
                w = w1 + w2
                out[w] = out.get(w, 0) + c1 * c2
    return {w: c for w, c in out.items() if c != 0}


@lru_cache(maxsize=None)
def bch_lie_words(depth: int) -> tuple[tuple[Fraction, tuple[int, ...]], ...]:
    """BCH(X, Y) up to bracket length ``depth`` as sum of coeff * left-normed bracket(word).

    Letters are 0 for X and 1 for Y. The series is computed as log(exp X exp Y) in the
    truncated free associative algebra and mapped to brackets by Dynkin's projection
    (a homogeneous Lie polynomial P of degree k satisfies P = (1/k) * leftnormed(P)).
    """
    def exp_letter(letter):
        out = {(): Fraction(1)}
        power = {(): Fraction(1)}
        fact = 1
        for k in range(1, depth + 1):
            power = _tensor_mul(power, {(letter,): Fraction(1)}, depth)
            fact *= k
            for w, c in power.items():
                out[w] = out.get(w, 0) + c / fact
        return out

    z = _tensor_mul(exp_letter(0), exp_letter(1), depth)
    z.pop((), None)
    log: dict[tuple[int, ...], Fraction] = {}
    power = {(): Fraction(1)}
    for k in range(1, depth + 1):
        power = _tensor_mul(power, z, depth)
        sign = 1 if k % 2 else -1
        for w, c in power.items():
            log[w] = log.get(w, 0) + Fraction(sign, k) * c
    words = []
    for w, c in sorted(log.items(), key=lambda t: (len(t[0]), t[0])):
        if c == 0 or (len(w) >= 2 and w[0] == w[1]):
            continue
        words.append((c / len(w), w))
    return tuple(words)


def bch(alg: StratifiedLieAlgebra, u: Sequence, v: Sequence,
        scalar: Callable = lambda c: c) -> list:
    """Group law in exponential coordinates over any commutative ring of coordinates."""
    n = alg.dim
    out = [0] * n
    cache: dict[tuple[int, ...], list] = {(0,): list(u), (1,): list(v)}

    def nested(word):
        if word in cache:
            return cache[word]
        val = alg.bracket(nested(word[:-1]), cache[(word[-1],)])
        cache[word] = val
        return val

    for coeff, word in bch_lie_words(alg.step):
        vec = nested(word)
        s = scalar(coeff)
        for k in range(n):
            if not _zero(vec[k]):
                out[k] = out[k] + s * vec[k]
    return out


def _coords(p) -> tuple:
    return p.coords if isinstance(p, GroupPoint) else tuple(p)


def bch_multiply(alg: StratifiedLieAlgebra, p, q) -> GroupPoint:
    a, b = _coords(p), _coords(q)
    if len(a) != alg.dim or len(b) != alg.dim:
        raise ValueError("point dimension does not match the algebra")
    return GroupPoint(bch(alg, [Fraction(x) for x in a], [Fraction(x) for x in b]))


def bch_multiply_float(alg: StratifiedLieAlgebra, p, q) -> list:
    """Float (or numpy-array) version of the group law."""
    return bch(alg, list(p), list(q), scalar=float)


def dilate(alg: StratifiedLieAlgebra, t, p) -> GroupPoint:
    t = Fraction(t)
    if t <= 0:
        raise ValueError("dilation factor must be positive")
    return GroupPoint(t**w * x for w, x in zip(alg.layers, _coords(p)))


# --------------------------------------------------------------------------- frame


@dataclass(frozen=True)
class FrameExpression:
    """coeffs[i][a] is the coefficient of d/dx_a in the left-invariant field X_i."""

    coeffs: tuple[tuple[Poly, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def apply(self, i: int, f: Poly) -> Poly:
        out = Poly(f.nvars)
        for a, c in enumerate(self.coeffs[i]):
            if not c.is_zero():
                out = out + c * f.diff(a)
        return out

    def bracket(self, i: int, j: int) -> tuple[Poly, ...]:
        """Components of the vector field [X_i, X_j]."""
        n = self.dim
        xi, xj = self.coeffs[i], self.coeffs[j]
        out = []
        for b in range(n):
            s = Poly(n)
            for a in range(n):
                s = s + xi[a] * xj[b].diff(a) - xj[a] * xi[b].diff(a)
            out.append(s)
        return tuple(out)


def left_invariant_frame(alg: StratifiedLieAlgebra) -> FrameExpression:
    n = alg.dim
    nv = n + 1  # coordinates plus the flow parameter t
    x = [Poly.var(nv, a) for a in range(n)]
    rows = []
    for i in range(n):
        v = [Poly(nv)] * n
        v[i] = Poly.var(nv, n)
        prod = bch(alg, x, v)
        row = []
        for a in range(n):
            lin = prod[a].coeff_in(n, 1) if isinstance(prod[a], Poly) else Poly(nv)
            row.append(Poly(n, {e[:n]: c for e, c in lin.terms.items()}))
        rows.append(tuple(row))
    return FrameExpression(tuple(rows))


def frame_reproduces_brackets(alg: StratifiedLieAlgebra, frame: FrameExpression | None = None) -> bool:
    frame = frame or left_invariant_frame(alg)
    n = alg.dim
    for i, j in product(range(n), repeat=2):
        lhs = frame.bracket(i, j)
        rhs = [Poly(n)] * n
        for k, ck in alg.c(i, j).items():
            rhs = [r + frame.coeffs[k][b] * ck for b, r in enumerate(rhs)]
        if any(a != b for a, b in zip(lhs, rhs)):
            return False
    return True


# --------------------------------------------------------------------------- catalog / io


def abelian(n: int) -> StratifiedLieAlgebra:
    if n < 1:
        raise AlgebraInputError("abelian(n) needs n >= 1")
    return StratifiedLieAlgebra(f"abelian({n})", (n,), {})


def heisenberg(k: int = 1) -> StratifiedLieAlgebra:
    """[X_{2i-1}, X_{2i}] = X_{2k+1} for i = 1..k (1-based)."""
    if k < 1:
        raise AlgebraInputError("heisenberg(k) needs k >= 1")
    z = 2 * k
    return StratifiedLieAlgebra(
        f"heisenberg({k})", (2 * k, 1), {(2 * i, 2 * i + 1): {z: Fraction(1)} for i in range(k)}
    )


def engel() -> StratifiedLieAlgebra:
    """[X1, X2] = X3, [X1, X3] = X4 (1-based)."""
    return StratifiedLieAlgebra(
        "engel", (2, 1, 1), {(0, 1): {2: Fraction(1)}, (0, 2): {3: Fraction(1)}}
    )


_CATALOG = re.compile(r"^\s*(abelian|heisenberg|engel)\s*(?:\(\s*(\d+)\s*\))?\s*$")


def catalog(name: str) -> StratifiedLieAlgebra:
    m = _CATALOG.match(name)
    if not m:
        raise KeyError(f"unknown catalog algebra {name!r}; expected abelian(n), heisenberg(k) or engel")
    kind, arg = m.group(1), m.group(2)
    if kind == "engel":
        if arg is not None:
            raise KeyError("engel takes no parameter")
        return engel()
    if kind == "heisenberg":
        return heisenberg(int(arg) if arg else 1)
    if arg is None:
        raise KeyError("abelian needs a dimension, e.g. abelian(3)")
    return abelian(int(arg))


def algebra_from_json(data: Mapping) -> StratifiedLieAlgebra:
    try:
        layer_dims = tuple(int(d) for d in data["layer_dims"])
        n = sum(layer_dims)
        brackets: Bracket = {}
        for entry in data.get("brackets", []):
            i, j = int(entry["i"]) - 1, int(entry["j"]) - 1
            cs = {int(k) - 1: Fraction(str(v)) for k, v in entry["coeffs"].items()}
            brackets.setdefault((i, j), {}).update(cs)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise AlgebraInputError(f"malformed algebra JSON: {exc}") from exc
    alg = StratifiedLieAlgebra(str(data.get("name", "custom")), layer_dims, brackets)
    _check_structure(alg)
    if n <= 0:
        raise AlgebraInputError("empty algebra")
    return alg


def load_algebra(source: str) -> StratifiedLieAlgebra:
    """Catalog name or path to an algebra JSON file."""
    if _CATALOG.match(source):
        return catalog(source)
    path = Path(source)
    if not path.exists():
        raise AlgebraInputError(f"{source!r} is neither a catalog name nor an existing file")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise AlgebraInputError(f"{source}: invalid JSON ({exc})") from exc
    return algebra_from_json(data)
