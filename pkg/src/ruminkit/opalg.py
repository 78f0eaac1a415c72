"""Left-invariant differential operators: the enveloping algebra in a PBW basis.

A PBW monomial is an exponent vector e, read as X_1^{e_1} ... X_n^{e_n} in the
layer-major basis order. Acting on functions, the rightmost factor applies first.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .lie_core import StratifiedLieAlgebra
from . import qlinalg

Monomial = tuple[int, ...]


class EnvelopingAlgebra:
    """PBW arithmetic for one algebra; holds the normalization cache."""

    def __init__(self, alg: StratifiedLieAlgebra):
        self.alg = alg
        self.n = alg.dim
        self.layers = alg.layers
        self._cache: dict[tuple[int, ...], dict[Monomial, Fraction]] = {}
        self._brackets = {
            (i, j): [(k, v) for k, v in sorted(alg.c(i, j).items()) if v != 0]
            for i in range(self.n)
            for j in range(self.n)
        }

    # construction helpers
    def one(self) -> EnvelopingElement:
        return EnvelopingElement(self, {(0,) * self.n: Fraction(1)})

    def zero(self) -> EnvelopingElement:
        return EnvelopingElement(self, {})

    def scalar(self, c) -> EnvelopingElement:
        return EnvelopingElement(self, {(0,) * self.n: Fraction(c)})

    def gen(self, i: int) -> EnvelopingElement:
        e = [0] * self.n
        e[i] = 1
        return EnvelopingElement(self, {tuple(e): Fraction(1)})

    def monomial_word(self, e: Monomial) -> tuple[int, ...]:
        return tuple(i for i, k in enumerate(e) for _ in range(k))

    def word_monomial(self, word: Sequence[int]) -> Monomial:
        e = [0] * self.n
        for i in word:
            e[i] += 1
        return tuple(e)

    def weight(self, e: Monomial) -> int:
        return sum(k * w for k, w in zip(e, self.layers))

    # normalization
    def normalize_word(self, word: Sequence[int], schedule: str = "leftmost",
                       rng: random.Random | None = None) -> dict[Monomial, Fraction]:
        """Rewrite a word into PBW-ordered monomials.

        ``schedule`` picks which out-of-order adjacent pair is rewritten first:
        "leftmost" (memoized), "rightmost" or "random".
        """
        word = tuple(word)
        if schedule == "leftmost":
            return self._normalize_memo(word)
        return self._normalize_plain(word, schedule, rng or random.Random(0))

    def _descents(self, word):
        return [p for p in range(len(word) - 1) if word[p] > word[p + 1]]

    def _normalize_memo(self, word):
        hit = self._cache.get(word)
        if hit is not None:
            return hit
        desc = self._descents(word)
        if not desc:
            out = {self.word_monomial(word): Fraction(1)}
        else:
            p = desc[0]
            out = self._rewrite(word, p, self._normalize_memo)
        self._cache[word] = out
        return out

    def _normalize_plain(self, word, schedule, rng):
        desc = self._descents(word)
        if not desc:
            return {self.word_monomial(word): Fraction(1)}
        p = desc[-1] if schedule == "rightmost" else rng.choice(desc)
        return self._rewrite(word, p, lambda w: self._normalize_plain(w, schedule, rng))

    def _rewrite(self, word, p, rec):
        j, i = word[p], word[p + 1]
        out: dict[Monomial, Fraction] = {}
        swapped = word[:p] + (i, j) + word[p + 2:]
        for m, c in rec(swapped).items():
            out[m] = out.get(m, 0) + c
        # X_j X_i = X_i X_j + [X_j, X_i]
        for k, ck in self._brackets[(j, i)]:
            for m, c in rec(word[:p] + (k,) + word[p + 2:]).items():
                out[m] = out.get(m, 0) + ck * c
        return {m: c for m, c in out.items() if c != 0}

    def mul_monomials(self, a: Monomial, b: Monomial) -> dict[Monomial, Fraction]:
        last = max((i for i, k in enumerate(a) if k), default=-1)
        first = min((i for i, k in enumerate(b) if k), default=self.n)
        if last <= first:
            return {tuple(x + y for x, y in zip(a, b)): Fraction(1)}
        return self._normalize_memo(self.monomial_word(a) + self.monomial_word(b))


def pbw_normalize(ring: EnvelopingAlgebra, word: Sequence[int], coeff=1,
                  schedule: str = "leftmost", rng: random.Random | None = None) -> EnvelopingElement:
    c = Fraction(coeff)
    terms = ring.normalize_word(word, schedule, rng)
    return EnvelopingElement(ring, {m: c * v for m, v in terms.items()})


class EnvelopingElement:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: EnvelopingAlgebra, terms: Mapping[Monomial, Fraction]):
        self.ring = ring
        self.terms = {m: Fraction(c) for m, c in terms.items() if c != 0}

    def __add__(self, other) -> EnvelopingElement:
        other = self._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return EnvelopingElement(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> EnvelopingElement:
        return EnvelopingElement(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> EnvelopingElement:
        return self + (-self._lift(other))

    def __rsub__(self, other) -> EnvelopingElement:
        return self._lift(other) - self

    def __mul__(self, other) -> EnvelopingElement:
        if not isinstance(other, EnvelopingElement):
            s = Fraction(other)
            return EnvelopingElement(self.ring, {m: c * s for m, c in self.terms.items()})
        out: dict[Monomial, Fraction] = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                for m, c in self.ring.mul_monomials(a, b).items():
                    out[m] = out.get(m, 0) + ca * cb * c
        return EnvelopingElement(self.ring, out)

    def __rmul__(self, other) -> EnvelopingElement:
        s = Fraction(other)
        return EnvelopingElement(self.ring, {m: s * c for m, c in self.terms.items()})

    def _lift(self, other) -> EnvelopingElement:
        return other if isinstance(other, EnvelopingElement) else self.ring.scalar(other)

    def __eq__(self, other) -> bool:
        if isinstance(other, EnvelopingElement):
            return self.terms == other.terms
        return self.terms == self.ring.scalar(other).terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def weights(self) -> set[int]:
        return {self.ring.weight(m) for m in self.terms}

    def weight_range(self) -> tuple[int, int] | None:
        ws = self.weights()
        return (min(ws), max(ws)) if ws else None

    def derivative_range(self) -> tuple[int, int] | None:
        ds = {sum(m) for m in self.terms}
        return (min(ds), max(ds)) if ds else None

    def homogeneous_part(self, weight: int) -> EnvelopingElement:
        return EnvelopingElement(self.ring, {m: c for m, c in self.terms.items() if self.ring.weight(m) == weight})

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        # graded-lex: total degree, then larger exponent on earlier generator first
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), tuple(-x for x in t[0])))

    def dump(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            factors = [f"X{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(m) if k]
            parts.append(f"{c} · {' '.join(factors) if factors else '1'}")
        return " + ".join(parts)

    __str__ = dump

    def __repr__(self) -> str:
        return f"EnvelopingElement({self.dump()})"


@dataclass
class OperatorMatrix:
    """Matrix of operators; rows index the target form basis, columns the source."""

    ring: EnvelopingAlgebra
    entries: list[list[EnvelopingElement]]
    rows: int
    cols: int
    row_weights: tuple[int, ...] | None = None
    col_weights: tuple[int, ...] | None = None

    @classmethod
    def zeros(cls, ring, rows, cols, row_weights=None, col_weights=None) -> OperatorMatrix:
        return cls(ring, [[ring.zero() for _ in range(cols)] for _ in range(rows)], rows, cols,
                   row_weights, col_weights)

    @classmethod
    def identity(cls, ring, n, weights=None) -> OperatorMatrix:
        m = cls.zeros(ring, n, n, weights, weights)
        for i in range(n):
            m.entries[i][i] = ring.one()
        return m

    @classmethod
    def from_scalar(cls, ring, mat: qlinalg.Matrix, rows=None, cols=None,
                    row_weights=None, col_weights=None) -> OperatorMatrix:
        r = len(mat) if rows is None else rows
        c = (len(mat[0]) if mat else 0) if cols is None else cols
        return cls(ring, [[ring.scalar(mat[i][j]) for j in range(c)] for i in range(r)], r, c,
                   row_weights, col_weights)

    def __getitem__(self, ij) -> EnvelopingElement:
        i, j = ij
        return self.entries[i][j]

    def _same_shape(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} vs {other.rows}x{other.cols}")

    def __add__(self, other: OperatorMatrix) -> OperatorMatrix:
        self._same_shape(other)
        return OperatorMatrix(self.ring, [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)],
                              self.rows, self.cols, self.row_weights, self.col_weights)

    def __sub__(self, other: OperatorMatrix) -> OperatorMatrix:
        self._same_shape(other)
        return OperatorMatrix(self.ring, [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)],
                              self.rows, self.cols, self.row_weights, self.col_weights)

    def __neg__(self) -> OperatorMatrix:
        return OperatorMatrix(self.ring, [[-a for a in r] for r in self.entries], self.rows, self.cols,
                              self.row_weights, self.col_weights)

    def __matmul__(self, other: OperatorMatrix) -> OperatorMatrix:
        return op_compose(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, OperatorMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and all(
            a == b for ra, rb in zip(self.entries, other.entries) for a, b in zip(ra, rb)
        )

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self.entries for e in r)

    def is_scalar(self) -> bool:
        zero = (0,) * self.ring.n
        return all(set(e.terms) <= {zero} for r in self.entries for e in r)

    def scalar_part(self) -> qlinalg.Matrix:
        zero = (0,) * self.ring.n
        return [[e.terms.get(zero, Fraction(0)) for e in r] for r in self.entries]

    def weight_part(self, w: int) -> OperatorMatrix:
        return OperatorMatrix(self.ring, [[e.homogeneous_part(w) for e in r] for r in self.entries],
                              self.rows, self.cols, self.row_weights, self.col_weights)

    def weight_bookkeeping_ok(self) -> bool:
        """Every term: operator weight + source weight == target weight."""
        if self.row_weights is None or self.col_weights is None:
            raise ValueError("weights not attached")
        for i, r in enumerate(self.entries):
            for j, e in enumerate(r):
                if any(w + self.col_weights[j] != self.row_weights[i] for w in e.weights()):
                    return False
        return True

    def dump(self, row_labels: Sequence[str] | None = None, col_labels: Sequence[str] | None = None) -> str:
        lines = []
        for i, r in enumerate(self.entries):
            for j, e in enumerate(r):
                if e:
                    rl = row_labels[i] if row_labels else str(i + 1)
                    cl = col_labels[j] if col_labels else str(j + 1)
                    lines.append(f"[{rl} <- {cl}] {e.dump()}")
        return "\n".join(lines) if lines else "0"


def op_compose(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    """(a o b): apply b first, then a."""
    if a.cols != b.rows:
        raise ValueError(f"cannot compose {a.rows}x{a.cols} with {b.rows}x{b.cols}")
    ring = a.ring
    out = []
    for i in range(a.rows):
        row = []
        ai = a.entries[i]
        for j in range(b.cols):
            acc: dict[Monomial, Fraction] = {}
            for k in range(a.cols):
                x = ai[k]
                if not x.terms:
                    continue
                y = b.entries[k][j]
                if not y.terms:
                    continue
                for ma, ca in x.terms.items():
                    for mb, cb in y.terms.items():
                        for m, c in ring.mul_monomials(ma, mb).items():
                            acc[m] = acc.get(m, 0) + ca * cb * c
            row.append(EnvelopingElement(ring, acc))
        out.append(row)
    return OperatorMatrix(ring, out, a.rows, b.cols, a.row_weights, b.col_weights)


def operator_order(a: OperatorMatrix) -> list[list[tuple[int, int] | None]]:
    """Homogeneous-weight range (min, max) per entry; None for zero entries."""
    return [[e.weight_range() for e in r] for r in a.entries]


def derivative_order(a: OperatorMatrix) -> list[list[tuple[int, int] | None]]:
    return [[e.derivative_range() for e in r] for r in a.entries]


def distinct_orders(a: OperatorMatrix) -> list[int]:
    ws: set[int] = set()
    for r in a.entries:
        for e in r:
            ws |= e.weights()
    return sorted(ws)
