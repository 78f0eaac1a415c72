"""Anisotropic grids in exponential coordinates: spacing h**layer per coordinate."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from ..lie_core import StratifiedLieAlgebra, homogeneous_dimension


class GridError(ValueError):
    """Grid too small for a stencil, or points outside the grid / stencil margin."""


@dataclass(frozen=True, eq=False)
class Grid:
    alg: StratifiedLieAlgebra
    box: tuple[tuple[Fraction, Fraction], ...]
    h: Fraction

    def __post_init__(self):
        box = tuple((Fraction(lo), Fraction(hi)) for lo, hi in self.box)
        object.__setattr__(self, "box", box)
        object.__setattr__(self, "h", Fraction(self.h))
        if self.h <= 0:
            raise GridError("h must be positive")
        if len(box) != self.alg.dim:
            raise GridError(f"box has {len(box)} intervals, algebra has dimension {self.alg.dim}")
        for (lo, hi), s in zip(box, self.spacing):
            if hi < lo:
                raise GridError("empty box interval")
            if ((hi - lo) / s).denominator != 1:
                raise GridError(f"interval [{lo}, {hi}] is not a whole number of steps {s}")

    @classmethod
    def centered(cls, alg: StratifiedLieAlgebra, h, half_counts: Sequence[int]) -> Grid:
        """Grid with 2*half_counts[a]+1 points per coordinate, centred at the origin."""
        h = Fraction(h)
        box = []
        for a, k in enumerate(half_counts):
            s = h ** alg.layers[a]
            box.append((-k * s, k * s))
        return cls(alg, tuple(box), h)

    def _key(self):
        return (self.alg.name, self.alg.layer_dims, self.box, self.h)

    def __eq__(self, other):
        return isinstance(other, Grid) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @property
    def spacing(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(self.h) ** w for w in self.alg.layers)

    @property
    def origin(self) -> tuple[Fraction, ...]:
        return tuple(lo for lo, _ in self.box)

    @cached_property
    def shape(self) -> tuple[int, ...]:
        return tuple(int((hi - lo) / s) + 1 for (lo, hi), s in zip(self.box, self.spacing))

    @property
    def npoints(self) -> int:
        return int(np.prod(self.shape))

    @property
    def cell_volume(self) -> Fraction:
        return self.h ** homogeneous_dimension(self.alg)

    def index(self, multi: Sequence[int]) -> int:
        return int(np.ravel_multi_index(tuple(multi), self.shape))

    def multi(self, idx: int) -> tuple[int, ...]:
        return tuple(int(i) for i in np.unravel_index(idx, self.shape))

    def contains(self, multi: Sequence[int]) -> bool:
        return all(0 <= p < s for p, s in zip(multi, self.shape))

    def coord(self, multi: Sequence[int]) -> tuple[Fraction, ...]:
        return tuple(o + p * s for o, p, s in zip(self.origin, multi, self.spacing))

    @cached_property
    def coords_float(self) -> np.ndarray:
        """(npoints, n) float coordinates in flat-index order."""
        axes = [float(o) + float(s) * np.arange(k) for o, s, k in zip(self.origin, self.spacing, self.shape)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)

    @cached_property
    def multis(self) -> np.ndarray:
        return np.stack(np.unravel_index(np.arange(self.npoints), self.shape), axis=1)

    def in_margin(self, multi: Sequence[int], r: int) -> bool:
        return all(r <= p <= s - 1 - r for p, s in zip(multi, self.shape))

    def margin_mask(self, r: int) -> np.ndarray:
        m = self.multis
        shape = np.array(self.shape)
        return np.all((m >= r) & (m <= shape - 1 - r), axis=1)

    def nearest(self, coords: Sequence) -> tuple[int, ...] | None:
        """Nearest grid index to a coordinate point (ties round up); None outside the box."""
        out = []
        for x, o, s, k in zip(coords, self.origin, self.spacing, self.shape):
            t = (Fraction(x) - o) / s
            i = int((t + Fraction(1, 2)).__floor__())
            if not 0 <= i < k:
                return None
            out.append(i)
        return tuple(out)

    def points_in_box(self, box: Iterable[tuple]) -> list[int]:
        """Flat indices of grid points inside a coordinate sub-box."""
        c = self.coords_float
        mask = np.ones(self.npoints, dtype=bool)
        for a, (lo, hi) in enumerate(box):
            mask &= (c[:, a] >= float(lo) - 1e-12) & (c[:, a] <= float(hi) + 1e-12)
        return [int(i) for i in np.flatnonzero(mask)]

    def refine(self) -> Grid:
        return Grid(self.alg, self.box, self.h / 2)

    def to_json(self) -> dict:
        return {"box": [[str(lo), str(hi)] for lo, hi in self.box], "h": str(self.h)}
