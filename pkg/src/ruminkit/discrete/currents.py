"""Sampled Rumin forms and finitely supported currents on a grid."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from ..rumin import RuminComplex
from .grid import Grid


@dataclass
class DiscreteForm:
    """values[p, a]: coefficient of the a-th E_0^k basis vector at grid point p."""

    grid: Grid
    degree: int
    values: np.ndarray

    def __post_init__(self):
        if self.values.ndim != 2 or self.values.shape[0] != self.grid.npoints:
            raise ValueError("values must have shape (npoints, dim E_0^k)")

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    @property
    def is_exact(self) -> bool:
        return self.values.dtype == object

    @classmethod
    def zeros(cls, rc: RuminComplex, grid: Grid, k: int) -> DiscreteForm:
        return cls(grid, k, np.zeros((grid.npoints, rc.dim(k))))

    @classmethod
    def sample(cls, rc: RuminComplex, grid: Grid, k: int, func: Callable) -> DiscreteForm:
        """``func(coords)`` gets an (npoints, n) float array and returns (npoints, dim)."""
        vals = np.asarray(func(grid.coords_float), dtype=float).reshape(grid.npoints, rc.dim(k))
        return cls(grid, k, vals)

    @classmethod
    def sample_polys(cls, rc: RuminComplex, grid: Grid, k: int, polys: Sequence) -> DiscreteForm:
        """Exact samples of polynomial coefficients (one Poly per E_0^k basis vector)."""
        vals = np.empty((grid.npoints, rc.dim(k)), dtype=object)
        for p in range(grid.npoints):
            x = grid.coord(grid.multi(p))
            for a, poly in enumerate(polys):
                vals[p, a] = Fraction(poly(x))
        return cls(grid, k, vals)

    def flat(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float).reshape(-1)

    def sup_norm(self) -> float:
        return float(np.max(np.abs(np.asarray(self.values, dtype=float)), initial=0.0))


@dataclass
class DiscreteCurrent:
    """Finitely supported dual vector; coeffs maps (point index, basis index) to a number."""

    grid: Grid
    dimension: int
    basis_dim: int
    coeffs: dict[tuple[int, int], object] = field(default_factory=dict)

    def __post_init__(self):
        self.coeffs = {k: v for k, v in self.coeffs.items() if v != 0}
        for p, a in self.coeffs:
            if not (0 <= p < self.grid.npoints and 0 <= a < self.basis_dim):
                raise ValueError(f"coefficient ({p}, {a}) outside the grid or basis")

    @classmethod
    def zero(cls, rc: RuminComplex, grid: Grid, m: int) -> DiscreteCurrent:
        return cls(grid, m, rc.dim(m))

    @classmethod
    def from_vector(cls, grid: Grid, m: int, basis_dim: int, vec: Iterable) -> DiscreteCurrent:
        coeffs = {}
        for i, v in enumerate(vec):
            if v != 0:
                coeffs[(i // basis_dim, i % basis_dim)] = v
        return cls(grid, m, basis_dim, coeffs)

    @property
    def ndof(self) -> int:
        return self.grid.npoints * self.basis_dim

    def dof(self, p: int, a: int) -> int:
        return p * self.basis_dim + a

    def by_dof(self) -> dict[int, object]:
        return {self.dof(p, a): v for (p, a), v in self.coeffs.items()}

    def to_vector(self) -> np.ndarray:
        out = np.zeros(self.ndof)
        for i, v in self.by_dof().items():
            out[i] = float(v)
        return out

    @property
    def is_exact(self) -> bool:
        return all(isinstance(v, (int, Fraction)) for v in self.coeffs.values())

    def support(self) -> list[int]:
        return sorted({p for p, _ in self.coeffs})

    def pair(self, form: DiscreteForm):
        if form.degree != self.dimension:
            raise ValueError("current and form degrees differ")
        return sum((v * form.values[p, a] for (p, a), v in self.coeffs.items()), 0)

    def _combine(self, other: DiscreteCurrent, sign) -> DiscreteCurrent:
        if other.dimension != self.dimension or other.grid != self.grid:
            raise ValueError("currents live in different spaces")
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + sign * v
        return DiscreteCurrent(self.grid, self.dimension, self.basis_dim, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __mul__(self, s) -> DiscreteCurrent:
        return DiscreteCurrent(self.grid, self.dimension, self.basis_dim,
                               {k: s * v for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def as_float(self) -> DiscreteCurrent:
        return DiscreteCurrent(self.grid, self.dimension, self.basis_dim,
                               {k: float(v) for k, v in self.coeffs.items()})

    def to_json(self, algebra: str) -> dict:
        exact = self.is_exact
        return {
            "algebra": algebra,
            "grid": self.grid.to_json(),
            "dimension": self.dimension,
            "coefficients": [
                {"point": list(self.grid.multi(p)), "basis": a, "value": str(v) if exact else float(v)}
                for (p, a), v in sorted(self.coeffs.items())
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping, rc: RuminComplex, grid: Grid) -> DiscreteCurrent:
        m = int(data["dimension"])
        if not 0 <= m <= rc.n:
            raise ValueError(f"dimension {m} outside 0..{rc.n}")
        coeffs: dict[tuple[int, int], object] = {}
        for entry in data.get("coefficients", []):
            multi = tuple(int(i) for i in entry["point"])
            if len(multi) != rc.n or not grid.contains(multi):
                raise ValueError(f"point {list(multi)} outside grid of shape {list(grid.shape)}")
            a = int(entry["basis"])
            if not 0 <= a < rc.dim(m):
                raise ValueError(f"basis index {a} outside 0..{rc.dim(m) - 1}")
            raw = entry["value"]
            v = Fraction(raw) if isinstance(raw, (str, int)) else float(raw)
            key = (grid.index(multi), a)
            coeffs[key] = coeffs.get(key, 0) + v
        return cls(grid, m, rc.dim(m), coeffs)
