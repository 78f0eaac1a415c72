"""Covering-number probe for flat compactness of normal currents.

Each level draws the same smooth random densities, turns them into diffuse
m-currents on that level's grid, rescales them to normal mass at most nu, and
pushes them to the common coarse grid by summing coefficients into the nearest
coarse point. A greedy eps-net under the flat distance is then built there.
"""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from ..rumin import RuminComplex
from .currents import DiscreteCurrent, DiscreteForm
from .grid import Grid
from .norms import diffuse_current, flat_norm, normal_mass
from .operators import stencil_margin

EXACT_DENOMINATOR = 1024


class ProbeBudgetError(RuntimeError):
    pass


@dataclass
class ProbeConfig:
    """Parameters of one probe run. ``box`` is the support box K in exponential coordinates."""

    dimension: int = 1
    box: tuple = ((-1, 1), (-1, 1), (Fraction(-1, 2), Fraction(1, 2)))
    h: Fraction = Fraction(1, 2)
    nu: float = 1.0
    eps: float = 0.2
    samples: int = 50
    levels: int = 2
    seed: int = 0
    mode: str = "float"
    max_samples: int = 500
    timing: bool = False

    def __post_init__(self):
        self.box = tuple((Fraction(lo), Fraction(hi)) for lo, hi in self.box)
        self.h = Fraction(self.h)
        if self.samples < 1 or self.levels < 1:
            raise ValueError("need at least one sample and one level")
        if self.samples > self.max_samples:
            raise ProbeBudgetError(f"{self.samples} samples exceed the budget of {self.max_samples}")
        if self.nu < 0 or self.eps <= 0:
            raise ValueError("nu must be >= 0 and eps > 0")
        if self.mode not in ("float", "exact"):
            raise ValueError("mode must be 'float' or 'exact'")


@dataclass
class LevelReport:
    h: str
    net_size: int
    max_pairwise_flat: object
    runtime_ms: float | None
    net: list[int] = field(default_factory=list)


@dataclass
class ProbeReport:
    algebra: str
    config: dict
    levels: list[LevelReport]

    @property
    def net_sizes(self) -> list[int]:
        return [lv.net_size for lv in self.levels]

    def within_factor(self, factor: float) -> bool:
        """Every level's covering number is within ``factor`` of the coarsest one."""
        base = self.net_sizes[0]
        return all(base / factor <= s <= base * factor for s in self.net_sizes)

    def to_json(self) -> dict:
        def num(v):
            return str(v) if isinstance(v, Fraction) else v

        return {
            "algebra": self.algebra,
            "config": {k: [[str(a), str(b)] for a, b in v] if k == "box" else num(v) for k, v in self.config.items()},
            "levels": [{**asdict(lv), "max_pairwise_flat": num(lv.max_pairwise_flat)} for lv in self.levels],
        }


def _padded_grid(rc: RuminComplex, box, h: Fraction, pad: int) -> Grid:
    alg = rc.alg
    out = []
    for a, (lo, hi) in enumerate(box):
        s = h ** alg.layers[a]
        out.append((lo - pad * s, hi + pad * s))
    return Grid(alg, tuple(out), h)


def _bump(coords: np.ndarray, box) -> tuple[np.ndarray, np.ndarray]:
    """C^2 bump vanishing outside the open box, and box-normalized coordinates."""
    mid = np.array([float(lo + hi) / 2 for lo, hi in box])
    rad = np.array([float(hi - lo) / 2 for lo, hi in box])
    u = (coords - mid) / rad
    inside = np.all(np.abs(u) < 1, axis=1)
    psi = np.where(inside, np.prod(np.clip(1 - u ** 2, 0, None) ** 3, axis=1), 0.0)
    return psi, u


def draw_densities(rc: RuminComplex, cfg: ProbeConfig) -> list[tuple[np.ndarray, float]]:
    """Per sample: affine coefficient matrix (dim E_0^{n-m}, 1 + #horizontal) and a scale in (0, 1]."""
    rng = np.random.default_rng(cfg.seed)
    k = rc.n - cfg.dimension
    nh = len(rc.alg.layer_indices(1))
    return [(rng.standard_normal((rc.dim(k), 1 + nh)), float(1.0 - rng.random())) for _ in range(cfg.samples)]


def sample_current(rc: RuminComplex, grid: Grid, cfg: ProbeConfig, coeffs: np.ndarray, scale: float) -> DiscreteCurrent:
    k = rc.n - cfg.dimension
    psi, u = _bump(grid.coords_float, cfg.box)
    hor = rc.alg.layer_indices(1)
    basis = np.concatenate([np.ones((grid.npoints, 1)), u[:, hor]], axis=1)
    phi = DiscreteForm(grid, k, psi[:, None] * (basis @ coeffs.T))
    T = diffuse_current(rc, grid, phi)
    N = float(normal_mass(rc, grid, T))
    if cfg.nu == 0 or N == 0:
        return DiscreteCurrent(grid, cfg.dimension, rc.dim(cfg.dimension), {})
    return T * (cfg.nu * scale / N)


def coarsen(T: DiscreteCurrent, coarse: Grid, exact: bool = False) -> DiscreteCurrent:
    """Sum coefficients into the nearest coarse point (mass does not increase)."""
    out: dict[tuple[int, int], object] = {}
    for (p, a), v in T.coeffs.items():
        q = coarse.nearest(T.grid.coord(T.grid.multi(p)))
        if q is None:
            raise ValueError("current leaves the coarse grid")
        key = (coarse.index(q), a)
        out[key] = out.get(key, 0.0) + float(v)
    if exact:
        out = {key: Fraction(round(v * EXACT_DENOMINATOR), EXACT_DENOMINATOR) for key, v in out.items()}
    return DiscreteCurrent(coarse, T.dimension, T.basis_dim, {key: v for key, v in out.items() if v})


def greedy_net(dist: np.ndarray | list, eps) -> list[int]:
    net: list[int] = []
    for i in range(len(dist)):
        if all(dist[i][j] > eps for j in net):
            net.append(i)
    return net


def compactness_probe(rc: RuminComplex, cfg: ProbeConfig) -> ProbeReport:
    if not 0 <= cfg.dimension < rc.n:
        raise ValueError(f"current dimension must lie in 0..{rc.n - 1}")
    exact = cfg.mode == "exact"
    pad = max(stencil_margin(rc, j) for j in range(rc.n))
    coarse = _padded_grid(rc, cfg.box, cfg.h, pad)
    draws = draw_densities(rc, cfg)
    eps = Fraction(cfg.eps).limit_denominator(10**6) if exact else cfg.eps
    levels = []
    for level in range(cfg.levels):
        t0 = time.perf_counter()
        h = cfg.h / 2 ** level
        fine = _padded_grid(rc, cfg.box, h, pad)
        currents = [coarsen(sample_current(rc, fine, cfg, c, s), coarse, exact) for c, s in draws]
        n = len(currents)
        zero = Fraction(0) if exact else 0.0
        dist = [[zero] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                dist[i][j] = dist[j][i] = flat_norm(rc, coarse, currents[i] - currents[j], cfg.mode)
        net = greedy_net(dist, eps)
        widest = max((max(row) for row in dist), default=zero)
        ms = round((time.perf_counter() - t0) * 1000, 1) if cfg.timing else None
        levels.append(LevelReport(str(h), len(net), widest, ms, net))
    config = {k: v for k, v in asdict(cfg).items() if k not in ("max_samples", "timing")}
    return ProbeReport(rc.alg.name, config, levels)
