import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ruminkit._poly import Poly
from ruminkit.discrete import DiscreteForm, Grid, GridError, dc_squared_sup, discretize_dc
from ruminkit.discrete.operators import stencil_margin
from ruminkit.lie_core import heisenberg, left_invariant_frame

from conftest import complex_of
from oracles import act_symbolic


def _affine(rng, n):
    terms = {(0,) * n: Fraction(rng.randint(-5, 5), rng.randint(1, 4))}
    for i in range(n):
        e = [0] * n
        e[i] = 1
        terms[tuple(e)] = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    return Poly(n, terms)


def test_grid_is_anisotropic_with_homogeneous_cell_volume():
    g = Grid.centered(heisenberg(1), Fraction(1, 2), (2, 2, 2))
    assert g.spacing == (Fraction(1, 2), Fraction(1, 2), Fraction(1, 4))
    assert g.cell_volume == Fraction(1, 16)
    assert g.shape == (5, 5, 5)
    assert g.refine().shape == (9, 9, 17)


def test_grid_index_round_trip_and_nearest():
    g = Grid.centered(heisenberg(1), Fraction(1, 2), (2, 2, 2))
    for idx in (0, 17, g.npoints - 1):
        assert g.index(g.multi(idx)) == idx
    assert g.nearest((0, 0, 0)) == (2, 2, 2)
    assert g.nearest((5, 0, 0)) is None


@pytest.mark.parametrize("box", [((0, 1), (0, 1)), ((0, Fraction(1, 3)), (0, 1), (0, 1)), ((1, 0), (0, 1), (0, 1))])
def test_bad_grids_rejected(box):
    with pytest.raises(GridError):
        Grid(heisenberg(1), box, Fraction(1, 2))


def test_grid_too_small_for_stencil(rc_heis):
    g = Grid.centered(rc_heis.alg, 1, (0, 0, 0))
    with pytest.raises(GridError):
        discretize_dc(rc_heis, g, 1)


@pytest.mark.parametrize("name,half", [("heisenberg(1)", (2, 2, 2)), ("engel", (3, 3, 3, 3))])
@given(seed=st.integers(0, 10**6))
@settings(max_examples=3)
def test_dc_is_exact_on_affine_coefficients(name, half, seed):
    rc = complex_of(name)
    rng = random.Random(seed)
    grid = Grid.centered(rc.alg, Fraction(1, 2), half)
    frame = left_invariant_frame(rc.alg)
    for k in range(rc.n):
        polys = [_affine(rng, rc.n) for _ in range(rc.dim(k))]
        op = discretize_dc(rc, grid, k, exact=True)
        got = op.apply_exact(DiscreteForm.sample_polys(rc, grid, k, polys).values)
        want = act_symbolic(frame, rc.dc[k], polys)
        for p in np.flatnonzero(op.valid):
            x = grid.coord(grid.multi(int(p)))
            assert got[p] == [w(x) for w in want]


def test_rows_outside_margin_are_zero(rc_heis):
    grid = Grid.centered(rc_heis.alg, Fraction(1, 2), (3, 3, 3))
    op = discretize_dc(rc_heis, grid, 1)
    assert op.margin == stencil_margin(rc_heis, 1) == 2
    rows = np.asarray(abs(op.matrix).sum(axis=1)).reshape(grid.npoints, op.dst_dim)
    assert not rows[~op.valid].any()


def test_float_and_exact_assembly_agree(rc_engel):
    grid = Grid.centered(rc_engel.alg, Fraction(1, 2), (3, 3, 3, 3))
    a = discretize_dc(rc_engel, grid, 2)
    b = discretize_dc(rc_engel, grid, 2, exact=True)
    assert abs(a.matrix - b.matrix).max() == 0


def _smooth(x):
    return [np.sin(x[0] + 0.3 * x[2]) * np.cos(x[1]), np.exp(0.5 * x[0] - x[1]) * np.cos(x[2])]


def test_dc_squared_is_second_order_small(rc_heis):
    pts = [(a / 4, b / 4, c / 16) for a in range(-2, 3) for b in range(-2, 3) for c in range(-4, 5)]
    sups = [dc_squared_sup(rc_heis, 0, lambda x: [np.sin(x[0] + 0.3 * x[2]) * np.cos(2 * x[1])], h, pts)
            for h in (Fraction(1, 4), Fraction(1, 8), Fraction(1, 16))]
    assert all(s / t >= 1.7 for s, t in zip(sups, sups[1:]))
    sups = [dc_squared_sup(rc_heis, 1, _smooth, h, pts) for h in (Fraction(1, 4), Fraction(1, 8))]
    assert sups[0] / sups[1] >= 1.7


def test_dc_squared_sup_rejects_off_lattice_points(rc_heis):
    with pytest.raises(GridError):
        dc_squared_sup(rc_heis, 0, lambda x: [x[0]], Fraction(1, 4), [(0.1, 0, 0)])
