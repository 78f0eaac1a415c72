import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ruminkit._poly import Poly
from ruminkit.discrete import DiscreteForm, Grid, GridError, cc_distance, heisenberg_boundary_correction
from ruminkit.discrete import holder_seminorm, sobolev_norm
from ruminkit.discrete.analysis import contact_extraction, homogeneous_norm
from ruminkit.lie_core import abelian, heisenberg

from conftest import complex_of
from oracles import correction_by_quad, g_by_hand, horizontal_loop, omega_from_theta

# ---------------------------------------------------------------- CC distance


def test_cc_distance_zero_on_diagonal():
    alg = heisenberg(1)
    g = Grid.centered(alg, Fraction(1, 2), (2, 2, 4))
    assert cc_distance(alg, g, (1, 2, 3), (1, 2, 3)) == 0


@given(seed=st.integers(0, 10**6))
@settings(max_examples=15)
def test_abelian_cc_distance_is_l1(seed):
    rng = random.Random(seed)
    alg = abelian(2)
    g = Grid.centered(alg, Fraction(1, 4), (3, 3))
    p = (rng.randrange(7), rng.randrange(7))
    q = (rng.randrange(7), rng.randrange(7))
    assert cc_distance(alg, g, p, q) == (abs(p[0] - q[0]) + abs(p[1] - q[1])) / 4


def test_heisenberg_vertical_step_costs_a_loop():
    alg = heisenberg(1)
    ratios = []
    for h in (Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)):
        g = Grid.centered(alg, h, (4, 4, 8))
        c = (4, 4, 8)
        one = cc_distance(alg, g, c, (4, 4, 9))
        assert one == 4 * float(h)                      # commutator loop of four steps
        ratios.append(one / float(h * h))
        # four times the height costs less than four loops
        assert cc_distance(alg, g, c, (4, 4, 12)) < 4 * one
    assert ratios[1] == 2 * ratios[0] and ratios[2] == 2 * ratios[1]


def test_unreachable_point_reported():
    alg = heisenberg(1)
    g = Grid.centered(alg, 1, (0, 0, 1))          # one column: no horizontal move stays inside
    with pytest.raises(GridError):
        cc_distance(alg, g, (0, 0, 0), (0, 0, 1))


# ---------------------------------------------------------------- Hoelder


def test_holder_constant_is_zero():
    g = Grid.centered(heisenberg(1), Fraction(1, 2), (1, 1, 2))
    f = DiscreteForm(g, 0, np.full((g.npoints, 1), 3.0))
    assert holder_seminorm(g, f, 0.5) == 0


def test_holder_of_coordinate_on_a_line():
    # |x - y| / |x - y|^(1/2) is largest at the diameter
    alg = abelian(1)
    g = Grid(alg, ((0, 2),), Fraction(1, 4))
    f = DiscreteForm(g, 0, g.coords_float[:, :1].copy())
    assert holder_seminorm(g, f, 0.5) == pytest.approx(np.sqrt(2), rel=1e-12)
    for bad in (0, 1, 1.5):
        with pytest.raises(ValueError):
            holder_seminorm(g, f, bad)


@given(lam=st.floats(-4, 4), seed=st.integers(0, 1000))
@settings(max_examples=10)
def test_holder_is_absolutely_homogeneous(lam, seed):
    g = Grid.centered(heisenberg(1), Fraction(1, 2), (1, 1, 2))
    vals = np.random.default_rng(seed).standard_normal((g.npoints, 2))
    a = holder_seminorm(g, DiscreteForm(g, 1, lam * vals), 0.3)
    assert a == pytest.approx(abs(lam) * holder_seminorm(g, DiscreteForm(g, 1, vals), 0.3), rel=1e-12, abs=1e-300)


def test_homogeneous_norm_scales_with_dilation():
    alg = heisenberg(1)
    x = np.array([0.3, -0.2, 0.05])
    assert homogeneous_norm(alg, x * np.array([2, 2, 4])) == pytest.approx(2 * homogeneous_norm(alg, x))


# ---------------------------------------------------------------- Sobolev


def test_sobolev_of_zero():
    rc = complex_of("heisenberg(1)")
    g = Grid.centered(rc.alg, Fraction(1, 2), (2, 2, 2))
    assert sobolev_norm(rc, g, DiscreteForm.zeros(rc, g, 1), 2) == 0


def test_sobolev_of_identity_function_converges():
    rc = complex_of("abelian(1)")
    errs = []
    for h in (Fraction(1, 16), Fraction(1, 64), Fraction(1, 256)):
        g = Grid(rc.alg, ((0, 1),), h)
        f = DiscreteForm(g, 0, g.coords_float[:, :1].copy())
        errs.append(abs(sobolev_norm(rc, g, f, 2) - (1 / np.sqrt(3) + 1)))
    assert errs[0] > errs[1] > errs[2] and errs[2] < 1e-2


@given(seed=st.integers(0, 10**6))
@settings(max_examples=10)
def test_sobolev_triangle_inequality(seed):
    rc = complex_of("heisenberg(1)")
    g = Grid.centered(rc.alg, Fraction(1, 2), (2, 2, 2))
    rng = np.random.default_rng(seed)
    a, b = rng.standard_normal((g.npoints, 2)), rng.standard_normal((g.npoints, 2))
    norm = lambda v: sobolev_norm(rc, g, DiscreteForm(g, 1, v), 1.5)
    assert norm(a + b) <= norm(a) + norm(b) + 1e-12


def test_sobolev_rejects_bad_exponent():
    rc = complex_of("abelian(1)")
    g = Grid(rc.alg, ((0, 1),), Fraction(1, 4))
    with pytest.raises(ValueError):
        sobolev_norm(rc, g, DiscreteForm.zeros(rc, g, 0), 0.5)


# ---------------------------------------------------------------- line-integral correction

X, Y, Z = (Poly.var(3, i) for i in range(3))


def test_extraction_matches_hand_formula(rc_heis):
    f1, f2 = X * Y + Z, X * X - Y * Z
    assert contact_extraction(rc_heis, omega_from_theta(rc_heis, f1, f2)) == g_by_hand(f1, f2)


def test_horizontal_loop_needs_no_correction(rc_heis):
    loop = horizontal_loop(Fraction(1, 2))
    assert loop[0] == loop[-1]
    res = heisenberg_boundary_correction(rc_heis, loop, omega_from_theta(rc_heis, X * Y + Z, X * X - Y * Z))
    assert abs(res.corrected - res.uncorrected) <= 1e-8
    assert abs(res.correction) <= 1e-8


def test_vertical_segment_correction_matches_quadrature(rc_heis):
    f1, f2 = X * Y + Z, X * X - Y * Z
    rect = [[0, 0, 0], [0, 0, 1], [1, 0, 1], [1, 0, 0], [0, 0, 0]]
    res = heisenberg_boundary_correction(rc_heis, rect, omega_from_theta(rc_heis, f1, f2))
    want = correction_by_quad(g_by_hand(f1, f2), rect)
    assert abs(want) > 0.1
    assert abs((res.uncorrected - res.corrected) - want) <= 1e-8


def test_zero_form_and_bad_inputs(rc_heis):
    rect = [[0, 0, 0], [0, 0, 1], [0, 0, 0]]
    zero = [Poly(3), Poly(3)]
    assert heisenberg_boundary_correction(rc_heis, rect, zero).corrected == 0
    with pytest.raises(ValueError):
        heisenberg_boundary_correction(rc_heis, [[0, 0, 0], [0, 0, 1]], zero)
    with pytest.raises(ValueError):
        heisenberg_boundary_correction(rc_heis, rect, [1.0, 2.0])
    with pytest.raises(ValueError):
        heisenberg_boundary_correction(complex_of("engel"), rect, zero)
