from fractions import Fraction

import numpy as np
import pytest

import ruminkit.discrete.homotopy as homotopy_mod
from ruminkit.discrete import Grid, HomotopyError, discrete_homotopy

from conftest import complex_of


@pytest.fixture(scope="module")
def heis_h1():
    rc = complex_of("heisenberg(1)")
    return discrete_homotopy(rc, Grid.centered(rc.alg, Fraction(1, 4), (3, 3, 3)), 1)


def test_degree_zero_has_no_incoming_homotopy():
    rc = complex_of("abelian(2)")
    H = discrete_homotopy(rc, Grid.centered(rc.alg, Fraction(1, 4), (4, 4)), 0)
    assert H.K is None
    dk, _ = H.homotopy_terms(np.zeros(H.ndof))
    assert not dk.any()


def test_abelian_functions_off_harmonics():
    rc = complex_of("abelian(2)")
    g = Grid.centered(rc.alg, Fraction(1, 4), (4, 4))
    H = discrete_homotopy(rc, g, 0)
    # constants are harmonic, so mean-zero is necessary but the checkerboard modes must go too
    assert np.linalg.norm(H.project_off_harmonics(np.ones(g.npoints))) < 1e-10
    x = g.coords_float
    for f in (np.sin(3 * x[:, 0]) * np.cos(x[:, 1]), x[:, 0] * x[:, 1] - np.mean(x[:, 0] * x[:, 1])):
        w = H.project_off_harmonics(f)
        assert H.residual(w) <= 1e-8 * np.abs(w).max()


@pytest.mark.parametrize("seed", range(5))
def test_heisenberg_degree_one_identity(heis_h1, seed):
    w = heis_h1.project_off_harmonics(np.random.default_rng(seed).standard_normal(heis_h1.ndof))
    assert heis_h1.residual(w) <= 1e-6 * np.abs(w).max()


def test_homotopy_pieces_are_exact_and_coexact(heis_h1):
    w = heis_h1.project_off_harmonics(np.random.default_rng(9).standard_normal(heis_h1.ndof))
    dk, kd = heis_h1.homotopy_terms(w)
    # D K w lies in the image of the incoming differential, K D w is orthogonal to it
    assert np.abs(dk @ kd) <= 1e-8 * np.dot(w, w)


def test_harmonic_forms_are_annihilated(heis_h1):
    if heis_h1.harmonic.shape[1] == 0:
        pytest.skip("no harmonic forms on this grid")
    h = heis_h1.harmonic[:, 0]
    dk, kd = heis_h1.homotopy_terms(h)
    assert np.abs(dk + kd).max() < 1e-8


def test_top_degree():
    rc = complex_of("heisenberg(1)")
    H = discrete_homotopy(rc, Grid.centered(rc.alg, Fraction(1, 2), (2, 2, 2)), 3)
    assert H.K_next is None
    w = H.project_off_harmonics(np.random.default_rng(1).standard_normal(H.ndof))
    assert H.residual(w) <= 1e-6 * np.abs(w).max()


def test_bad_rank_threshold_reports_residual(monkeypatch):
    rc = complex_of("abelian(2)")
    monkeypatch.setattr(homotopy_mod, "SVD_RTOL", 0.3)
    with pytest.raises(HomotopyError) as err:
        discrete_homotopy(rc, Grid.centered(rc.alg, Fraction(1, 4), (4, 4)), 1)
    assert err.value.residual > 1e-6


def test_degree_out_of_range():
    rc = complex_of("abelian(2)")
    with pytest.raises(ValueError):
        discrete_homotopy(rc, Grid.centered(rc.alg, Fraction(1, 4), (2, 2)), 3)
