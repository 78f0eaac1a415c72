import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ruminkit.lie_core import (
    AlgebraInputError,
    GroupPoint,
    StratifiedLieAlgebra,
    abelian,
    algebra_from_json,
    bch,
    bch_multiply,
    bch_multiply_float,
    catalog,
    dilate,
    engel,
    frame_reproduces_brackets,
    heisenberg,
    homogeneous_dimension,
    left_invariant_frame,
    load_algebra,
    validate_algebra,
)
from ruminkit._poly import Poly

small = st.fractions(min_value=-3, max_value=3, max_denominator=6)


def points(n):
    return st.lists(small, min_size=n, max_size=n).map(GroupPoint)


ALGEBRAS = [abelian(1), abelian(3), heisenberg(1), heisenberg(2), engel()]


# ---------------------------------------------------------------- validation


def test_catalog_algebras_validate():
    for alg in ALGEBRAS:
        assert validate_algebra(alg).ok, alg.name


def test_antisymmetry_violation_is_reported():
    alg = StratifiedLieAlgebra("bad", (2, 1), {(0, 1): {2: Fraction(1)}, (1, 0): {2: Fraction(1)}})
    rep = validate_algebra(alg)
    assert "antisymmetry" in rep.failed_axioms()


def test_zero_bracket_fails_generation():
    rep = validate_algebra(StratifiedLieAlgebra("flat", (2, 1), {}))
    assert rep.failed_axioms() == {"generation"}


def test_grading_violation():
    # [X1, X2] landing in layer 1 breaks the grading
    rep = validate_algebra(StratifiedLieAlgebra("g", (2, 1), {(0, 1): {0: Fraction(1), 2: Fraction(1)}}))
    assert "grading" in rep.failed_axioms()


def test_jacobi_violation(tmp_path):
    alg = load_algebra("tests/data/jacobi_broken.json")
    assert validate_algebra(alg).failed_axioms() == {"jacobi"}


def test_malformed_index_is_input_error_not_axiom_failure():
    with pytest.raises(AlgebraInputError):
        validate_algebra(StratifiedLieAlgebra("x", (2, 1), {(0, 5): {2: Fraction(1)}}))
    with pytest.raises(AlgebraInputError):
        algebra_from_json({"layer_dims": [2], "brackets": [{"i": 1, "j": 2, "coeffs": {"3": "one"}}]})


def test_json_round_trip():
    for alg in ALGEBRAS:
        back = algebra_from_json(json.loads(json.dumps(alg.to_json())))
        assert back.layer_dims == alg.layer_dims
        assert all(back.c(i, j) == alg.c(i, j) for i in range(alg.dim) for j in range(alg.dim))


def test_catalog_names():
    assert catalog("heisenberg").dim == 3
    assert catalog("heisenberg(2)").layer_dims == (4, 1)
    assert catalog("abelian(4)").dim == 4
    with pytest.raises(KeyError):
        catalog("sl(2)")


@pytest.mark.parametrize("alg,q", [(abelian(3), 3), (heisenberg(1), 4), (heisenberg(2), 6), (engel(), 7)])
def test_homogeneous_dimension(alg, q):
    assert homogeneous_dimension(alg) == q


# ---------------------------------------------------------------- group law


@given(points(3), points(3))
def test_heisenberg_bch_closed_form(p, q):
    # (x, y, z)(x', y', z') = (x + x', y + y', z + z' + (x y' - y x') / 2)
    x, y, z = p.coords
    a, b, c = q.coords
    assert bch_multiply(heisenberg(1), p, q).coords == (x + a, y + b, z + c + (x * b - y * a) / 2)


@pytest.mark.parametrize("alg", [heisenberg(1), heisenberg(2), engel()], ids=lambda a: a.name)
@given(data=st.data())
def test_group_law_associative(alg, data):
    n = alg.dim
    p, q, r = (data.draw(points(n)) for _ in range(3))
    assert bch_multiply(alg, bch_multiply(alg, p, q), r) == bch_multiply(alg, p, bch_multiply(alg, q, r))


@pytest.mark.parametrize("alg", [heisenberg(1), engel()], ids=lambda a: a.name)
@given(data=st.data())
def test_inverse_and_identity(alg, data):
    p = data.draw(points(alg.dim))
    zero = GroupPoint([0] * alg.dim)
    assert bch_multiply(alg, p, -p) == zero
    assert bch_multiply(alg, p, zero) == p


@pytest.mark.parametrize("alg", [heisenberg(1), engel()], ids=lambda a: a.name)
@given(data=st.data(), t=st.fractions(min_value=Fraction(1, 4), max_value=4, max_denominator=4))
def test_dilation_is_automorphism(alg, data, t):
    p, q = data.draw(points(alg.dim)), data.draw(points(alg.dim))
    lhs = dilate(alg, t, bch_multiply(alg, p, q))
    rhs = bch_multiply(alg, dilate(alg, t, p), dilate(alg, t, q))
    assert lhs == rhs


def test_dilation_rejects_nonpositive():
    with pytest.raises(ValueError):
        dilate(heisenberg(1), 0, GroupPoint([1, 1, 1]))


def test_float_group_law_matches_exact():
    alg = engel()
    p, q = [Fraction(1, 3), -2, Fraction(5, 7), 1], [Fraction(-1, 2), Fraction(3, 4), 0, 2]
    exact = bch_multiply(alg, p, q).coords
    approx = bch_multiply_float(alg, [float(v) for v in p], [float(v) for v in q])
    assert all(abs(float(a) - b) < 1e-12 for a, b in zip(exact, approx))


def test_bch_over_polynomials_is_exact_for_nilpotent():
    # Symbolic group law: multiplying by the symbolic inverse gives back the symbolic point.
    alg = engel()
    n = alg.dim
    x = [Poly.var(2 * n, i) for i in range(n)]
    y = [Poly.var(2 * n, n + i) for i in range(n)]
    xy = bch(alg, x, y)
    back = bch(alg, xy, [-v for v in y])
    assert all((a - b).is_zero() for a, b in zip(back, x))


# ---------------------------------------------------------------- frame


@pytest.mark.parametrize("alg", ALGEBRAS, ids=lambda a: a.name)
def test_frame_is_identity_at_origin_and_reproduces_brackets(alg):
    frame = left_invariant_frame(alg)
    n = alg.dim
    for i in range(n):
        for a in range(n):
            assert frame.coeffs[i][a]([0] * n) == (1 if i == a else 0)
    assert frame_reproduces_brackets(alg, frame)


def test_heisenberg_frame_closed_form():
    frame = left_invariant_frame(heisenberg(1))
    x, y, _ = (Poly.var(3, i) for i in range(3))
    half = Poly.const(3, Fraction(1, 2))
    assert frame.coeffs[0] == (Poly.const(3, 1), Poly(3), -(half * y))
    assert frame.coeffs[1] == (Poly(3), Poly.const(3, 1), half * x)
    assert frame.coeffs[2] == (Poly(3), Poly(3), Poly.const(3, 1))
