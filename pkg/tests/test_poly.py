import itertools

import numpy as np
import pytest

from primpoints.field import build_field
from primpoints.field import field_for_q as F
from primpoints.poly import (
    FermatShape,
    MultiPoly,
    PolyParseError,
    Regularity,
    as_fermat_shape,
    diagonal_poly,
    dwork_regularity_check,
    parse_poly,
    random_poly,
)


def test_parse_examples():
    f = parse_poly("x1^2+x2^2+x3^2-1", build_field(7))
    assert len(f.terms) == 4 and f.nvars == 3
    assert len(parse_poly("x1+x2+x3", build_field(17)).terms) == 3
    g = parse_poly("3*x1^2*x2", build_field(5))
    assert g.terms == (((2, 1), 3),)


def test_parse_reduces_and_merges():
    f = parse_poly("7*x1 + x1 - 8", build_field(7))
    assert f.as_dict() == {(1,): 1, (0,): 6}
    assert parse_poly("x1 - x1", build_field(5), nvars=1).is_zero()


@pytest.mark.parametrize(
    "text,pos",
    [("x1^^2", 3), ("x0+1", 1), ("x1^-2", 3), ("x1+", 3), ("2*y", 2), ("(x1+1", 5)],
)
def test_parse_errors_have_positions(text, pos):
    with pytest.raises(PolyParseError) as e:
        parse_poly(text, build_field(5))
    assert e.value.position == pos


def test_eval_examples():
    assert parse_poly("x1+x2+x3", build_field(5)).eval((2, 2, 2)) == 1
    assert parse_poly("x1^2+x2^2+x3^2-1", build_field(7)).eval((3, 3, 5)) == 0
    c = MultiPoly.constant(build_field(7), 2, 4)
    assert c.eval((1, 6)) == 4
    with pytest.raises(ValueError):
        parse_poly("x1+x2", build_field(5)).eval((1,))


def test_twist_examples():
    K = build_field(7)
    assert parse_poly("x1+x2", K).twist((2, 1)) == parse_poly("x1^2+x2", K)
    sph = parse_poly("x1^2+x2^2+x3^2-1", K)
    assert sph.twist((2, 2, 2)) == parse_poly("x1^4+x2^4+x3^4-1", K)
    assert sph.twist((1, 1, 1)) == sph
    with pytest.raises(ValueError):
        sph.twist((1, 1))


@pytest.mark.parametrize("q", [4, 5, 7, 9, 16, 25, 49])
def test_twist_commutes_with_eval(q, rng):
    K = F(q)
    for _ in range(4):
        f = random_poly(K, 2, 3, 4, rng)
        r = tuple(int(x) for x in rng.integers(1, 4, 2))
        cols = [np.repeat(K.elements, q), np.tile(K.elements, q)]
        lhs = f.twist(r).eval_grid(cols)
        rhs = f.eval_grid([K.pow_v(cols[0], r[0]), K.pow_v(cols[1], r[1])])
        assert np.array_equal(lhs, rhs)


def test_eval_grid_matches_eval(rng):
    K = F(9)
    f = random_poly(K, 3, 4, 6, rng)
    pts = list(itertools.product(range(9), repeat=3))
    cols = [np.array(c) for c in zip(*pts)]
    assert f.eval_grid(cols).tolist() == [f.eval(p) for p in pts]


@pytest.mark.parametrize("q", [5, 9, 16, 27])
def test_serialize_round_trip(q, rng):
    K = F(q)
    for _ in range(10):
        f = random_poly(K, 3, 4, 5, rng)
        assert parse_poly(f.to_text(), K, f.nvars) == f


def test_fermat_shape_detection():
    K = build_field(7)
    assert as_fermat_shape(parse_poly("x1^2+x2^2+x3^2-1", K)) == FermatShape((1, 1, 1), (2, 2, 2), 1)
    assert as_fermat_shape(parse_poly("x1+x2", K)) == FermatShape((1, 1), (1, 1), 0)
    assert as_fermat_shape(parse_poly("x1*x2-1", K)) is None
    assert as_fermat_shape(parse_poly("x1^2+x1+x2", K)) is None


def test_fermat_shape_round_trip():
    K = build_field(11)
    for a in itertools.product(range(1, 11), repeat=2):
        shape = FermatShape(a, (2, 5), 3)
        assert as_fermat_shape(shape.to_poly(K)) == shape


def test_dwork_examples():
    K = build_field(5)
    assert dwork_regularity_check(parse_poly("x1^3+x2^3+x1", K)) is Regularity.REGULAR_CERTIFIED
    assert dwork_regularity_check(parse_poly("x1^2+2*x1*x2+x2^2", K)) is Regularity.NOT_REGULAR
    assert dwork_regularity_check(parse_poly("x1^5+x2^5", K)) is Regularity.NOT_REGULAR
    with pytest.raises(ValueError):
        dwork_regularity_check(MultiPoly.constant(K, 2, 1))


def test_dwork_degree_drop_on_restriction():
    K = build_field(7)
    # setting x2 = 0 leaves x1^2, of lower degree than 3
    assert dwork_regularity_check(parse_poly("x1^2*x2+x2^3", K)) is Regularity.NOT_REGULAR


def test_dwork_unknown_for_smooth_nondiagonal():
    K = build_field(7)
    # x1^2 + x1 x2 + 3 x2^2 has discriminant 1 - 12 = -11 = 3, a non-square mod 7
    # over F_7 but a square over F_49, where the form factors without a double root
    f = parse_poly("x1^2+x1*x2+3*x2^2", K)
    assert dwork_regularity_check(f) is Regularity.UNKNOWN


def test_diagonal_poly_certified():
    K = build_field(13)
    f = diagonal_poly(K, [1, 2, 3], 4, {(1, 0, 0): 5})
    assert dwork_regularity_check(f) is Regularity.REGULAR_CERTIFIED
