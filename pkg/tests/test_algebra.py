from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abmodules.algebra import (
    AbElement,
    HomogeneousElement,
    bernstein_poly_of_homogeneous,
    factor_homogeneous,
    homogeneous_from_bernstein,
    linear_factor,
    right_divide,
    right_evaluation,
)
from abmodules.errors import NotAUnit, NotFullySplit, NotHomogeneous, ParseError
from abmodules.parsing import parse, parse_element, parse_presentation
from abmodules.scalars import Polynomial

N = 16
a = AbElement.a(N)
b = AbElement.b(N)
PI = AbElement({(0, 2): Q(1), (1, 1): Q(-2), (2, 0): Q(1, 4)}, N)


def el(text):
    return parse_element(text, N)


@pytest.mark.parametrize(
    "x, expected",
    [
        (a * b, AbElement({(1, 1): Q(1), (2, 0): Q(1)}, N)),
        (a * b * b, AbElement({(2, 1): Q(1), (3, 0): Q(2)}, N)),
        (b * a, AbElement({(1, 1): Q(1)}, N)),
        (b * b, AbElement({(2, 0): Q(1)}, N)),
        (linear_factor(Q(3, 2), N) * linear_factor(Q(1, 2), N), PI),
        (AbElement.scalar(1, N) * PI, PI),
    ],
)
def test_normal_form_products(x, expected):
    assert x == expected


polys = st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=5), max_size=8)


@settings(max_examples=50)
@given(polys)
def test_commutation_with_series(coeffs):
    from abmodules.scalars import TruncatedSeries

    S = TruncatedSeries(coeffs, N)
    Se = AbElement.from_series(S, N)
    assert a * Se - Se * a == b * b * AbElement.from_series(S.derivative(), N)


@settings(max_examples=25)
@given(polys, polys, polys)
def test_associativity(p, q, r):
    from abmodules.scalars import TruncatedSeries

    x = AbElement.from_series(TruncatedSeries(p, N), N) * a
    y = a * AbElement.from_series(TruncatedSeries(q, N), N) + b
    z = AbElement.from_series(TruncatedSeries(r, N), N) * a * a
    assert (x * y) * z == x * (y * z)


def test_right_division():
    q, r = right_divide(PI, linear_factor(Q(1, 2), N))
    assert q == linear_factor(Q(3, 2), N) and r.is_zero()
    d = linear_factor(Q(1, 2), N)
    q, r = right_divide(d, d)
    assert q == AbElement.scalar(1, N) and r.is_zero()


def test_remainder_polynomial():
    # r(lambda) = lambda^2 - lambda + 1/4, coefficient of b^2
    r = right_evaluation(PI)[2]
    assert r == Polynomial([Q(1, 4), -1, 1])


def test_bernstein_correspondence():
    P = HomogeneousElement.from_element(PI)
    assert bernstein_poly_of_homogeneous(P) == Polynomial([Q(1, 4), 1, 1])
    assert bernstein_poly_of_homogeneous(HomogeneousElement([Q(-5), 1])) == Polynomial([5, 1])
    assert homogeneous_from_bernstein(Polynomial([Q(1, 2), 1]), 1) == HomogeneousElement([Q(-1, 2), 1])
    assert homogeneous_from_bernstein(Polynomial([Q(1, 4), 1, 1]), 2) == P
    assert homogeneous_from_bernstein(Polynomial([0, 1]), 1) == HomogeneousElement([0, 1])
    with pytest.raises(NotHomogeneous):
        bernstein_poly_of_homogeneous(HomogeneousElement([1, 0]))


def test_factor_homogeneous():
    assert factor_homogeneous(HomogeneousElement.from_element(PI)) == [Q(3, 2), Q(1, 2)]
    assert factor_homogeneous(HomogeneousElement([Q(-5), 1])) == [Q(5)]
    with pytest.raises(NotFullySplit):
        factor_homogeneous(homogeneous_from_bernstein(Polynomial([1, 0, 1])))


def test_parser():
    assert el("(a - 3/2 b)*(a - 1/2 b)") == PI
    assert el("a*b - b*a - b^2").is_zero()
    with pytest.raises(NotAUnit):
        el("inv(b)")
    with pytest.raises(ParseError) as info:
        el("(a - ")
    assert info.value.position is not None
    with pytest.raises(ParseError):
        el("a + c")


def test_presentation_recognition():
    p = parse_presentation("(a - 3/2 b) * inv(1 + b^2) * (a - 1/2 b)")
    assert p.lambdas == [Q(3, 2), Q(1, 2)]
    assert p.units[0].coeffs[:3] == (1, 0, 1)
    assert parse_presentation("a - b^2") is None
    assert isinstance(parse("a - b^2"), AbElement)


def test_element_json_round_trip():
    x = el("(a - 5/2 b) * inv(1 + b) * (a - 1/2 b)")
    assert AbElement.from_json(x.to_json()) == x
