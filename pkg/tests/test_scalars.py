from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abmodules.errors import NotAUnit
from abmodules.scalars import (
    Polynomial,
    TauRational,
    TruncatedSeries,
    char_poly,
    factored_str,
    min_poly,
    parse_scalar,
    rational_roots,
)

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def series(coeffs, prec):
    return TruncatedSeries([Q(c) for c in coeffs], prec)


@st.composite
def truncated(draw, prec=8, unit=False):
    coeffs = draw(st.lists(fractions, min_size=1, max_size=prec))
    if unit and coeffs[0] == 0:
        coeffs[0] = Q(1)
    return TruncatedSeries(coeffs, prec)


@pytest.mark.parametrize(
    "x, y, expected",
    [
        (series([1, 1], 4), series([1, -1], 4), series([1, 0, -1], 4)),
        (series([1], 3), series([0, 0, 1], 3), series([0, 0, 1], 3)),
        (series([1, 2], 3), series([1, 3], 3), series([1, 5, 6], 3)),
    ],
)
def test_multiplication(x, y, expected):
    z = x * y
    assert z == expected and z.prec == expected.prec


def test_inverse():
    assert series([1], 5).inverse() == series([1], 5)
    assert series([1, 1], 3).inverse() == series([1, -1, 1], 3)
    with pytest.raises(NotAUnit):
        series([0, 1], 3).inverse()


def test_derivative_drops_precision():
    d = series([1, 1, 1], 3).derivative()
    assert d == series([1, 2], 2) and d.prec == 2
    assert series([7], 4).derivative().is_zero()
    assert series([0, 0, 0, 1], 5).derivative() == series([0, 0, 3], 4)


@given(truncated(unit=True))
def test_inverse_property(x):
    assert x * x.inverse() == TruncatedSeries.one(x.prec)


@given(truncated(), truncated(), truncated())
def test_ring_axioms(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x


@given(truncated(), truncated())
def test_leibniz(x, y):
    assert (x * y).derivative() == x.derivative() * y + x * y.derivative()


@given(truncated())
def test_series_json_round_trip(x):
    assert TruncatedSeries.from_json(x.to_json()) == x


def test_compose_with_identity_and_shift():
    z = series([0, 1], 8)
    x = series([1, 2, 3], 8)
    assert x.compose(z) == x
    assert series([0, 1, 1], 8).compose(series([0, 2], 8)) == series([0, 2, 4], 8)


@pytest.mark.parametrize(
    "p, roots, split",
    [
        (Polynomial([Q(1, 2), 1]), [Q(-1, 2)], True),
        (Polynomial([Q(1, 4), 1, 1]), [Q(-1, 2), Q(-1, 2)], True),
        (Polynomial([1, 0, 1]), [], False),
    ],
)
def test_rational_roots(p, roots, split):
    assert rational_roots(p) == (roots, split)


@given(st.lists(fractions, min_size=1, max_size=5))
def test_rational_roots_recover_products(roots):
    found, split = rational_roots(Polynomial.from_roots(roots))
    assert split and sorted(found) == sorted(roots)


def test_min_and_char_poly():
    x = Polynomial.x()
    one = Polynomial([1])
    identity = [[Q(1), Q(0)], [Q(0), Q(1)]]
    assert min_poly(identity) == x - one
    assert char_poly(identity) == (x - one) ** 2
    assert char_poly([[Q(0), Q(1, 4)], [Q(-1), Q(-1)]]) == Polynomial([Q(1, 4), 1, 1])
    assert min_poly([[Q(0)] * 3 for _ in range(3)]) == x


def test_factored_str():
    assert factored_str(Polynomial([Q(1, 4), 1, 1])) == "(x + 1/2)^2"
    assert factored_str(Polynomial([0, 1])) == "x"
    assert factored_str(Polynomial([1, 0, 1])) == "x^2 + 1"


def test_tau_rationals():
    tau = TauRational.tau()
    assert (tau + 1) * (tau - 1) == tau * tau - TauRational.lift(1)
    assert (tau * tau) / tau == tau
    assert parse_scalar("1/2*tau^2 - 3") == TauRational.lift(Q(1, 2)) * tau * tau - TauRational.lift(3)
    assert parse_scalar("3/4") == Q(3, 4)


@settings(max_examples=30)
@given(fractions, fractions)
def test_tau_field_operations(p, q):
    tau = TauRational.tau()
    x = tau * p + TauRational.lift(q)
    if p != 0 or q != 0:
        assert (x / x) == TauRational.lift(1)
    assert x - x == TauRational.lift(0)
