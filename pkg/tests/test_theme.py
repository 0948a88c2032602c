import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from generators import random_canonical_form

from abmodules.errors import NotATheme
from abmodules.fresco import module_from_presentation
from abmodules.module import AbModule, hom_dimension
from abmodules.parsing import parse
from abmodules.scalars import TruncatedSeries
from abmodules.theme import (
    CanonicalForm,
    FundamentalData,
    build_VW,
    canonical_form,
    fundamental_data,
    is_invariant,
    is_theme,
    realization_is_monodromy_invariant,
    theme_from_canonical,
)
from abmodules.xi import XiElement, generate_theme

N = 16
HALF = Q(1, 2)


def module(text, prec=N):
    return module_from_presentation(parse(text, prec), prec)


def F2():
    return module("(a - 3/2 b)*(a - 1/2 b)")


def s(*coeffs):
    return TruncatedSeries([Q(c) for c in coeffs], N)


def test_theme_detection():
    check = is_theme(F2())
    assert check.is_theme and check.lam_class == HALF
    E = AbModule.rank_one(HALF, N)
    assert not is_theme(E.direct_sum(E))
    assert is_theme(AbModule.rank_one(Q(2, 3), N)).lam_class == Q(2, 3)
    # two classes give two normal rank one submodules
    assert not is_theme(module("(a - 5/2 b)*(a - 1/3 b)"))


def test_fundamental_data():
    assert fundamental_data(F2()) == FundamentalData(Q(3, 2), (0,))
    assert fundamental_data(AbModule.rank_one(Q(1, 3), N)) == FundamentalData(Q(1, 3), ())
    assert fundamental_data(module("(a - 3/2 b)*(a - 3/2 b)")) == FundamentalData(Q(3, 2), (1,))
    data = FundamentalData(Q(5, 2), (2, 0))
    assert data.lambdas == [Q(5, 2), Q(7, 2), Q(5, 2)]
    assert FundamentalData.from_json(data.to_json()) == data
    with pytest.raises(NotATheme):
        fundamental_data(module("(a - 1/2 b)*(a - 1/2 b)"))


@pytest.mark.parametrize(
    "p1, support, q",
    [(0, (0,), None), (1, (0, 1), 1), (2, (0, 2), 2)],
)
def test_VW_rank_two(p1, support, q):
    (vw,) = build_VW(FundamentalData(Q(5, 2), (p1,)))
    assert vw.support == support and vw.q == q and vw.p == p1


def test_W_membership():
    vw0, vw1, vw2 = (build_VW(FundamentalData(Q(5, 2), (p,)))[0] for p in (0, 1, 2))
    assert vw0.contains(s(1)) and not vw0.contains(s(1, 1))
    assert vw1.contains(s(1, 5)) and not vw1.contains(s(1)) and not vw1.contains(s(1, 1, 1))
    assert vw2.contains(s(1, 0, -2)) and not vw2.contains(s(1, 0, 0)) and not vw2.contains(s(1, 1, 1))


def test_theme_from_canonical():
    cf = CanonicalForm(FundamentalData(Q(5, 2), (2,)), [s(1, 0, 1)])
    F = theme_from_canonical(cf, N)
    assert is_theme(F) and fundamental_data(F) == cf.data
    with pytest.raises(ValueError):
        theme_from_canonical(CanonicalForm(FundamentalData(Q(5, 2), (2,)), [s(1, 1)]), N)
    assert CanonicalForm.from_json(cf.to_json()).units == cf.units


@settings(max_examples=6, deadline=None)
@given(st.integers(0, 10**6))
def test_random_canonical_forms(seed):
    cf = random_canonical_form(random.Random(seed), 2)
    F = theme_from_canonical(cf, N)
    assert fundamental_data(F) == cf.data


def test_canonical_form_of_worked_example():
    cf = canonical_form(F2())
    assert cf.unique and cf.data == FundamentalData(Q(3, 2), (0,))
    assert str(cf) == "(a - 3/2 b) * (a - 1/2 b)"
    one = canonical_form(AbModule.rank_one(Q(1, 3), N))
    assert one.unique and one.units == []


@pytest.mark.parametrize(
    "data, unit",
    [((Q(5, 2), (2,)), (1, 0, 1)), ((Q(3, 2), (1,)), (1, 3))],
)
def test_canonical_form_recovers_presentation(data, unit):
    cf = CanonicalForm(FundamentalData(*data), [s(*unit)])
    found = canonical_form(theme_from_canonical(cf, N))
    assert found.data == cf.data
    assert found.units[0].coeffs == cf.units[0].coeffs


def test_invariance_reports():
    E = AbModule.rank_one(HALF, N)
    R = generate_theme(XiElement.power(-HALF)).realization
    rep = is_invariant(E, R)
    assert rep.invariant and rep.realization_invariant
    inv = is_invariant(theme_from_canonical(CanonicalForm(FundamentalData(Q(3, 2), (1,)), [s(1, 3)]), N))
    assert inv.hom_dimension == 2 and inv.stabilized and inv.invariant


def test_log_realization_of_worked_example_is_not_monodromy_stable():
    # U(x) - x = tau s^(-1/2), and s^(-1/2) is not in the module generated by x = s^(-1/2) Log s
    gen = generate_theme(XiElement.power(-HALF, 1))
    assert not realization_is_monodromy_invariant(gen.realization)


def test_endomorphisms_of_worked_example():
    # every endomorphism fixes the unique rank one submodule and induces a scalar on the
    # quotient E_1/2, while no nonzero map E_1/2 -> F2 exists; so only scalars remain
    assert hom_dimension(F2(), F2()) == (1, True)
    assert hom_dimension(AbModule.rank_one(HALF, N), F2()) == (0, True)
