from fractions import Fraction as Q

from hypothesis import given, settings
from hypothesis import strategies as st

from abmodules.algebra import HomogeneousElement
from abmodules.parsing import parse
from abmodules.scalars import TauRational
from abmodules.xi import (
    XiElement,
    co_ss_filtration,
    generate_theme,
    lambda_class,
    monodromy_unipotent,
    normalize_exponent,
    primitive_filtration,
    realize,
    solve_in_xi,
    ss_filtration,
    xi_a,
    xi_b,
)

HALF = Q(1, 2)
tau = TauRational.tau()


def P(exponent, log_power=0, coeff=1):
    """coeff * s^exponent (Log s)^log_power."""
    return XiElement.power(Q(exponent), log_power, Q(coeff))


def test_normalization():
    assert lambda_class(Q(3, 2)) == HALF and lambda_class(1) == 1 and lambda_class(Q(-1, 3)) == Q(2, 3)
    assert normalize_exponent(Q(3, 2), 0) == (HALF, 1)


def test_multiplication_by_s():
    assert xi_a(P(-HALF)) == P(HALF)
    assert xi_a(P(-HALF, 1)) == P(HALF, 1)
    assert xi_a(XiElement()).is_zero()


def test_primitive():
    assert xi_b(P(-HALF)) == P(HALF, 0, 2)
    assert xi_b(P(-HALF, 1)) == P(HALF, 1, 2) - P(HALF, 0, 4)
    lam = Q(2, 3)
    x = P(lam - 1)
    assert xi_a(x) == xi_b(x).scale(lam)


exponents = st.fractions(min_value=Q(-5, 6), max_value=3, max_denominator=6)


@settings(max_examples=60)
@given(st.lists(st.tuples(exponents, st.integers(0, 3), st.integers(-5, 5)), min_size=1, max_size=4))
def test_commutation(terms):
    x = XiElement()
    for e, j, c in terms:
        x = x + P(e, j, c)
    assert xi_a(xi_b(x)) - xi_b(xi_a(x)) == xi_b(xi_b(x))


def test_monodromy():
    assert monodromy_unipotent(P(-HALF)) == P(-HALF).scale(TauRational.lift(1))
    u = monodromy_unipotent(P(-HALF, 1))
    assert u == P(-HALF, 1).scale(TauRational.lift(1)) + P(-HALF).scale(tau)
    # (U - 1)^3 kills L^2 / 2
    x = P(-HALF, 2, Q(1, 2)).scale(TauRational.lift(1))
    d = x
    for _ in range(3):
        d = monodromy_unipotent(d) - d
    assert d.is_zero()


def test_generate_theme_of_log():
    gen = generate_theme(P(-HALF, 1))
    assert gen.rank == 2
    assert gen.bernstein_element == HomogeneousElement([Q(1, 4), -2, 1])
    x = P(-HALF, 1)
    step = xi_a(x) - xi_b(x).scale(HALF)
    assert step == P(HALF, 0, 2)
    assert xi_a(step) - xi_b(step).scale(Q(3, 2)) == XiElement()


def test_generate_theme_rank_one():
    gen = generate_theme(P(Q(-2, 3)))
    assert gen.rank == 1 and gen.bernstein_element == HomogeneousElement([Q(-1, 3), 1])


def test_mixed_theme():
    gen = generate_theme(P(-HALF) + P(Q(-1, 3)))
    assert gen.rank == 2
    # frozen from the saturation path: B = (x + 1/2)(x + 2/3)
    assert gen.bernstein_element == HomogeneousElement([Q(1, 3), Q(-13, 6), 1])


def test_solve_in_xi():
    sols = solve_in_xi(parse("a - 1/2 b"), [HALF], 0)
    assert len(sols) == 1 and sols[0].classes() == [HALF]
    assert solve_in_xi(parse("a - 1/2 b"), [Q(1, 3)], 2) == []
    sols = solve_in_xi(parse("(a - 3/2 b)*(a - 1/2 b)"), [HALF], 1)
    assert len(sols) == 2
    assert any(j == 1 for x in sols for (_, j, _) in x.terms)


def test_filtrations_of_log_theme():
    R = generate_theme(P(-HALF, 1)).realization
    assert R.verify()
    ss = ss_filtration(R)
    assert [st.rank for st in ss] == [1, 2]
    first = R.space.from_vector(R.to_vector(ss[0].basis[0]))
    assert first.classes() == [HALF] and all(j == 0 for (_, j, _) in first.terms)
    assert [st.rank for st in co_ss_filtration(R)] == [2, 1]


def test_filtrations_rank_one():
    R = generate_theme(P(-HALF)).realization
    assert [st.rank for st in ss_filtration(R)] == [1]


def test_realize_uses_least_log_degree():
    def top(x):
        R = realize(generate_theme(x).module)
        assert R.verify()
        return max(j for (_, j, _) in R.element.terms)

    assert top(P(-HALF) + P(Q(-1, 3))) == 0
    assert top(P(-HALF, 1)) == 1
    assert top(P(-HALF) + P(Q(-1, 3), 1)) == 1


def test_primitive_filtration_separates_classes():
    R = generate_theme(P(-HALF) + P(Q(-1, 3))).realization
    for cls in (HALF, Q(2, 3)):
        st = primitive_filtration(R, [cls])
        assert st.rank == 1
        assert R.space.from_vector(R.to_vector(st.basis[0])).classes() == [cls]
    assert primitive_filtration(R, [HALF, Q(2, 3)]).rank == 2


def test_expansion_json_round_trip():
    x = P(-HALF, 1) + P(Q(-1, 3), 0, Q(5, 7))
    assert XiElement.from_json(x.to_json()) == x
