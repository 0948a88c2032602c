from fractions import Fraction as Q
from math import prod

import pytest

from abmodules.errors import InvalidTheta, NotGeometric, NotRegular, NotStabilized
from abmodules.fresco import module_from_presentation
from abmodules.lattice import column_echelon, kernel_basis, lattice_from_generators, solve_columns
from abmodules.module import (
    AbModule,
    apply_a,
    apply_a_series,
    bernstein_matrix,
    bernstein_polynomial,
    change_of_variable,
    from_simple_pole_system,
    hom_dimension,
    is_geometric,
    is_simple_pole,
    primitive_part,
    rank1_normal_submodules,
    rank1_solutions,
    regular_saturation,
    saturate,
)
from abmodules.parsing import parse, parse_series
from abmodules.scalars import Polynomial, TruncatedSeries

N = 16
HALF = Q(1, 2)


def s(*coeffs, prec=N):
    return TruncatedSeries([Q(c) for c in coeffs], prec)


def vec(*entries):
    return list(entries)


def F2():
    return module_from_presentation(parse("(a - 3/2 b)*(a - 1/2 b)", N), N)


E_HALF = AbModule.rank_one(HALF, N)


def test_lattice_helpers():
    cols = [vec(s(0, 1), s(1)), vec(s(0, 2), s(2))]
    ech = column_echelon(cols)
    assert ech.rank == 1
    assert len(kernel_basis(cols)) == 1
    assert solve_columns(cols, vec(s(0, 3), s(3))) is not None
    assert solve_columns(cols, vec(s(1), s(0))) is None
    lat = lattice_from_generators([(-1, vec(s(1), s())), (0, vec(s(), s(1)))], 2, N)
    assert lat.depth == 1 and lat.contains(vec(s(1), s()), -1)
    assert not lat.contains(vec(s(1), s()), -2)


def test_action_of_a():
    e = E_HALF.basis_vector(0)
    assert apply_a(E_HALF, e) == [s(0, HALF)]
    assert apply_a(E_HALF, [s(0, 1)]) == [s(0, 0, Q(3, 2))]
    assert apply_a(E_HALF, E_HALF.zero()) == [s()]


def test_simple_pole_system():
    assert from_simple_pole_system([[HALF]], N) == E_HALF
    zero = from_simple_pole_system([[0]], N)
    assert zero.cols[0][0].is_zero()
    nil = from_simple_pole_system([[0, 1], [0, 0]], N)
    assert nil.cols[0] == [s(), s()] and nil.cols[1] == [s(0, 1), s()]
    # a e = (1 + a) b e: the a on the right is resolved by substitution
    E = from_simple_pole_system([[s(1, 1)]], N)
    e = E.basis_vector(0)
    rhs = apply_a(E, [s(0, 1)])
    assert apply_a(E, e) == [x + y for x, y in zip([s(0, 1)], rhs)]


def test_simple_pole_predicate():
    assert is_simple_pole(E_HALF)
    assert not is_simple_pole(F2())
    assert is_simple_pole(AbModule([[s()]], N))


def test_saturation_worked_example():
    sat = saturate(F2())
    assert sat.saturated and sat.steps == 1 and sat.gap == 1
    M = sat.module
    assert M.cols[0] == [s(), s(0, 1)]
    assert M.cols[1] == [s(0, Q(-1, 4)), s(0, 1)]
    assert bernstein_matrix(F2()) == [[0, Q(1, 4)], [-1, -1]]
    assert saturate(E_HALF).steps == 0


def test_irregular_module():
    E = AbModule([[s(), s(1)], [s(1), s()]], N)
    sat = saturate(E)
    assert sat.status == "NotStabilized"
    assert len(sat.valuations) >= 5
    assert all(y < x for x, y in zip(sat.valuations, sat.valuations[1:]))
    with pytest.raises(NotStabilized):
        bernstein_polynomial(E)
    with pytest.raises(NotRegular):
        regular_saturation(E)


@pytest.mark.parametrize(
    "module, expected",
    [
        (E_HALF, Polynomial([HALF, 1])),
        (F2(), Polynomial([Q(1, 4), 1, 1])),
        (E_HALF.direct_sum(E_HALF), Polynomial([HALF, 1])),
    ],
)
def test_bernstein_polynomial(module, expected):
    assert bernstein_polynomial(module) == expected


def test_geometric_verdicts():
    assert is_geometric(E_HALF)
    assert not is_geometric(AbModule.rank_one(-1, N))
    # a e1 = b e2, a e2 = -b e1: residue with B = x^2 + 1
    rot = AbModule([[s(), s(0, -1)], [s(0, 1), s()]], N)
    assert bernstein_polynomial(rot) == Polynomial([1, 0, 1])
    assert not is_geometric(rot)


def test_apply_a_series():
    e = E_HALF.basis_vector(0)
    assert apply_a_series(E_HALF, s(0, 1), e) == apply_a(E_HALF, e)
    assert apply_a_series(E_HALF, s(1, 1), e) == [s(1, HALF)]
    geometric = apply_a_series(E_HALF, TruncatedSeries([1] * 40, 40), e)
    expected = [prod((HALF + i for i in range(m)), start=Q(1)) for m in range(N)]
    assert geometric == [TruncatedSeries(expected, N)]


def test_change_of_variable():
    z, t2 = parse_series("z", 24), parse_series("2*z", 24)
    assert change_of_variable(F2(), z) == F2()
    G = change_of_variable(AbModule.rank_one(Q(1, 3), N), t2)
    assert G == AbModule.rank_one(Q(1, 3), N)
    H = change_of_variable(F2(), parse_series("z + z^2", 24))
    assert bernstein_polynomial(H) == bernstein_polynomial(F2())
    with pytest.raises(InvalidTheta):
        change_of_variable(F2(), parse_series("z^2", 24))
    with pytest.raises(InvalidTheta):
        change_of_variable(F2(), parse_series("1 + z", 24))


def test_primitive_part():
    E = E_HALF.direct_sum(AbModule.rank_one(Q(1, 3), N))
    P, basis = primitive_part(E, [HALF])
    assert P.rank == 1 and basis[0][1].is_zero() and basis[0][0].coeff(0) != 0
    assert primitive_part(E, [HALF, Q(1, 3)])[0].rank == 2
    assert primitive_part(E, [Q(1, 5)])[0].rank == 0


def test_rank_one_solutions():
    fam = rank1_solutions(F2(), Q(3, 2))
    assert fam.unique
    x = fam.normal_basis[0]
    c = x[1].coeff(0)
    assert [y * (1 / c) for y in x] == [s(Q(-1, 2)).shift(1).truncate(x[0].prec), s(1, prec=x[1].prec)]
    families = rank1_normal_submodules(F2())
    assert [f.lam for f in families] == [Q(3, 2)]
    both = rank1_solutions(E_HALF.direct_sum(E_HALF), HALF)
    assert both.dimension == 2 and not both.unique
    with pytest.raises(NotGeometric):
        rank1_normal_submodules(AbModule.rank_one(-1, N))


def test_hom_dimension():
    assert hom_dimension(E_HALF, E_HALF) == (1, True)
    assert hom_dimension(E_HALF, AbModule.rank_one(Q(1, 3), N)) == (0, True)
    assert hom_dimension(E_HALF.direct_sum(E_HALF), E_HALF.direct_sum(E_HALF)) == (4, True)


def test_module_json_round_trip():
    F = F2()
    assert AbModule.from_json(F.to_json()) == F
