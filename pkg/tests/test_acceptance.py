"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

All comparisons are exact equalities of rationals, series and polynomials.
Run with ``pytest -s tests/test_acceptance.py`` to see the report lines.
"""

import itertools
import random
from fractions import Fraction as Q

from generators import random_canonical_form, random_polynomial, random_presentation

from abmodules.algebra import (
    AbElement,
    HomogeneousElement,
    bernstein_poly_of_homogeneous,
    homogeneous_from_bernstein,
)
from abmodules.errors import NotStabilized
from abmodules.fresco import (
    bernstein_element,
    exact_sequence_check,
    module_from_element,
    module_from_presentation,
    presentation_from_module,
    principal_jh,
)
from abmodules.module import (
    AbModule,
    bernstein_matrix,
    bernstein_polynomial,
    change_of_variable,
    hom_dimension,
    is_geometric,
    saturate,
)
from abmodules.parsing import parse, parse_element, parse_series
from abmodules.scalars import Polynomial, TruncatedSeries
from abmodules.theme import build_VW, fundamental_data, is_theme, theme_from_canonical, FundamentalData
from abmodules.xi import XiElement, generate_theme, primitive_filtration, ss_filtration, xi_a, xi_b

F2_TEXT = "(a - 3/2 b)*(a - 1/2 b)"
HALF_SQUARED = Polynomial([Q(1, 4), 1, 1])


def report(number: int, title: str, failures: list) -> None:
    status = "PASS" if not failures else "FAIL"
    detail = "" if not failures else "  <- " + "; ".join(failures)
    print(f"\ncriterion {number:2d} [{status}] {title}{detail}")
    assert not failures, failures


def f2_module(prec: int = 16) -> AbModule:
    return module_from_presentation(parse(F2_TEXT, prec), prec)


def log_theme(m_prec: int = 16):
    return generate_theme(XiElement.power(Q(-1, 2), 1, m_prec=m_prec))


def random_expansion(rng: random.Random) -> XiElement:
    terms = {}
    for _ in range(rng.randint(1, 6)):
        lam = Q(rng.randint(1, 6), rng.choice((1, 2, 3, 6)))
        key = (lam, rng.randint(0, 3), rng.randint(0, 5))
        terms[key] = (Q(rng.randint(-9, 9), rng.randint(1, 5)),)
    return XiElement(terms, 1, None, 12)


def test_criterion_01_commutation():
    rng = random.Random(101)
    failures = []
    a = AbElement.a(16)
    for i in range(100):
        S = random_polynomial(rng, rng.randint(0, 10), 16)
        Se = AbElement.from_series(S, 16)
        lhs = a * Se - Se * a - AbElement.b(16) ** 2 * AbElement.from_series(S.derivative(), 16)
        if not lhs.is_zero():
            failures.append(f"algebra sample {i}")
    for i in range(100):
        x = random_expansion(rng)
        if xi_a(xi_b(x)) - xi_b(xi_a(x)) != xi_b(xi_b(x)):
            failures.append(f"expansion sample {i}")
    report(1, "a S - S a = b^2 S' on 100 polynomials; (ab - ba) x = b^2 x on 100 expansions", failures)


def test_criterion_02_worked_rank_two_pipeline():
    failures = []
    pi = parse_element(F2_TEXT, 16)
    expected = AbElement({(0, 2): Q(1), (1, 1): Q(-2), (2, 0): Q(1, 4)}, 16)
    if pi != expected:
        failures.append(f"normal form {pi}")
    F = f2_module()
    sat = saturate(F)
    if not (sat.saturated and sat.steps == 1):
        failures.append(f"saturation {sat.status} in {sat.steps} steps")
    if bernstein_matrix(F) != [[0, Q(1, 4)], [-1, -1]]:
        failures.append(f"residue {bernstein_matrix(F)}")
    if bernstein_polynomial(F) != HALF_SQUARED:
        failures.append("saturation-path Bernstein polynomial")
    if bernstein_poly_of_homogeneous(bernstein_element(F)) != HALF_SQUARED:
        failures.append("initial-form-path Bernstein polynomial")
    if principal_jh(F).lambdas != [Q(3, 2), Q(1, 2)]:
        failures.append(f"J-H {principal_jh(F).lambdas}")
    if not is_geometric(F):
        failures.append("not geometric")
    report(2, "worked pipeline for (a - 3/2 b)(a - 1/2 b)", failures)


def test_criterion_03_three_way_theme_agreement():
    failures = []
    gen = log_theme()
    P = HomogeneousElement([Q(1, 4), Q(-2), Q(1)])
    if gen.rank != 2:
        failures.append(f"rank {gen.rank}")
    if gen.bernstein_element != P:
        failures.append(f"Bernstein element {gen.bernstein_element}")
    theta = gen.module
    if fundamental_data(theta) != FundamentalData(Q(3, 2), (0,)):
        failures.append(f"fundamental data {fundamental_data(theta)}")
    F = f2_module()
    if bernstein_element(theta) != bernstein_element(F):
        failures.append("Bernstein elements differ from the presented module")
    if principal_jh(theta).lambdas != principal_jh(F).lambdas:
        failures.append("J-H data differ from the presented module")
    report(3, "theme of s^(-1/2) Log s agrees with the presented module", failures)


def test_criterion_04_exact_sequences():
    rng = random.Random(404)
    failures = []
    for i in range(50):
        k = rng.randint(1, 4)
        prec = 8 + 4 * k
        F = module_from_presentation(random_presentation(rng, k, prec), prec)
        jh = principal_jh(F)
        for j in range(k + 1):
            rep = exact_sequence_check(F, jh.generators[:j])
            if not rep.ok:
                failures.append(f"sample {i} prefix {j}")
    report(4, "P_F = P_G P_H and B_F(x) = B_G(x - rk H) B_H(x) on 50 random frescos", failures)


def test_criterion_05_round_trips():
    rng = random.Random(505)
    failures = []
    for i in range(50):
        k = rng.randint(1, 4)
        p = random_presentation(rng, k, 16)
        pi = p.to_element(16)
        P0 = HomogeneousElement.from_element(pi.initial_form())
        F = module_from_presentation(p, 16)
        pi2, P1 = presentation_from_module(F)
        P2 = bernstein_element(module_from_element(pi2, k))
        if not (P0 == P1 == P2):
            failures.append(f"presentation sample {i}")
    roots = [Q(-3, 2), Q(-1), Q(-1, 2), Q(0), Q(1, 3), Q(2)]
    count = 0
    for d in range(7):
        for rs in itertools.combinations_with_replacement(roots, d):
            B = Polynomial.from_roots(rs)
            if bernstein_poly_of_homogeneous(homogeneous_from_bernstein(B, d)) != B:
                failures.append(f"roots {rs}")
            count += 1
    report(5, f"presentation round trips on 50 samples; homogeneous <-> B on {count} polynomials", failures)


def test_criterion_06_change_of_variable():
    failures = []
    z = parse_series("z", 24)
    t1 = parse_series("z + z^2", 24)
    t2 = parse_series("2*z", 24)
    F = f2_module()
    if change_of_variable(F, z) != F:
        failures.append("identity")
    rng = random.Random(606)
    modules = [F] + [module_from_presentation(random_presentation(rng, rng.randint(1, 3), 16), 16)
                     for _ in range(20)]
    for i, E in enumerate(modules):
        G = change_of_variable(E, t1)
        if G.rank != E.rank or bernstein_polynomial(G) != bernstein_polynomial(E):
            failures.append(f"z + z^2 on sample {i}")
    A = change_of_variable(change_of_variable(F, t1), t2)
    B = change_of_variable(F, t2.compose(t1))
    n = min(A.prec, B.prec)
    if A.truncate(n) != B.truncate(n):
        failures.append("functoriality")
    report(6, "change of variable: identity, invariance of B on 21 frescos, functoriality", failures)


def test_criterion_07_theme_detection_and_invariance():
    failures = []
    F = f2_module()
    check = is_theme(F)
    normal = [f for f in check.families if f.normal_basis]
    if not (check.is_theme and len(normal) == 1 and normal[0].unique):
        failures.append("F2 is not detected as a theme with a unique rank one submodule")
    E = AbModule.rank_one(Q(1, 2), 16)
    if is_theme(E.direct_sum(E)).is_theme:
        failures.append("E_1/2 + E_1/2 detected as a theme")
    d, stable = hom_dimension(AbModule.rank_one(Q(1, 2), 16), AbModule.rank_one(Q(1, 2), 16))
    if (d, stable) != (1, True):
        failures.append(f"Hom(E, E) = {d} (stabilized {stable})")
    d, stable = hom_dimension(F, F)
    if (d, stable) != (2, True):
        failures.append(f"Hom(F2, F2) = {d} (stabilized {stable}), expected 2")
    report(7, "theme detection, Hom(E, E) = 1 and Hom(F2, F2) = 2", failures)


def test_criterion_08_canonical_forms():
    failures = []
    cases = {0: ((0,), None), 1: ((0, 1), 1), 2: ((0, 2), 2)}
    for p1, (support, q) in cases.items():
        vw = build_VW(FundamentalData(Q(3, 2) + p1, (p1,)))[0]
        if vw.support != support or vw.q != q:
            failures.append(f"V_1 for p1 = {p1}: {vw}")
    vw0, vw1, vw2 = (build_VW(FundamentalData(Q(5, 2), (p,)))[0] for p in (0, 1, 2))
    if not vw0.contains(TruncatedSeries([1], 16)) or vw0.contains(TruncatedSeries([1, 1], 16)):
        failures.append("W_1 for p1 = 0")
    if not vw1.contains(TruncatedSeries([1, 3], 16)) or vw1.contains(TruncatedSeries([1], 16)):
        failures.append("W_1 for p1 = 1")
    if not vw2.contains(TruncatedSeries([1, 0, 1], 16)) or vw2.contains(TruncatedSeries([1, 1, 1], 16)):
        failures.append("W_1 for p1 = 2")
    rng = random.Random(808)
    for i in range(20):
        cf = random_canonical_form(rng, rng.randint(1, 3))
        try:
            F = theme_from_canonical(cf, 16)
        except Exception as exc:  # report every failing sample, not just the first
            failures.append(f"sample {i} {cf}: {exc}")
            continue
        if not is_theme(F) or fundamental_data(F) != cf.data:
            failures.append(f"sample {i} {cf}")
    report(8, "V_j/W_j for p1 in {0, 1, 2}; 20 canonical forms rebuild themes", failures)


def test_criterion_09_irregularity():
    failures = []
    one = TruncatedSeries([1], 16)
    zero = TruncatedSeries([], 16)
    E = AbModule([[zero, one], [one, zero]], 16)
    sat = saturate(E)
    vals = sat.valuations
    if sat.saturated:
        failures.append("saturation stabilized")
    if len(vals) < 5 or any(b >= a for a, b in zip(vals, vals[1:])):
        failures.append(f"valuations {vals}")
    try:
        bernstein_polynomial(E)
        failures.append("no NotStabilized error")
    except NotStabilized:
        pass
    report(9, f"a e1 = e2, a e2 = e1 is not stabilized (valuations {vals[:5]}...)", failures)


def test_criterion_10_filtrations():
    failures = []
    R = log_theme().realization
    stages = ss_filtration(R)
    if [s.rank for s in stages] != [1, 2]:
        failures.append(f"ss ranks {[s.rank for s in stages]}")
    else:
        x = R.space.from_vector(R.to_vector(stages[0].basis[0]))
        if any(j > 0 for (_, j, _) in x.terms):
            failures.append(f"rank one stage {x} has logs")
    mixed = XiElement.power(Q(-1, 2)) + XiElement.power(Q(-1, 3))
    Rm = generate_theme(mixed).realization
    for cls, other in ((Q(1, 2), Q(2, 3)), (Q(2, 3), Q(1, 2))):
        st = primitive_filtration(Rm, [cls])
        if st.rank != 1:
            failures.append(f"class {cls}: rank {st.rank}")
            continue
        y = Rm.space.from_vector(Rm.to_vector(st.basis[0]))
        if y.classes() != [cls]:
            failures.append(f"class {cls}: generator {y}")
    report(10, "ss ranks (1, 2) with log-free first stage; primitive parts of the mixed theme", failures)
