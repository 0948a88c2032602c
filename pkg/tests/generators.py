"""Seeded random generators shared by the tests."""

import random
from fractions import Fraction

from abmodules.fresco import FrescoPresentation
from abmodules.scalars import TruncatedSeries

DENOMINATORS = (1, 2, 3, 4, 6)


def random_fraction(rng: random.Random, lo: int = -3, hi: int = 3) -> Fraction:
    return Fraction(rng.randint(lo * 6, hi * 6), rng.choice(DENOMINATORS))


def random_polynomial(rng: random.Random, degree: int, prec: int = 16) -> TruncatedSeries:
    return TruncatedSeries([random_fraction(rng) for _ in range(degree + 1)], prec)


def random_unit(rng: random.Random, degree: int = 2, prec: int = 16) -> TruncatedSeries:
    coeffs = [Fraction(1)] + [random_fraction(rng, -2, 2) for _ in range(degree)]
    return TruncatedSeries(coeffs, prec)


def random_lambda_above(rng: random.Random, bound: int) -> Fraction:
    """A rational strictly above ``bound`` with small denominator."""
    d = rng.choice(DENOMINATORS)
    return Fraction(bound * d + rng.randint(1, 2 * d), d)


def random_presentation(rng: random.Random, k: int, prec: int = 16, geometric: bool = True,
                        unit_degree: int = 2) -> FrescoPresentation:
    """Presentation with lambda_j > k - j, so the module is a geometric fresco."""
    lambdas = [random_lambda_above(rng, k - j) if geometric else random_fraction(rng)
               for j in range(1, k + 1)]
    units = [random_unit(rng, rng.randint(0, unit_degree), prec) for _ in range(k - 1)]
    return FrescoPresentation(lambdas, units)


def random_canonical_form(rng: random.Random, k: int, prec: int = 16):
    """A canonical form with random fundamental data and random S_j in W_j."""
    from abmodules.theme import CanonicalForm, FundamentalData, build_VW

    lam1 = random_lambda_above(rng, k - 1)
    data = FundamentalData(lam1, tuple(rng.randint(0, 2) for _ in range(k - 1)))
    units = []
    for vw in build_VW(data):
        coeffs = [Fraction(0)] * (max(vw.support) + 1)
        coeffs[0] = Fraction(1)
        for e in vw.free_exponents:
            c = random_fraction(rng, -2, 2)
            if e == vw.p:
                while c == 0:
                    c = random_fraction(rng, -2, 2)
            coeffs[e] = c
        units.append(TruncatedSeries(coeffs, prec))
    return CanonicalForm(data, units)
