"""Arithmetic in the completed algebra generated by ``a`` and ``b`` with ``ab - ba = b^2``.

Elements are stored in left normal form ``sum c[m, d] b^m a^d`` truncated
modulo ``b^N``.  Negative ``m`` is allowed so the same code serves the
localized algebra (needed for ``b^k B(-b^{-1} a)``).  Every reordering uses

    a^d b^n = sum_i C(d, i) n(n+1)...(n+i-1) b^(n+i) a^(d-i)

which is the commutation rule ``a S(b) = S(b) a + b^2 S'(b)`` iterated.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping

from .errors import DivisorNotMonic, NotAUnit, NotFullySplit, NotHomogeneous
from .scalars import (
    ONE,
    ZERO,
    Polynomial,
    TruncatedSeries,
    as_fraction,
    fraction_str,
    rational_roots,
)

DEFAULT_A_DEGREE_BOUND = 64


@lru_cache(maxsize=None)
def _reorder(d: int, n: int) -> tuple[tuple[int, int], ...]:
    """a^d b^n as ((i, coeff), ...) meaning sum coeff * b^(n+i) a^(d-i)."""
    out = []
    r = 1
    for i in range(d + 1):
        if i:
            r *= n + i - 1
        if r == 0:
            break
        out.append((i, comb(d, i) * r))
    return tuple(out)


@lru_cache(maxsize=None)
def _reorder_right(m: int, d: int) -> tuple[tuple[int, int], ...]:
    """b^m a^d as ((i, coeff), ...) meaning sum coeff * a^(d-i) b^(m+i)."""
    out = []
    r = 1
    for i in range(d + 1):
        if i:
            r *= m + i - 1
        if r == 0:
            break
        out.append((i, comb(d, i) * r * (-1) ** i))
    return tuple(out)


class AbElement:
    """Element of the (a,b)-algebra modulo ``b**prec`` in left normal form."""

    __slots__ = ("terms", "prec", "a_degree_bound")

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None, prec: int = 16,
                 a_degree_bound: int = DEFAULT_A_DEGREE_BOUND):
        self.prec = prec
        self.a_degree_bound = a_degree_bound
        clean = {}
        for (m, d), c in (terms or {}).items():
            if m >= prec or c == 0:
                continue
            if d < 0:
                raise ValueError("negative power of a")
            if d > a_degree_bound:
                raise OverflowError(f"a-degree {d} exceeds the bound {a_degree_bound}")
            clean[(m, d)] = c
        self.terms = clean

    # -- constructors -----------------------------------------------------

    @classmethod
    def scalar(cls, c, prec: int = 16) -> AbElement:
        return cls({(0, 0): as_fraction(c) if isinstance(c, (int, str)) else c}, prec)

    @classmethod
    def a(cls, prec: int = 16) -> AbElement:
        return cls({(0, 1): ONE}, prec)

    @classmethod
    def b(cls, prec: int = 16) -> AbElement:
        return cls({(1, 0): ONE}, prec)

    @classmethod
    def monomial(cls, m: int, d: int, c=ONE, prec: int = 16) -> AbElement:
        return cls({(m, d): c}, prec)

    @classmethod
    def from_series(cls, s: TruncatedSeries, prec: int | None = None) -> AbElement:
        p = s.prec if prec is None else min(prec, s.prec)
        return cls({(m, 0): c for m, c in enumerate(s.coeffs)}, p)

    @classmethod
    def from_right_form(cls, terms: Mapping[tuple[int, int], object], prec: int = 16) -> AbElement:
        """Build from right normal form ``{(m, d): c}`` meaning ``sum c a^d b^m``."""
        out: dict = {}
        for (m, d), c in terms.items():
            for i, k in _reorder(d, m):
                key = (m + i, d - i)
                out[key] = out.get(key, ZERO) + c * k
        return cls(out, prec)

    # -- basic structure --------------------------------------------------

    def copy_with(self, terms, prec=None) -> AbElement:
        return AbElement(terms, self.prec if prec is None else prec, self.a_degree_bound)

    def is_zero(self) -> bool:
        return not self.terms

    def a_degree(self) -> int:
        return max((d for (_, d) in self.terms), default=-1)

    def coefficient(self, m: int, d: int):
        return self.terms.get((m, d), ZERO)

    def a_coefficient(self, d: int) -> TruncatedSeries:
        """The series c_d(b) with self = sum_d c_d(b) a^d (left form)."""
        lo = min((m for (m, _) in self.terms), default=0)
        if lo < 0:
            raise ValueError("element has negative b-powers")
        coeffs = [ZERO] * self.prec
        for (m, dd), c in self.terms.items():
            if dd == d:
                coeffs[m] = c
        return TruncatedSeries(coeffs, self.prec)

    def truncate(self, prec: int) -> AbElement:
        return self.copy_with(self.terms, min(prec, self.prec))

    def to_right_form(self) -> dict[tuple[int, int], object]:
        """Right normal form ``{(m, d): c}`` meaning ``sum c a^d b^m``, truncated at b^prec."""
        out: dict = {}
        for (m, d), c in self.terms.items():
            for i, k in _reorder_right(m, d):
                if m + i >= self.prec:
                    break
                key = (m + i, d - i)
                out[key] = out.get(key, ZERO) + c * k
        return {k: v for k, v in out.items() if v != 0}

    def homogeneous_component(self, degree: int) -> AbElement:
        return self.copy_with({k: c for k, c in self.terms.items() if k[0] + k[1] == degree})

    def initial_form(self) -> AbElement:
        """Lowest total-degree homogeneous component in (a, b)."""
        if self.is_zero():
            return self
        low = min(m + d for (m, d) in self.terms)
        return self.homogeneous_component(low)

    # -- arithmetic -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = AbElement.scalar(other, self.prec)
        if not isinstance(other, AbElement):
            return NotImplemented
        n = min(self.prec, other.prec)
        return self.truncate(n).terms == other.truncate(n).terms

    def __hash__(self):
        return hash((frozenset(self.terms.items()), self.prec))

    def __add__(self, other) -> AbElement:
        other = _coerce(other, self.prec)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, ZERO) + c
        return self.copy_with(out, min(self.prec, other.prec))

    __radd__ = __add__

    def __neg__(self) -> AbElement:
        return self.copy_with({k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> AbElement:
        return self + (-_coerce(other, self.prec))

    def __rsub__(self, other) -> AbElement:
        return _coerce(other, self.prec) - self

    def __mul__(self, other) -> AbElement:
        if not isinstance(other, AbElement):
            other = _coerce(other, self.prec)
        return mul(self, other)

    def __rmul__(self, other) -> AbElement:
        return mul(_coerce(other, self.prec), self)

    def __pow__(self, n: int) -> AbElement:
        r = AbElement.scalar(1, self.prec)
        for _ in range(n):
            r = r * self
        return r

    def __repr__(self) -> str:
        return f"AbElement({self}, prec={self.prec})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (m, d) in sorted(self.terms, key=lambda k: (k[0] + k[1], -k[1], k[0])):
            c = self.terms[(m, d)]
            mono = []
            if m:
                mono.append("b" if m == 1 else f"b^{m}")
            if d:
                mono.append("a" if d == 1 else f"a^{d}")
            cs = fraction_str(c) if isinstance(c, Fraction) else f"({c})"
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append("*".join(mono))
            elif cs == "-1":
                parts.append("-" + "*".join(mono))
            else:
                parts.append(cs + "*" + "*".join(mono))
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> dict:
        return {
            "terms": [[m, d, fraction_str(c)] for (m, d), c in sorted(self.terms.items())],
            "precision": self.prec,
        }

    @classmethod
    def from_json(cls, obj) -> AbElement:
        return cls({(int(m), int(d)): Fraction(c) for m, d, c in obj["terms"]}, int(obj["precision"]))


def _coerce(x, prec: int) -> AbElement:
    if isinstance(x, AbElement):
        return x
    if isinstance(x, TruncatedSeries):
        return AbElement.from_series(x, prec)
    return AbElement.scalar(x, prec)


def normal_form(monomials: Iterable[tuple[object, str]], prec: int = 16) -> AbElement:
    """Normalize a raw sum of words in ``a`` and ``b``.

    ``monomials`` is an iterable of ``(coefficient, word)`` where ``word`` is
    a string over ``{"a", "b"}`` read left to right, e.g. ``(1, "ab")``.
    """
    total = AbElement({}, prec)
    a, b = AbElement.a(prec), AbElement.b(prec)
    for c, word in monomials:
        x = AbElement.scalar(c, prec)
        for ch in word:
            x = x * (a if ch == "a" else b)
        total = total + x
    return total


def mul(x: AbElement, y: AbElement) -> AbElement:
    """Product in left normal form, exact modulo ``b**min(N_x, N_y)``."""
    prec = min(x.prec, y.prec)
    bound = max(x.a_degree_bound, y.a_degree_bound)
    out: dict = {}
    for (m, d), c in x.terms.items():
        for (n, e), c2 in y.terms.items():
            base = m + n
            if base >= prec:
                continue
            cc = c * c2
            for i, k in _reorder(d, n):
                mm = base + i
                if mm >= prec:
                    break
                key = (mm, d - i + e)
                out[key] = out.get(key, ZERO) + cc * k
    return AbElement(out, prec, bound)


def right_divide(x: AbElement, d: AbElement) -> tuple[AbElement, AbElement]:
    """Skew division ``x = q d + r`` by a divisor ``d = a - T(b)``.

    The remainder has a-degree 0, i.e. it is a series in ``b``.
    """
    if d.a_degree() != 1 or d.coefficient(0, 1) != 1 or any(
        m != 0 for (m, dd) in d.terms if dd == 1
    ):
        raise DivisorNotMonic(f"divisor {d} is not of the form a - T(b)")
    prec = min(x.prec, d.prec)
    rem = x.truncate(prec)
    q: dict = {}
    while rem.a_degree() >= 1:
        top = rem.a_degree()
        lead = {(m, top - 1): c for (m, dd), c in rem.terms.items() if dd == top}
        for k, c in lead.items():
            q[k] = q.get(k, ZERO) + c
        rem = rem - mul(AbElement(lead, prec), d)
    return AbElement(q, prec), rem


def right_evaluation(x: AbElement, max_power: int | None = None) -> list[Polynomial]:
    """Coefficients r_t(lambda) of the remainder of ``x`` by ``a - lambda b``.

    The remainder is ``sum_t r_t(lambda) b^t``; it is computed as the image
    of the class of 1 in the rank one module where ``a e = lambda b e``,
    with lambda kept symbolic.
    """
    lam = Polynomial([ZERO, ONE])
    top = x.prec if max_power is None else max_power
    out = [Polynomial() for _ in range(top)]
    for (m, d), c in x.terms.items():
        if m < 0:
            raise ValueError("right evaluation needs nonnegative b-powers")
        if m + d >= top:
            continue
        # a^d e = lambda (lambda+1) ... (lambda+d-1) b^d e
        p = Polynomial([c])
        for i in range(d):
            p = p * (lam + i)
        out[m + d] = out[m + d] + p
    return out


# ---------------------------------------------------------------------------
# homogeneous elements


class HomogeneousElement:
    """``sum_j gamma_j b^(k-j) a^j`` (left normal form), homogeneous of degree k."""

    __slots__ = ("k", "gammas")

    def __init__(self, gammas: Iterable):
        g = [as_fraction(c) if isinstance(c, (int, str)) else c for c in gammas]
        if not g:
            raise ValueError("empty homogeneous element")
        self.gammas = tuple(g)
        self.k = len(g) - 1

    @property
    def monic(self) -> bool:
        return self.gammas[-1] == 1

    @classmethod
    def from_element(cls, x: AbElement) -> HomogeneousElement:
        if x.is_zero():
            raise NotHomogeneous("zero element")
        degs = {m + d for (m, d) in x.terms}
        if len(degs) != 1 or any(m < 0 for (m, _) in x.terms):
            raise NotHomogeneous(f"{x} is not homogeneous in (a, b)")
        k = degs.pop()
        if k >= x.prec:
            raise NotHomogeneous("degree beyond precision")
        return cls(x.coefficient(k - j, j) for j in range(k + 1))

    def to_element(self, prec: int | None = None) -> AbElement:
        p = self.k + 1 if prec is None else prec
        return AbElement({(self.k - j, j): c for j, c in enumerate(self.gammas)}, p)

    def __eq__(self, other) -> bool:
        return isinstance(other, HomogeneousElement) and self.gammas == other.gammas

    def __hash__(self):
        return hash(self.gammas)

    def __mul__(self, other: HomogeneousElement) -> HomogeneousElement:
        n = self.k + other.k + 1
        return HomogeneousElement.from_element(self.to_element(n) * other.to_element(n)) if (
            self.k + other.k > 0
        ) else HomogeneousElement([self.gammas[0] * other.gammas[0]])

    def __repr__(self) -> str:
        return f"HomogeneousElement({self})"

    def __str__(self) -> str:
        return str(self.to_element())

    def to_json(self) -> dict:
        return {"degree": self.k, "gammas": [fraction_str(c) for c in self.gammas]}


def bernstein_poly_of_homogeneous(P: HomogeneousElement) -> Polynomial:
    """Monic B with P <-> B: normalization of r(-x), r(lambda) the b^k-remainder of P by a - lambda b."""
    if not P.monic:
        raise NotHomogeneous(f"{P} is not monic in a")
    r = right_evaluation(P.to_element(P.k + 1))[P.k]
    return r.compose(Polynomial([ZERO, -ONE])).monic()


def homogeneous_from_bernstein(B: Polynomial, k: int | None = None) -> HomogeneousElement:
    """The monic homogeneous element of degree k attached to the monic polynomial B.

    Computed literally as ``(-1)^k b^k B(-b^{-1} a)`` in the localized algebra;
    the sign makes the result monic in ``a^k``.
    """
    B = B.monic()
    if k is None:
        k = B.degree
    if B.degree != k:
        raise ValueError(f"polynomial of degree {B.degree} given for k={k}")
    prec = k + 1
    u = AbElement({(-1, 1): -ONE}, prec)
    total = AbElement({}, prec)
    power = AbElement.scalar(1, prec)
    for c in B.coeffs:
        total = total + power * c
        power = power * u
    bk = AbElement({(k, 0): ONE if k % 2 == 0 else -ONE}, prec)
    return HomogeneousElement.from_element(bk * total)


def factor_homogeneous(P: HomogeneousElement, order: Iterable | None = None) -> list[Fraction]:
    """lambda_1..lambda_k with P = (a - lambda_1 b)...(a - lambda_k b).

    By default the roots of B are sorted nonincreasingly and
    ``lambda_j = -r_j + k - j``, which makes ``lambda_j + j`` nondecreasing.
    ``order`` may give an explicit arrangement of the root multiset.  The
    factorization is verified by successive right division.
    """
    B = bernstein_poly_of_homogeneous(P)
    roots, split = rational_roots(B)
    if not split:
        raise NotFullySplit(f"Bernstein polynomial {B} has non-rational roots")
    k = P.k
    if order is None:
        seq = sorted(roots, reverse=True)
    else:
        seq = [as_fraction(r) if not isinstance(r, Fraction) else r for r in order]
        if sorted(seq) != sorted(roots):
            raise ValueError("order is not a permutation of the Bernstein roots")
    lambdas = [-r + k - j for j, r in enumerate(seq, start=1)]
    # verify: peel off factors from the right
    cur = P.to_element(k + 1)
    for j in range(k, 0, -1):
        d = AbElement({(0, 1): ONE, (1, 0): -lambdas[j - 1]}, k + 1)
        q, r = right_divide(cur, d)
        if not r.is_zero():
            raise AssertionError(f"factor a - {lambdas[j - 1]} b does not divide on the right")
        cur = q
    if cur != AbElement.scalar(1, k + 1):
        raise AssertionError("factorization did not reduce to 1")
    return lambdas


def linear_factor(lam, prec: int = 16) -> AbElement:
    """The element a - lambda b."""
    return AbElement({(0, 1): ONE, (1, 0): -as_fraction(lam) if not isinstance(lam, Fraction) else -lam}, prec)


def product_of_linear_factors(lambdas: Iterable, prec: int | None = None) -> AbElement:
    lambdas = list(lambdas)
    p = len(lambdas) + 1 if prec is None else prec
    out = AbElement.scalar(1, p)
    for lam in lambdas:
        out = out * linear_factor(lam, p)
    return out


def series_unit_inverse(x: AbElement) -> AbElement:
    """Inverse of an a-free element with nonzero constant term."""
    if x.a_degree() > 0:
        raise NotAUnit(f"inv() needs a series in b, got {x}")
    s = x.a_coefficient(0)
    return AbElement.from_series(s.inverse())
