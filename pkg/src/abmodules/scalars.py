"""Exact coefficient arithmetic.

Rationals are :class:`fractions.Fraction`.  The transcendental extension
Q(tau), with tau standing for 2*i*pi, is :class:`TauRational`.  Univariate
polynomials are :class:`Polynomial`, truncated power series in ``b`` are
:class:`TruncatedSeries` and Laurent series are :class:`LaurentSeries`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import NotAUnit

ZERO = Fraction(0)
ONE = Fraction(1)


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational number")


def fraction_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def rising(x, n: int):
    """x (x+1) ... (x+n-1)."""
    r = ONE
    for i in range(n):
        r = r * (x + i)
    return r


# ---------------------------------------------------------------------------
# polynomials


class Polynomial:
    """Dense univariate polynomial; ``coeffs[i]`` is the coefficient of x**i.

    Coefficients are Fractions, or TauRationals when a computation needs
    Q(tau).  Trailing zeros are stripped so the zero polynomial has no
    coefficients.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [as_fraction(x) if isinstance(x, (int, str)) else x for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def from_roots(cls, roots: Iterable) -> Polynomial:
        p = cls([ONE])
        for r in roots:
            p = p * cls([-as_fraction(r) if not isinstance(r, Fraction) else -r, ONE])
        return p

    @classmethod
    def x(cls) -> Polynomial:
        return cls([ZERO, ONE])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self):
        return self.coeffs[-1]

    def __getitem__(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else ZERO

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial([other])
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other) -> Polynomial:
        other = _poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other) -> Polynomial:
        return self + (-_poly(other))

    def __rsub__(self, other) -> Polynomial:
        return _poly(other) - self

    def __mul__(self, other) -> Polynomial:
        if not isinstance(other, Polynomial):
            return Polynomial(c * other for c in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return Polynomial()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x == 0:
                continue
            for j, y in enumerate(other.coeffs):
                out[i + j] = out[i + j] + x * y
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Polynomial:
        r = Polynomial([ONE])
        for _ in range(n):
            r = r * self
        return r

    def __divmod__(self, other: Polynomial):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [ZERO] * max(len(rem) - len(other.coeffs) + 1, 0)
        lc = other.lc()
        for i in range(len(q) - 1, -1, -1):
            c = rem[i + other.degree] / lc
            q[i] = c
            if c != 0:
                for j, y in enumerate(other.coeffs):
                    rem[i + j] = rem[i + j] - c * y
        return Polynomial(q), Polynomial(rem[: other.degree] if other.degree > 0 else [])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x):
        r = ZERO
        for c in reversed(self.coeffs):
            r = r * x + c
        return r

    def monic(self) -> Polynomial:
        if self.is_zero():
            return self
        lc = self.lc()
        return Polynomial(c / lc for c in self.coeffs)

    def derivative(self) -> Polynomial:
        return Polynomial(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def compose(self, other: Polynomial) -> Polynomial:
        r = Polynomial()
        for c in reversed(self.coeffs):
            r = r * other + Polynomial([c])
        return r

    def shift(self, h) -> Polynomial:
        """The polynomial x -> p(x + h)."""
        return self.compose(Polynomial([as_fraction(h) if isinstance(h, int) else h, ONE]))

    def gcd(self, other: Polynomial) -> Polynomial:
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def __repr__(self) -> str:
        return f"Polynomial({self})"

    def __str__(self) -> str:
        return self.to_str("x")

    def to_str(self, var: str = "x") -> str:
        if self.is_zero():
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            cs = _scalar_str(c)
            if mono and cs == "1":
                terms.append(mono)
            elif mono and cs == "-1":
                terms.append("-" + mono)
            elif mono:
                terms.append(f"{_paren(cs)}*{mono}")
            else:
                terms.append(cs)
        s = " + ".join(terms)
        return s.replace("+ -", "- ")


def _poly(x) -> Polynomial:
    return x if isinstance(x, Polynomial) else Polynomial([x])


def _paren(s: str) -> str:
    return f"({s})" if any(ch in s[1:] for ch in "+-") else s


def _scalar_str(c) -> str:
    return fraction_str(c) if isinstance(c, Fraction) else str(c)


def _primitive_integer_form(p: Polynomial) -> list[int]:
    den = 1
    for c in p.coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in p.coeffs]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    return [v // g for v in ints]


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def rational_roots(p: Polynomial) -> tuple[list[Fraction], bool]:
    """Rational roots of ``p`` with multiplicity, and whether ``p`` splits.

    Candidates come from the rational-root theorem applied to the primitive
    integer form; each root found is deflated away.
    """
    if p.is_zero():
        raise ValueError("rational_roots of the zero polynomial")
    roots: list[Fraction] = []
    q = p.monic()
    while q.degree > 0 and q[0] == 0:
        roots.append(ZERO)
        q = Polynomial(q.coeffs[1:])
    while q.degree > 0:
        ints = _primitive_integer_form(q)
        found = None
        for num in _divisors(ints[0]):
            for den in _divisors(ints[-1]):
                for cand in (Fraction(num, den), Fraction(-num, den)):
                    if q(cand) == 0:
                        found = cand
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            break
        roots.append(found)
        q = q // Polynomial([-found, ONE])
    roots.sort()
    return roots, q.degree == 0


def factored_str(p: Polynomial, var: str = "x") -> str:
    """``(x + 1/2)^2 (x + 1)`` when p splits over Q, else the expanded form."""
    roots, split = rational_roots(p)
    if not split or p.degree <= 0:
        return p.to_str(var)
    mult: dict = {}
    for r in roots:
        mult[r] = mult.get(r, 0) + 1
    parts = []
    for r in sorted(mult, reverse=True):
        if r == 0:
            body = var
        else:
            sign = "-" if r > 0 else "+"
            body = f"({var} {sign} {fraction_str(abs(r))})"
        parts.append(body if mult[r] == 1 else f"{body}^{mult[r]}")
    lead = p.lc()
    prefix = "" if lead == 1 else f"{fraction_str(lead)}*"
    return prefix + "*".join(parts)


# ---------------------------------------------------------------------------
# Q(tau)


class TauRational:
    """Element of Q(tau): reduced quotient of polynomials, monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = _poly(num if not isinstance(num, int) else Fraction(num))
        den = Polynomial([ONE]) if den is None else _poly(den)
        if den.is_zero():
            raise ZeroDivisionError("TauRational with zero denominator")
        g = num.gcd(den) if not num.is_zero() else den.monic()
        num, den = num // g, den // g
        lc = den.lc()
        self.num = num * (ONE / lc)
        self.den = den * (ONE / lc)

    @classmethod
    def tau(cls) -> TauRational:
        return cls(Polynomial([ZERO, ONE]))

    @staticmethod
    def lift(x) -> TauRational:
        if isinstance(x, TauRational):
            return x
        return TauRational(Polynomial([as_fraction(x)]))

    def is_rational(self) -> bool:
        return self.den.degree == 0 and self.num.degree <= 0

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.num[0] == other
        return isinstance(other, TauRational) and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        o = TauRational.lift(other)
        return TauRational(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return TauRational(-self.num, self.den)

    def __sub__(self, other):
        return self + (-TauRational.lift(other))

    def __rsub__(self, other):
        return TauRational.lift(other) - self

    def __mul__(self, other):
        o = TauRational.lift(other)
        return TauRational(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = TauRational.lift(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by zero in Q(tau)")
        return TauRational(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return TauRational.lift(other) / self

    def __pow__(self, n: int) -> TauRational:
        if n < 0:
            return TauRational.lift(1) / self ** (-n)
        out = TauRational.lift(1)
        for _ in range(n):
            out = out * self
        return out

    def __str__(self) -> str:
        n = self.num.to_str("tau")
        if self.den.degree == 0:
            return n
        return f"({n})/({self.den.to_str('tau')})"

    __repr__ = __str__


def parse_scalar(text: str):
    """Parse ``"p/q"`` or a rational expression in ``tau`` such as ``"1/2*tau^2 - 3"``."""
    text = text.strip()
    if "tau" not in text:
        return Fraction(text.replace(" ", ""))
    from .parsing import parse_tau_expression

    return parse_tau_expression(text)


def scalar_to_json(c) -> str:
    return fraction_str(c) if isinstance(c, Fraction) else str(c)


# ---------------------------------------------------------------------------
# power series


class TruncatedSeries:
    """Power series in ``b`` known modulo ``b**prec``.

    Coefficients at exponents >= ``prec`` are never stored and never
    reported; binary operations take the minimum of the input precisions.
    """

    __slots__ = ("coeffs", "prec")

    def __init__(self, coeffs: Iterable = (), prec: int = 0):
        if prec < 0:
            prec = 0
        c = [as_fraction(x) if isinstance(x, (int, str)) else x for x in coeffs][:prec]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)
        self.prec = prec

    @classmethod
    def zero(cls, prec: int) -> TruncatedSeries:
        return cls((), prec)

    @classmethod
    def one(cls, prec: int) -> TruncatedSeries:
        return cls((ONE,), prec)

    @classmethod
    def monomial(cls, c, n: int, prec: int) -> TruncatedSeries:
        if n >= prec:
            return cls((), prec)
        return cls([ZERO] * n + [c], prec)

    def __getitem__(self, i: int):
        if i >= self.prec:
            raise IndexError(f"coefficient b^{i} is beyond precision {self.prec}")
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else ZERO

    def coeff(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else ZERO

    def is_zero(self) -> bool:
        return not self.coeffs

    def valuation(self) -> int:
        """Index of the first nonzero coefficient; ``prec`` when zero."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return self.prec

    def truncate(self, prec: int) -> TruncatedSeries:
        return TruncatedSeries(self.coeffs, min(prec, self.prec))

    def with_prec(self, prec: int) -> TruncatedSeries:
        """Reinterpret with a new precision (used for exact polynomial data)."""
        return TruncatedSeries(self.coeffs, prec)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = TruncatedSeries((other,), self.prec)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        n = min(self.prec, other.prec)
        return self.truncate(n).coeffs == other.truncate(n).coeffs

    def __hash__(self):
        return hash((self.coeffs, self.prec))

    def __add__(self, other) -> TruncatedSeries:
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries((other,), self.prec)
        n = min(self.prec, other.prec)
        m = min(max(len(self.coeffs), len(other.coeffs)), n)
        return TruncatedSeries((self.coeff(i) + other.coeff(i) for i in range(m)), n)

    __radd__ = __add__

    def __neg__(self) -> TruncatedSeries:
        return TruncatedSeries((-c for c in self.coeffs), self.prec)

    def __sub__(self, other) -> TruncatedSeries:
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries((other,), self.prec)
        return self + (-other)

    def __rsub__(self, other) -> TruncatedSeries:
        return (-self) + other

    def __mul__(self, other) -> TruncatedSeries:
        if not isinstance(other, TruncatedSeries):
            if other == 0:
                return TruncatedSeries((), self.prec)
            return TruncatedSeries((c * other for c in self.coeffs), self.prec)
        return series_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> TruncatedSeries:
        r = TruncatedSeries.one(self.prec)
        for _ in range(n):
            r = r * self
        return r

    def shift(self, n: int) -> TruncatedSeries:
        """Multiply by ``b**n`` (n >= 0) or divide by ``b**-n`` when exact."""
        if n >= 0:
            return TruncatedSeries([ZERO] * n + list(self.coeffs), self.prec + n)
        if self.valuation() < -n:
            raise ValueError("shift would create negative exponents")
        return TruncatedSeries(self.coeffs[-n:], self.prec + n)

    def derivative(self) -> TruncatedSeries:
        return series_derivative(self)

    def inverse(self) -> TruncatedSeries:
        return series_invert(self)

    def compose(self, inner: TruncatedSeries) -> TruncatedSeries:
        """``self(inner)`` for ``inner`` with zero constant term."""
        if inner.coeff(0) != 0:
            raise ValueError("composition needs an inner series with zero constant term")
        n = min(self.prec, inner.prec)
        r = TruncatedSeries.zero(n)
        for c in reversed(self.coeffs[:n]):
            r = r * inner + c
        return r.truncate(n)

    def __call__(self, x):
        r = ZERO
        for c in reversed(self.coeffs):
            r = r * x + c
        return r

    def __repr__(self) -> str:
        return f"TruncatedSeries({list(map(_scalar_str, self.coeffs))}, prec={self.prec})"

    def __str__(self) -> str:
        body = Polynomial(self.coeffs).to_str("b")
        return f"{body} + O(b^{self.prec})"

    def to_json(self) -> dict:
        return {
            "terms": [[i, scalar_to_json(c)] for i, c in enumerate(self.coeffs) if c != 0],
            "precision": self.prec,
        }

    @classmethod
    def from_json(cls, obj) -> TruncatedSeries:
        prec = int(obj["precision"])
        coeffs = [ZERO] * prec
        for e, c in obj["terms"]:
            if int(e) < prec:
                coeffs[int(e)] = coeffs[int(e)] + parse_scalar(str(c))
        return cls(coeffs, prec)


def series_mul(x: TruncatedSeries, y: TruncatedSeries) -> TruncatedSeries:
    """Product modulo ``b**min(x.prec, y.prec)``."""
    n = min(x.prec, y.prec)
    xc, yc = x.coeffs[:n], y.coeffs[:n]
    if not xc or not yc:
        return TruncatedSeries((), n)
    out = [ZERO] * min(n, len(xc) + len(yc) - 1)
    for i, a in enumerate(xc):
        if a == 0:
            continue
        for j in range(min(len(yc), n - i)):
            out[i + j] = out[i + j] + a * yc[j]
    return TruncatedSeries(out, n)


def series_invert(x: TruncatedSeries) -> TruncatedSeries:
    c0 = x.coeff(0)
    if c0 == 0:
        raise NotAUnit(f"series {x} has zero constant term")
    n = x.prec
    inv0 = ONE / c0
    out = [inv0]
    for k in range(1, n):
        s = ZERO
        for i in range(1, min(k, len(x.coeffs) - 1) + 1):
            s = s + x.coeffs[i] * out[k - i]
        out.append(-s * inv0)
    return TruncatedSeries(out, n)


def series_derivative(x: TruncatedSeries) -> TruncatedSeries:
    return TruncatedSeries((i * c for i, c in enumerate(x.coeffs) if i > 0), max(x.prec - 1, 0))


class LaurentSeries:
    """Element of Q((b)): ``b**shift * body`` with body a TruncatedSeries.

    The normalized form has the body's constant term nonzero (unless zero),
    so ``valuation`` is the true b-adic valuation.  Absolute precision is
    ``shift + body.prec``.
    """

    __slots__ = ("shift", "body")

    def __init__(self, body: TruncatedSeries, shift: int = 0):
        v = body.valuation()
        if body.is_zero():
            self.shift, self.body = shift + body.prec, TruncatedSeries((), 0)
            return
        self.shift = shift + v
        self.body = body.shift(-v) if v else body

    @property
    def valuation(self) -> int:
        return self.shift

    @property
    def prec(self) -> int:
        return self.shift + self.body.prec

    def is_zero(self) -> bool:
        return self.body.is_zero()

    def coeff(self, n: int):
        return self.body.coeff(n - self.shift)

    def __add__(self, other: LaurentSeries) -> LaurentSeries:
        s = min(self.shift, other.shift)
        a = self.body.shift(self.shift - s)
        b = other.body.shift(other.shift - s)
        return LaurentSeries(a + b, s)

    def __neg__(self) -> LaurentSeries:
        return LaurentSeries(-self.body, self.shift)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other) -> LaurentSeries:
        if isinstance(other, LaurentSeries):
            n = min(self.body.prec, other.body.prec)
            return LaurentSeries(self.body.truncate(n) * other.body.truncate(n), self.shift + other.shift)
        return LaurentSeries(self.body * other, self.shift)

    def __repr__(self) -> str:
        return f"LaurentSeries(b^{self.shift} * {self.body!r})"


def square_matrix_power_basis(M: Sequence[Sequence], n: int):
    """[I, M, M^2, ..., M^n] as flat coefficient lists (helper for min_poly)."""
    k = len(M)
    cur = [[ONE if i == j else ZERO for j in range(k)] for i in range(k)]
    out = []
    for _ in range(n + 1):
        out.append([c for row in cur for c in row])
        cur = mat_mul(cur, M)
    return out


# ---------------------------------------------------------------------------
# exact linear algebra over a field (lists of lists)


def mat_mul(A, B):
    n, m, p = len(A), len(B), len(B[0]) if B else 0
    return [[sum((A[i][t] * B[t][j] for t in range(m)), ZERO) for j in range(p)] for i in range(n)]


def rref(M, ncols: int | None = None):
    """Reduced row echelon form of a copy of ``M``; returns (R, pivot_columns).

    Only the first ``ncols`` columns are used as pivot candidates, so an
    augmented matrix can be reduced without pivoting on the right-hand side.
    """
    R = [list(row) for row in M]
    if not R:
        return R, []
    width = len(R[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(width):
        p = next((i for i in range(r, len(R)) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = ONE / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for i in range(len(R)):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                Ri, Rr = R[i], R[r]
                R[i] = [a - f * b for a, b in zip(Ri, Rr)]
        pivots.append(c)
        r += 1
        if r == len(R):
            break
    return R, pivots


def rank(M) -> int:
    return len(rref(M)[1])


def nullspace(M, ncols: int | None = None) -> list[list]:
    """Basis of {v : M v = 0}."""
    if ncols is None:
        ncols = len(M[0]) if M else 0
    if not M:
        return [[ONE if i == j else ZERO for i in range(ncols)] for j in range(ncols)]
    R, piv = rref(M)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for row, pc in enumerate(piv):
            v[pc] = -R[row][f]
        basis.append(v)
    return basis


def solve(M, rhs):
    """One solution of M v = rhs, or None when inconsistent."""
    n = len(M[0]) if M else 0
    aug = [list(row) + [r] for row, r in zip(M, rhs)]
    R, piv = rref(aug, ncols=n)
    for row in R[len(piv):]:
        if row[-1] != 0:
            return None
    v = [ZERO] * n
    for row, pc in enumerate(piv):
        v[pc] = R[row][-1]
    return v


def char_poly(M) -> Polynomial:
    """Monic characteristic polynomial det(x I - M), by Faddeev-LeVerrier."""
    k = len(M)
    coeffs = [ZERO] * (k + 1)
    coeffs[k] = ONE
    Mk = [[ZERO] * k for _ in range(k)]
    for m in range(1, k + 1):
        # Mk <- M (Mk + c_{k-m+1} I)
        prev = [[Mk[i][j] + (coeffs[k - m + 1] if i == j else ZERO) for j in range(k)] for i in range(k)]
        Mk = mat_mul(M, prev)
        tr = sum((Mk[i][i] for i in range(k)), ZERO)
        coeffs[k - m] = -tr / m
    return Polynomial(coeffs)


def min_poly(M) -> Polynomial:
    """Monic minimal polynomial: first linear dependency among I, M, M^2, ..."""
    k = len(M)
    powers = square_matrix_power_basis(M, k)
    for d in range(1, k + 1):
        cols = powers[: d + 1]
        A = [[cols[j][i] for j in range(d + 1)] for i in range(k * k)]
        ns = nullspace(A, d + 1)
        if ns:
            v = ns[0]
            return Polynomial(v).monic()
    raise AssertionError("Cayley-Hamilton violated")  # pragma: no cover
