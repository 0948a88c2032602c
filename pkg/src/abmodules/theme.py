"""Primitive themes: detection, fundamental data, canonical forms and invariance.

A theme is a geometric (a,b)-module with a unique normal rank one
submodule; all of its Bernstein roots then lie in one class modulo Z.  The
principal Jordan-Hölder data ``lambda_1, ..., lambda_k`` of a primitive
theme are encoded by ``lambda_1`` and the integers
``p_j = lambda_(j+1) - lambda_j + 1 >= 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import sympy

from .errors import CanonicalizationFailed, NotATheme, NotPrimitive
from .fresco import FrescoPresentation, module_from_presentation, principal_lambdas
from .lattice import solve_columns, vprec
from .module import (
    AbModule,
    _geometric_roots,
    apply_a,
    hom_dimension,
    rank1_normal_submodules,
)
from .scalars import ONE, ZERO, TruncatedSeries, as_fraction, fraction_str, rref
from .xi import Realization, XiElement, lambda_class


@dataclass
class ThemeCheck:
    is_theme: bool
    lam_class: Fraction | None
    families: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.is_theme


def is_theme(F: AbModule) -> ThemeCheck:
    """Theme test: exactly one normal rank one submodule.

    Returns the verdict with the class modulo Z (in (0, 1]) of the Bernstein
    roots when it holds.
    """
    roots = _geometric_roots(F)
    families = rank1_normal_submodules(F)
    normal = [f for f in families if f.normal_basis]
    ok = len(normal) == 1 and normal[0].unique
    if not ok:
        return ThemeCheck(False, None, families)
    classes = {lambda_class(-r) for r in roots}
    if len(classes) != 1:
        raise NotPrimitive(f"unique rank one submodule but Bernstein roots {roots} span several classes")
    return ThemeCheck(True, classes.pop(), families)


# ---------------------------------------------------------------------------
# fundamental data and the spaces V_j, W_j


@dataclass(frozen=True)
class FundamentalData:
    lambda1: Fraction
    p: tuple

    def __post_init__(self):
        object.__setattr__(self, "lambda1", as_fraction(self.lambda1) if not isinstance(self.lambda1, Fraction) else self.lambda1)
        object.__setattr__(self, "p", tuple(int(x) for x in self.p))
        if any(x < 0 for x in self.p):
            raise ValueError("the integers p_j must be nonnegative")

    @property
    def rank(self) -> int:
        return len(self.p) + 1

    @property
    def lambdas(self) -> list[Fraction]:
        out = [self.lambda1]
        for pj in self.p:
            out.append(out[-1] + pj - 1)
        return out

    def is_valid(self) -> bool:
        return self.lambda1 > self.rank - 1

    def q(self, j: int) -> int | None:
        """q_j for 1 <= j <= k-1, or None when the tail sum is below k - j."""
        k = self.rank
        total = 0
        for h in range(j - 1, k - 1):
            total += self.p[h]
            if total >= k - j:
                return total
        return None

    def __str__(self) -> str:
        return f"({fraction_str(self.lambda1)}; {list(self.p)})"

    def to_json(self) -> dict:
        return {"lambda1": fraction_str(self.lambda1), "p": list(self.p)}

    @classmethod
    def from_json(cls, obj) -> FundamentalData:
        return cls(Fraction(str(obj["lambda1"])), tuple(int(x) for x in obj["p"]))


def fundamental_data(theta: AbModule) -> FundamentalData:
    """``lambda_1`` and ``p_j`` from the principal factorization of the Bernstein element."""
    lambdas = principal_lambdas(theta)
    if len({lambda_class(x) for x in lambdas}) != 1:
        raise NotPrimitive(f"lambda sequence {lambdas} spans several classes modulo Z")
    p = []
    for a, b in zip(lambdas, lambdas[1:]):
        d = b - a + 1
        if d.denominator != 1 or d < 0:
            raise NotPrimitive(f"p = {d} is not a nonnegative integer")
        p.append(int(d))
    data = FundamentalData(lambdas[0], tuple(p))
    if not data.is_valid():
        raise NotATheme(f"lambda_1 = {lambdas[0]} must exceed k - 1 = {len(lambdas) - 1}")
    return data


@dataclass(frozen=True)
class VW:
    """Support of V_j and the open conditions cutting out W_j."""

    j: int
    support: tuple
    p: int
    q: int | None

    @property
    def free_exponents(self) -> tuple:
        return tuple(e for e in self.support if e != 0)

    def contains(self, S: TruncatedSeries) -> bool:
        """Membership of S in W_j."""
        if S.coeff(0) != 1:
            return False
        if any(c != 0 and e not in self.support for e, c in enumerate(S.coeffs)):
            return False
        return S.coeff(self.p) != 0

    def to_json(self) -> dict:
        return {"j": self.j, "support": list(self.support), "p": self.p, "q": self.q}


def build_VW(data: FundamentalData) -> list[VW]:
    k = data.rank
    out = []
    for j in range(1, k):
        support = set(range(k - j))
        q = data.q(j)
        if q is not None:
            support.add(q)
        pj = data.p[j - 1]
        if 0 not in support or pj not in support:
            raise AssertionError(f"V_{j} misses b^0 or b^p_j")
        out.append(VW(j, tuple(sorted(support)), pj, q))
    return out


# ---------------------------------------------------------------------------
# canonical forms


@dataclass
class CanonicalForm:
    data: FundamentalData
    units: list
    unique: bool = True

    def presentation(self) -> FrescoPresentation:
        return FrescoPresentation(self.data.lambdas, list(self.units))

    def __str__(self) -> str:
        return str(self.presentation())

    def to_json(self) -> dict:
        out = self.data.to_json()
        out["S"] = [s.to_json() for s in self.units]
        out["unique"] = self.unique
        return out

    @classmethod
    def from_json(cls, obj) -> CanonicalForm:
        data = FundamentalData.from_json(obj)
        units = [TruncatedSeries.from_json(s) for s in obj.get("S", [])]
        return cls(data, units, bool(obj.get("unique", True)))


def theme_from_canonical(cf: CanonicalForm, prec: int = 16) -> AbModule:
    """Module of ``(a - l1 b) S1^-1 ... (a - lk b)``, checked to be a theme with the same data."""
    for vw, s in zip(build_VW(cf.data), cf.units):
        if not vw.contains(s):
            raise ValueError(f"S_{vw.j} = {s} is not in W_{vw.j}")
    F = module_from_presentation(cf.presentation(), prec)
    if not is_theme(F):
        raise NotATheme("the canonical presentation does not define a theme")
    if fundamental_data(F) != cf.data:
        raise NotATheme("fundamental data do not round trip")
    return F


class _Stage:
    """Row reduction of ``x -> (a - mu b) x`` on coefficient vectors modulo ``b^N``."""

    def __init__(self, F: AbModule, mu: Fraction):
        from .lattice import flat_linear_map, vscale, vshift, vsub

        k, N = F.rank, F.prec

        def f(v):
            return [x.truncate(N) for x in vsub(apply_a(F, v), vscale(mu, vshift(v, 1)))]

        A = flat_linear_map(f, k, N, k, N)
        n = k * N
        aug = [row + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(A)]
        R, piv = rref(aug, n)
        self.n = n
        self.R = R
        self.pivots = piv
        self.free = [c for c in range(n) if c not in piv]

    def solve(self, y: list, tag: str):
        """Symbolic solution x of ``(a - mu b) x = y``: (x, new symbols, consistency equations)."""
        n = self.n
        Ey = []
        for row in self.R:
            acc = 0
            for t in range(n):
                c = row[n + t]
                if c != 0 and y[t] != 0:
                    acc += sympy.Rational(c.numerator, c.denominator) * y[t]
            Ey.append(sympy.expand(acc))
        r = len(self.pivots)
        eqs = [e for e in Ey[r:] if e != 0]
        syms = sympy.symbols(f"{tag}_0:{len(self.free)}") if self.free else ()
        x = [sympy.Integer(0)] * n
        for s, f in zip(syms, self.free):
            x[f] = s
        for row, pc in enumerate(self.pivots):
            val = Ey[row]
            for s, f in zip(syms, self.free):
                c = self.R[row][f]
                if c != 0:
                    val -= sympy.Rational(c.numerator, c.denominator) * s
            x[pc] = sympy.expand(val)
        return x, list(syms), eqs


def _times_series(coeffs: list, x: list, k: int, N: int) -> list:
    """Coordinatewise product of a symbolic series with a symbolic vector, modulo b^N."""
    out = [sympy.Integer(0)] * (k * N)
    for i in range(k):
        for e, c in enumerate(coeffs):
            if c == 0:
                continue
            for m in range(N - e):
                v = x[i * N + m]
                if v != 0:
                    out[i * N + m + e] += c * v
    return [sympy.expand(v) for v in out]


def canonical_form(theta: AbModule) -> CanonicalForm:
    """Find ``S_j in W_j`` such that theta is isomorphic to the canonical presentation.

    The generator e of such a presentation is reached through the chain
    ``x_1 = eps`` (the rank one generator) and ``(a - lambda_(j+1) b) x_(j+1) = S_j x_j``;
    then ``e = x_k``.  The chain is linear in the vectors x_j, and the
    solvability conditions are polynomial in the coefficients of the S_j.
    """
    check = is_theme(theta)
    if not check:
        raise NotATheme("module has no unique normal rank one submodule")
    data = fundamental_data(theta)
    k, N = theta.rank, theta.prec
    lambdas = data.lambdas
    if k == 1:
        return CanonicalForm(data, [], True)
    vws = build_VW(data)
    alphas: list = []
    S_coeffs = []
    for vw in vws:
        coeffs = [sympy.Integer(0)] * N
        coeffs[0] = sympy.Integer(1)
        for e in vw.free_exponents:
            if e < N:
                a = sympy.Symbol(f"alpha_{vw.j}_{e}")
                alphas.append(a)
                coeffs[e] = a
        S_coeffs.append(coeffs)
    eps = check.families[[f.normal_basis != [] for f in check.families].index(True)].normal_basis[0]
    i0 = next(i for i, s in enumerate(eps) if s.coeff(0) != 0)
    stage = _Stage(theta, lambdas[0])
    x, params, eqs = stage.solve([0] * (k * N), "t1")
    eqs.append(x[i0 * N] - 1)
    for j in range(1, k):
        y = _times_series(S_coeffs[j - 1], x, k, N)
        x, p, c = _Stage(theta, lambdas[j]).solve(y, f"t{j + 1}")
        params += p
        eqs += c
    # e = x_k must generate theta: nonzero modulo a theta + b theta
    M0 = [[theta.cols[c][r].coeff(0) for c in range(k)] for r in range(k)]
    ell = _left_annihilator(M0)
    gen_value = sympy.expand(sum(sympy.Rational(l.numerator, l.denominator) * x[i * N] for i, l in enumerate(ell)))
    try:
        sols = sympy.solve(eqs, alphas + params, dict=True)
    except NotImplementedError as exc:  # pragma: no cover - depends on sympy internals
        raise CanonicalizationFailed(f"polynomial system not solved: {exc}") from None
    found = []
    for sol in sols:
        values = []
        for a in alphas:
            v = sympy.sympify(a).subs(sol)
            free = [s for s in v.free_symbols]
            if free:
                v = v.subs({s: 0 for s in free})
            values.append(v)
        if not all(v.is_Rational for v in values):
            continue
        env = dict(zip(alphas, values))
        g = gen_value.subs(sol).subs(env)
        g = g.subs({s: 0 for s in g.free_symbols})
        if g == 0:
            continue
        units = []
        for vw, coeffs in zip(vws, S_coeffs):
            c = [Fraction(int(sympy.sympify(v).subs(env).p), int(sympy.sympify(v).subs(env).q)) for v in coeffs]
            units.append(TruncatedSeries(c, N))
        if all(vw.contains(u) for vw, u in zip(vws, units)):
            key = tuple(tuple(u.coeffs) for u in units)
            if key not in [tuple(tuple(u.coeffs) for u in f) for f in found]:
                found.append(units)
    if not found:
        raise CanonicalizationFailed(f"no canonical form found at precision {N}")
    family = any(
        sympy.sympify(a).subs(sol).free_symbols for sol in sols for a in alphas
    )
    return CanonicalForm(data, found[0], len(found) == 1 and not family)


def _left_annihilator(M0) -> list[Fraction]:
    """A row vector killing the columns of M0 (unique up to scale for a fresco)."""
    from .scalars import nullspace

    k = len(M0)
    T = [[M0[r][c] for r in range(k)] for c in range(k)]
    ns = nullspace(T, k)
    if len(ns) != 1:
        raise NotATheme("module is not monogenic")
    return ns[0]


# ---------------------------------------------------------------------------
# invariance


@dataclass
class InvarianceReport:
    hom_dimension: int
    stabilized: bool
    rank: int
    realization_invariant: bool | None

    @property
    def invariant(self) -> bool:
        return self.hom_dimension == self.rank

    def to_json(self) -> dict:
        return {
            "invariant": self.invariant,
            "hom_dimension": self.hom_dimension,
            "stabilized": self.stabilized,
            "rank": self.rank,
            "realization_invariant": self.realization_invariant,
        }


def realization_is_monodromy_invariant(R: Realization) -> bool:
    """Whether ``U(F) = F`` for the realized lattice.

    U(x) is a polynomial in tau whose coefficients are the rational
    expansions ``D_n x`` (D_n lowers the log degree by n and divides by n!);
    U(F) lies in F exactly when every ``D_n`` maps the generator into F.
    """
    from math import factorial

    x = R.element
    for n in range(1, x.n_log + 1):
        terms = {}
        for (lam, j, m), c in x.terms.items():
            if j >= n:
                terms[(lam, j - n, m)] = tuple(v * Fraction(1, factorial(n)) for v in c)
        y = XiElement(terms, x.dim, x.n_log, x.m_prec)
        vec = R.space.to_vector(y)
        prec = min(vprec(vec), min(vprec(b) for b in R.basis))
        basis = [[s.truncate(prec) for s in b] for b in R.basis]
        if solve_columns(basis, [s.truncate(prec) for s in vec]) is None:
            return False
    return True


def is_invariant(theta: AbModule, realization: Realization | None = None) -> InvarianceReport:
    """Invariance through ``dim Hom(theta, theta) = rank``, plus the realization test when given."""
    d, stable = hom_dimension(theta, theta)
    real = realization_is_monodromy_invariant(realization) if realization is not None else None
    return InvarianceReport(d, stable, theta.rank, real)


__all__ = [
    "CanonicalForm",
    "FundamentalData",
    "InvarianceReport",
    "ThemeCheck",
    "VW",
    "build_VW",
    "canonical_form",
    "fundamental_data",
    "hom_dimension",
    "is_invariant",
    "is_theme",
    "realization_is_monodromy_invariant",
    "theme_from_canonical",
]
