"""Formal expansions ``sum c s^(lambda+m-1) (Log s)^j / j!`` and their (a,b)-structure.

``a`` is multiplication by s and ``b`` the primitive vanishing at 0.  For a
fixed finite set of exponent classes, log bound and value dimension the
expansions form a free Q[[b]]-module with basis ``s^(lambda-1) L^j / j!``
(L = Log s) on which

    a(s^(lambda-1) L^j/j!) = lambda b(s^(lambda-1) L^j/j!) + b(s^(lambda-1) L^(j-1)/(j-1)!)

so it is a simple pole module.  :class:`XiSpace` packages that module and
the conversions between expansion coefficients (s-coordinates) and
coordinates over Q[[b]] (b-coordinates); themes, realizations and the
filtrations are computed in b-coordinates with the module machinery.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import ceil, factorial
from typing import Iterable, Sequence

from .algebra import AbElement, HomogeneousElement
from .errors import (
    InternalConsistencyError,
    NotMinimalEmbedding,
    PrecisionExhausted,
    RankNotStabilized,
)
from .lattice import (
    column_echelon,
    flat_linear_map,
    kernel_basis,
    reliable_dimension,
    solve_columns,
    unflatten,
    vadd,
    vprec,
    vscale,
    zero_vector,
)
from .module import AbModule, apply_a, apply_element, submodule
from .scalars import ONE, ZERO, TauRational, TruncatedSeries, as_fraction, fraction_str, nullspace, rising

DEFAULT_WINDOW = 16


def normalize_exponent(lam: Fraction, m: int) -> tuple[Fraction, int]:
    """Rewrite ``s^(lam+m-1)`` with lam in (0, 1]."""
    lam = as_fraction(lam) if not isinstance(lam, Fraction) else lam
    shift = -ceil(lam - 1)
    lam2, m2 = lam + shift, m - shift
    if m2 < 0:
        raise ValueError(f"exponent {lam + m - 1} is not above -1")
    return lam2, m2


def lambda_class(lam) -> Fraction:
    """Representative in (0, 1] of the class of lam modulo Z."""
    lam = as_fraction(lam) if not isinstance(lam, Fraction) else lam
    return lam - ceil(lam - 1)


# ---------------------------------------------------------------------------
# expansions in s-coordinates


class XiElement:
    """Finite expansion with vector coefficients, known for ``m < m_prec``.

    ``terms[(lam, j, m)]`` is the coefficient vector of
    ``s^(lam+m-1) L^j / j!`` with lam in (0, 1].
    """

    __slots__ = ("terms", "dim", "n_log", "m_prec")

    def __init__(self, terms=None, dim: int = 1, n_log: int | None = None, m_prec: int = DEFAULT_WINDOW):
        clean = {}
        for (lam, j, m), c in (terms or {}).items():
            lam = as_fraction(lam) if not isinstance(lam, Fraction) else lam
            if not (0 < lam <= 1):
                lam, m = normalize_exponent(lam, m)
            if m >= m_prec:
                continue
            vec = tuple(c) if isinstance(c, (list, tuple)) else (c,)
            if len(vec) != dim:
                raise ValueError(f"coefficient of length {len(vec)} in dimension {dim}")
            if any(x != 0 for x in vec):
                key = (lam, j, m)
                if key in clean:
                    vec = tuple(x + y for x, y in zip(clean[key], vec))
                clean[key] = vec
        self.terms = {k: v for k, v in clean.items() if any(x != 0 for x in v)}
        self.dim = dim
        self.m_prec = m_prec
        top = max((j for (_, j, _) in self.terms), default=0)
        self.n_log = top if n_log is None else max(n_log, top)

    @classmethod
    def monomial(cls, lam, j: int = 0, m: int = 0, coeff=ONE, dim: int = 1,
                 m_prec: int = DEFAULT_WINDOW) -> XiElement:
        """``coeff * s^(lam+m-1) L^j / j!``."""
        vec = coeff if isinstance(coeff, (list, tuple)) else (coeff,) + (ZERO,) * (dim - 1)
        return cls({(lam, j, m): vec}, dim, None, m_prec)

    @classmethod
    def power(cls, exponent, log_power: int = 0, coeff=ONE, m_prec: int = DEFAULT_WINDOW) -> XiElement:
        """``coeff * s^exponent (Log s)^log_power`` (note: not divided by the factorial)."""
        lam, m = normalize_exponent(as_fraction(exponent) + 1, 0)
        return cls.monomial(lam, log_power, m, coeff * factorial(log_power), 1, m_prec)

    def is_zero(self) -> bool:
        return not self.terms

    def classes(self) -> list[Fraction]:
        return sorted({lam for (lam, _, _) in self.terms})

    def _new(self, terms) -> XiElement:
        return XiElement(terms, self.dim, self.n_log, self.m_prec)

    def __add__(self, other: XiElement) -> XiElement:
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = tuple(x + y for x, y in zip(out[k], v)) if k in out else v
        return XiElement(out, self.dim, max(self.n_log, other.n_log), min(self.m_prec, other.m_prec))

    def __neg__(self) -> XiElement:
        return self._new({k: tuple(-x for x in v) for k, v in self.terms.items()})

    def __sub__(self, other: XiElement) -> XiElement:
        return self + (-other)

    def scale(self, c) -> XiElement:
        return self._new({k: tuple(c * x for x in v) for k, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, XiElement):
            return NotImplemented
        n = min(self.m_prec, other.m_prec)
        a = {k: v for k, v in self.terms.items() if k[2] < n}
        b = {k: v for k, v in other.terms.items() if k[2] < n}
        return a == b

    def __repr__(self) -> str:
        return f"XiElement({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (lam, j, m) in sorted(self.terms, key=lambda k: (k[0] + k[2], -k[1])):
            c = self.terms[(lam, j, m)]
            cs = fraction_str(c[0]) if self.dim == 1 and isinstance(c[0], Fraction) else str(
                [fraction_str(x) if isinstance(x, Fraction) else str(x) for x in c]
            )
            mono = f"s^({fraction_str(lam + m - 1)})"
            if j:
                mono += "*L" if j == 1 else f"*L^{j}/{factorial(j)}"
            if cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append(f"-{mono}")
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> list:
        out = []
        for (lam, j, m), c in sorted(self.terms.items()):
            out.append({
                "lambda": fraction_str(lam),
                "m": m,
                "j": j,
                "coeff": [fraction_str(x) if isinstance(x, Fraction) else str(x) for x in c],
            })
        return out

    @classmethod
    def from_json(cls, data, m_prec: int = DEFAULT_WINDOW) -> XiElement:
        from .scalars import parse_scalar

        terms = {}
        dim = None
        for t in data:
            coeff = t["coeff"]
            if not isinstance(coeff, list):
                coeff = [coeff]
            vec = tuple(parse_scalar(str(c)) for c in coeff)
            if dim is None:
                dim = len(vec)
            elif len(vec) != dim:
                raise ValueError("coefficient vectors of different lengths")
            lam = Fraction(str(t["lambda"]))
            key = normalize_exponent(lam, int(t["m"]))
            key = (key[0], int(t.get("j", 0)), key[1])
            if key in terms:
                vec = tuple(x + y for x, y in zip(terms[key], vec))
            terms[key] = vec
        return cls(terms, dim or 1, None, m_prec)


@lru_cache(maxsize=None)
def _primitive_table(mu: Fraction, j: int) -> tuple:
    """b(s^(mu-1) L^j/j!) = sum_i coeff_i s^mu L^i/i!, as ((i, coeff), ...)."""
    return tuple((i, Fraction((-1) ** (j - i)) / mu ** (j - i + 1)) for i in range(j + 1))


def xi_a(x: XiElement) -> XiElement:
    """Multiplication by s."""
    return x._new({(lam, j, m + 1): c for (lam, j, m), c in x.terms.items()})


def xi_b(x: XiElement) -> XiElement:
    """Primitive vanishing at 0, term by term."""
    out: dict = {}
    for (lam, j, m), c in x.terms.items():
        mu = lam + m
        for i, f in _primitive_table(mu, j):
            key = (lam, i, m + 1)
            v = tuple(f * y for y in c)
            out[key] = tuple(p + q for p, q in zip(out[key], v)) if key in out else v
    return x._new(out)


def monodromy_unipotent(x: XiElement, lam=None) -> XiElement:
    """Unipotent part of the monodromy: ``L -> L + tau`` on the class lam (all classes by default).

    Coefficients become elements of Q(tau).
    """
    target = lambda_class(lam) if lam is not None else None
    tau = TauRational.tau()
    out: dict = {}
    for (cl, j, m), c in x.terms.items():
        if target is not None and cl != target:
            contrib = [((cl, j, m), c)]
        else:
            contrib = []
            for i in range(j + 1):
                f = tau ** (j - i) * TauRational.lift(Fraction(1, factorial(j - i)))
                contrib.append(((cl, i, m), tuple(f * TauRational.lift(y) for y in c)))
        for key, v in contrib:
            out[key] = tuple(p + q for p, q in zip(out[key], v)) if key in out else v
    return x._new(out)


# ---------------------------------------------------------------------------
# the free Q[[b]]-module of expansions


class XiSpace:
    """Expansions with given classes, log bound and value dimension, as an AbModule.

    Basis vectors are indexed by ``(lam, j, t)``: the expansion
    ``s^(lam-1) L^j/j!`` times the t-th standard vector of the value space.
    """

    def __init__(self, classes: Iterable, n_log: int, dim: int = 1, prec: int = DEFAULT_WINDOW):
        cl = []
        for lam in classes:
            c = lambda_class(lam)
            if c != lam:
                warnings.warn(f"exponent class {lam} replaced by its representative {c} in (0, 1]")
            cl.append(c)
        self.classes = sorted(set(cl))
        self.n_log = n_log
        self.dim = dim
        self.prec = prec
        self.index = {}
        for lam in self.classes:
            for j in range(n_log + 1):
                for t in range(dim):
                    self.index[(lam, j, t)] = len(self.index)
        self.keys = list(self.index)
        self.rank = len(self.keys)
        rows = [[TruncatedSeries.zero(prec) for _ in range(self.rank)] for _ in range(self.rank)]
        for (lam, j, t), col in self.index.items():
            rows[col][col] = TruncatedSeries.monomial(lam, 1, prec)
            if j > 0:
                rows[self.index[(lam, j - 1, t)]][col] = TruncatedSeries.monomial(ONE, 1, prec)
        self.module = AbModule(rows, prec)

    @classmethod
    def for_element(cls, x: XiElement, n_log: int | None = None, extra_classes=()) -> XiSpace:
        return cls(list(x.classes()) + list(extra_classes), x.n_log if n_log is None else n_log, x.dim, x.m_prec)

    def _power_image(self, key, m: int) -> XiElement:
        """``b^m`` applied to a basis vector, in s-coordinates."""
        lam, j, t = key
        vec = tuple(ONE if s == t else ZERO for s in range(self.dim))
        x = XiElement({(lam, j, 0): vec}, self.dim, self.n_log, self.prec)
        for _ in range(m):
            x = xi_b(x)
        return x

    def to_vector(self, x: XiElement) -> list:
        """b-coordinates of an expansion (triangular in m, then log degree descending)."""
        if x.dim != self.dim:
            raise ValueError("value dimensions differ")
        prec = min(self.prec, x.m_prec)
        coeffs = {key: [ZERO] * prec for key in self.keys}
        rest = XiElement(x.terms, self.dim, self.n_log, prec)
        for m in range(prec):
            for lam in self.classes:
                for j in range(self.n_log, -1, -1):
                    c = rest.terms.get((lam, j, m))
                    if c is None:
                        continue
                    lead = rising(lam, m)
                    for t in range(self.dim):
                        if c[t] == 0:
                            continue
                        f = c[t] * lead
                        coeffs[(lam, j, t)][m] = f
                        rest = rest - self._power_image((lam, j, t), m).scale(f)
        if not rest.is_zero():
            raise ValueError("expansion uses exponent classes or log powers outside this space")
        return [TruncatedSeries(coeffs[key], prec) for key in self.keys]

    def from_vector(self, v: Sequence[TruncatedSeries]) -> XiElement:
        prec = min(self.prec, vprec(v))
        out = XiElement({}, self.dim, self.n_log, prec)
        for key, s in zip(self.keys, v):
            for m, c in enumerate(s.coeffs[:prec]):
                if c != 0:
                    out = out + self._power_image(key, m).scale(c)
        return XiElement(out.terms, self.dim, self.n_log, prec)

    def log_rows(self, min_log: int) -> list[int]:
        return [i for (lam, j, t), i in self.index.items() if j >= min_log]

    def class_rows(self, classes: Iterable) -> list[int]:
        keep = {lambda_class(c) for c in classes}
        return [i for (lam, j, t), i in self.index.items() if lam not in keep]


# ---------------------------------------------------------------------------
# themes and realizations


@dataclass
class Realization:
    """F identified with ``Ã x`` inside an expansion space.

    ``basis[i]`` are the b-coordinates of ``a^i x``; they form the basis of
    F in which ``module`` is written.
    """

    module: AbModule
    element: XiElement
    space: XiSpace
    basis: list

    def verify(self) -> bool:
        X = self.space.module
        for j in range(self.module.rank):
            lhs = apply_a(X, self.basis[j])
            rhs = zero_vector(X.rank, vprec(lhs))
            for i, s in enumerate(self.module.cols[j]):
                rhs = vadd(rhs, vscale(s, self.basis[i]))
            n = min(vprec(lhs), vprec(rhs))
            if any(p.truncate(n) != q.truncate(n) for p, q in zip(lhs, rhs)):
                return False
        return True

    def to_vector(self, y: Sequence[TruncatedSeries]) -> list:
        """Coordinates in the ambient space of the element of F with F-coordinates y."""
        out = zero_vector(self.space.rank, min(vprec(y), min(vprec(b) for b in self.basis)))
        for s, v in zip(y, self.basis):
            out = vadd(out, vscale(s, v))
        return out


@dataclass
class ThemeGeneration:
    module: AbModule
    realization: Realization
    presentation: AbElement
    bernstein_element: HomogeneousElement

    @property
    def rank(self) -> int:
        return self.module.rank


def _cyclic_span(X: AbModule, v: list, max_rank: int):
    """(vectors x, a x, ..., a^(k-1) x, coefficients of a^k x) for the least such k."""
    vecs = [v]
    while True:
        nxt = apply_a(X, vecs[-1])
        ech = column_echelon(vecs, reduce=False)
        if ech.rank < len(vecs):
            raise InternalConsistencyError("cyclic vectors became dependent")
        u = solve_columns(vecs, nxt, ech)
        if u is not None:
            return vecs, u
        if len(vecs) >= max_rank:
            raise RankNotStabilized(
                f"span of x, a x, ... did not close up within rank {max_rank} at precision {X.prec}"
            )
        vecs.append(nxt)


def generate_theme(x: XiElement, space: XiSpace | None = None) -> ThemeGeneration:
    """The monogenic module ``Ã x`` with its presentation and Bernstein element."""
    from .fresco import module_from_element

    if x.is_zero():
        raise ValueError("the zero expansion generates the zero module")
    space = space or XiSpace.for_element(x)
    X = space.module
    v = space.to_vector(x)
    vecs, u = _cyclic_span(X, v, X.rank)
    k = len(vecs)
    prec = min(vprec(u), X.prec)
    terms = {(0, k): ONE}
    for j, s in enumerate(u):
        for m, c in enumerate(s.coeffs[:prec]):
            if c != 0:
                terms[(m, j)] = -c
    if prec <= k:
        raise PrecisionExhausted(f"theme of rank {k} needs a window larger than {prec}")
    pi = AbElement(terms, prec)
    F = module_from_element(pi, k)
    init = pi.initial_form()
    P = HomogeneousElement.from_element(init) if min(m + d for (m, d) in init.terms) == k else None
    vecs = [[y.truncate(prec) for y in w] for w in vecs]
    R = Realization(F, x, space, vecs)
    if not R.verify():
        raise InternalConsistencyError("generated theme does not intertwine the actions")
    return ThemeGeneration(F, R, pi, P)


def _kernel_of_element(space: XiSpace, pi: AbElement, k: int) -> list:
    X = space.module
    M = X.prec

    def f(v):
        return [y.truncate(M) for y in apply_element(X, pi, v)]

    mat = flat_linear_map(f, X.rank, M, X.rank, M)
    ker = nullspace(mat, X.rank * M)
    keep = max(M - k, 1)
    _, chosen = reliable_dimension(ker, X.rank, M, keep)
    return [[y.truncate(keep) for y in unflatten(s, X.rank, M)] for s in chosen]


def solve_in_xi(pi, classes: Iterable, n_log: int, m_prec: int = DEFAULT_WINDOW, dim: int = 1) -> list[XiElement]:
    """Basis of the solutions of ``Π x = 0`` among expansions with the given classes and log bound.

    Solutions are determined on the window ``m < m_prec - k``; the returned
    expansions are truncated there.
    """
    from .fresco import FrescoPresentation

    if isinstance(pi, FrescoPresentation):
        k = pi.rank
        pi = pi.to_element(m_prec)
    else:
        k = pi.a_degree()
    space = XiSpace(classes, n_log, dim, m_prec)
    return [space.from_vector(v) for v in _kernel_of_element(space, pi.truncate(m_prec), k)]


def _realization_at_level(F: AbModule, n_log: int) -> Realization | None:
    """A realization of the fresco F with log degree at most n_log, if one exists."""
    from .fresco import bernstein_element, presentation_from_module, principal_lambdas

    pi, _ = presentation_from_module(F)
    k = F.rank
    classes = sorted({lambda_class(lam) for lam in principal_lambdas(F)})
    space = XiSpace(classes, n_log, 1, F.prec)
    sols = _kernel_of_element(space, pi, k)
    if not sols:
        return None
    d = len(sols)
    big = XiSpace(classes, n_log, d, min(vprec(s) for s in sols))
    # generic solution: sum of sols[i] (x) (i-th value vector)
    v = zero_vector(big.rank, big.prec)
    for i, sol in enumerate(sols):
        for (lam, j, _), idx in space.index.items():
            v[big.index[(lam, j, i)]] = sol[idx].truncate(big.prec)
    X = big.module
    vecs = [v]
    for _ in range(k - 1):
        vecs.append(apply_a(X, vecs[-1]))
    if column_echelon(vecs, reduce=False).rank < k:
        return None
    x = big.from_vector(v)
    try:
        gen = generate_theme(x, big)
    except PrecisionExhausted:
        # independence of x, a x, ... was an artifact of the truncation
        return None
    if gen.rank != k or gen.bernstein_element != bernstein_element(F):
        return None
    return gen.realization


def realize(F: AbModule, max_log: int | None = None) -> Realization:
    """Realization of a fresco with the least possible log degree."""
    top = F.rank - 1 if max_log is None else max_log
    for n in range(top + 1):
        R = _realization_at_level(F, n)
        if R is not None:
            return R
    raise InternalConsistencyError(f"no realization with log degree <= {top}")


def realization_is_log_free(F: AbModule) -> bool:
    return _realization_at_level(F, 0) is not None


# ---------------------------------------------------------------------------
# filtrations


@dataclass
class Stage:
    """A normal submodule of the realized module, spanned by ``basis`` (F-coordinates)."""

    rank: int
    basis: list
    module: AbModule

    def to_json(self) -> dict:
        return {"rank": self.rank, "basis": [[s.to_json() for s in v] for v in self.basis]}


def _intersection(R: Realization, rows: list[int]) -> Stage:
    """F intersected with the summand where the given ambient coordinates vanish."""
    k = R.module.rank
    cols = [[R.basis[j][i] for i in rows] for j in range(k)]
    if not rows:
        basis = [R.module.basis_vector(i) for i in range(k)]
    else:
        basis = kernel_basis(cols)
    if not basis:
        return Stage(0, [], AbModule.zero_module(R.module.prec))
    prec = min(vprec(v) for v in basis)
    basis = [[s.truncate(prec) for s in v] for v in basis]
    return Stage(len(basis), basis, submodule(R.module.truncate(prec), basis))


def max_log_degree(R: Realization) -> int:
    top = 0
    for v in R.basis:
        for (lam, j, t), i in R.space.index.items():
            if not v[i].is_zero():
                top = max(top, j)
    return top


def ss_filtration(R: Realization) -> list[Stage]:
    """``S_j = F ∩ (expansions of log degree < j)`` for j = 1 .. d+1."""
    d = max_log_degree(R)
    stages = [_intersection(R, R.space.log_rows(j)) for j in range(1, d + 2)]
    ranks = [s.rank for s in stages]
    if ranks != sorted(ranks) or ranks[-1] != R.module.rank:
        raise InternalConsistencyError(f"semi-simple filtration ranks {ranks} are not increasing")
    return stages


def co_ss_filtration(R: Realization) -> list[Stage]:
    """``Sigma_j = F ∩ (log degree <= d - j)`` for j = 0 .. d, d the minimal log degree."""
    d = max_log_degree(R)
    if d > 0 and _realization_at_level(R.module, d - 1) is not None:
        raise NotMinimalEmbedding(f"a realization with log degree {d - 1} exists")
    stages = [_intersection(R, R.space.log_rows(d - j + 1)) for j in range(d + 1)]
    ranks = [s.rank for s in stages]
    if ranks != sorted(ranks, reverse=True):
        raise InternalConsistencyError(f"co-semi-simple filtration ranks {ranks} are not decreasing")
    return stages


def primitive_filtration(R: Realization, classes: Iterable) -> Stage:
    """F intersected with the expansions whose exponent classes lie in ``classes``."""
    return _intersection(R, R.space.class_rows(classes))


__all__ = [
    "Realization",
    "Stage",
    "ThemeGeneration",
    "XiElement",
    "XiSpace",
    "co_ss_filtration",
    "generate_theme",
    "lambda_class",
    "monodromy_unipotent",
    "normalize_exponent",
    "primitive_filtration",
    "realization_is_log_free",
    "realize",
    "solve_in_xi",
    "ss_filtration",
    "xi_a",
    "xi_b",
]
