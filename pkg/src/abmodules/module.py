"""(a,b)-modules given by the matrix of ``a`` on a Q[[b]]-basis.

A module of rank k is stored through the images ``a e_j = sum_i M[i][j] e_i``.
Elements are coordinate vectors (lists of :class:`TruncatedSeries`) and ``a``
acts on them by the Leibniz rule ``a (S e) = S a(e) + b^2 S' e``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    InternalConsistencyError,
    InvalidTheta,
    NotGeometric,
    NotRegular,
    NotStabilized,
    PrecisionExhausted,
)
from .lattice import (
    Echelon,
    Lattice,
    column_echelon,
    flat_linear_map,
    lattice_from_generators,
    lattice_from_subspace,
    rank_mod_b,
    reliable_dimension,
    solve_columns,
    unflatten,
    unit_vector,
    vadd,
    vconst,
    vprec,
    vscale,
    vshift,
    vsub,
    zero_vector,
)
from .scalars import (
    ONE,
    ZERO,
    Polynomial,
    TruncatedSeries,
    as_fraction,
    min_poly,
    nullspace,
    rank,
    rational_roots,
    rref,
    solve,
)

DEFAULT_PRECISION = 16


def _series(x, prec: int) -> TruncatedSeries:
    if isinstance(x, TruncatedSeries):
        return x.truncate(prec) if x.prec >= prec else x
    return TruncatedSeries((as_fraction(x),), prec)


class AbModule:
    """Free Q[[b]]-module of rank k with the action of ``a`` known modulo ``b^N``."""

    def __init__(self, matrix: Sequence[Sequence], prec: int | None = None):
        rows = [list(r) for r in matrix]
        k = len(rows)
        if any(len(r) != k for r in rows):
            raise ValueError("action matrix must be square")
        if prec is None:
            prec = min(
                (x.prec for r in rows for x in r if isinstance(x, TruncatedSeries)),
                default=DEFAULT_PRECISION,
            )
        self.rank = k
        self.prec = prec
        self.cols = [[_series(rows[i][j], prec) for i in range(k)] for j in range(k)]

    # -- construction -----------------------------------------------------

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[TruncatedSeries]], prec: int | None = None) -> AbModule:
        k = len(cols)
        return cls([[cols[j][i] for j in range(k)] for i in range(k)], prec)

    @classmethod
    def rank_one(cls, lam, prec: int = DEFAULT_PRECISION) -> AbModule:
        """The module E_lambda: ``a e = lambda b e``."""
        return cls([[TruncatedSeries.monomial(as_fraction(lam), 1, prec)]], prec)

    @classmethod
    def zero_module(cls, prec: int = DEFAULT_PRECISION) -> AbModule:
        return cls([], prec)

    @property
    def matrix(self) -> list[list[TruncatedSeries]]:
        return [[self.cols[j][i] for j in range(self.rank)] for i in range(self.rank)]

    def basis_vector(self, i: int) -> list:
        return unit_vector(self.rank, i, self.prec)

    def zero(self) -> list:
        return zero_vector(self.rank, self.prec)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AbModule) or other.rank != self.rank:
            return NotImplemented if not isinstance(other, AbModule) else False
        return all(x == y for c, d in zip(self.cols, other.cols) for x, y in zip(c, d))

    def __repr__(self) -> str:
        return f"AbModule(rank={self.rank}, prec={self.prec})"

    def __str__(self) -> str:
        lines = []
        for j, c in enumerate(self.cols):
            terms = [f"({x})*e{i + 1}" for i, x in enumerate(c) if not x.is_zero()]
            lines.append(f"a*e{j + 1} = " + (" + ".join(terms) if terms else "0"))
        return "\n".join(lines)

    def truncate(self, prec: int) -> AbModule:
        return AbModule(self.matrix, min(prec, self.prec))

    def direct_sum(self, other: AbModule) -> AbModule:
        k, l = self.rank, other.rank
        prec = min(self.prec, other.prec)
        zero = TruncatedSeries.zero(prec)
        rows = []
        for i in range(k + l):
            row = []
            for j in range(k + l):
                if i < k and j < k:
                    row.append(self.cols[j][i])
                elif i >= k and j >= k:
                    row.append(other.cols[j - k][i - k])
                else:
                    row.append(zero)
            rows.append(row)
        return AbModule(rows, prec)

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "precision": self.prec,
            "matrix": [[x.to_json() for x in row] for row in self.matrix],
        }

    @classmethod
    def from_json(cls, obj) -> AbModule:
        prec = int(obj["precision"])
        rows = [[TruncatedSeries.from_json(x) for x in row] for row in obj["matrix"]]
        if len(rows) != int(obj["rank"]):
            raise ValueError("rank does not match the matrix size")
        return cls(rows, prec)


# ---------------------------------------------------------------------------
# the action of a


def apply_a(E: AbModule, v: Sequence[TruncatedSeries]) -> list:
    """``a`` applied to ``sum_j v_j e_j``."""
    if len(v) != E.rank:
        raise ValueError("vector length does not match the rank")
    prec = min(vprec(v), E.prec) if E.rank else E.prec
    out = zero_vector(E.rank, prec)
    for j, s in enumerate(v):
        if s.is_zero():
            continue
        out = vadd(out, vscale(s, E.cols[j]))
        out[j] = out[j] + s.derivative().shift(2)
    return [x.truncate(prec) for x in out]


def apply_b(v: Sequence[TruncatedSeries]) -> list:
    return vshift(list(v), 1)


def apply_element(E: AbModule, x, v: Sequence[TruncatedSeries]) -> list:
    """An algebra element given in left normal form ``sum c b^m a^d`` applied to v."""
    powers = [list(v)]
    out = zero_vector(E.rank, min(vprec(v), x.prec))
    for (m, d), c in sorted(x.terms.items(), key=lambda t: t[0][1]):
        while len(powers) <= d:
            powers.append(apply_a(E, powers[-1]))
        out = vadd(out, vshift(vscale(c, powers[d]), m))
    return [y.truncate(min(vprec(v), x.prec, E.prec)) for y in out]


def is_simple_pole(E: AbModule) -> bool:
    return all(x.coeff(0) == 0 for c in E.cols for x in c)


def from_simple_pole_system(A, prec: int = DEFAULT_PRECISION) -> AbModule:
    """The module with ``a e_j = sum_i A_ij(a) (b e_i)``.

    ``A`` is a k x k matrix whose entries are series in one variable (or
    scalars).  The action is found by substitution: with the current guess
    for ``a``, evaluate the right-hand side, repeat until nothing changes.
    Each round fixes at least one more power of b.
    """
    rows = [[_series(x, prec) for x in r] for r in A]
    k = len(rows)
    E = AbModule([[TruncatedSeries.zero(prec)] * k for _ in range(k)], prec)
    for _ in range(prec + 1):
        new_cols = []
        for j in range(k):
            col = zero_vector(k, prec)
            for i in range(k):
                coeff = rows[i][j]
                if coeff.is_zero():
                    continue
                w = vshift(E.basis_vector(i), 1)
                w = [x.truncate(prec) for x in w]
                for n in range(min(len(coeff.coeffs), prec)):
                    if coeff.coeff(n) != 0:
                        col = vadd(col, vscale(coeff.coeff(n), w))
                    w = apply_a(E, w)
            new_cols.append(col)
        F = AbModule.from_columns(new_cols, prec)
        if F == E:
            return F
        E = F
    raise InternalConsistencyError("substitution for the simple pole system did not converge")


# ---------------------------------------------------------------------------
# change of basis, submodules and quotients


def change_basis(E: AbModule, basis: Sequence[Sequence[TruncatedSeries]]) -> AbModule:
    """The same module written in another Q[[b]]-basis (given by coordinate columns)."""
    ech = column_echelon(basis, reduce=False)
    if ech.rank != E.rank or any(v != 0 for _, v in ech.pivots):
        raise ValueError("the given vectors are not a Q[[b]]-basis")
    cols = []
    for w in basis:
        x = solve_columns(basis, apply_a(E, w), ech)
        if x is None:
            raise InternalConsistencyError("image of a basis vector outside the module")
        cols.append(x)
    prec = min(vprec(c) for c in cols) if cols else E.prec
    return AbModule.from_columns(cols, prec)


def submodule(E: AbModule, basis: Sequence[Sequence[TruncatedSeries]]) -> AbModule:
    """Restriction of ``a`` to the a-stable submodule spanned by ``basis``."""
    if not basis:
        return AbModule.zero_module(E.prec)
    ech = column_echelon(basis, reduce=False)
    cols = []
    for w in basis:
        x = solve_columns(basis, apply_a(E, w), ech)
        if x is None:
            raise InternalConsistencyError("span is not stable under a")
        cols.append(x)
    prec = min(vprec(c) for c in cols)
    return AbModule.from_columns(cols, prec)


def complete_basis(basis: Sequence[Sequence[TruncatedSeries]], k: int, prec: int) -> list:
    """Extend a normal family (independent modulo b) by standard vectors to a basis."""
    consts = [vconst(v) for v in basis]
    chosen = list(basis)
    rows = list(consts)
    for i in range(k):
        e = [ONE if t == i else ZERO for t in range(k)]
        if rank(rows + [e]) > len(rows):
            rows.append(e)
            chosen.append(unit_vector(k, i, prec))
    if len(chosen) != k:
        raise ValueError("family is not independent modulo b")
    return chosen


def quotient(E: AbModule, basis: Sequence[Sequence[TruncatedSeries]]) -> AbModule:
    """``E / F`` for the normal submodule F spanned by ``basis``."""
    r = len(basis)
    if rank_mod_b(basis) != r:
        raise ValueError("submodule is not normal")
    full = complete_basis(basis, E.rank, E.prec)
    G = change_basis(E, full)
    k = E.rank
    rows = [[G.cols[j][i] for j in range(r, k)] for i in range(r, k)]
    return AbModule(rows, G.prec)


# ---------------------------------------------------------------------------
# saturation


@dataclass
class SaturationResult:
    """Outcome of saturation.

    ``lattice`` describes the saturated lattice in the original basis,
    ``gap`` is the least d with ``b^d Ẽ <= E`` and ``valuations`` records
    the least valuation of the lattice after each enlargement.
    """

    status: str
    module: AbModule | None
    lattice: Lattice
    steps: int
    gap: int
    valuations: list = field(default_factory=list)

    @property
    def saturated(self) -> bool:
        return self.status == "Saturated"

    def basis(self) -> list:
        """The saturated basis as ``(shift, vector)`` pairs in the original coordinates."""
        return self.lattice.laurent_basis()

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "steps": self.steps,
            "gap": self.gap,
            "valuations": self.valuations,
            "depth": self.lattice.depth,
            "basis": [[x.to_json() for x in c] for c in self.lattice.columns],
            "module": self.module.to_json() if self.module is not None else None,
        }


def _lattice_image(E: AbModule, lat: Lattice) -> list:
    """Generators of ``b^{-1} a L`` as (shift, vector) pairs."""
    D = lat.depth
    out = []
    for c in lat.columns:
        w = vsub(apply_a(E, c), vscale(D, vshift(c, 1)))
        out.append((-D - 1, [x.truncate(E.prec) for x in w]))
    return out


def saturate(E: AbModule, max_steps: int | None = None) -> SaturationResult:
    """Smallest lattice containing E and stable under ``b^{-1} a``."""
    k, N = E.rank, E.prec
    if max_steps is None:
        max_steps = max(1, k * N)
    lat = Lattice(0, [unit_vector(k, i, N) for i in range(k)], [0] * k)
    history: list[int] = []
    steps = 0
    status = "NotStabilized"
    for _ in range(max_steps + 1):
        gens = lat.laurent_basis() + _lattice_image(E, lat)
        try:
            new = lattice_from_generators(gens, k, N, contains_standard=True)
        except (PrecisionExhausted, ValueError):
            break
        if new == lat:
            status = "Saturated"
            break
        if steps == max_steps:
            break
        lat = new
        steps += 1
        history.append(lat.min_valuation())
        if lat.depth >= N - 1:
            break
    if status != "Saturated":
        return SaturationResult(status, None, lat, steps, lat.depth, history)
    try:
        module = _saturated_module(E, lat)
    except PrecisionExhausted:
        return SaturationResult("NotStabilized", None, lat, steps, lat.depth, history)
    return SaturationResult(status, module, lat, steps, lat.depth, history)


def _saturated_module(E: AbModule, lat: Lattice) -> AbModule:
    D = lat.depth
    ech = Echelon(lat.columns, [unit_vector(E.rank, i, E.prec) for i in range(E.rank)],
                  [(i, v) for i, v in enumerate(lat.valuations)])
    cols = []
    for c in lat.columns:
        w = vsub(apply_a(E, c), vscale(D, vshift(c, 1)))
        w = [x.truncate(E.prec) for x in w]
        x = solve_columns(lat.columns, w, ech)
        if x is None:
            raise InternalConsistencyError("saturated lattice is not stable under a")
        cols.append(x)
    prec = min(vprec(c) for c in cols)
    if prec < 2:
        raise PrecisionExhausted(f"saturated action known only modulo b^{prec}")
    S = AbModule.from_columns(cols, prec)
    if not is_simple_pole(S):
        raise InternalConsistencyError("saturation did not produce a simple pole module")
    return S


def regular_saturation(E: AbModule) -> SaturationResult:
    sat = saturate(E)
    if not sat.saturated:
        raise NotRegular(
            f"saturation did not stabilize within precision {E.prec} "
            f"(lattice valuations {sat.valuations})"
        )
    return sat


# ---------------------------------------------------------------------------
# Bernstein polynomial


def residue_matrix(E: AbModule) -> list[list[Fraction]]:
    """Matrix of ``b^{-1} a`` on ``E / b E`` for a simple pole module."""
    if not is_simple_pole(E):
        raise ValueError("residue matrix needs a simple pole module")
    return [[E.cols[j][i].coeff(1) for j in range(E.rank)] for i in range(E.rank)]


def bernstein_matrix(E: AbModule) -> list[list[Fraction]]:
    """Matrix of ``-b^{-1} a`` on ``Ẽ / b Ẽ`` in the saturated basis."""
    sat = saturate(E)
    if not sat.saturated:
        raise NotStabilized(
            f"saturation did not stabilize at precision {E.prec}; "
            f"lattice valuations {sat.valuations}"
        )
    return [[-x for x in row] for row in residue_matrix(sat.module)]


def bernstein_polynomial(E: AbModule) -> Polynomial:
    """Minimal polynomial of ``-b^{-1} a`` on the saturation modulo b."""
    if E.rank == 0:
        return Polynomial([ONE])
    return min_poly(bernstein_matrix(E))


def is_geometric(E: AbModule) -> bool:
    B = bernstein_polynomial(E)
    roots, split = rational_roots(B)
    return split and all(r < 0 for r in roots)


def _geometric_roots(E: AbModule) -> list[Fraction]:
    B = bernstein_polynomial(E)
    roots, split = rational_roots(B)
    if not split or any(r >= 0 for r in roots):
        raise NotGeometric(f"Bernstein polynomial {B} does not have negative rational roots")
    return roots


# ---------------------------------------------------------------------------
# functional calculus in a


def apply_a_series(E: AbModule, c: TruncatedSeries, v: Sequence[TruncatedSeries],
                   gap: int | None = None) -> list:
    """``c(a) v`` for a power series c, exact modulo ``b^N``.

    Since ``a^m E <= b^(m - gap) E`` only the terms with ``m < N + gap``
    matter.  Unknown coefficients of c beyond its precision limit the
    result precision to ``c.prec - gap``.
    """
    if gap is None:
        gap = regular_saturation(E).gap
    N = min(E.prec, vprec(v))
    prec = min(N, c.prec - gap) if c.prec < N + gap else N
    out = zero_vector(E.rank, prec)
    w = [x.truncate(N) for x in v]
    for m in range(min(N + gap, c.prec)):
        cm = c.coeff(m)
        if cm != 0:
            out = vadd(out, vscale(cm, w))
        w = apply_a(E, w)
    return [x.truncate(prec) for x in out]


def change_of_variable(E: AbModule, theta: TruncatedSeries) -> AbModule:
    """The module with actions ``alpha = theta(a)`` and ``beta = b theta'(a)``.

    Since ``beta = b * unit``, the original basis is still a basis over
    Q[[beta]]; the result is the matrix of alpha in that basis with entries
    written as series in beta.
    """
    if theta.coeff(0) != 0:
        raise InvalidTheta("theta(0) must vanish")
    if theta.coeff(1) == 0:
        raise InvalidTheta("theta'(0) must be nonzero")
    gap = regular_saturation(E).gap
    k, N = E.rank, E.prec
    dtheta = theta.derivative()
    # beta^n e_i as b-coordinate vectors
    beta_powers = [[E.basis_vector(i) for i in range(k)]]
    for _ in range(1, N):
        prev = beta_powers[-1]
        beta_powers.append(
            [vshift(apply_a_series(E, dtheta, w, gap), 1) for w in prev]
        )
    lead = []
    for n in range(N):
        G = [[beta_powers[n][i][r].coeff(n) for i in range(k)] for r in range(k)]
        lead.append(G)

    def to_beta(w):
        prec = vprec(w)
        coeffs = [[ZERO] * prec for _ in range(k)]
        rest = list(w)
        for n in range(prec):
            rhs = [rest[r].coeff(n) for r in range(k)]
            if all(x == 0 for x in rhs):
                continue
            sol = solve(lead[n], rhs)
            if sol is None:
                raise InternalConsistencyError("beta-adic leading matrix is singular")
            for i in range(k):
                if sol[i] != 0:
                    coeffs[i][n] = sol[i]
                    rest = vsub(rest, vscale(sol[i], beta_powers[n][i]))
        return [TruncatedSeries(c, prec) for c in coeffs]

    cols = [to_beta(apply_a_series(E, theta, E.basis_vector(j), gap)) for j in range(k)]
    prec = min(vprec(c) for c in cols)
    return AbModule.from_columns(cols, prec)


# ---------------------------------------------------------------------------
# primitive parts


def _class(q: Fraction) -> Fraction:
    return q - (q.numerator // q.denominator)


def _stable_image(T, basis: list, mu: Fraction) -> list:
    """Basis of the image of (T - mu)^infinity restricted to span(basis)."""
    n = len(T)
    cur = basis
    while True:
        img = []
        for v in cur:
            w = [sum((T[r][c] * v[c] for c in range(n) if v[c] != 0), ZERO) - mu * v[r] for r in range(n)]
            img.append(w)
        red, piv = rref(img, n) if img else ([], [])
        new = [red[i] for i in range(len(piv))]
        if len(new) == len(cur):
            return new
        cur = new
        if not cur:
            return cur


def primitive_part(E: AbModule, classes: Iterable) -> tuple[AbModule, list]:
    """Largest normal submodule whose Bernstein roots lie in ``-classes`` modulo Z.

    ``classes`` are rationals taken modulo 1.  Returns the submodule and its
    basis as coordinate vectors in E.
    """
    roots = _geometric_roots(E)
    wanted = {_class(-as_fraction(c) if not isinstance(c, Fraction) else -c) for c in classes}
    sat = regular_saturation(E)
    S, lat = sat.module, sat.lattice
    k, D = E.rank, lat.depth
    n = S.prec
    # T = -b^{-1} a on S / b^n S, flattened index i*n + m
    def T_apply(v):
        w = apply_a(S, v)
        return [(-x).shift(-1) if not x.is_zero() else TruncatedSeries.zero(n) for x in w]

    T = flat_linear_map(lambda v: [x.truncate(n) for x in T_apply(v)], k, n, k, n)
    eigen = sorted({r - m for r in roots for m in range(n)})
    basis = [[ONE if t == s else ZERO for t in range(k * n)] for s in range(k * n)]
    for mu in eigen:
        if _class(mu) in wanted:
            continue
        basis = _stable_image(T, basis, mu)
    # normal generators of the class part
    gens, consts = [], []
    for v in basis:
        vec = unflatten(v, k, n)
        c = vconst(vec)
        if rank(consts + [c]) > len(consts):
            consts.append(c)
            gens.append(vec)
    r = len(gens)
    if r == 0:
        return AbModule.zero_module(E.prec), []
    # pass to E-coordinates: f_i = b^{-D} p_i
    Q = [_combine(lat.columns, g) for g in gens]
    if D == 0:
        vecs = Q
    else:
        Y = _preimage_lattice(Q, k, D, n)
        vecs = []
        for y in Y.columns:
            w = _combine(Q, y)
            vecs.append([x.shift(-D) for x in w])
    prec = min(vprec(v) for v in vecs)
    vecs = [[x.truncate(prec) for x in v] for v in vecs]
    F = submodule(E.truncate(prec), vecs)
    return F, vecs


def _combine(cols: Sequence[Sequence[TruncatedSeries]], coeffs: Sequence[TruncatedSeries]) -> list:
    out = zero_vector(len(cols[0]), min(vprec(coeffs), min(vprec(c) for c in cols)))
    for c, s in zip(cols, coeffs):
        if not s.is_zero():
            out = vadd(out, vscale(s, c))
    return out


def _preimage_lattice(Q: list, k: int, D: int, prec: int) -> Lattice:
    """Lattice of y in Q[[b]]^r with ``sum_j y_j Q_j`` divisible by ``b^D``."""
    r = len(Q)

    def f(y):
        return [x.truncate(D) for x in _combine(Q, y)]

    mat = flat_linear_map(f, r, D, k, D)
    ker = nullspace(mat, r * D)
    return lattice_from_subspace(ker, r, D, prec)


# ---------------------------------------------------------------------------
# rank one normal submodules and morphisms


@dataclass
class Rank1Family:
    """Solutions of ``a x = lambda b x`` for one lambda.

    ``basis`` spans the solution space determined at this precision and
    ``normal_basis`` holds solutions whose reductions modulo b are
    independent; each of them generates a normal rank one submodule.
    """

    lam: Fraction
    basis: list
    normal_basis: list

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def unique(self) -> bool:
        return self.dimension == 1 and len(self.normal_basis) == 1


def _reliable_kernel(f, n_in: int, n_out: int, prec: int) -> tuple[list, int]:
    mat = flat_linear_map(f, n_in, prec, n_out, prec)
    ker = nullspace(mat, n_in * prec)
    keep = prec - prec // 2
    _, chosen = reliable_dimension(ker, n_in, prec, keep)
    return chosen, keep


def rank1_solutions(E: AbModule, lam, gap: int | None = None) -> Rank1Family:
    """Solutions of ``a x = lambda b x`` modulo ``b^N``.

    Truncation admits spurious solutions supported near ``b^N``; the
    dimension is read off the projection onto low coefficients, and the
    returned vectors are cut to ``N - 1 - gap`` where they are determined.
    """
    lam = as_fraction(lam) if not isinstance(lam, Fraction) else lam
    k, N = E.rank, E.prec
    if gap is None:
        gap = regular_saturation(E).gap

    def f(v):
        w = vsub(apply_a(E, v), vscale(lam, vshift(v, 1)))
        return [x.truncate(N) for x in w]

    chosen, keep = _reliable_kernel(f, k, k, N)
    basis = [unflatten(s, k, N) for s in chosen]
    normal, consts = [], []
    for v in basis:
        c = vconst(v)
        if any(c) and rank(consts + [c]) > len(consts):
            consts.append(c)
            normal.append(v)
    cut = max(N - 1 - gap, keep)
    basis = [[x.truncate(cut) for x in v] for v in basis]
    normal = [[x.truncate(cut) for x in v] for v in normal]
    return Rank1Family(lam, basis, normal)


def rank1_normal_submodules(E: AbModule) -> list[Rank1Family]:
    """All lambda admitting a normal generator x with ``a x = lambda b x``."""
    roots = _geometric_roots(E)
    gap = regular_saturation(E).gap
    # a normal generator x has b-valuation v <= gap in the saturation, and
    # (residue + v) fixes its leading term, so lambda = -root + v
    candidates = sorted({-r + m for r in roots for m in range(gap + 1)})
    out = []
    for lam in candidates:
        fam = rank1_solutions(E, lam, gap)
        if fam.normal_basis:
            out.append(fam)
    return out


def hom_dimension(E1: AbModule, E2: AbModule) -> tuple[int, bool]:
    """Dimension over Q of the a-linear Q[[b]]-maps ``E1 -> E2``.

    The maps are the solutions ``phi_j = Phi(e_j)`` of
    ``a phi_j = sum_i M1[i][j] phi_i``.  The second value reports whether the
    dimension agrees at precisions N and N - 1.
    """

    def dim(N):
        k1, k2 = E1.rank, E2.rank
        A, B = E1.truncate(N), E2.truncate(N)

        def f(v):
            phis = [v[j * k2:(j + 1) * k2] for j in range(k1)]
            out = []
            for j in range(k1):
                w = apply_a(B, phis[j])
                for i in range(k1):
                    w = vsub(w, vscale(A.cols[j][i], phis[i]))
                out.extend(x.truncate(N) for x in w)
            return out

        chosen, _ = _reliable_kernel(f, k1 * k2, k1 * k2, N)
        return len(chosen)

    N = min(E1.prec, E2.prec)
    d = dim(N)
    return d, d == dim(N - 1)


__all__ = [
    "AbModule",
    "Rank1Family",
    "SaturationResult",
    "apply_a",
    "apply_a_series",
    "apply_element",
    "bernstein_matrix",
    "bernstein_polynomial",
    "change_basis",
    "change_of_variable",
    "complete_basis",
    "from_simple_pole_system",
    "hom_dimension",
    "is_geometric",
    "is_simple_pole",
    "primitive_part",
    "quotient",
    "rank1_normal_submodules",
    "rank1_solutions",
    "regular_saturation",
    "residue_matrix",
    "saturate",
    "submodule",
]
