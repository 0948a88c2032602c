"""Linear algebra over the valuation ring Q[[b]] with truncated series.

Vectors are lists of :class:`TruncatedSeries`; matrices are lists of
column vectors.  Column operations are unimodular over Q[[b]]: pivots
are chosen with minimal b-valuation, so every quotient used in an
elimination step is again a power series.  Precision losses caused by
dividing by ``b^v`` are tracked automatically by the series type.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import PrecisionExhausted
from .scalars import ONE, TruncatedSeries, nullspace

Vector = list  # list[TruncatedSeries]


def zero_vector(n: int, prec: int) -> Vector:
    return [TruncatedSeries.zero(prec) for _ in range(n)]


def unit_vector(n: int, i: int, prec: int) -> Vector:
    v = zero_vector(n, prec)
    v[i] = TruncatedSeries.one(prec)
    return v


def vadd(u: Vector, v: Vector) -> Vector:
    return [x + y for x, y in zip(u, v)]


def vsub(u: Vector, v: Vector) -> Vector:
    return [x - y for x, y in zip(u, v)]


def vscale(s, v: Vector) -> Vector:
    """Multiply every coordinate by a series or scalar ``s``."""
    return [x * s for x in v]


def vshift(v: Vector, n: int) -> Vector:
    return [x.shift(n) for x in v]


def vtruncate(v: Vector, prec: int) -> Vector:
    return [x.truncate(prec) for x in v]


def vprec(v: Vector) -> int:
    return min((x.prec for x in v), default=0)


def vvaluation(v: Vector) -> int:
    """Minimum b-valuation of the coordinates (the precision if all vanish)."""
    return min((x.valuation() for x in v), default=0)


def vis_zero(v: Vector) -> bool:
    return all(x.is_zero() for x in v)


def veq(u: Vector, v: Vector) -> bool:
    return all(x == y for x, y in zip(u, v))


def vconst(v: Vector) -> list[Fraction]:
    return [x.coeff(0) for x in v]


def with_prec(v: Vector, prec: int) -> Vector:
    return [x.with_prec(prec) for x in v]


def mat_vec(cols: Sequence[Vector], x: Vector) -> Vector:
    """sum_j x_j * cols[j]."""
    if not cols:
        return []
    out = zero_vector(len(cols[0]), min(vprec(x), min(vprec(c) for c in cols)))
    for c, s in zip(cols, x):
        if not s.is_zero():
            out = vadd(out, vscale(s, c))
    return out


# ---------------------------------------------------------------------------
# column echelon form


@dataclass
class Echelon:
    """Result of :func:`column_echelon`: ``H = A U`` with U unimodular.

    ``pivots[i] = (row, valuation)`` for column i < rank; the pivot entry of
    column i is exactly ``b**valuation`` and rows above ``row`` vanish.
    """

    H: list
    U: list
    pivots: list = field(default_factory=list)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def kernel(self) -> list:
        return self.U[self.rank :]


def column_echelon(cols: Sequence[Vector], reduce: bool = True) -> Echelon:
    """Column echelon form over Q[[b]] by minimal-valuation pivoting.

    With ``reduce`` the entries to the right of each pivot row are reduced
    modulo the pivot (Hermite normalization): in row ``r_j`` every earlier
    column holds a polynomial of degree below the pivot valuation.
    """
    ncols = len(cols)
    if ncols == 0:
        return Echelon([], [], [])
    nrows = len(cols[0])
    prec = max(vprec(c) for c in cols)
    H = [list(c) for c in cols]
    U = [unit_vector(ncols, j, prec) for j in range(ncols)]
    pivots = []
    r = 0
    for row in range(nrows):
        if r >= ncols:
            break
        best, bval = None, None
        for j in range(r, ncols):
            e = H[j][row]
            if e.is_zero():
                continue
            v = e.valuation()
            if bval is None or v < bval:
                best, bval = j, v
        if best is None:
            continue
        H[r], H[best] = H[best], H[r]
        U[r], U[best] = U[best], U[r]
        unit = H[r][row].shift(-bval)
        inv = unit.inverse()
        H[r] = vscale(inv, H[r])
        U[r] = vscale(inv, U[r])
        for j in range(r + 1, ncols):
            e = H[j][row]
            if e.is_zero():
                continue
            q = e.shift(-bval)
            H[j] = vsub(H[j], vscale(q, H[r]))
            U[j] = vsub(U[j], vscale(q, U[r]))
        if reduce:
            for j in range(r):
                e = H[j][row]
                if e.valuation() >= e.prec or e.is_zero():
                    continue
                tail = TruncatedSeries(e.coeffs[bval:], max(e.prec - bval, 0))
                if tail.is_zero():
                    continue
                H[j] = vsub(H[j], vscale(tail, H[r]))
                U[j] = vsub(U[j], vscale(tail, U[r]))
        pivots.append((row, bval))
        r += 1
    return Echelon(H, U, pivots)


def solve_columns(cols: Sequence[Vector], y: Vector, ech: Echelon | None = None):
    """Solve ``sum_j x_j cols[j] = y`` over Q[[b]].

    Returns the coefficient vector, or None when ``y`` is not in the
    Q[[b]]-span of the columns (within precision).  Any kernel is ignored:
    the particular solution uses only pivot columns.
    """
    if ech is None:
        ech = column_echelon(cols, reduce=False)
    rest = list(y)
    z = []
    for i, (row, v) in enumerate(ech.pivots):
        e = rest[row]
        if e.is_zero():
            q = TruncatedSeries.zero(max(e.prec - v, 0))
        else:
            if e.valuation() < v:
                return None
            q = e.shift(-v)
        z.append(q)
        rest = vsub(rest, vscale(q, ech.H[i]))
    if not vis_zero(rest):
        return None
    ncols = len(cols)
    prec = min((s.prec for s in z), default=vprec(y))
    x = zero_vector(ncols, prec)
    for i, q in enumerate(z):
        x = vadd(x, vscale(q, ech.U[i]))
    return x


def kernel_basis(cols: Sequence[Vector]) -> list:
    """Basis of the saturated kernel ``{x : sum x_j cols[j] = 0}``."""
    return column_echelon(cols, reduce=False).kernel()


def rank_mod_b(cols: Sequence[Vector]) -> int:
    """Rank over Q of the constant terms (reduction modulo b)."""
    if not cols:
        return 0
    from .scalars import rank

    rows = [[c[i].coeff(0) for c in cols] for i in range(len(cols[0]))]
    return rank(rows)


# ---------------------------------------------------------------------------
# lattices of full rank inside Q((b))^k


@dataclass
class Lattice:
    """Full-rank Q[[b]]-lattice ``b^(-depth) * span(columns)`` in Q((b))^k.

    ``columns`` is in Hermite normal form: column i has zeros above row i,
    the entry ``b**valuations[i]`` on row i, and below-diagonal entries are
    polynomials reduced modulo the pivot of their row.  ``depth`` is
    minimal, so lattices are equal iff their normal forms are equal.
    """

    depth: int
    columns: list
    valuations: list

    @property
    def rank(self) -> int:
        return len(self.columns)

    def min_valuation(self) -> int:
        """Least b-valuation of a lattice vector, relative to the ambient basis."""
        return min(vvaluation(c) for c in self.columns) - self.depth

    def key(self):
        return (
            self.depth,
            tuple(self.valuations),
            tuple(tuple(x.coeffs for x in c) for c in self.columns),
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, Lattice) and self.key() == other.key()

    def laurent_basis(self) -> list:
        """Basis as (shift, vector) pairs meaning ``b**shift * vector``."""
        return [(-self.depth, c) for c in self.columns]

    def contains(self, vector: Vector, shift: int = 0) -> bool:
        """Whether ``b**shift * vector`` lies in the lattice."""
        scaled = vshift(vector, shift + self.depth) if shift + self.depth >= 0 else None
        if scaled is None:
            if vvaluation(vector) + shift + self.depth < 0:
                return False
            scaled = [x.shift(shift + self.depth) for x in vector]
        ech = Echelon(self.columns, [], [(i, v) for i, v in enumerate(self.valuations)])
        rest = list(scaled)
        for i, (row, v) in enumerate(ech.pivots):
            e = rest[row]
            if e.is_zero():
                continue
            if e.valuation() < v:
                return False
            rest = vsub(rest, vscale(e.shift(-v), self.columns[i]))
        return vis_zero(rest)


def lattice_from_generators(gens: Sequence[tuple[int, Vector]], k: int, prec: int,
                            contains_standard: bool = False) -> Lattice:
    """Hermite normal form of the lattice spanned by ``b**shift * vector`` pairs.

    When ``contains_standard`` is set the standard lattice Q[[b]]^k is added
    to the generators; this is the situation of saturation, where every
    lattice contains the original module.  The working precision must exceed
    the depth, otherwise pivots cannot be resolved.
    """
    depth = max([0] + [-s for s, _ in gens])
    cols = [with_prec(vshift(v, s + depth), prec + depth) for s, v in gens]
    if contains_standard:
        for i in range(k):
            cols.append(vshift(unit_vector(k, i, prec), depth))
    ech = column_echelon(cols, reduce=True)
    if ech.rank < k:
        raise ValueError("generators do not span a full-rank lattice at this precision")
    vals = [v for (_, v) in ech.pivots]
    basis = [_polynomial_part(c, vals) for c in ech.H[:k]]
    # minimal depth: divide out the common power of b
    t = min(vvaluation(c) for c in basis)
    t = min(t, depth)
    if t > 0:
        basis = [vshift(c, -t) for c in basis]
        vals = [v - t for v in vals]
        depth -= t
    basis = [with_prec(c, prec) for c in basis]
    return Lattice(depth, basis, vals)


def _polynomial_part(col: Vector, vals: list) -> Vector:
    """Keep each entry as an exact polynomial: row i entries below degree vals[i], pivot exact."""
    out = []
    for i, x in enumerate(col):
        cut = vals[i] + 1
        if x.prec < cut:
            raise PrecisionExhausted(
                f"lattice entry known to b^{x.prec} but the pivot needs b^{cut}"
            )
        out.append(TruncatedSeries(x.coeffs[:cut], x.prec))
    return out


def lattice_from_subspace(basis: Sequence[Sequence[Fraction]], k: int, depth: int, prec: int) -> Lattice:
    """Lattice ``L`` with ``b^depth Q[[b]]^k <= L <= Q[[b]]^k`` from a b-stable subspace.

    ``basis`` vectors live in (Q[b]/b^depth)^k flattened as index
    ``i * depth + m`` for the coefficient of ``b^m`` in coordinate i.
    """
    gens = []
    for v in basis:
        vec = [TruncatedSeries([v[i * depth + m] for m in range(depth)], prec) for i in range(k)]
        gens.append((0, vec))
    for i in range(k):
        gens.append((depth, unit_vector(k, i, prec)))
    return lattice_from_generators(gens, k, prec + depth)


def flat_linear_map(f, n_in: int, prec_in: int, n_out: int, prec_out: int):
    """Matrix (rows = output coefficients) of a Q-linear map on truncated vectors.

    ``f`` maps a vector of ``n_in`` series (precision ``prec_in``) to a
    vector of ``n_out`` series; coefficients are flattened as
    ``i * prec + m``.
    """
    cols = []
    for i in range(n_in):
        for m in range(prec_in):
            v = zero_vector(n_in, prec_in)
            v[i] = TruncatedSeries.monomial(ONE, m, prec_in)
            w = f(v)
            col = []
            for o in range(n_out):
                for t in range(prec_out):
                    col.append(w[o].coeff(t))
            cols.append(col)
    nrows = n_out * prec_out
    return [[cols[c][r] for c in range(len(cols))] for r in range(nrows)]


def unflatten(v: Sequence[Fraction], n: int, prec: int) -> Vector:
    return [TruncatedSeries([v[i * prec + m] for m in range(prec)], prec) for i in range(n)]


def flatten(v: Vector, prec: int) -> list[Fraction]:
    return [x.coeff(m) for x in v for m in range(prec)]


def reliable_dimension(solutions: Sequence[Sequence[Fraction]], n: int, prec: int, keep: int) -> tuple[int, list]:
    """Dimension of the projection of a solution space onto coefficients ``b^m``, m < keep.

    Solutions of a truncated linear system contain spurious vectors supported
    near the truncation order; projecting them away leaves the part that is
    determined by the equations.  Returns the dimension and a list of
    solutions whose projections form a basis.
    """
    from .scalars import rref

    proj = [[s[i * prec + m] for i in range(n) for m in range(keep)] for s in solutions]
    if not proj:
        return 0, []
    # choose independent projections greedily
    chosen, rows = [], []
    for s, p in zip(solutions, proj):
        trial = rows + [p]
        if len(rref(trial)[1]) > len(rows):
            rows.append(p)
            chosen.append(s)
    return len(chosen), chosen


__all__ = [
    "Echelon",
    "Lattice",
    "column_echelon",
    "flat_linear_map",
    "kernel_basis",
    "lattice_from_generators",
    "lattice_from_subspace",
    "mat_vec",
    "nullspace",
    "reliable_dimension",
    "solve_columns",
]
