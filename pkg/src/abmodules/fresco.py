"""Frescos: monogenic geometric (a,b)-modules ``Ã / Ã Π``.

A fresco of rank k with generator e has the Q[[b]]-basis
``e, a e, ..., a^(k-1) e``; every construction here goes through that
basis.  Its Bernstein element is the initial form of Π.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import (
    AbElement,
    HomogeneousElement,
    bernstein_poly_of_homogeneous,
    factor_homogeneous,
    linear_factor,
)
from .errors import (
    InternalConsistencyError,
    NotAFresco,
    NotGeometric,
    NotNormal,
    SelectionAmbiguous,
)
from .lattice import (
    column_echelon,
    rank_mod_b,
    solve_columns,
    vadd,
    vprec,
    vscale,
    zero_vector,
)
from .module import (
    AbModule,
    apply_a,
    change_basis,
    complete_basis,
    is_geometric,
    quotient,
    rank1_solutions,
    regular_saturation,
    residue_matrix,
    submodule,
)
from .scalars import ONE, ZERO, Polynomial, TruncatedSeries, as_fraction, char_poly, fraction_str


@dataclass
class FrescoPresentation:
    """``Π = (a - l1 b) S1^-1 (a - l2 b) S2^-1 ... S_(k-1)^-1 (a - lk b)``.

    ``units`` holds S_1..S_(k-1), each with constant term 1.
    """

    lambdas: list
    units: list = field(default_factory=list)

    def __post_init__(self):
        self.lambdas = [as_fraction(x) if not isinstance(x, Fraction) else x for x in self.lambdas]
        if not self.lambdas:
            raise ValueError("a presentation needs at least one factor")
        k = len(self.lambdas)
        if not self.units:
            self.units = [TruncatedSeries.one(64) for _ in range(k - 1)]
        if len(self.units) != k - 1:
            raise ValueError(f"expected {k - 1} unit factors, got {len(self.units)}")
        for s in self.units:
            if s.coeff(0) != 1:
                raise ValueError("unit factors must have constant term 1")

    @property
    def rank(self) -> int:
        return len(self.lambdas)

    def is_geometric(self) -> bool:
        """The necessary inequalities ``lambda_j > k - j``."""
        k = self.rank
        return all(lam > k - j for j, lam in enumerate(self.lambdas, start=1))

    def to_element(self, prec: int = 16) -> AbElement:
        out = linear_factor(self.lambdas[0], prec)
        for s, lam in zip(self.units, self.lambdas[1:]):
            inv = AbElement.from_series(s.truncate(prec).with_prec(prec).inverse(), prec)
            out = out * inv * linear_factor(lam, prec)
        return out

    def __str__(self) -> str:
        parts = [f"(a - {fraction_str(self.lambdas[0])} b)"]
        for s, lam in zip(self.units, self.lambdas[1:]):
            if s.coeffs != (ONE,):
                body = Polynomial(s.coeffs).to_str("b")
                parts.append(f"inv({body})")
            parts.append(f"(a - {fraction_str(lam)} b)")
        return " * ".join(parts)

    def to_json(self) -> dict:
        factors = []
        for j, lam in enumerate(self.lambdas):
            entry = {"lambda": fraction_str(lam)}
            if j < len(self.units):
                entry["unit"] = self.units[j].to_json()
            factors.append(entry)
        return {"factors": factors}

    @classmethod
    def from_json(cls, obj) -> FrescoPresentation:
        lambdas, units = [], []
        for j, f in enumerate(obj["factors"]):
            lambdas.append(Fraction(f["lambda"]))
            if "unit" in f and j < len(obj["factors"]) - 1:
                units.append(TruncatedSeries.from_json(f["unit"]))
            elif j < len(obj["factors"]) - 1:
                units.append(TruncatedSeries.one(64))
        return cls(lambdas, units)


def module_from_element(pi: AbElement, k: int | None = None) -> AbModule:
    """Companion matrix of ``Ã / Ã Π`` in the basis ``a^i e``."""
    if k is None:
        k = pi.a_degree()
    N = pi.prec
    c = [pi.a_coefficient(j) for j in range(k + 1)]
    lead = c[k]
    if lead.coeff(0) == 0:
        raise NotAFresco("leading coefficient of the presentation is not a unit")
    inv = lead.inverse()
    rows = [[TruncatedSeries.zero(N) for _ in range(k)] for _ in range(k)]
    for j in range(k - 1):
        rows[j + 1][j] = TruncatedSeries.one(N)
    for j in range(k):
        rows[j][k - 1] = -(inv * c[j])
    return AbModule(rows, N)


def module_from_presentation(p: FrescoPresentation | AbElement, prec: int = 16) -> AbModule:
    if isinstance(p, AbElement):
        return module_from_element(p.truncate(prec))
    return module_from_element(p.to_element(prec), p.rank)


def fresco_generator(E: AbModule):
    """A generator of E over Ã, or None when ``E / (aE + bE)`` is not one-dimensional."""
    k = E.rank
    if k == 0:
        return None
    if k - rank_mod_b(E.cols) != 1:
        return None
    from .scalars import rank

    consts = [[x.coeff(0) for x in c] for c in E.cols]
    base = rank(consts) if consts else 0
    for i in range(k):
        e = [ONE if t == i else ZERO for t in range(k)]
        if rank(consts + [e]) > base:
            gen = E.basis_vector(i)
            if _cyclic_basis(E, gen) is not None:
                return gen
    return None


def _cyclic_basis(E: AbModule, e) -> list | None:
    vecs = [list(e)]
    for _ in range(E.rank - 1):
        vecs.append(apply_a(E, vecs[-1]))
    ech = column_echelon(vecs, reduce=False)
    if ech.rank != E.rank or any(v != 0 for _, v in ech.pivots):
        return None
    return vecs


def is_fresco(E: AbModule) -> tuple[bool, list | None]:
    """Whether E is a fresco, with a generator when it is."""
    if not is_geometric(E):
        raise NotGeometric("is_fresco needs a geometric module")
    gen = fresco_generator(E)
    return gen is not None, gen


def presentation_from_module(F: AbModule, e=None) -> tuple[AbElement, HomogeneousElement]:
    """Relation ``a^k e = sum u_j a^j e`` and the Bernstein element (its initial form)."""
    k = F.rank
    if e is None:
        e = fresco_generator(F)
        if e is None:
            raise NotAFresco("module is not monogenic")
    vecs = _cyclic_basis(F, e)
    if vecs is None:
        raise NotAFresco("e, a e, ... does not form a basis")
    top = apply_a(F, vecs[-1])
    u = solve_columns(vecs, top)
    if u is None:
        raise InternalConsistencyError("a^k e outside the module")
    prec = min(vprec(u), F.prec)
    terms = {(0, k): ONE}
    for j, s in enumerate(u):
        for m, c in enumerate(s.coeffs[:prec]):
            if c != 0:
                terms[(m, j)] = -c
    pi = AbElement(terms, prec)
    init = pi.initial_form()
    if init.a_degree() != k or min(m + d for (m, d) in init.terms) != k:
        raise NotAFresco(f"initial form of {pi} is not of degree {k}")
    return pi, HomogeneousElement.from_element(init)


def bernstein_element(F: AbModule) -> HomogeneousElement:
    if F.rank == 0:
        return HomogeneousElement([ONE])
    return presentation_from_module(F)[1]


def bernstein_polynomial_fresco(F: AbModule) -> Polynomial:
    """Characteristic polynomial of ``-b^{-1} a`` on the saturation, checked against P_F."""
    if F.rank == 0:
        return Polynomial([ONE])
    sat = regular_saturation(F)
    R = residue_matrix(sat.module)
    B1 = char_poly([[-x for x in row] for row in R])
    B2 = bernstein_poly_of_homogeneous(bernstein_element(F))
    if B1 != B2:
        raise InternalConsistencyError(
            f"Bernstein polynomial mismatch: saturation gives {B1}, initial form gives {B2}"
        )
    return B1


# ---------------------------------------------------------------------------
# exact sequences and Jordan-Hölder sequences


@dataclass
class ExactSequenceReport:
    G: AbModule
    H: AbModule
    P_F: HomogeneousElement
    P_G: HomogeneousElement
    P_H: HomogeneousElement
    B_F: Polynomial
    B_G: Polynomial
    B_H: Polynomial
    product_holds: bool
    bernstein_holds: bool

    @property
    def ok(self) -> bool:
        return self.product_holds and self.bernstein_holds

    def to_json(self) -> dict:
        return {
            "rank_G": self.G.rank,
            "rank_H": self.H.rank,
            "P_F": str(self.P_F),
            "P_G": str(self.P_G),
            "P_H": str(self.P_H),
            "B_F": str(self.B_F),
            "B_G": str(self.B_G),
            "B_H": str(self.B_H),
            "product_holds": self.product_holds,
            "bernstein_holds": self.bernstein_holds,
        }


def exact_sequence_check(F: AbModule, G_basis: Sequence) -> ExactSequenceReport:
    """Verify ``P_F = P_G P_H`` and ``B_F(x) = B_G(x - rk H) B_H(x)`` for ``0 -> G -> F -> H -> 0``."""
    G_basis = list(G_basis)
    if rank_mod_b(G_basis) != len(G_basis):
        raise NotNormal("submodule is not normal in F")
    G = submodule(F, G_basis)
    H = quotient(F, G_basis)
    P_F, P_G, P_H = bernstein_element(F), bernstein_element(G), bernstein_element(H)
    B_F = bernstein_polynomial_fresco(F)
    B_G = bernstein_polynomial_fresco(G)
    B_H = bernstein_polynomial_fresco(H)
    product_holds = P_F == P_G * P_H
    bernstein_holds = B_F == B_G.shift(-H.rank) * B_H
    return ExactSequenceReport(G, H, P_F, P_G, P_H, B_F, B_G, B_H, product_holds, bernstein_holds)


@dataclass
class JHSequence:
    """Principal Jordan-Hölder sequence: ``F_j`` is spanned by the first j generators."""

    lambdas: list
    generators: list

    @property
    def principal(self) -> bool:
        shifted = [lam + j for j, lam in enumerate(self.lambdas, start=1)]
        return all(x <= y for x, y in zip(shifted, shifted[1:]))

    @property
    def strictly_decreasing_exists(self) -> bool:
        return strictly_decreasing_order(self.lambdas) is not None

    def to_json(self) -> dict:
        return {
            "lambdas": [fraction_str(x) for x in self.lambdas],
            "generators": [[s.to_json() for s in g] for g in self.generators],
            "principal": self.principal,
        }


def principal_lambdas(F: AbModule) -> list[Fraction]:
    return factor_homogeneous(bernstein_element(F))


def _quotient_by(F: AbModule, gens: list):
    """Current quotient ``F / span(gens)`` with the basis used to lift vectors back."""
    k = F.rank
    prec = min([F.prec] + [vprec(g) for g in gens])
    Fp = F.truncate(prec)
    gens = [[x.truncate(prec) for x in g] for g in gens]
    if not gens:
        return Fp, None
    full = complete_basis(gens, k, prec)
    G = change_basis(Fp, full)
    r = len(gens)
    Q = AbModule([[G.cols[c][i] for c in range(r, k)] for i in range(r, k)], G.prec)
    return Q, full[r:]


def _lift(x: list, complement, k: int) -> list:
    if complement is None:
        return x
    out = zero_vector(k, vprec(x))
    for s, v in zip(x, complement):
        out = vadd(out, vscale(s, v))
    return out


def principal_jh(F: AbModule) -> JHSequence:
    """Normal submodules ``F_1 < ... < F_k`` with ``F_j / F_(j-1) = E_(lambda_j)``.

    At each stage the unique rank one normal submodule of the current
    quotient with the prescribed lambda is lifted back to F.
    """
    lambdas = principal_lambdas(F)
    gens: list = []
    for j, lam in enumerate(lambdas):
        Q, complement = _quotient_by(F, gens)
        fam = rank1_solutions(Q, lam)
        if not fam.normal_basis:
            raise InternalConsistencyError(
                f"no normal rank one submodule with lambda={lam} at stage {j + 1}"
            )
        if not fam.unique:
            raise SelectionAmbiguous(
                f"{fam.dimension} independent solutions for lambda={lam} at stage {j + 1}"
            )
        gens.append(_lift(fam.normal_basis[0], complement, F.rank))
    return JHSequence(lambdas, gens)


def strictly_decreasing_order(lambdas: Sequence[Fraction]):
    """A J-H arrangement of the same Bernstein roots with ``lambda_j + j`` strictly decreasing.

    The roots ``r_j = -(lambda_j + j - k)`` are fixed; an arrangement is a
    permutation of them and ``lambda_j`` is recomputed from position j.
    """
    k = len(lambdas)
    if k > 8:
        raise ValueError("arrangement search is limited to rank 8")
    roots = sorted(-(lam + j - k) for j, lam in enumerate(lambdas, start=1))
    # lambda_j + j = -r_j + k, strictly decreasing iff r_j strictly increasing
    if len(set(roots)) != k:
        return None
    return [-r + k - j for j, r in enumerate(roots, start=1)]


def is_semisimple(F: AbModule, cross_check: bool = True) -> bool:
    """Semi-simplicity through a log-free realization, cross-checked with J-H data."""
    from .xi import realization_is_log_free

    verdict = realization_is_log_free(F)
    if cross_check and F.rank <= 8:
        order = strictly_decreasing_order(principal_lambdas(F))
        witness = order is not None and _has_jh_sequence(F, order)
        if witness != verdict:
            raise InternalConsistencyError(
                f"semi-simplicity: realization says {verdict}, J-H search says {witness}"
            )
    return verdict


def _has_jh_sequence(F: AbModule, lambdas: Sequence[Fraction], gens=None) -> bool:
    """Whether F has a normal flag with successive quotients ``E_(lambda_j)``.

    When a stage admits several normal generators each candidate is tried.
    """
    gens = gens or []
    if not lambdas:
        return True
    Q, complement = _quotient_by(F, gens)
    fam = rank1_solutions(Q, lambdas[0])
    candidates = list(fam.normal_basis)
    if len(candidates) > 1:
        total = candidates[0]
        for v in candidates[1:]:
            total = vadd(total, v)
        candidates.append(total)
    for x in candidates:
        if _has_jh_sequence(F, lambdas[1:], gens + [_lift(x, complement, F.rank)]):
            return True
    return False


__all__ = [
    "ExactSequenceReport",
    "FrescoPresentation",
    "JHSequence",
    "bernstein_element",
    "bernstein_polynomial_fresco",
    "exact_sequence_check",
    "fresco_generator",
    "is_fresco",
    "is_semisimple",
    "module_from_element",
    "module_from_presentation",
    "presentation_from_module",
    "principal_jh",
    "principal_lambdas",
    "strictly_decreasing_order",
]
