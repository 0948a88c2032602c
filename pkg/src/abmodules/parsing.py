"""Text grammar for (a,b)-algebra expressions, presentations and scalars.

EBNF (whitespace is insignificant; juxtaposition means product)::

    expr    = ["+" | "-"] term { ("+" | "-") term } ;
    term    = power { ["*"] power } ;
    power   = atom [ "^" integer ] ;
    atom    = number [ "/" integer ]
            | "a" | "b" | "z" | "tau"
            | "inv" "(" expr ")"
            | "(" expr ")" ;
    number  = digit { digit } ;

``a`` and ``b`` are the algebra generators, ``z`` is the variable of a
change-of-variable series and ``tau`` the symbol of Q(tau).  ``inv(S)``
is only accepted for a series S in ``b`` with S(0) != 0.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotAUnit, ParseError

_TOKEN = re.compile(r"\s*(?:(\d+)|(inv|tau|[abz])|(.))")


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "name", "op", "end"
    value: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        num, name, op = m.groups()
        start = m.start(1) if num else m.start(2) if name else m.start(3)
        if num:
            tokens.append(Token("num", num, start))
        elif name:
            tokens.append(Token("name", name, start))
        elif op in "+-*^/()":
            tokens.append(Token("op", op, start))
        else:
            raise ParseError(f"unexpected character {op!r}", start)
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


# AST nodes are tuples: ("num", Fraction) | ("var", name) | ("add", l, r)
# | ("sub", l, r) | ("neg", x) | ("mul", l, r) | ("pow", x, n) | ("inv", x)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    def peek(self) -> Token:
        return self.toks[self.i]

    def take(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, value: str) -> Token:
        t = self.take()
        if t.value != value:
            raise ParseError(f"expected {value!r}, found {t.value or 'end of input'!r}", t.pos)
        return t

    def parse(self):
        node = self.expr()
        t = self.peek()
        if t.kind != "end":
            raise ParseError(f"unexpected {t.value!r}", t.pos)
        return node

    def expr(self):
        t = self.peek()
        if t.value in "+-" and t.kind == "op":
            self.take()
            node = self.term()
            if t.value == "-":
                node = ("neg", node)
        else:
            node = self.term()
        while self.peek().kind == "op" and self.peek().value in "+-":
            op = self.take().value
            rhs = self.term()
            node = ("add" if op == "+" else "sub", node, rhs)
        return node

    def _starts_atom(self, t: Token) -> bool:
        return t.kind in ("num", "name") or (t.kind == "op" and t.value == "(")

    def term(self):
        node = self.power()
        while True:
            t = self.peek()
            if t.kind == "op" and t.value == "*":
                self.take()
                node = ("mul", node, self.power())
            elif self._starts_atom(t):
                node = ("mul", node, self.power())
            else:
                return node

    def power(self):
        node = self.atom()
        if self.peek().kind == "op" and self.peek().value == "^":
            self.take()
            neg = False
            if self.peek().value == "-":
                self.take()
                neg = True
            t = self.take()
            if t.kind != "num":
                raise ParseError("exponent must be a nonnegative integer", t.pos)
            if neg:
                raise ParseError("negative exponents are not supported; use inv(...)", t.pos)
            node = ("pow", node, int(t.value))
        return node

    def atom(self):
        t = self.take()
        if t.kind == "num":
            value = Fraction(int(t.value))
            if self.peek().kind == "op" and self.peek().value == "/":
                self.take()
                d = self.take()
                if d.kind != "num":
                    raise ParseError("expected an integer denominator", d.pos)
                if int(d.value) == 0:
                    raise ParseError("division by zero", d.pos)
                value = value / int(d.value)
            return ("num", value)
        if t.kind == "name":
            if t.value == "inv":
                self.expect("(")
                inner = self.expr()
                self.expect(")")
                return ("inv", inner, t.pos)
            return ("var", t.value, t.pos)
        if t.kind == "op" and t.value == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"unexpected {t.value or 'end of input'!r}", t.pos)


def parse_ast(text: str):
    return _Parser(text).parse()


def _evaluate(node, leaf, inv):
    kind = node[0]
    if kind == "num":
        return leaf("num", node[1], None)
    if kind == "var":
        return leaf("var", node[1], node[2])
    if kind == "neg":
        return -_evaluate(node[1], leaf, inv)
    if kind == "add":
        return _evaluate(node[1], leaf, inv) + _evaluate(node[2], leaf, inv)
    if kind == "sub":
        return _evaluate(node[1], leaf, inv) - _evaluate(node[2], leaf, inv)
    if kind == "mul":
        return _evaluate(node[1], leaf, inv) * _evaluate(node[2], leaf, inv)
    if kind == "pow":
        base = _evaluate(node[1], leaf, inv)
        return base ** node[2]
    if kind == "inv":
        return inv(_evaluate(node[1], leaf, inv), node[2])
    raise AssertionError(kind)


def parse_element(text: str, prec: int = 16):
    """Parse and normalize an expression in ``a`` and ``b``."""
    return parse_element_ast(parse_ast(text), prec)


def parse(text: str, prec: int = 16):
    """Parse an expression: a FrescoPresentation when it has the factored shape, else an AbElement."""
    p = parse_presentation(text, prec)
    return p if p is not None else parse_element(text, prec)


def parse_tau_expression(text: str):
    """Parse a rational expression in ``tau`` into a TauRational."""
    from .scalars import TauRational

    def leaf(kind, value, pos):
        if kind == "num":
            return TauRational.lift(value)
        if value == "tau":
            return TauRational.tau()
        raise ParseError(f"symbol {value!r} is not allowed in a scalar", pos)

    def inv(x, pos):
        return TauRational.lift(1) / x

    return _evaluate(parse_ast(text), leaf, inv)


def parse_series(text: str, prec: int = 16, var: str = "z"):
    """Parse a power series in one variable (``z`` by default, ``b`` also accepted)."""
    from .scalars import TruncatedSeries

    def leaf(kind, value, pos):
        if kind == "num":
            return TruncatedSeries((value,), prec)
        if value in (var, "b", "z"):
            return TruncatedSeries.monomial(Fraction(1), 1, prec)
        raise ParseError(f"symbol {value!r} is not allowed in a series", pos)

    def inv(x, pos):
        return x.inverse()

    return _evaluate(parse_ast(text), leaf, inv)


def parse_presentation(text: str, prec: int = 16):
    """Recognize ``(a - l1 b) inv(S1) (a - l2 b) ... (a - lk b)``.

    Returns a FrescoPresentation, or None when the expression does not have
    this factored shape (callers then fall back to :func:`parse_element`).
    """
    from .fresco import FrescoPresentation
    from .scalars import TruncatedSeries

    node = parse_ast(text)
    factors = []

    def flatten(n):
        if n[0] == "mul":
            flatten(n[1])
            flatten(n[2])
        elif n[0] == "pow" and n[1][0] != "inv" and n[2] >= 1:
            for _ in range(n[2]):
                flatten(n[1])
        else:
            factors.append(n)

    flatten(node)
    lambdas: list[Fraction] = []
    units: list[TruncatedSeries] = []
    pending = None
    for f in factors:
        if f[0] == "inv":
            s = _evaluate(f[1], _series_leaf(prec), lambda x, pos: x.inverse())
            if not isinstance(s, TruncatedSeries):
                return None
            if s.coeff(0) == 0:
                raise NotAUnit(f"inv() at position {f[2]}: zero constant term")
            pending = s if pending is None else pending * s
            continue
        try:
            el = parse_element_ast(f, prec)
        except ParseError:
            return None
        lam = _linear_lambda(el)
        if lam is None:
            return None
        if lambdas:
            units.append(pending if pending is not None else TruncatedSeries.one(prec))
        elif pending is not None:
            return None
        pending = None
        lambdas.append(lam)
    if not lambdas or pending is not None:
        return None
    units = [u * (1 / u.coeff(0)) if u.coeff(0) != 1 else u for u in units]
    return FrescoPresentation(lambdas, units)


def _series_leaf(prec):
    from .scalars import TruncatedSeries

    def leaf(kind, value, pos):
        if kind == "num":
            return TruncatedSeries((value,), prec)
        if value == "b":
            return TruncatedSeries.monomial(Fraction(1), 1, prec)
        raise ParseError(f"only series in b are allowed inside inv(), found {value!r}", pos)

    return leaf


def parse_element_ast(node, prec: int):
    """Evaluate a parsed tree as an element of the algebra."""
    from .algebra import AbElement, series_unit_inverse

    def leaf(kind, value, pos):
        if kind == "num":
            return AbElement.scalar(value, prec)
        if value == "a":
            return AbElement.a(prec)
        if value == "b":
            return AbElement.b(prec)
        raise ParseError(f"symbol {value!r} is not allowed here", pos)

    def inv(x, pos):
        try:
            return series_unit_inverse(x)
        except NotAUnit as exc:
            raise NotAUnit(f"inv() at position {pos}: {exc}") from None

    return _evaluate(node, leaf, inv)


def _linear_lambda(el):
    """lambda if ``el == a - lambda b`` exactly, else None."""
    keys = set(el.terms)
    if el.coefficient(0, 1) != 1 or not keys <= {(0, 1), (1, 0)}:
        return None
    return -el.coefficient(1, 0)
