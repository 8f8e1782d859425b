"""A small expression language for power series.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | factor
    factor := atom ('^' ['-'] int)?
    atom   := rational | 's' | '(' expr ')' | 'sqrt(' expr ')'
            | 'pow(' expr ',' signed_rational ')' | 'geom(' signed_rational ')'
            | 'fixture(' name ['(' int (',' int)* ')'] ')'

``int '/' int`` is read as one rational literal unless the numerator directly
follows a division or the denominator carries an exponent.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import series as S
from .errors import DenominatorVanishesAtZero, SeriesSyntaxError


# -- AST --------------------------------------------------------------------

@dataclass(frozen=True)
class Node:
    pass


@dataclass(frozen=True)
class Rat(Node):
    value: Fraction
    span: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Sigma(Node):
    span: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Add(Node):
    left: Node
    right: Node
    span: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Sub(Node):
    left: Node
    right: Node
    span: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Mul(Node):
    left: Node
    right: Node
    span: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Div(Node):
    left: Node
    right: Node
    span: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Neg(Node):
    operand: Node
    span: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class IntPow(Node):
    base: Node
    exponent: int
    span: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Pow(Node):
    base: Node
    exponent: Fraction
    span: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Sqrt(Node):
    arg: Node
    span: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Geom(Node):
    ratio: Fraction
    span: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Fixture(Node):
    name: str
    args: tuple = ()
    span: Optional[tuple] = field(default=None, compare=False, repr=False)


# -- tokens -----------------------------------------------------------------

@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


_PUNCT = set("+-*/^(),")
_KEYWORDS = {"s", "sqrt", "pow", "geom", "fixture"}
_FIXTURE_RE = re.compile(r"\s*\(\s*([A-Za-z0-9_\-]+)\s*(\(\s*-?\d+(?:\s*,\s*-?\d+)*\s*\))?\s*\)")


def tokenize(text: str):
    out = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            out.append(Token("int", text[i:j], i))
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            if word not in _KEYWORDS:
                raise SeriesSyntaxError(f"unknown identifier {word!r}", i, _KEYWORDS)
            if word == "fixture":
                m = _FIXTURE_RE.match(text, j)
                if not m:
                    raise SeriesSyntaxError("malformed fixture reference", j, {"(name)"})
                args = m.group(2) or ""
                out.append(Token("fixture", m.group(1) + re.sub(r"\s+", "", args), i))
                i = m.end()
                continue
            out.append(Token(word, word, i))
            i = j
            continue
        if ch in _PUNCT:
            out.append(Token(ch, ch, i))
            i += 1
            continue
        raise SeriesSyntaxError(f"unexpected character {ch!r}", i, _PUNCT | {"int", "s"})
    out.append(Token("eof", "", n))
    return out


# -- parser -----------------------------------------------------------------

_ATOM_START = {"int", "s", "(", "sqrt", "pow", "geom", "fixture"}


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    def peek(self, k=0) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind) -> Token:
        t = self.peek()
        if t.kind != kind:
            raise SeriesSyntaxError(f"expected {kind!r}, found {t.text or 'end of input'!r}", t.pos, {kind})
        return self.take()

    def parse(self):
        node = self.expr()
        t = self.peek()
        if t.kind != "eof":
            raise SeriesSyntaxError(f"unexpected {t.text!r}", t.pos, {"+", "-", "*", "/", "eof"})
        return node

    def expr(self):
        start = self.peek().pos
        node = self.term()
        while self.peek().kind in ("+", "-"):
            op = self.take().kind
            right = self.term()
            span = (start, self.peek().pos)
            node = Add(node, right, span) if op == "+" else Sub(node, right, span)
        return node

    def term(self):
        start = self.peek().pos
        node = self.unary()
        while self.peek().kind in ("*", "/"):
            op = self.take().kind
            right = self.unary(after_div=(op == "/"))
            span = (start, self.peek().pos)
            node = Mul(node, right, span) if op == "*" else Div(node, right, span)
        return node

    def unary(self, after_div=False):
        t = self.peek()
        if t.kind == "-":
            self.take()
            operand = self.unary()
            return Neg(operand, (t.pos, self.peek().pos))
        return self.factor(after_div)

    def factor(self, after_div=False):
        start = self.peek().pos
        base = self.atom(after_div)
        if self.peek().kind == "^":
            self.take()
            k = self.int_exponent()
            return IntPow(base, k, (start, self.peek().pos))
        return base

    def int_exponent(self) -> int:
        """Signed integer exponent; ``^`` chains to the right, so 2^3^2 = 2^9."""
        sign = 1
        if self.peek().kind == "-":
            self.take()
            sign = -1
        t = self.expect("int")
        k = int(t.text)
        if self.peek().kind == "^":
            self.take()
            e = self.int_exponent()
            if e < 0:
                raise SeriesSyntaxError("integer exponent expected", t.pos, {"int"})
            k = k**e
        return sign * k

    def signed_rational(self) -> Fraction:
        sign = 1
        if self.peek().kind == "-":
            self.take()
            sign = -1
        num = int(self.expect("int").text)
        den = 1
        if self.peek().kind == "/":
            self.take()
            t = self.expect("int")
            den = int(t.text)
            if den == 0:
                raise SeriesSyntaxError("zero denominator in rational literal", t.pos, {"int"})
        return sign * Fraction(num, den)

    def atom(self, after_div=False):
        t = self.peek()
        k = t.kind
        if k == "int":
            self.take()
            value = Fraction(int(t.text))
            if (not after_div and self.peek().kind == "/" and self.peek(1).kind == "int"
                    and self.peek(2).kind != "^"):
                self.take()
                d = self.take()
                if int(d.text) == 0:
                    raise SeriesSyntaxError("zero denominator in rational literal", d.pos, {"int"})
                value = Fraction(int(t.text), int(d.text))
            return Rat(value, (t.pos, self.peek().pos))
        if k == "s":
            self.take()
            return Sigma((t.pos, t.pos + 1))
        if k == "(":
            self.take()
            node = self.expr()
            self.expect(")")
            return node
        if k == "sqrt":
            self.take()
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            return Sqrt(arg, (t.pos, self.peek().pos))
        if k == "pow":
            self.take()
            self.expect("(")
            base = self.expr()
            self.expect(",")
            e = self.signed_rational()
            self.expect(")")
            return Pow(base, e, (t.pos, self.peek().pos))
        if k == "geom":
            self.take()
            self.expect("(")
            r = self.signed_rational()
            self.expect(")")
            return Geom(r, (t.pos, self.peek().pos))
        if k == "fixture":
            self.take()
            name, args = _split_fixture(t.text)
            return Fixture(name, args, (t.pos, self.peek().pos))
        raise SeriesSyntaxError(f"unexpected {t.text or 'end of input'!r}", t.pos, _ATOM_START | {"-"})


def _split_fixture(text):
    if "(" in text:
        name, rest = text.split("(", 1)
        args = tuple(int(a) for a in rest.rstrip(")").split(","))
    else:
        name, args = text, ()
    return name.replace("_", "-"), args


def parse(text: str) -> Node:
    return _Parser(text).parse()


# -- printer ----------------------------------------------------------------

def _prec(node) -> int:
    if isinstance(node, (Add, Sub)):
        return 1
    if isinstance(node, (Mul, Div)):
        return 2
    if isinstance(node, Neg):
        return 3
    if isinstance(node, IntPow):
        return 4
    if isinstance(node, Rat) and node.value < 0:
        return 3
    return 5


def _fmt_rational(q: Fraction) -> str:
    return str(q)


def to_text(node: Node) -> str:
    """Canonical text that reparses to an equal AST."""
    return _p(node, 0)


def _wrap(node, min_prec):
    s = _p(node, min_prec)
    return f"({s})" if _prec(node) < min_prec else s


def _p(node, ctx=0) -> str:
    if isinstance(node, Rat):
        v = node.value
        if v.denominator == 1 and v >= 0:
            return str(v.numerator)
        if v.denominator == 1:
            return f"({v.numerator})"
        return f"({v})"
    if isinstance(node, Sigma):
        return "s"
    if isinstance(node, Add):
        return f"{_wrap(node.left, 1)} + {_wrap(node.right, 2)}"
    if isinstance(node, Sub):
        return f"{_wrap(node.left, 1)} - {_wrap(node.right, 2)}"
    if isinstance(node, Mul):
        return f"{_wrap(node.left, 2)}*{_wrap(node.right, 3)}"
    if isinstance(node, Div):
        right = node.right
        if isinstance(right, Rat) and right.value.denominator == 1:
            rtext = f"({right.value.numerator})"
        else:
            rtext = _wrap(right, 3)
        return f"{_wrap(node.left, 2)}/{rtext}"
    if isinstance(node, Neg):
        return f"-{_wrap(node.operand, 3)}"
    if isinstance(node, IntPow):
        return f"{_wrap(node.base, 5)}^{node.exponent}"
    if isinstance(node, Pow):
        return f"pow({_p(node.base)}, {_fmt_rational(node.exponent)})"
    if isinstance(node, Sqrt):
        return f"sqrt({_p(node.arg)})"
    if isinstance(node, Geom):
        return f"geom({_fmt_rational(node.ratio)})"
    if isinstance(node, Fixture):
        args = f"({','.join(str(a) for a in node.args)})" if node.args else ""
        return f"fixture({node.name}{args})"
    raise TypeError(f"unknown node {node!r}")


# -- lowering ---------------------------------------------------------------

def lower(node: Node) -> S.Series:
    """Turn an AST into a Series, keeping rational closed forms where they arise."""
    if isinstance(node, Rat):
        return S.constant(node.value)
    if isinstance(node, Sigma):
        return S.sigma_var()
    if isinstance(node, Add):
        return S.linear_combine(1, lower(node.left), 1, lower(node.right))
    if isinstance(node, Sub):
        return S.linear_combine(1, lower(node.left), -1, lower(node.right))
    if isinstance(node, Mul):
        return S.cauchy_product(lower(node.left), lower(node.right))
    if isinstance(node, Div):
        den = lower(node.right)
        if den.coefficient(0) == 0:
            pos = node.right.span[0] if node.right.span else 0
            raise DenominatorVanishesAtZero(f"denominator has zero constant term (position {pos})")
        return S.divide(lower(node.left), den)
    if isinstance(node, Neg):
        return S.scale(-1, lower(node.operand))
    if isinstance(node, IntPow):
        return S.power(lower(node.base), node.exponent)
    if isinstance(node, Pow):
        return S.binomial_power(lower(node.base), node.exponent)
    if isinstance(node, Sqrt):
        return S.binomial_power(lower(node.arg), Fraction(1, 2))
    if isinstance(node, Geom):
        return S.geometric(node.ratio)
    if isinstance(node, Fixture):
        from .fixtures import fixture

        return fixture(node.name, *node.args)
    raise TypeError(f"unknown node {node!r}")


def evaluate(text: str) -> S.Series:
    x = lower(parse(text))
    if x.name is None:
        x.name = text
    return x
