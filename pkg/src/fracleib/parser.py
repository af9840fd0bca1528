"""Recursive-descent parser for power sums and operator specifications.

Function grammar (whitespace-insensitive, ASCII only)::

    expr     := term (("+" | "-") term)*
    term     := unary (("*" | "/") unary)*
    unary    := ("+" | "-")* power
    power    := atom ["^" exponent]          -- only on the atom x
    atom     := NUMBER | "x" | "(" expr ")"
    exponent := NUMBER | "(" ["+" | "-"] NUMBER ")"

Division is only allowed by a non-zero constant.

Operator grammar::

    opexpr   := opterm (("+" | "-") opterm)*
    opterm   := ("+" | "-")* factor ("*" factor)*   -- exactly one operator factor
    factor   := NUMBER | opatom
    opatom   := "D" ["^" INT]
              | "RL" "(" NUMBER ")"
              | "caputo" "(" NUMBER ")"
              | "GL" "(" NUMBER "," ["h" "="] NUMBER ")"
              | "local" "(" "a" "=" expr ["," "b" "=" expr] ")"
              | "(" opexpr ")"

Operator names are case-insensitive. A single term without sign or
coefficient is the operator itself; anything else becomes a
:class:`LinearCombo`.
"""

from __future__ import annotations

import math
import re
from typing import NamedTuple

from .errors import DomainError, ParseError
from .funclass import ZERO, PowerSum, constant, monomial
from .operators import GL, RL, Caputo, Classical, LinearCombo, LocalForm

__all__ = ["parse_function", "parse_operator", "MAX_DEPTH", "MAX_TERMS"]

MAX_DEPTH = 64
MAX_TERMS = 4096

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),=])
    """,
    re.VERBOSE,
)


class Token(NamedTuple):
    kind: str  # "num", "ident", "op", "end"
    text: str
    offset: int


def _tokenize(text) -> list[Token]:
    if isinstance(text, (bytes, bytearray)):
        for i, byte in enumerate(text):
            if byte > 127:
                raise ParseError("non-ASCII input", i)
        text = text.decode("ascii")
    elif not isinstance(text, str):
        raise ParseError(f"expected text, got {type(text).__name__}", 0)
    for i, ch in enumerate(text):
        if ord(ch) > 127:
            raise ParseError("non-ASCII input", i)

    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(), pos))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0
        self.depth = 0

    # --- token helpers ---------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def _advance(self) -> Token:
        t = self.tokens[self.i]
        if t.kind != "end":
            self.i += 1
        return t

    def _at(self, text: str) -> bool:
        return self.tok.kind == "op" and self.tok.text == text

    def _at_ident(self, name: str) -> bool:
        return self.tok.kind == "ident" and self.tok.text.lower() == name

    def _expect(self, text: str) -> Token:
        if not self._at(text):
            raise ParseError(f"expected {text!r}, found {self._describe()}", self.tok.offset)
        return self._advance()

    def _describe(self) -> str:
        return "end of input" if self.tok.kind == "end" else repr(self.tok.text)

    def _enter(self, offset: int):
        self.depth += 1
        if self.depth > MAX_DEPTH:
            raise ParseError(f"nesting deeper than {MAX_DEPTH}", offset)

    def _number(self) -> float:
        t = self.tok
        if t.kind != "num":
            raise ParseError(f"expected a number, found {self._describe()}", t.offset)
        self._advance()
        v = float(t.text)
        if not math.isfinite(v):
            raise ParseError(f"number {t.text!r} is out of range", t.offset)
        return v

    def _signed_number(self) -> float:
        sign = 1.0
        while self._at("+") or self._at("-"):
            if self._advance().text == "-":
                sign = -sign
        return sign * self._number()

    def finish(self):
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self._describe()}", self.tok.offset)

    @staticmethod
    def _checked(result: PowerSum, offset: int) -> PowerSum:
        if len(result.terms) > MAX_TERMS:
            raise ParseError(f"expression expands to more than {MAX_TERMS} terms", offset)
        return result

    def _combine(self, fn, offset: int) -> PowerSum:
        try:
            return self._checked(fn(), offset)
        except DomainError as exc:
            raise ParseError(f"value out of range: {exc}", offset) from None
        except OverflowError:
            raise ParseError("value out of range", offset) from None

    # --- function grammar ------------------------------------------------
    def expr(self) -> PowerSum:
        acc = self.term()
        while self._at("+") or self._at("-"):
            t = self._advance()
            rhs = self.term()
            if t.text == "+":
                acc = self._combine(lambda: acc + rhs, t.offset)
            else:
                acc = self._combine(lambda: acc - rhs, t.offset)
        return acc

    def term(self) -> PowerSum:
        acc = self.unary()
        while self._at("*") or self._at("/"):
            t = self._advance()
            rhs = self.unary()
            if t.text == "*":
                if len(acc.terms) * len(rhs.terms) > MAX_TERMS:
                    raise ParseError(f"expression expands to more than {MAX_TERMS} terms", t.offset)
                acc = self._combine(lambda: acc * rhs, t.offset)
            else:
                if not rhs.is_constant:
                    raise ParseError("division is only supported by a constant", t.offset)
                if rhs.is_zero:
                    raise ParseError("division by zero", t.offset)
                c = rhs.terms[0].coeff
                acc = self._combine(lambda: acc * (1.0 / c), t.offset)
        return acc

    def unary(self) -> PowerSum:
        sign = 1.0
        while self._at("+") or self._at("-"):
            if self._advance().text == "-":
                sign = -sign
        value = self.power()
        return value if sign > 0 else -value

    def power(self) -> PowerSum:
        start = self.tok
        if self.tok.kind == "ident" and self.tok.text == "x":
            self._advance()
            if self._at("^"):
                self._advance()
                e = self.exponent()
                return self._combine(lambda: monomial(1.0, e), start.offset)
            return monomial(1.0, 1.0)
        value = self.atom()
        if self._at("^"):
            raise ParseError("exponents are only supported on x", self.tok.offset)
        return value

    def exponent(self) -> float:
        if self._at("("):
            self._advance()
            v = self._signed_number()
            self._expect(")")
            return v
        return self._number()

    def atom(self) -> PowerSum:
        t = self.tok
        if t.kind == "num":
            return constant(self._number())
        if t.kind == "op" and t.text == "(":
            self._enter(t.offset)
            self._advance()
            value = self.expr()
            self._expect(")")
            self.depth -= 1
            return value
        if t.kind == "ident":
            raise ParseError(f"unknown identifier {t.text!r}; only x is allowed", t.offset)
        raise ParseError(f"expected a number, x or '(', found {self._describe()}", t.offset)

    # --- operator grammar ------------------------------------------------
    def opexpr(self):
        first = self.tok.offset
        terms = [self.opterm()]
        while self._at("+") or self._at("-"):
            t = self._advance()
            explicit, c, op = self.opterm()
            terms.append((True, -c if t.text == "-" else c, op))
        if len(terms) == 1 and not terms[0][0]:
            return terms[0][2]
        try:
            return LinearCombo(tuple((c, op) for _, c, op in terms))
        except DomainError as exc:
            raise ParseError(str(exc), first) from None

    def opterm(self):
        explicit = False
        coeff = 1.0
        while self._at("+") or self._at("-"):
            explicit = True
            if self._advance().text == "-":
                coeff = -coeff
        op = None
        while True:
            t = self.tok
            if t.kind == "num":
                coeff *= self._number()
                explicit = True
                if not math.isfinite(coeff):
                    raise ParseError("coefficient out of range", t.offset)
            else:
                if op is not None:
                    raise ParseError("a term may contain only one operator", t.offset)
                op = self.opatom()
            if not self._at("*"):
                break
            self._advance()
        if op is None:
            raise ParseError("term has a coefficient but no operator", self.tok.offset)
        return explicit, coeff, op

    def _build(self, cls, offset, *args):
        try:
            return cls(*args)
        except DomainError as exc:
            raise ParseError(str(exc), offset) from None

    def opatom(self):
        t = self.tok
        if t.kind == "op" and t.text == "(":
            self._enter(t.offset)
            self._advance()
            op = self.opexpr()
            self._expect(")")
            self.depth -= 1
            return op
        if t.kind != "ident":
            raise ParseError(f"expected an operator, found {self._describe()}", t.offset)
        name = t.text.lower()
        self._advance()
        if name == "d":
            n = 1
            if self._at("^"):
                self._advance()
                nt = self.tok
                v = self._number()
                if v != int(v) or v < 1 or v > 64:
                    raise ParseError("classical order must be an integer in [1, 64]", nt.offset)
                n = int(v)
            return Classical(n)
        if name in ("rl", "caputo"):
            self._expect("(")
            at = self.tok.offset
            alpha = self._signed_number()
            self._expect(")")
            return self._build(RL if name == "rl" else Caputo, at, alpha)
        if name == "gl":
            self._expect("(")
            at = self.tok.offset
            alpha = self._signed_number()
            self._expect(",")
            if self._at_ident("h"):
                self._advance()
                self._expect("=")
            h = self._signed_number()
            self._expect(")")
            return self._build(GL, at, alpha, h)
        if name == "local":
            self._expect("(")
            self._keyword("a")
            a = self.expr()
            b = ZERO
            if self._at(","):
                self._advance()
                self._keyword("b")
                b = self.expr()
            self._expect(")")
            return LocalForm(a, b)
        raise ParseError(
            f"unknown operator {t.text!r}; expected D, RL, caputo, GL or local", t.offset
        )

    def _keyword(self, name: str):
        if not self._at_ident(name):
            raise ParseError(f"expected '{name}=', found {self._describe()}", self.tok.offset)
        self._advance()
        self._expect("=")


def parse_function(text) -> PowerSum:
    """Parse a power-sum expression such as ``"1 + 2*x^0.5 - x^2"``."""
    p = _Parser(text)
    if p.tok.kind == "end":
        raise ParseError("empty expression", 0)
    value = p.expr()
    p.finish()
    return value


def parse_operator(text):
    """Parse an operator expression such as ``"2*RL(0.5) - D"``."""
    p = _Parser(text)
    if p.tok.kind == "end":
        raise ParseError("empty operator expression", 0)
    op = p.opexpr()
    p.finish()
    return op
