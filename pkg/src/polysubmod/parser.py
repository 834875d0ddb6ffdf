"""Text grammar for polynomials and the canonical printer.

Grammar (whitespace is ignored everywhere)::

    expr     := ['-'] term (('+' | '-') ['-'] term)*
    term     := factor ('*'? factor)*
    factor   := atom ('^' natural)?
    atom     := rational | rational 'i' | 'i' | variable | '(' expr ')'
    variable := 'z' positive-integer
    rational := integer ('/' positive-integer)?

``format_poly`` emits terms in descending graded-lex order and is the exact
inverse of ``parse`` on canonical polynomials.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import PolySyntaxError, VariableIndexError
from .poly_core import (
    GR_I,
    GaussianRational,
    Polynomial,
    exp_key,
    exponent,
)

_FACTOR_START = set("0123456789zi(")


class _Parser:
    def __init__(self, text: str):
        if not isinstance(text, str):
            raise TypeError("polynomial source must be a string")
        self.text = text
        self.chars = []
        for pos, ch in enumerate(text):
            if ch.isspace():
                continue
            if not ch.isascii():
                raise PolySyntaxError(f"non-ASCII character {ch!r}", pos)
            self.chars.append((ch, pos))
        self.k = 0

    def peek(self) -> str | None:
        return self.chars[self.k][0] if self.k < len(self.chars) else None

    def pos(self) -> int:
        return self.chars[self.k][1] if self.k < len(self.chars) else len(self.text)

    def error(self, what: str | None = None) -> PolySyntaxError:
        ch = self.peek()
        if what is None:
            what = "unexpected end of input" if ch is None else f"unexpected character {ch!r}"
        return PolySyntaxError(what, self.pos())

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            raise self.error(f"expected {ch!r}")
        self.k += 1

    def digits(self) -> str:
        start = self.k
        while self.k < len(self.chars) and self.chars[self.k][0].isdigit():
            self.k += 1
        return "".join(c for c, _ in self.chars[start:self.k])

    # grammar ----------------------------------------------------------------
    def parse(self) -> Polynomial:
        if not self.chars:
            raise self.error("empty input")
        result = self.expr()
        if self.peek() is not None:
            raise self.error()
        return result

    def expr(self) -> Polynomial:
        acc = self.signed_term()
        while self.peek() in ("+", "-"):
            op = self.peek()
            self.k += 1
            t = self.signed_term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def signed_term(self) -> Polynomial:
        if self.peek() == "-":
            self.k += 1
            return -self.term()
        return self.term()

    def term(self) -> Polynomial:
        acc = self.factor()
        while True:
            ch = self.peek()
            if ch == "*":
                self.k += 1
                acc = acc * self.factor()
            elif ch is not None and ch in _FACTOR_START:
                acc = acc * self.factor()
            else:
                return acc

    def factor(self) -> Polynomial:
        base = self.atom()
        if self.peek() == "^":
            self.k += 1
            if self.peek() is None or not self.peek().isdigit():
                raise self.error("expected a natural-number exponent")
            return base ** int(self.digits())
        return base

    def atom(self) -> Polynomial:
        ch = self.peek()
        if ch is None:
            raise self.error()
        if ch.isdigit():
            value = Fraction(int(self.digits()))
            if self.peek() == "/":
                self.k += 1
                if self.peek() is None or not self.peek().isdigit():
                    raise self.error("expected a positive-integer denominator")
                den_pos = self.pos()
                den = int(self.digits())
                if den == 0:
                    raise PolySyntaxError("zero denominator", den_pos)
                value /= den
            if self.peek() == "i":
                self.k += 1
                return Polynomial.const(GaussianRational(0, value))
            return Polynomial.const(value)
        if ch == "i":
            self.k += 1
            return Polynomial.const(GR_I)
        if ch == "z":
            zpos = self.pos()
            self.k += 1
            if self.peek() is None or not self.peek().isdigit():
                raise VariableIndexError("non-numeric variable index", zpos)
            idx = int(self.digits())
            if idx < 1:
                raise VariableIndexError("variable index must be positive", zpos)
            return Polynomial.var(idx)
        if ch == "(":
            self.k += 1
            inner = self.expr()
            self.expect(")")
            return inner
        raise self.error()


def parse(text: str) -> Polynomial:
    """Parse polynomial source text into an exact Polynomial."""
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------


def _coefficient_parts(c: GaussianRational) -> tuple[bool, str]:
    """Split a nonzero coefficient into (leading minus, magnitude text)."""
    if not c.im:
        return c.re < 0, str(abs(c.re))
    if not c.re:
        return c.im < 0, f"{abs(c.im)}i"
    sign = "+" if c.im > 0 else "-"
    return False, f"({c.re}{sign}{abs(c.im)}i)"


def format_coefficient(c: GaussianRational) -> str:
    if not c:
        return "0"
    neg, body = _coefficient_parts(c)
    return "-" + body if neg else body


def format_exponent(m) -> str:
    return "*".join(f"z{v}" if e == 1 else f"z{v}^{e}" for v, e in m)


def format_poly(p: Polynomial) -> str:
    """Canonical text for ``p``: descending graded-lex, lowest-terms coefficients."""
    if p.is_zero():
        return "0"
    out = []
    for m, c in p.sorted_terms():
        neg, body = _coefficient_parts(c)
        if not m:
            text = body
        elif body == "1":
            text = format_exponent(m)
        else:
            text = f"{body}*{format_exponent(m)}"
        if not out:
            out.append("-" + text if neg else text)
        else:
            out.append((" - " if neg else " + ") + text)
    return "".join(out)


def parse_exponent(text: str):
    """Parse an exponent written as ``3``, ``1,2`` or ``alpha=1,2`` (position k = variable k)."""
    body = text.strip()
    if "=" in body:
        body = body.split("=", 1)[1]
    body = body.strip().strip("()[]")
    if not body:
        return exponent({})
    try:
        values = [int(part) for part in body.split(",")]
    except ValueError as exc:
        raise PolySyntaxError("malformed exponent", 0) from exc
    if any(v < 0 for v in values):
        raise PolySyntaxError("negative exponent entry", 0)
    return exponent((k, v) for k, v in enumerate(values, start=1))


def sort_key(p: Polynomial):
    """Deterministic total order on polynomials (used for canonical list output)."""
    return [(exp_key(m), c.re, c.im) for m, c in p.sorted_terms()]
