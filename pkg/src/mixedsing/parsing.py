"""Concrete syntax for mixed polynomials.

Grammar (whitespace between tokens is ignored)::

    expr    := term (('+' | '-') term)*
    term    := unary ('*' unary)*
    unary   := '-' unary | power
    power   := postfix ('^' INTEGER)?
    postfix := atom '~'*
    atom    := '(' expr ')' | 'conj' '(' expr ')' | VARIABLE | RATIONAL | 'i'
    RATIONAL := INTEGER ('/' INTEGER)?

plus the dedicated zero form "0 (n=K)" emitted by the formatter.  conj(...)
and the '~' postfix are elaborated at parse time via the exact conjugation
operation, so no conjugation nodes survive; the result is always a plain
MixedPolynomial.

Every rejection raises ParseError carrying the byte offset of the offending
token.  Exponents are capped at 64 and variable counts at 8; this is a desk
calculator, not a CAS.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .core import CR_I, ComplexRational, ExponentPair, MixedPolynomial

__all__ = ["ParseError", "SourceExpr", "parse_mixed", "parse", "format_mixed"]

MAX_EXPONENT = 64
MAX_VARIABLES = 8
_RESERVED = {"i", "conj"}
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_INT_RE = re.compile(r"[0-9]+")
_ZERO_FORM_RE = re.compile(r"^\s*0\s*\(n=([0-9]+)\)\s*$")


class ParseError(Exception):
    """Rejection of a source expression, with the offending position."""

    def __init__(self, position: int, message: str):
        self.position = position
        self.message = message
        super().__init__(f"at position {position}: {message}")


@dataclass(frozen=True)
class SourceExpr:
    """Expression text together with its declared variable names."""

    text: str
    variable_names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.variable_names)
        object.__setattr__(self, "variable_names", names)
        if not names:
            raise ParseError(0, "at least one variable must be declared")
        if len(names) > MAX_VARIABLES:
            raise ParseError(0, f"too many variables ({len(names)} > {MAX_VARIABLES})")
        if len(set(names)) != len(names):
            raise ParseError(0, f"duplicate variable names in {names}")
        for name in names:
            if not _IDENT_RE.fullmatch(name):
                raise ParseError(0, f"invalid variable name {name!r}")
            if name in _RESERVED:
                raise ParseError(0, f"variable name {name!r} is reserved")


@dataclass
class _Token:
    kind: str  # INT IDENT OP END
    value: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*^()~/":
            tokens.append(_Token("OP", ch, i))
            i += 1
            continue
        m = _INT_RE.match(text, i)
        if m:
            tokens.append(_Token("INT", m.group(), i))
            i = m.end()
            continue
        m = _IDENT_RE.match(text, i)
        if m:
            tokens.append(_Token("IDENT", m.group(), i))
            i = m.end()
            continue
        raise ParseError(i, f"unexpected character {ch!r}")
    tokens.append(_Token("END", "", n))
    return tokens


@dataclass
class _Parser:
    tokens: list[_Token]
    variables: dict[str, int]
    n_vars: int
    pos: int = field(default=0)

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str) -> _Token:
        tok = self.next()
        if tok.kind != "OP" or tok.value != op:
            raise ParseError(tok.pos, f"expected {op!r}, found {tok.value or 'end of input'!r}")
        return tok

    # grammar ----------------------------------------------------------------

    def expr(self) -> MixedPolynomial:
        value = self.term()
        while self.peek().kind == "OP" and self.peek().value in "+-":
            op = self.next()
            rhs = self.term()
            value = value + rhs if op.value == "+" else value - rhs
        return value

    def term(self) -> MixedPolynomial:
        value = self.unary()
        while self.peek().kind == "OP" and self.peek().value == "*":
            self.next()
            value = value * self.unary()
        return value

    def unary(self) -> MixedPolynomial:
        tok = self.peek()
        if tok.kind == "OP" and tok.value == "-":
            self.next()
            return -self.unary()
        return self.power()

    def power(self) -> MixedPolynomial:
        value = self.postfix()
        tok = self.peek()
        if tok.kind == "OP" and tok.value == "^":
            self.next()
            e = self.next()
            if e.kind != "INT":
                raise ParseError(e.pos, "exponent must be a nonnegative integer literal")
            exponent = int(e.value)
            if exponent > MAX_EXPONENT:
                raise ParseError(e.pos, f"exponent {exponent} exceeds bound {MAX_EXPONENT}")
            value = value ** exponent
            nxt = self.peek()
            if nxt.kind == "OP" and nxt.value == "^":
                raise ParseError(nxt.pos, "chained '^' is not allowed; parenthesize")
        return value

    def postfix(self) -> MixedPolynomial:
        value = self.atom()
        while self.peek().kind == "OP" and self.peek().value == "~":
            self.next()
            value = value.conjugate()
        return value

    def atom(self) -> MixedPolynomial:
        tok = self.next()
        if tok.kind == "OP" and tok.value == "(":
            value = self.expr()
            self.expect_op(")")
            return value
        if tok.kind == "IDENT":
            if tok.value == "conj":
                self.expect_op("(")
                value = self.expr()
                self.expect_op(")")
                return value.conjugate()
            if tok.value == "i":
                return MixedPolynomial.constant(CR_I, self.n_vars)
            j = self.variables.get(tok.value)
            if j is None:
                raise ParseError(tok.pos, f"unknown identifier {tok.value!r}")
            return MixedPolynomial.variable(j, self.n_vars)
        if tok.kind == "INT":
            num = int(tok.value)
            nxt = self.peek()
            if nxt.kind == "OP" and nxt.value == "/":
                self.next()
                den_tok = self.next()
                if den_tok.kind != "INT":
                    raise ParseError(den_tok.pos, "denominator must be an integer literal")
                den = int(den_tok.value)
                if den == 0:
                    raise ParseError(den_tok.pos, "zero denominator")
                return MixedPolynomial.constant(
                    ComplexRational(Fraction(num, den)), self.n_vars
                )
            return MixedPolynomial.constant(num, self.n_vars)
        raise ParseError(tok.pos, f"unexpected {tok.value or 'end of input'!r}")


def parse_mixed(src: SourceExpr) -> MixedPolynomial:
    """Parse a source expression into a canonical MixedPolynomial."""
    n = len(src.variable_names)
    m = _ZERO_FORM_RE.match(src.text)
    if m:
        k = int(m.group(1))
        if k != n:
            raise ParseError(
                src.text.index("("), f"zero form declares n={k} but {n} variables are declared"
            )
        return MixedPolynomial.zero(n)
    tokens = _tokenize(src.text)
    parser = _Parser(tokens, {name: j for j, name in enumerate(src.variable_names)}, n)
    value = parser.expr()
    end = parser.next()
    if end.kind != "END":
        raise ParseError(end.pos, f"trailing input {end.value!r}")
    return value


def parse(text: str, variables) -> MixedPolynomial:
    """Convenience wrapper: parse(text, ("x", "y"))."""
    return parse_mixed(SourceExpr(text, tuple(variables)))


# formatting -------------------------------------------------------------------


def _rational_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _imag_str(m: Fraction) -> str:
    # m > 0 by the time we are called
    return "i" if m == 1 else f"{_rational_str(m)}*i"


def _coeff_str(c: ComplexRational) -> tuple[bool, str]:
    """Render a coefficient; returns (display_negative, body)."""
    if c.im == 0:
        return c.re < 0, _rational_str(abs(c.re))
    if c.re == 0:
        return c.im < 0, _imag_str(abs(c.im))
    # mixed coefficient: parenthesized, sign kept inside
    re_part = _rational_str(c.re)
    op = "+" if c.im > 0 else "-"
    return False, f"({re_part}{op}{_imag_str(abs(c.im))})"


def _monomial_str(pair: ExponentPair) -> str:
    factors = []
    for j in range(pair.n_vars):
        if pair.nu[j]:
            factors.append(f"z{j+1}" + (f"^{pair.nu[j]}" if pair.nu[j] > 1 else ""))
        if pair.mu[j]:
            factors.append(f"z{j+1}~" + (f"^{pair.mu[j]}" if pair.mu[j] > 1 else ""))
    return "*".join(factors)


def format_mixed(F: MixedPolynomial) -> str:
    """Canonical textual form, round-trippable through parse with z1..zn.

    Terms appear in descending graded-lex order on (nu, mu); the zero
    polynomial formats as "0 (n=K)" so the dimension survives.
    """
    if F.is_zero:
        return f"0 (n={F.n_vars})"
    chunks: list[str] = []
    for pair, coeff in F.sorted_terms():
        negative, body = _coeff_str(coeff)
        mon = _monomial_str(pair)
        piece = body if not mon else f"{body}*{mon}"
        if not chunks:
            chunks.append(f"-{piece}" if negative else piece)
        else:
            chunks.append(f" {'-' if negative else '+'} {piece}")
    return "".join(chunks)


def format_scalar(c: ComplexRational) -> str:
    """One exact coefficient as expression text, e.g. "-3/2", "i", "(1+2*i)"."""
    negative, body = _coeff_str(c)
    return f"-{body}" if negative else body


def canonical_variables(n: int) -> tuple[str, ...]:
    """The variable names format_mixed writes against: z1..zn."""
    return tuple(f"z{j+1}" for j in range(n))
