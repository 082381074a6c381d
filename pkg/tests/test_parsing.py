"""Expression syntax and the canonical formatter."""

import pytest

from mixedsing import MixedPolynomial, ParseError, SourceExpr, format_mixed, format_scalar, parse, parse_mixed
from mixedsing.core import CR_I, ComplexRational
from mixedsing.parsing import canonical_variables
from oracles import random_mixed

XY = ("x", "y")
XYZ = ("x", "y", "z")


@pytest.mark.parametrize(
    "text,variables,expected",
    [
        ("x*y*x~", XY, "1*z1*z1~*z2"),
        ("(x^2 - z*y^2)*y~", XYZ, "-1*z2^2*z2~*z3 + 1*z1^2*z2~"),
        ("conj(x + i*y)", XY, "1*z1~ - i*z2~"),
        ("x - 3/2", ("x",), "1*z1 - 3/2"),
        ("(1 + 2*i)*x - y", XY, "(1+2*i)*z1 - 1*z2"),
        ("x^2*x - x*x^2", ("x",), "0 (n=1)"),
        ("-x*-y", XY, "1*z1*z2"),
        ("i^2", ("x",), "-1"),
        ("2^3 + x", ("x",), "1*z1 + 8"),
        ("x + 2*y^3", XY, "2*z2^3 + 1*z1"),
        ("(x + 2*y)^2", XY, "1*z1^2 + 4*z1*z2 + 4*z2^2"),
        ("x - y - z", XYZ, "1*z1 - 1*z2 - 1*z3"),
        ("(x + y)~", XY, "1*z1~ + 1*z2~"),
        ("x~~", ("x",), "1*z1"),
        ("0 (n=3)", XYZ, "0 (n=3)"),
    ],
)
def test_frozen_canonical_forms(text, variables, expected):
    assert format_mixed(parse(text, variables)) == expected


def test_conj_call_matches_postfix():
    assert parse("conj(x + i*y)", XY) == parse("(x + i*y)~", XY)
    assert parse("conj(x*y)", XY) == parse("x~*y~", XY)


def test_roundtrip_random(rng):
    """format -> parse is the identity; format is idempotent."""
    for _ in range(300):
        p = random_mixed(rng, max_terms=5)
        text = format_mixed(p)
        names = canonical_variables(p.n_vars)
        q = parse(text, names)
        assert q == p
        assert format_mixed(q) == text


def test_zero_form_dimension_mismatch():
    with pytest.raises(ParseError):
        parse("0 (n=2)", XYZ)


def test_source_expr_validation():
    with pytest.raises(ParseError):
        SourceExpr("x", ())
    with pytest.raises(ParseError):
        SourceExpr("x", ("x", "x"))
    with pytest.raises(ParseError):
        SourceExpr("i", ("i",))
    with pytest.raises(ParseError):
        SourceExpr("x", ("conj",))
    with pytest.raises(ParseError):
        SourceExpr("x", ("2bad",))
    with pytest.raises(ParseError):
        SourceExpr("a", tuple("abcdefghj"))  # 9 > 8


@pytest.mark.parametrize(
    "text,variables,at",
    [
        ("x +", XY, 3),          # dangling operator
        ("x^y", XY, 2),          # nonliteral exponent
        ("x^2^3", XY, 3),        # chained power
        ("x^70", XY, 2),         # exponent over the cap
        ("q + x", XY, 0),        # unknown identifier
        ("3/0", XY, 2),          # zero denominator
        ("3/x", XY, 2),          # nonliteral denominator
        ("x)", XY, 1),           # trailing input
        ("(x", XY, 2),           # unclosed paren
        ("x $ y", XY, 2),        # stray character
        ("", XY, 0),             # empty input
    ],
)
def test_error_positions(text, variables, at):
    with pytest.raises(ParseError) as err:
        parse(text, variables)
    assert err.value.position == at


def test_parse_mixed_uses_declared_names():
    src = SourceExpr("alpha*beta~", ("alpha", "beta"))
    assert format_mixed(parse_mixed(src)) == "1*z1*z2~"


def test_format_scalar():
    assert format_scalar(ComplexRational(-3, 2)) == "(-3+2*i)"
    assert format_scalar(CR_I) == "i"
    assert format_scalar(ComplexRational(0, -1)) == "-i"
    assert format_scalar(ComplexRational(7)) == "7"


def test_format_orders_terms_by_graded_lex():
    p = parse("y~ + x^3 + x*y", XY)
    # degree 3 first, then the two quadratics resolve by lex on (nu, mu)
    assert format_mixed(p) == "1*z1^3 + 1*z1*z2 + 1*z2~"


def test_constant_formatting():
    assert format_mixed(MixedPolynomial.constant(-1, 1)) == "-1"
    assert format_mixed(MixedPolynomial.constant(CR_I * -3, 2)) == "-3*i"
