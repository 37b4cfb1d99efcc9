from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from projquant.errors import ParseError, UnknownVariable
from projquant.exact import Poly, Universe
from projquant.parsing import format_poly, parse_expression

U = Universe(2)
x1, x2 = U.x(0), U.x(1)


@pytest.mark.parametrize(
    "text,expected",
    [
        ("x1 + 2*x2", x1 + x2 * 2),
        ("-x1^2", -(x1**2)),
        ("3/4*x1*x2", x1 * x2 * Fraction(3, 4)),
        ("(x1 - x2)^2", x1 * x1 - x1 * x2 * 2 + x2 * x2),
        ("2*-x1", x1 * -2),
        ("x1 - -x2", x1 + x2),
        ("xi1*x2", U.xi(0) * x2),
        ("7", U.const(7)),
    ],
)
def test_examples(text, expected):
    assert parse_expression(text, 2) == expected


@pytest.mark.parametrize(
    "text,pos",
    [("x1 +", 4), ("x1 / x2", 3), ("x1^x2", 3), ("x1^2^3", 4), ("(x1", 3), ("x1 $ 2", 3), ("1/0", 0)],
)
def test_errors_have_positions(text, pos):
    with pytest.raises(ParseError) as err:
        parse_expression(text, 2)
    assert err.value.position == pos


def test_unknown_variable():
    with pytest.raises(UnknownVariable) as err:
        parse_expression("x1 + x3", 2)
    assert err.value.position == 5
    with pytest.raises(UnknownVariable):
        parse_expression("y", 2)


def test_format_examples():
    assert format_poly(U.zero) == "0"
    assert format_poly(x1 * x2 * Fraction(-1, 2) + 1) in ("-1/2*x1*x2 + 1", "1 - 1/2*x1*x2")


terms = st.dictionaries(
    st.tuples(*[st.integers(0, 3)] * 4),
    st.fractions(min_value=-9, max_value=9, max_denominator=8),
    max_size=5,
)


@given(terms)
def test_round_trip(t):
    p = Poly(4, t)
    assert parse_expression(format_poly(p), 2) == p
