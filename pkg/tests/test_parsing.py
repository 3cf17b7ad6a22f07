from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from binary_heights.binary_forms import BinaryForm, format_form
from binary_heights.errors import FormParseError
from binary_heights.parsing import coefficient_list, parse_form


@pytest.mark.parametrize(
    "text, coefficients",
    [
        ("x^3 - y^3", (-1, 0, 0, 1)),
        ("-1,0,0,1", (-1, 0, 0, 1)),
        ("x**2*y + y^3", (1, 0, 1, 0)),
        ("2x^2y - 3/4*x*y^2", (0, Fraction(-3, 4), 2, 0)),
        ("x*y", (0, 1, 0)),
        ("y^2 + x^2 + x^2", (1, 0, 2)),
        ("1/2, 0, 3", (Fraction(1, 2), 0, 3)),
    ],
)
def test_parse(text, coefficients):
    assert parse_form(text).coefficients == coefficients


def test_degree_is_checked():
    assert parse_form("x^3 - y^3", degree=3).degree == 3
    with pytest.raises(FormParseError):
        parse_form("x^3 - y^3", degree=4)


def test_mixed_degrees_point_at_the_term():
    with pytest.raises(FormParseError) as err:
        parse_form("x^3 + 2")
    assert err.value.position == 4


def test_bad_character_position():
    with pytest.raises(FormParseError) as err:
        parse_form("x^3 $ y^3")
    assert err.value.position == 4


@pytest.mark.parametrize("text", ["", "   ", "0,0,0", "x - x", "5", "x^", "x^1/2", "* x", "x + "])
def test_rejects(text):
    with pytest.raises(FormParseError):
        parse_form(text)


coeff_lists = st.lists(st.integers(min_value=-50, max_value=50), min_size=2, max_size=8).filter(any)


@given(coeff_lists)
def test_polynomial_syntax_reads_back(coeffs):
    f = BinaryForm(tuple(coeffs))
    assert parse_form(format_form(f), degree=f.degree) == f


@given(coeff_lists)
def test_coefficient_list_reads_back(coeffs):
    f = BinaryForm(tuple(coeffs))
    assert parse_form(coefficient_list(f)) == f
