import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from binary_heights.errors import NotPrimeError, ZeroValueError
from binary_heights.exact_arith import (
    ARCHIMEDEAN,
    LogValue,
    Place,
    Valuation,
    factorize,
    factorize_rational,
    is_probable_prime,
    log_abs,
    product_formula_defect,
    valuation,
)
from binary_heights.heights import SEXTIC_MODULI_CONSTANT

nonzero_ints = st.integers(min_value=-(10**12), max_value=10**12).filter(lambda n: n != 0)
nonzero_rationals = st.fractions(min_value=-(10**9), max_value=10**9, max_denominator=10**6).filter(lambda q: q != 0)


def test_factorize_small():
    assert factorize(360).factors == ((2, 3), (3, 2), (5, 1))
    assert factorize(-27).sign == -1
    assert factorize(-27).as_dict() == {3: 3}
    assert factorize(1).factors == ()


def test_factorize_beyond_trial_division():
    p, q = 1_000_003, 1_000_033
    assert factorize(p * q).factors == ((p, 1), (q, 1))
    assert factorize(2**61 - 1).factors == ((2**61 - 1, 1),)


def test_factorize_zero():
    with pytest.raises(ZeroValueError):
        factorize(0)


@given(nonzero_ints)
def test_factorization_reassembles(n):
    assert factorize(n).value() == n


@given(nonzero_rationals)
def test_rational_factorization_reassembles(q):
    assert factorize_rational(q).value() == q


def test_primality():
    assert [n for n in range(30) if is_probable_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert not is_probable_prime(561)  # Carmichael
    assert is_probable_prime(2**61 - 1)


def test_valuation():
    assert valuation(Fraction(12, 5), 2) == 2
    assert valuation(Fraction(12, 5), 5) == -1
    assert valuation(7, 3) == 0
    assert valuation(0, 3) is Valuation.INFINITY


def test_valuation_needs_prime():
    with pytest.raises(NotPrimeError):
        valuation(12, 4)
    with pytest.raises(NotPrimeError):
        Place.finite(1)


@given(nonzero_rationals, nonzero_rationals)
def test_valuation_is_additive(a, b):
    for p in (2, 3, 5):
        assert valuation(a * b, p) == valuation(a, p) + valuation(b, p)


def test_log_abs_at_places():
    assert log_abs(Fraction(9, 2), Place.finite(3)) == LogValue.log_prime(3, -2)
    assert log_abs(Fraction(9, 2), Place.finite(2)) == LogValue.log_prime(2, 1)
    assert log_abs(Fraction(9, 2), ARCHIMEDEAN).to_float() == pytest.approx(math.log(4.5))
    with pytest.raises(ZeroValueError):
        log_abs(0, ARCHIMEDEAN)


@settings(max_examples=1000, deadline=None)
@given(nonzero_rationals)
def test_product_formula_is_exact(q):
    assert product_formula_defect(q).is_zero()


def test_log_value_algebra():
    a = LogValue.log_of(12)
    b = LogValue.log_prime(3)
    assert a - b == LogValue.log_prime(2, 2)
    assert (a * Fraction(1, 2)).coefficient(2) == 1
    assert (a - a).is_zero()
    assert str(LogValue.zero()) == "0"


def test_log_value_precision():
    value = LogValue.log_of(Fraction(27, 8))
    assert value.to_float() == pytest.approx(math.log(27 / 8), abs=1e-15)
    assert value.to_float(bits=200) == pytest.approx(math.log(27 / 8), abs=1e-15)


def test_sextic_constant_factors():
    expected = {2: 28, 3: 9, 5: 5, 7: 1, 11: 1, 13: 1, 17: 1, 43: 1}
    assert factorize(SEXTIC_MODULI_CONSTANT).as_dict() == expected
    assert factorize(SEXTIC_MODULI_CONSTANT).value() == SEXTIC_MODULI_CONSTANT
