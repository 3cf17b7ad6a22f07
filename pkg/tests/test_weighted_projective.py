import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from binary_heights.errors import DomainError, PointOnDivisorError, ZeroValueError
from binary_heights.exact_arith import ARCHIMEDEAN, LogValue, Place
from binary_heights.weighted_projective import (
    WeightedPoint,
    Weights,
    faltings_height_PN,
    global_hyperplane_height,
    local_hyperplane_height,
    lwh,
    normalize,
    scale,
    standard_height,
    veronese,
    weighted_bound_margin,
)

WEIGHT_SETS = [(1, 1), (2, 3), (2, 4, 6, 10), (4, 8, 12), (1, 2, 3), (1, 1, 1, 1)]

coordinate = st.fractions(min_value=-200, max_value=200, max_denominator=50)
scalar = st.fractions(min_value=-20, max_value=20, max_denominator=20).filter(lambda q: q != 0)


@st.composite
def weighted_points(draw):
    weights = draw(st.sampled_from(WEIGHT_SETS))
    coords = draw(st.lists(coordinate, min_size=len(weights), max_size=len(weights)))
    assume(any(coords))
    return WeightedPoint(tuple(coords), Weights(weights))


def test_weights():
    assert Weights((2, 3)).m == 6
    assert Weights((2, 4, 6, 10)).delta == 2
    with pytest.raises(DomainError):
        Weights((1, 0))
    with pytest.raises(DomainError):
        Weights(())


@pytest.mark.parametrize(
    "q, expected",
    [((1, 2, 3), True), ((2, 3), True), ((1, 1, 1, 1), True), ((1,), True), ((2,), False), ((2, 4, 6, 10), False), ((1, 2, 2), False)],
)
def test_well_formed(q, expected):
    assert Weights(q).is_well_formed is expected


def test_zero_point_is_rejected():
    with pytest.raises(ZeroValueError):
        WeightedPoint((0, 0), Weights((1, 2)))
    with pytest.raises(DomainError):
        WeightedPoint((1, 2), Weights((1, 2, 3)))


def test_scale():
    x = WeightedPoint((1, 1), Weights((1, 2)))
    assert scale(2, x).coordinates == (2, 4)
    assert scale(1, x) == x
    with pytest.raises(ZeroValueError):
        scale(0, x)


@given(weighted_points(), scalar, scalar)
def test_scale_composes(x, a, b):
    assert scale(a, scale(b, x)) == scale(a * b, x)


def test_normalize():
    assert normalize(WeightedPoint((2, 4), Weights((1, 2)))).coordinates == (1, 1)
    assert normalize(WeightedPoint((4, 16), Weights((2, 4)))).coordinates == (1, 1)
    assert normalize(WeightedPoint((Fraction(1, 2), Fraction(1, 4)), Weights((1, 2)))).coordinates == (1, 1)
    assert normalize(WeightedPoint((-3, 5), Weights((1, 2)))).coordinates == (3, 5)


@given(weighted_points(), scalar)
def test_normalize_picks_one_representative(x, lam):
    n = normalize(x)
    assert normalize(n) == n
    assert all(c.denominator == 1 for c in n.coordinates)
    assert normalize(scale(lam, x)) == n
    assert x.is_equivalent(scale(lam, x))


def test_veronese():
    x = WeightedPoint((2, 3), Weights((2, 3)))
    assert veronese(x).coordinates == (8, 9)
    assert veronese(WeightedPoint((2, 3), Weights((1, 2)))).coordinates == (4, 3)


def test_lwh_examples():
    assert lwh(WeightedPoint((1, 1, 1), Weights((2, 4, 6)))).exact.is_zero()
    assert lwh(WeightedPoint((0, 7, 0), Weights((1, 2, 3)))).exact.is_zero()
    assert lwh(WeightedPoint((2, 3), Weights((2, 3)))).exact == LogValue.log_prime(3, Fraction(1, 3))


def test_standard_height():
    assert standard_height([1, 1]).value == 0
    assert standard_height([2, 3]).exact == LogValue.log_of(3)
    assert standard_height([Fraction(1, 2), 3]).value == pytest.approx(math.log(6))


@settings(max_examples=1000, deadline=None)
@given(weighted_points(), scalar)
def test_lwh_is_well_defined(x, lam):
    assert lwh(scale(lam, x)).exact == lwh(x).exact


@settings(max_examples=1000, deadline=None)
@given(weighted_points())
def test_lwh_is_nonnegative(x):
    assert lwh(x).value >= -1e-12


@settings(max_examples=500, deadline=None)
@given(weighted_points())
def test_veronese_law(x):
    m = x.weights.m
    assert standard_height(veronese(x)).exact == lwh(x).exact * m


def test_local_heights_sum_to_the_weil_height():
    x = WeightedPoint.projective((2, 3))
    ell = (1, 1)
    local = [local_hyperplane_height(x, ell, p, weighted=False) for p in (Place.finite(5), ARCHIMEDEAN)]
    assert local[0] + local[1] == standard_height(x).exact
    assert global_hyperplane_height(x, ell, weighted=False) == standard_height(x).exact


@given(weighted_points(), st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_weighted_global_height(x, ell):
    ell = ell[: len(x.coordinates)]
    assume(sum(c * v for c, v in zip(ell, x.coordinates)) != 0)
    total = global_hyperplane_height(x, ell)
    assert total == lwh(x).exact * Fraction(1, x.weights.m)


def test_point_on_divisor():
    with pytest.raises(PointOnDivisorError):
        local_hyperplane_height(WeightedPoint.projective((1, -1)), (1, 1), ARCHIMEDEAN)


def test_faltings_height_of_projective_space():
    assert faltings_height_PN(0) == 0
    assert faltings_height_PN(1) == Fraction(1, 2)
    assert faltings_height_PN(2) == Fraction(5, 4)
    with pytest.raises(DomainError):
        faltings_height_PN(-1)
    assert weighted_bound_margin(0.0, 6, 60, 3) == pytest.approx(6 / 240 * float(faltings_height_PN(3)))
