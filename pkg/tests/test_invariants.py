from fractions import Fraction

import pytest

from binary_heights.binary_forms import BinaryForm, Matrix2, act, discriminant, is_semistable
from binary_heights.errors import NullconeError, UnsupportedDegreeError
from binary_heights.invariants import evaluate_invariants, invariant_basis, transvectant

from conftest import product_form, random_integral_form, random_sl2z

WEIGHTS = {3: (4,), 4: (2, 3), 5: (4, 8, 12), 6: (2, 4, 6, 10)}


def test_transvectant_of_order_zero_is_the_product():
    f = BinaryForm((1, 1))  # x + y
    g = BinaryForm((-1, 1))  # x - y
    assert transvectant(f, g, 0).coefficients == (-1, 0, 1)


def test_quadratic_self_transvectant():
    a, b, c = 3, 5, -2
    q = BinaryForm((c, b, a))
    assert transvectant(q, q, 2).value == -Fraction(b * b - 4 * a * c, 2)


@pytest.mark.parametrize("coeffs", [(1, 2, 0, 1), (3, -1, 4, 1, -5)])
def test_odd_self_transvectants_vanish(coeffs):
    f = BinaryForm(coeffs)
    for k in range(1, f.degree + 1, 2):
        assert transvectant(f, f, k).is_zero


@pytest.mark.parametrize("d", sorted(WEIGHTS))
def test_basis_weights(d):
    basis = invariant_basis(d)
    assert tuple(basis.weights.q) == WEIGHTS[d]
    assert set(basis.header()) == set(basis.names)


def test_unsupported_degrees():
    for d in (2, 7):
        with pytest.raises(UnsupportedDegreeError):
            invariant_basis(d)


def test_normalization_anchors():
    assert evaluate_invariants(BinaryForm.power_form(3)).values == (-27,)
    assert evaluate_invariants(BinaryForm.power_form(6)).values[0] == -6


def test_cubic_invariant_is_the_discriminant(rng):
    for _ in range(50):
        f = random_integral_form(rng, 3)
        assert evaluate_invariants(f).values[0] == discriminant(f)


@pytest.mark.parametrize("d", sorted(WEIGHTS))
def test_sl2z_invariance(d, rng):
    for _ in range(100):
        f = random_integral_form(rng, d)
        M = random_sl2z(rng)
        assert evaluate_invariants(act(f, M)).values == evaluate_invariants(f).values


@pytest.mark.parametrize("d", sorted(WEIGHTS))
def test_gl2_covariance(d, rng):
    M = Matrix2(2, 1, 1, 3)  # det 5
    for _ in range(5):
        f = random_integral_form(rng, d)
        before = evaluate_invariants(f).values
        after = evaluate_invariants(act(f, M)).values
        for q, v0, v1 in zip(WEIGHTS[d], before, after):
            assert v1 == Fraction(5) ** (q * d // 2) * v0


@pytest.mark.parametrize("d", sorted(WEIGHTS))
def test_homogeneity(d, rng):
    f = random_integral_form(rng, d)
    lam = Fraction(-3, 2)
    scaled = evaluate_invariants(f.scale(lam)).values
    for q, v0, v1 in zip(WEIGHTS[d], evaluate_invariants(f).values, scaled):
        assert v1 == lam**q * v0


@pytest.mark.parametrize("d", sorted(WEIGHTS))
def test_nullcone_forms(d, rng):
    k = d // 2 + 1
    for _ in range(50):
        r = int(rng.integers(-3, 4))
        rest = [(int(rng.integers(-3, 4)) or 1, int(rng.integers(-3, 4))) for _ in range(d - k)]
        f = product_form(*([(1, r)] * k + rest))
        xi = evaluate_invariants(f)
        assert xi.is_nullcone
        with pytest.raises(NullconeError):
            xi.point()


@pytest.mark.parametrize("d", sorted(WEIGHTS))
def test_semistable_forms_leave_the_nullcone(d, rng):
    checked = 0
    while checked < 50:
        f = random_integral_form(rng, d)
        if not is_semistable(f):
            continue
        assert not evaluate_invariants(f).is_nullcone
        checked += 1


def test_sextic_nullcone_example():
    f = product_form(*([(1, -1)] * 4 + [(1, 1)] * 2))
    assert evaluate_invariants(f).is_nullcone


def test_integrality(rng):
    for d in (4, 5):
        for _ in range(20):
            values = evaluate_invariants(random_integral_form(rng, d)).values
            assert all(v.denominator == 1 for v in values)
    for _ in range(50):
        values = evaluate_invariants(random_integral_form(rng, 6)).values
        assert (20 * values[0]).denominator == 1
        assert all(v.denominator == 1 for v in values[1:])
