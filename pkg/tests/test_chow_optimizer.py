import math

import numpy as np
import pytest

from binary_heights.binary_forms import BinaryForm, RootDivisor, RootPoint, is_stable, roots
from binary_heights.chow_optimizer import HermitianCoset, chow_objective, minimize_chow_norm
from binary_heights.errors import DivergenceError, DomainError

from conftest import LOG2, product_form, random_integral_form


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_power_forms_are_balanced(d):
    result = minimize_chow_norm(roots(BinaryForm.power_form(d)))
    assert result.min_value == pytest.approx(d * LOG2, abs=1e-6)
    assert result.iterations <= 200
    assert result.coset.is_identity(1e-6)


def test_antipodal_pair():
    div = RootDivisor((RootPoint(1, 0), RootPoint(0, 1)))
    result = minimize_chow_norm(div)
    assert result.min_value == pytest.approx(0, abs=1e-12)
    assert result.coset.is_identity()
    assert result.iterations == 0


def test_cube_roots_of_unity():
    omega = complex(math.cos(2 * math.pi / 3), math.sin(2 * math.pi / 3))
    div = RootDivisor((RootPoint(1, 1), RootPoint(omega, 1), RootPoint(omega.conjugate(), 1)))
    result = minimize_chow_norm(div)
    assert result.min_value == pytest.approx(3 * LOG2, abs=1e-10)
    assert result.coset.is_identity()


def test_unbalanced_configuration_moves():
    div = RootDivisor((RootPoint(0, 1), RootPoint(1, 1), RootPoint(2, 1), RootPoint(5, 1)))
    start = chow_objective(np.eye(2), div.points(), np.ones(4))
    result = minimize_chow_norm(div)
    assert result.min_value < start
    assert result.residual < 1e-8
    assert not result.coset.is_identity()


def test_random_stable_quartics_balance(rng):
    checked = 0
    while checked < 5:
        f = random_integral_form(rng, 4)
        if not is_stable(f):
            continue
        result = minimize_chow_norm(roots(f))
        assert result.residual < 1e-8
        checked += 1


def test_unstable_configuration_diverges(unstable_cubic):
    with pytest.raises(DivergenceError):
        minimize_chow_norm(roots(unstable_cubic))


def test_real_restriction():
    f = product_form((1, -1), (1, 1), (1, -2), (1, 2))
    complex_result = minimize_chow_norm(roots(f))
    real_result = minimize_chow_norm(roots(f), real=True)
    assert real_result.min_value == pytest.approx(complex_result.min_value, abs=1e-8)
    with pytest.raises(DomainError):
        minimize_chow_norm(roots(BinaryForm((1, 0, 1))), real=True)


def test_orbit_partition():
    div = roots(BinaryForm.power_form(4))
    whole = minimize_chow_norm(div)
    split = minimize_chow_norm(div, orbit_partition=[[0, 1, 2, 3]])
    assert split.min_value == pytest.approx(whole.min_value, abs=1e-10)
    with pytest.raises(DomainError):
        minimize_chow_norm(div, orbit_partition=[[0, 1], [1, 2, 3]])
    with pytest.raises(DivergenceError):
        minimize_chow_norm(div, orbit_partition=[[0], [1, 2, 3]])


def test_coefficient_objective(cubic):
    result = minimize_chow_norm(roots(cubic), objective="coeff", form=cubic)
    assert result.objective == "coeff"
    assert result.min_value <= 1e-12
    with pytest.raises(DomainError):
        minimize_chow_norm(roots(cubic), objective="coeff")
    with pytest.raises(DomainError):
        minimize_chow_norm(roots(cubic), objective="sup")


def test_hermitian_coset_validation():
    assert HermitianCoset.identity().is_identity()
    with pytest.raises(DomainError):
        HermitianCoset(((2, 0), (0, 2)))
    with pytest.raises(DomainError):
        HermitianCoset(((1, 1j), (1j, 1)))
    with pytest.raises(DomainError):
        HermitianCoset(((-1, 0), (0, -1)))
    P = HermitianCoset.from_matrix(np.array([[2, 1], [0, 0.5]]))
    assert np.linalg.det(P.as_array()).real == pytest.approx(1)
