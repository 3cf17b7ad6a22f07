import pytest

from binary_heights.binary_forms import BinaryForm, Matrix2, act, primitive_part
from binary_heights.errors import NotPrimeError, UnstableFormError
from binary_heights.heights import naive_height
from binary_heights.reduction import (
    GENERATORS,
    _apply_generator,
    bad_primes,
    local_reduction,
    minimal_height_search,
)

from conftest import random_integral_form


@pytest.mark.parametrize("name", sorted(GENERATORS))
def test_generators_match_their_matrices(name):
    f = BinaryForm((3, -1, 4, 1, -5))
    moved = _apply_generator(f.integer_coefficients(), name)
    assert act(f, Matrix2(*GENERATORS[name])).coefficients == moved


def test_reduced_form_stays_put(cubic):
    result = minimal_height_search(cubic)
    assert result.upper == 0
    assert result.word == ()
    assert result.matrix == Matrix2.identity()
    assert not result.improved


@pytest.mark.parametrize(
    "matrix",
    [Matrix2(1, 3, 0, 1), Matrix2(2, 1, 1, 1), Matrix2(1, 0, -2, 1), Matrix2(3, 1, 2, 1)],
)
def test_descent_recovers_reduced_model(cubic, matrix):
    f = act(cubic, matrix)
    result = minimal_height_search(f, word_length=8)
    assert result.upper == 0
    assert result.improved
    assert primitive_part(act(f, result.matrix))[0] == result.form


def test_search_never_exceeds_naive_height(rng):
    for _ in range(10):
        coeffs = tuple(int(a) for a in rng.integers(-30, 31, size=5))
        if not any(coeffs):
            continue
        f = BinaryForm(coeffs)
        result = minimal_height_search(f)
        assert result.upper <= naive_height(primitive_part(f)[0]).value + 1e-12
        assert result.nodes <= 1500
        narrow = minimal_height_search(f, node_budget=20)
        assert result.upper <= narrow.upper


def test_local_reduction_of_a_minimal_form(cubic):
    result = local_reduction(cubic, 3)
    assert not result.improved
    assert result.reduction_multiplicity == 3
    assert not result.semistable_reduction
    assert result.discriminant_valuation_before == result.discriminant_valuation_after == 3
    assert local_reduction(cubic, 5).semistable_reduction


def test_local_reduction_removes_a_cube():
    f = BinaryForm.power_form(3, 27)
    result = local_reduction(f, 3)
    assert result.improved
    assert result.model == BinaryForm.power_form(3)
    assert result.matrix == Matrix2(3, 0, 0, 1)
    assert result.steps[0].content_exponent == 3
    assert result.discriminant_valuation_before == 9
    assert result.discriminant_valuation_after == 3


def test_local_reduction_lowers_the_discriminant(rng):
    for _ in range(10):
        g = random_integral_form(rng, 3, bound=4)
        f = primitive_part(act(g, Matrix2(1, 0, 0, 2)))[0]
        result = local_reduction(f, 2)
        before, after = result.discriminant_valuation_before, result.discriminant_valuation_after
        if before is not None:
            assert after <= before
            assert before - after == sum(2 * (2 * s.content_exponent - 3) for s in result.steps)


def test_local_reduction_needs_a_prime(cubic):
    with pytest.raises(NotPrimeError):
        local_reduction(cubic, 4)


def test_bad_primes(cubic, unstable_cubic):
    assert bad_primes(cubic) == [3]
    assert bad_primes(BinaryForm((1, 2, 0, 1))) == [59]
    with pytest.raises(UnstableFormError):
        bad_primes(unstable_cubic)
    assert bad_primes(BinaryForm.power_form(4, 2)) == [2]
