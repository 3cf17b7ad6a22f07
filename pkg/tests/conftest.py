import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from binary_heights.binary_forms import BinaryForm, Matrix2  # noqa: E402

LOG2 = math.log(2)
LOG3 = math.log(3)


def product_form(*factors):
    """Multiply linear factors (alpha, beta) meaning alpha*x + beta*y."""
    coeffs = [Fraction(1)]
    for alpha, beta in factors:
        linear = [Fraction(beta), Fraction(alpha)]
        out = [Fraction(0)] * (len(coeffs) + 1)
        for i, a in enumerate(coeffs):
            for j, b in enumerate(linear):
                out[i + j] += a * b
        coeffs = out
    return BinaryForm(tuple(coeffs))


def random_sl2z(rng, bound=10):
    """A product of elementary matrices with entries bounded by `bound`."""
    while True:
        M = Matrix2.identity()
        for _ in range(int(rng.integers(1, 5))):
            k = int(rng.integers(-2, 3))
            E = Matrix2(1, k, 0, 1) if rng.integers(2) else Matrix2(1, 0, k, 1)
            M = M @ E
        if M.max_entry() <= bound:
            return M


def random_integral_form(rng, degree, bound=5):
    while True:
        coeffs = tuple(int(a) for a in rng.integers(-bound, bound + 1, size=degree + 1))
        if any(coeffs):
            return BinaryForm(coeffs)


# fixtures


@pytest.fixture
def rng():
    yield np.random.default_rng(20240601)


@pytest.fixture
def cubic():
    yield BinaryForm.power_form(3)


@pytest.fixture
def unstable_cubic():
    # x^2 y
    yield BinaryForm((0, 0, 1, 0))
