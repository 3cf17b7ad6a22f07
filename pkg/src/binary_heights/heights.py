"""
Heights of binary forms over Q.

Naive and moduli heights are Weil heights of exact points and come back as
HeightValue (exact finite and archimedean parts). Everything that depends on the
complex roots (Chow norm, Chow height, the archimedean half of the invariant
height) is a float computed from the Chow representative c * prod (x y_i - y x_i)^b_i.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

import mpmath

from config import config

from .binary_forms import (
    BinaryForm,
    RootDivisor,
    automorphism_group,
    discriminant,
    is_semistable,
    is_squarefree,
    roots,
)
from .chow_optimizer import minimize_chow_norm
from .errors import DomainError, UnstableFormError, UnsupportedDegreeError
from .exact_arith import LogValue, Place, factorize_rational, log_abs, sum_logs
from .invariants import InvariantPoint, evaluate_invariants
from .weighted_projective import HeightValue, standard_height

logger = logging.getLogger(__name__)

# cih(x^3 - y^3) under an alternative normalization of the invariant height.
CIH_POWER_FORM_REFERENCE = 0.215

# 2^28 * 3^9 * 5^5 * 7 * 11 * 13 * 17 * 43: moduli-vs-minimal constant for sextics.
SEXTIC_MODULI_CONSTANT = 2**28 * 3**9 * 5**5 * 7 * 11 * 13 * 17 * 43


def _log(value: float, bits: int) -> float:
    if bits > 53:
        with mpmath.workprec(bits):
            return float(mpmath.log(mpmath.mpf(value)))
    return math.log(value)


def _log_abs_float(q: Fraction) -> float:
    """log|q| in floating point, valid for rationals far outside the float range."""
    return math.log(abs(q.numerator)) - math.log(q.denominator)


# ============================================================================
# Naive and moduli heights
# ============================================================================


def naive_height(f: BinaryForm) -> HeightValue:
    """Weil height of the coefficient point [a_0 : ... : a_d]."""
    f.require_exact("naive_height")
    return standard_height(f.coefficients)


def moduli_height(f: BinaryForm, xi: Optional[InvariantPoint] = None) -> HeightValue:
    """Weil height of the unweighted invariant point [xi_0 : ... : xi_n]."""
    xi = xi or evaluate_invariants(f)
    return standard_height(xi.point().coordinates)


# ============================================================================
# Chow norm and Chow height
# ============================================================================


@dataclass(frozen=True)
class ChowNorm:
    """log ||s||_Ch(f) = log|c| - sum (1/2) b_i log(|x_i|^2 + |y_i|^2)."""

    scalar_term: float
    root_terms: Tuple[float, ...]

    @property
    def log_norm(self) -> float:
        return self.scalar_term - math.fsum(self.root_terms)

    @property
    def height(self) -> float:
        return -self.log_norm


def chow_norm(div: RootDivisor, precision_bits: Optional[int] = None) -> ChowNorm:
    bits = precision_bits or config.precision.precision_bits
    c = div.leading_scalar
    if isinstance(c, Fraction):
        scalar = LogValue.log_of(c).to_float(bits)
    else:
        scalar = _log(abs(complex(c)), bits)
    root_terms = tuple(
        0.5 * r.multiplicity * _log(r.norm_squared(), bits) for r in div.roots
    )
    return ChowNorm(scalar_term=scalar, root_terms=root_terms)


def chow_height(f: BinaryForm, div: Optional[RootDivisor] = None) -> float:
    """chowh(f) = (1/2) sum b_i log(|x_i|^2 + |y_i|^2) - log|c|."""
    return chow_norm(div or roots(f)).height


# ============================================================================
# Invariant heights
# ============================================================================


@dataclass(frozen=True)
class CihDecomposition:
    """cih split into its exact finite part and the two archimedean floats."""

    finite: LogValue
    archimedean_max: float
    chow_log_norm: float

    @property
    def value(self) -> float:
        return self.finite.to_float() + self.archimedean_max + self.chow_log_norm

    @property
    def naive(self) -> float:
        return self.finite.to_float() + self.archimedean_max


def _require_semistable(f: BinaryForm, xi: InvariantPoint) -> None:
    if xi.is_nullcone or not is_semistable(f):
        raise UnstableFormError(f"{f} is not semistable: its invariant height is infinite")


def _invariant_finite_part(xi: InvariantPoint) -> LogValue:
    """sum_p log max_j |xi_j|_p^(1/q_j), each log|xi_j|_p taken from its factorization."""
    primes = set()
    nonzero = [(v, q) for v, q in zip(xi.values, xi.weights.q) if v != 0]
    for v, _ in nonzero:
        primes.update(factorize_rational(v).primes)
    parts = []
    for p in sorted(primes):
        place = Place.finite(p)
        best = max(log_abs(v, place).coefficient(p) / q for v, q in nonzero)
        parts.append(LogValue.log_prime(p, best))
    return sum_logs(parts)


def _invariant_archimedean_max(xi: InvariantPoint) -> float:
    return max(_log_abs_float(v) / q for v, q in zip(xi.values, xi.weights.q) if v != 0)


def cih_decomposition(
    f: BinaryForm,
    xi: Optional[InvariantPoint] = None,
    div: Optional[RootDivisor] = None,
) -> CihDecomposition:
    """Invariant height with the Chow metric at infinity.

    cih(f) = sum_p log max_j |xi_j|_p^(1/q_j) + log max_j |xi_j|^(1/q_j) + log ||s||_Ch(f)
    """
    if f.degree not in (3, 4, 5, 6):
        raise UnsupportedDegreeError(f.degree, "3..6")
    xi = xi or evaluate_invariants(f)
    _require_semistable(f, xi)
    return CihDecomposition(
        finite=_invariant_finite_part(xi),
        archimedean_max=_invariant_archimedean_max(xi),
        chow_log_norm=chow_norm(div or roots(f)).log_norm,
    )


def cih_naive(f: BinaryForm, xi: Optional[InvariantPoint] = None) -> float:
    """Finite part plus the archimedean max |xi_j|^(1/q_j), without the Chow term."""
    xi = xi or evaluate_invariants(f)
    _require_semistable(f, xi)
    return _invariant_finite_part(xi).to_float() + _invariant_archimedean_max(xi)


def cih_closed_form_terms(d: int, a0: Fraction) -> Tuple[float, float]:
    """The two terms of the power-form expression for x^d - a0 y^d."""
    if d < 3:
        raise UnsupportedDegreeError(d, "degree >= 3")
    a0 = Fraction(a0)
    if a0 == 0:
        raise DomainError("a0 must be nonzero")
    r = 2 * d - 2
    first = (d * math.log(d) + (d - 1) * _log_abs_float(a0)) / r
    # log(1 + e^L) with L = log|a0|^(2/d), finite for any a0
    L = 2 / d * _log_abs_float(a0)
    softplus = L + math.log1p(math.exp(-L)) if L > 0 else math.log1p(math.exp(L))
    second = d / (2 * r) * softplus
    return first, second


def cih_closed_form(d: int, a0: Fraction) -> float:
    """(1/(2d-2)) log(d^d |a0|^(d-1)) - (d/(2(2d-2))) log(1 + |a0|^(2/d))."""
    first, second = cih_closed_form_terms(d, a0)
    return first - second


@dataclass(frozen=True)
class CubicClosedForm:
    """Both coefficient readings of the cubic closed form."""

    statement: float
    proof: float

    @property
    def differ(self) -> bool:
        return abs(self.statement - self.proof) > 1e-12


def cih_cubic_closed_form(f: BinaryForm, div: Optional[RootDivisor] = None) -> CubicClosedForm:
    """(1/4) sum_p log|Δ|_p + k (log|Δ| - (1/2) sum log(|x_i|^2 + |y_i|^2)), k = 1/2 or 1/4."""
    if f.degree != 3:
        raise UnsupportedDegreeError(f.degree, "3")
    if not f.is_integral:
        raise DomainError("the cubic closed form needs integral coefficients")
    delta = discriminant(f)
    if delta == 0:
        raise UnstableFormError(f"{f} has a repeated root (discriminant 0)")
    div = div or roots(f)
    finite = -_log_abs_float(delta)  # sum_p log|Δ|_p by the product formula
    bracket = _log_abs_float(delta) - 0.5 * math.fsum(
        r.multiplicity * math.log(r.norm_squared()) for r in div.roots
    )
    return CubicClosedForm(statement=finite / 4 + bracket / 2, proof=finite / 4 + bracket / 4)


def cih_automorphism(f: BinaryForm) -> float:
    """(1/(2d-2)) (log|Δ| - sum over root orbits of min_M log prod ||M p||^2).

    Raises DivergenceError when an orbit is a single root.
    """
    if not is_squarefree(f) or f.degree < 3:
        raise DomainError("orbit heights need a squarefree form of degree >= 3")
    group = automorphism_group(f)
    result = minimize_chow_norm(group.divisor, orbit_partition=group.orbits)
    r = 2 * f.degree - 2
    return (_log_abs_float(discriminant(f)) - result.min_value) / r


# ============================================================================
# GIT height of the zero-cycle
# ============================================================================


def git_height_point(f: BinaryForm, div: Optional[RootDivisor] = None) -> float:
    """(1/d) [sum_p log max_i |a_i|_p + log|c| + (1/2) sum b_i log(|x_i|^2 + |y_i|^2)].

    Invariant under f -> lam f by the product formula.
    """
    f.require_exact("git_height_point")
    div = div or roots(f)
    finite = naive_height(f).finite
    norm = chow_norm(div)
    return (finite.to_float() + norm.scalar_term + math.fsum(norm.root_terms)) / f.degree


def moduli_minimal_log_ratio(moduli: HeightValue, minimal_upper: float, weights_max: int) -> float:
    """log H(xi) - q_max log H~_upper: log of the ratio against the sextic constant."""
    return moduli.value - weights_max * minimal_upper


__all__: List[str] = [
    "CIH_POWER_FORM_REFERENCE",
    "SEXTIC_MODULI_CONSTANT",
    "ChowNorm",
    "CihDecomposition",
    "CubicClosedForm",
    "chow_height",
    "chow_norm",
    "cih_automorphism",
    "cih_closed_form",
    "cih_closed_form_terms",
    "cih_cubic_closed_form",
    "cih_decomposition",
    "cih_naive",
    "git_height_point",
    "moduli_height",
    "moduli_minimal_log_ratio",
    "naive_height",
]
