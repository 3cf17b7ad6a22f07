"""
Weighted projective points over Q and their heights.

A point of P(q_0, ..., q_n) is a nonzero rational tuple modulo
lam * (x_0, ..., x_n) = (lam^q_0 x_0, ..., lam^q_n x_n). Heights are returned as
exact formal logarithms (see exact_arith.LogValue) with a float for reports.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import List, Optional, Sequence, Tuple, Union

from .errors import DomainError, PointOnDivisorError, ZeroValueError
from .exact_arith import (
    LogValue,
    Place,
    Rational,
    as_fraction,
    factorize,
    factorize_rational,
    log_abs,
    places_of,
    sum_logs,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Weights:
    """Positive integer weights q_0..q_n."""

    q: Tuple[int, ...]

    def __post_init__(self):
        q = tuple(int(w) for w in self.q)
        if not q:
            raise DomainError("at least one weight is required")
        if any(w <= 0 for w in q):
            raise DomainError(f"weights must be positive, got {q}")
        object.__setattr__(self, "q", q)

    @classmethod
    def unit(cls, count: int) -> "Weights":
        return cls((1,) * count)

    def __len__(self) -> int:
        return len(self.q)

    def __iter__(self):
        return iter(self.q)

    @property
    def n(self) -> int:
        return len(self.q) - 1

    @property
    def m(self) -> int:
        return reduce(math.lcm, self.q)

    @property
    def delta(self) -> int:
        return reduce(math.gcd, self.q)

    @property
    def is_well_formed(self) -> bool:
        """gcd of the weights with any one omitted is 1 (P(q_0) only for q_0 = 1)."""
        if len(self.q) == 1:
            return self.q[0] == 1
        return all(
            reduce(math.gcd, self.q[:i] + self.q[i + 1 :]) == 1 for i in range(len(self.q))
        )


@dataclass(frozen=True)
class WeightedPoint:
    """Rational coordinates with weights; not all coordinates zero."""

    coordinates: Tuple[Fraction, ...]
    weights: Weights

    def __post_init__(self):
        coords = tuple(as_fraction(x) for x in self.coordinates)
        weights = self.weights if isinstance(self.weights, Weights) else Weights(tuple(self.weights))
        if len(coords) != len(weights):
            raise DomainError(f"{len(coords)} coordinates for {len(weights)} weights")
        if all(x == 0 for x in coords):
            raise ZeroValueError("the zero tuple is not a weighted projective point")
        object.__setattr__(self, "coordinates", coords)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def projective(cls, coordinates: Sequence[Rational]) -> "WeightedPoint":
        """An ordinary projective point: all weights 1."""
        return cls(tuple(coordinates), Weights.unit(len(coordinates)))

    def nonzero(self) -> List[Tuple[Fraction, int]]:
        return [(x, q) for x, q in zip(self.coordinates, self.weights.q) if x != 0]

    def is_equivalent(self, other: "WeightedPoint") -> bool:
        """Equality up to lam * scaling."""
        return self.weights == other.weights and normalize(self) == normalize(other)


@dataclass(frozen=True)
class HeightValue:
    """A height split into its finite and archimedean contributions."""

    finite: LogValue
    archimedean: LogValue

    @property
    def exact(self) -> LogValue:
        return self.finite + self.archimedean

    @property
    def value(self) -> float:
        return self.exact.to_float()

    def __float__(self) -> float:
        return self.value


# ============================================================================
# Scaling and normalization
# ============================================================================


def scale(lam: Rational, x: WeightedPoint) -> WeightedPoint:
    """lam * x = (lam^q_j x_j)."""
    lam = as_fraction(lam)
    if lam == 0:
        raise ZeroValueError("scaling by 0 is not allowed")
    return WeightedPoint(
        tuple(lam**q * c for c, q in zip(x.coordinates, x.weights.q)), x.weights
    )


def normalize(x: WeightedPoint) -> WeightedPoint:
    """Integral representative with no lam > 1 such that lam^q_j divides every x_j.

    The overall sign is fixed by making the first nonzero coordinate of odd
    weight positive; points whose nonzero coordinates all have even weight
    keep their signs.
    """
    den = reduce(math.lcm, (c.denominator for c, _ in x.nonzero()), 1)
    y = scale(den, x) if den > 1 else x

    common = reduce(math.gcd, (c.numerator for c, _ in y.nonzero()), 0)
    lam = 1
    if common > 1:
        for p, _ in factorize(common):
            k = min(_int_valuation(c.numerator, p) // q for c, q in y.nonzero())
            lam *= p**k
    if lam > 1:
        y = scale(Fraction(1, lam), y)

    for c, q in y.nonzero():
        if q % 2 == 1:
            if c < 0:
                y = scale(-1, y)
            break
    return y


def _int_valuation(n: int, p: int) -> int:
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v


def veronese(x: WeightedPoint) -> WeightedPoint:
    """The ordinary projective point (x_j^(m/q_j))."""
    m = x.weights.m
    return WeightedPoint.projective([c ** (m // q) for c, q in zip(x.coordinates, x.weights.q)])


# ============================================================================
# Heights
# ============================================================================


def _finite_maximum(x: WeightedPoint, p: int) -> LogValue:
    """log max_j |x_j|_p^(1/q_j) = -min_j v_p(x_j)/q_j * log p."""
    exponents = []
    for c, q in x.nonzero():
        exponents.append(Fraction(factorize_rational(c).as_dict().get(p, 0), q))
    return LogValue.log_prime(p, -min(exponents))


def _archimedean_argmax(x: WeightedPoint) -> int:
    """Index maximizing |x_j|^(1/q_j), compared exactly via |x_i|^q_j vs |x_j|^q_i."""
    best: Optional[int] = None
    for j, (c, q) in enumerate(zip(x.coordinates, x.weights.q)):
        if c == 0:
            continue
        if best is None:
            best = j
            continue
        cb, qb = abs(x.coordinates[best]), x.weights.q[best]
        if abs(c) ** qb > cb**q:
            best = j
    return best


def _archimedean_maximum(x: WeightedPoint) -> LogValue:
    j = _archimedean_argmax(x)
    return LogValue.log_of(x.coordinates[j]) * Fraction(1, x.weights.q[j])


def place_maximum(x: WeightedPoint, place: Place) -> LogValue:
    """log max_j |x_j|_v^(1/q_j) at one place."""
    if place.is_finite:
        return _finite_maximum(x, place.prime)
    return _archimedean_maximum(x)


def _coordinate_primes(x: WeightedPoint) -> List[int]:
    primes = set()
    for c, _ in x.nonzero():
        primes.update(factorize_rational(c).primes)
    return sorted(primes)


def lwh(x: WeightedPoint) -> HeightValue:
    """Logarithmic moduli weighted height sum_v log max_j |x_j|_v^(1/q_j).

    The finite part runs over primes dividing a numerator or denominator of a
    coordinate; every other prime contributes log 1 = 0.
    """
    finite = sum_logs(_finite_maximum(x, p) for p in _coordinate_primes(x))
    return HeightValue(finite=finite, archimedean=_archimedean_maximum(x))


def standard_height(point: Union[WeightedPoint, Sequence[Rational]]) -> HeightValue:
    """Weil height of an ordinary projective point: lwh with unit weights."""
    if not isinstance(point, WeightedPoint):
        point = WeightedPoint.projective(point)
    elif any(q != 1 for q in point.weights.q):
        point = WeightedPoint.projective(point.coordinates)
    return lwh(point)


# ============================================================================
# Local heights for hyperplanes
# ============================================================================


def _linear_value(x: WeightedPoint, ell: Sequence[Rational]) -> Fraction:
    if len(ell) != len(x.coordinates):
        raise DomainError(f"linear form has {len(ell)} coefficients for {len(x.coordinates)} coordinates")
    value = sum((as_fraction(c) * v for c, v in zip(ell, x.coordinates)), Fraction(0))
    if value == 0:
        raise PointOnDivisorError(f"point {x.coordinates} lies on the hyperplane {tuple(ell)}")
    return value


def local_hyperplane_height(
    x: WeightedPoint,
    ell: Sequence[Rational],
    place: Place,
    weighted: bool = True,
) -> LogValue:
    """-(1/m) log(|l(x)|_v / max_j |x_j|_v^(1/q_j)).

    With weighted=False the point is read as an ordinary projective point and
    this is the Weil local height -log(|l(x)|_v / max_j |x_j|_v).
    """
    point = x if weighted else WeightedPoint.projective(x.coordinates)
    m = point.weights.m
    value = _linear_value(point, ell)
    return (place_maximum(point, place) - log_abs(value, place)) * Fraction(1, m)


def global_hyperplane_height(
    x: WeightedPoint, ell: Sequence[Rational], weighted: bool = True
) -> LogValue:
    """Sum of local_hyperplane_height over every place where it can be nonzero."""
    value = _linear_value(x, ell)
    support = places_of(list(x.coordinates) + [value])
    return sum_logs(local_hyperplane_height(x, ell, place, weighted) for place in support)


def faltings_height_PN(N: int) -> Fraction:
    """(1/2) sum_(i=1..N) sum_(j=1..i) 1/j."""
    if N < 0:
        raise DomainError("N must be nonnegative")
    total = Fraction(0)
    harmonic = Fraction(0)
    for i in range(1, N + 1):
        harmonic += Fraction(1, i)
        total += harmonic
    return total / 2


def weighted_bound_margin(lwh_value: float, d: int, m: int, N: int) -> float:
    """lwh + (d/(m(N+1))) h(P^N); nonnegative whenever lwh is."""
    return lwh_value + d / (m * (N + 1)) * float(faltings_height_PN(N))
