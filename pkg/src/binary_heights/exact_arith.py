"""
Exact rational arithmetic, factorization, p-adic valuations and formal logarithms.

Every non-archimedean height in the package reduces to valuations of rationals,
so the pieces here are exact: factorizations are deterministic, valuations are
integers (or the INFINITY sentinel for zero) and logarithms are kept as formal
rational combinations of log p until a report needs a float.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Optional, Tuple, Union

import mpmath
import numpy as np

from .errors import DomainError, NotPrimeError, ZeroValueError

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]

TRIAL_DIVISION_LIMIT = 10**6

# Deterministic Miller-Rabin witnesses for every n < 2**64.
_MR_BASES_64 = (2, 325, 9375, 28178, 450775, 9780504, 1795265022)
_MR_BASES_LARGE = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def as_fraction(value: Union[int, str, Fraction]) -> Fraction:
    """Coerce an int, Fraction or decimal/ratio string to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise DomainError(f"not a rational number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError as e:
            raise DomainError(f"not a rational number: {value!r}") from e
    raise DomainError(f"not a rational number: {value!r}")


# ============================================================================
# Primes
# ============================================================================


@lru_cache(maxsize=1)
def small_primes() -> np.ndarray:
    """Primes below TRIAL_DIVISION_LIMIT by an Eratosthenes sieve."""
    sieve = np.ones(TRIAL_DIVISION_LIMIT, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(TRIAL_DIVISION_LIMIT - 1) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).astype(np.int64)


def _miller_rabin_round(n: int, d: int, s: int, a: int) -> bool:
    x = pow(a, d, n)
    if x in (1, n - 1):
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin primality test, deterministic for n < 2**64."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases = _MR_BASES_64 if n < 2**64 else _MR_BASES_LARGE
    for a in bases:
        a %= n
        if a == 0:
            continue
        if not _miller_rabin_round(n, d, s, a):
            return False
    return True


def _pollard_brent(n: int) -> int:
    """Return a nontrivial factor of the odd composite n.

    Brent's cycle detection with batched gcds; the polynomial constant is
    stepped deterministically so results never depend on a random state.
    """
    if n % 2 == 0:
        return 2
    batch = 128
    for c in range(1, 10_000):
        y, r, q = 2, 1, 1
        g = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(batch, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += batch
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        logger.debug(f"Pollard-Brent constant c={c} failed on {n}, retrying")
    raise DomainError(f"could not split composite {n}")


# ============================================================================
# Factorization
# ============================================================================


@dataclass(frozen=True)
class Factorization:
    """Signed prime factorization: sign * prod(p**e).

    Exponents are nonzero and may be negative for rationals; primes strictly increase.
    """

    sign: int
    factors: Tuple[Tuple[int, int], ...] = ()

    def __iter__(self) -> Iterator[Tuple[int, int]]:
        return iter(self.factors)

    def __len__(self) -> int:
        return len(self.factors)

    def as_dict(self) -> Dict[int, int]:
        return dict(self.factors)

    @property
    def primes(self) -> Tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def value(self) -> Fraction:
        """Reassemble the factored rational."""
        result = Fraction(self.sign)
        for p, e in self.factors:
            result *= Fraction(p) ** e
        return result


def _trial_divide(n: int, counts: Dict[int, int]) -> int:
    """Strip prime factors below TRIAL_DIVISION_LIMIT; return the cofactor."""
    primes = small_primes()
    bound = min(TRIAL_DIVISION_LIMIT, math.isqrt(n) + 1)
    candidates = primes[: int(np.searchsorted(primes, bound, side="right"))]
    if n < 2**63:
        hits = candidates[np.int64(n) % candidates == 0]
        divisors = (int(p) for p in hits)
    else:
        divisors = (int(p) for p in candidates if n % int(p) == 0)
    for p in divisors:
        while n % p == 0:
            n //= p
            counts[p] = counts.get(p, 0) + 1
    return n


def _split_large(n: int, counts: Dict[int, int]) -> None:
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_probable_prime(m):
            counts[m] = counts.get(m, 0) + 1
            continue
        root = math.isqrt(m)
        if root * root == m:
            stack.extend((root, root))
            continue
        d = _pollard_brent(m)
        stack.extend((d, m // d))


@lru_cache(maxsize=65536)
def _factor_positive(n: int) -> Tuple[Tuple[int, int], ...]:
    counts: Dict[int, int] = {}
    cofactor = _trial_divide(n, counts)
    if cofactor > 1:
        if cofactor < TRIAL_DIVISION_LIMIT**2:
            # no factor below the trial limit, so the cofactor is prime
            counts[cofactor] = counts.get(cofactor, 0) + 1
        else:
            _split_large(cofactor, counts)
    return tuple(sorted(counts.items()))


def factorize(n: int) -> Factorization:
    """Factor a nonzero integer. The sign is carried separately.

    Trial division by the primes below 10**6, then Pollard-Brent on the cofactor
    with Miller-Rabin checks (certified below 2**64).
    """
    if isinstance(n, Fraction):
        if n.denominator != 1:
            raise DomainError(f"factorize expects an integer, got {n}")
        n = n.numerator
    if n == 0:
        raise ZeroValueError("cannot factor 0")
    return Factorization(sign=1 if n > 0 else -1, factors=_factor_positive(abs(n)))


def factorize_rational(q: Rational) -> Factorization:
    """Factor a nonzero rational; denominator primes get negative exponents."""
    q = as_fraction(q)
    if q == 0:
        raise ZeroValueError("cannot factor 0")
    num = dict(_factor_positive(abs(q.numerator)))
    for p, e in _factor_positive(q.denominator):
        num[p] = num.get(p, 0) - e
    return Factorization(sign=1 if q > 0 else -1, factors=tuple(sorted(num.items())))


# ============================================================================
# Places and valuations
# ============================================================================


class Valuation(Enum):
    """Sentinel for v_p(0)."""

    INFINITY = "infinity"


class PlaceKind(str, Enum):
    FINITE = "finite"
    ARCHIMEDEAN = "archimedean"


@dataclass(frozen=True)
class Place:
    """A place of Q: a prime p or the archimedean absolute value."""

    kind: PlaceKind
    prime: Optional[int] = None

    def __post_init__(self):
        if self.kind == PlaceKind.FINITE:
            if self.prime is None or not is_probable_prime(self.prime):
                raise NotPrimeError(f"finite place needs a prime, got {self.prime}")
        elif self.prime is not None:
            raise DomainError("the archimedean place carries no prime")

    @classmethod
    def finite(cls, p: int) -> "Place":
        return cls(PlaceKind.FINITE, p)

    @classmethod
    def archimedean(cls) -> "Place":
        return cls(PlaceKind.ARCHIMEDEAN)

    @property
    def is_finite(self) -> bool:
        return self.kind == PlaceKind.FINITE

    def __str__(self) -> str:
        return f"p={self.prime}" if self.is_finite else "inf"


ARCHIMEDEAN = Place.archimedean()


def _require_prime(p: int) -> None:
    if not is_probable_prime(p):
        raise NotPrimeError(f"{p} is not prime")


def valuation(q: Rational, p: int) -> Union[int, Valuation]:
    """The p-adic valuation, with |q|_p = p**(-v_p(q)).

    Returns Valuation.INFINITY for q = 0.
    """
    _require_prime(p)
    q = as_fraction(q)
    if q == 0:
        return Valuation.INFINITY
    v = 0
    num, den = q.numerator, q.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


# ============================================================================
# Formal logarithms
# ============================================================================


@dataclass(frozen=True)
class LogValue:
    """Formal Q-linear combination sum(c_p * log p) with sorted primes and nonzero c_p."""

    terms: Tuple[Tuple[int, Fraction], ...] = ()

    @classmethod
    def zero(cls) -> "LogValue":
        return cls()

    @classmethod
    def from_mapping(cls, coeffs: Dict[int, Rational]) -> "LogValue":
        cleaned = tuple(
            (p, Fraction(c)) for p, c in sorted(coeffs.items()) if Fraction(c) != 0
        )
        return cls(cleaned)

    @classmethod
    def log_prime(cls, p: int, coeff: Rational = 1) -> "LogValue":
        return cls.from_mapping({p: coeff})

    @classmethod
    def log_of(cls, q: Rational) -> "LogValue":
        """log|q| for a nonzero rational, exactly."""
        return cls.from_mapping({p: e for p, e in factorize_rational(q)})

    def as_dict(self) -> Dict[int, Fraction]:
        return dict(self.terms)

    def coefficient(self, p: int) -> Fraction:
        return self.as_dict().get(p, Fraction(0))

    @property
    def primes(self) -> Tuple[int, ...]:
        return tuple(p for p, _ in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "LogValue") -> "LogValue":
        if not isinstance(other, LogValue):
            return NotImplemented
        merged = self.as_dict()
        for p, c in other.terms:
            merged[p] = merged.get(p, Fraction(0)) + c
        return LogValue.from_mapping(merged)

    def __neg__(self) -> "LogValue":
        return LogValue(tuple((p, -c) for p, c in self.terms))

    def __sub__(self, other: "LogValue") -> "LogValue":
        if not isinstance(other, LogValue):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar: Rational) -> "LogValue":
        s = as_fraction(scalar)
        return LogValue.from_mapping({p: c * s for p, c in self.terms})

    __rmul__ = __mul__

    def to_float(self, bits: int = 53) -> float:
        """Evaluate; bits > 53 sums with mpmath at that working precision."""
        if bits > 53:
            return float(self.to_mpf(bits))
        return math.fsum(float(c) * math.log(p) for p, c in self.terms)

    def to_mpf(self, bits: int) -> "mpmath.mpf":
        with mpmath.workprec(bits):
            return mpmath.fsum(
                mpmath.mpf(c.numerator) / c.denominator * mpmath.log(p) for p, c in self.terms
            )

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*log({p})" for p, c in self.terms)


def sum_logs(values: Iterable[LogValue]) -> LogValue:
    total = LogValue.zero()
    for value in values:
        total = total + value
    return total


def log_abs(q: Rational, place: Place) -> LogValue:
    """log|q|_place as an exact formal logarithm.

    At a prime p this is -v_p(q)*log p; at the archimedean place it is
    log|q| written through the factorization of q.
    """
    q = as_fraction(q)
    if q == 0:
        raise ZeroValueError("log|0| is -infinity")
    if place.is_finite:
        return LogValue.log_prime(place.prime, -valuation(q, place.prime))
    return LogValue.log_of(q)


def places_of(values: Iterable[Rational]) -> List[Place]:
    """Primes dividing any numerator or denominator, plus the archimedean place."""
    primes = set()
    for value in values:
        q = as_fraction(value)
        if q != 0:
            primes.update(factorize_rational(q).primes)
    return [Place.finite(p) for p in sorted(primes)] + [ARCHIMEDEAN]


def product_formula_defect(q: Rational) -> LogValue:
    """sum over all places of log|q|_v; identically the zero LogValue."""
    q = as_fraction(q)
    if q == 0:
        raise ZeroValueError("the product formula needs a nonzero rational")
    return sum_logs(log_abs(q, place) for place in places_of([q]))
