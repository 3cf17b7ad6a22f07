"""
Binary forms over Q and their root divisors.

A form of degree d is stored by its coefficients a_0..a_d where a_i multiplies
x^i y^(d-i), so the coefficient of x^d is a_d. Rational forms carry Fraction
coefficients; forms rebuilt from numerical roots carry complex ones and only
support the numerical operations.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Dict, List, Optional, Sequence, Tuple, Union

import mpmath
import numpy as np
import sympy

from config import config

from .errors import (
    DomainError,
    NonPrimitiveError,
    NotSquarefreeError,
    NumericalError,
    RootFindingError,
    SingularMatrixError,
    UnsupportedDegreeError,
    ZeroFormError,
)
from .exact_arith import as_fraction, is_probable_prime

logger = logging.getLogger(__name__)

Number = Union[Fraction, complex]

_T = sympy.Symbol("t")


def _coerce(value) -> Number:
    if isinstance(value, (Fraction, int, str)) and not isinstance(value, bool):
        return as_fraction(value)
    if isinstance(value, (float, complex, np.floating, np.complexfloating)):
        return complex(value)
    raise DomainError(f"unsupported coefficient {value!r}")


def _poly_mul(p: Sequence[Number], q: Sequence[Number]) -> List[Number]:
    """Multiply coefficient lists indexed by the power of x."""
    out: List[Number] = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def _poly_pow(p: Sequence[Number], n: int) -> List[Number]:
    result: List[Number] = [Fraction(1)]
    for _ in range(n):
        result = _poly_mul(result, p)
    return result


# ============================================================================
# Matrices
# ============================================================================


@dataclass(frozen=True)
class Matrix2:
    """The matrix [[a, b], [c, d]] acting by f -> f(ax + by, cx + dy)."""

    a: Number
    b: Number
    c: Number
    d: Number

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, _coerce(getattr(self, name)))
        if self.det == 0:
            raise SingularMatrixError(f"singular matrix {self.rows()}")

    @classmethod
    def identity(cls) -> "Matrix2":
        return cls(1, 0, 0, 1)

    @classmethod
    def diagonal(cls, s: Number, t: Number) -> "Matrix2":
        return cls(s, 0, 0, t)

    @property
    def det(self) -> Number:
        return self.a * self.d - self.b * self.c

    @property
    def is_exact(self) -> bool:
        return all(isinstance(v, Fraction) for v in (self.a, self.b, self.c, self.d))

    @property
    def is_sl2(self) -> bool:
        return self.det == 1

    def rows(self) -> Tuple[Tuple[Number, Number], Tuple[Number, Number]]:
        return ((self.a, self.b), (self.c, self.d))

    def __matmul__(self, other: "Matrix2") -> "Matrix2":
        return Matrix2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "Matrix2":
        det = self.det
        return Matrix2(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def max_entry(self) -> Fraction:
        return max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))

    def as_array(self) -> np.ndarray:
        return np.array([[complex(self.a), complex(self.b)], [complex(self.c), complex(self.d)]])

    def __str__(self) -> str:
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


# ============================================================================
# Forms
# ============================================================================


@dataclass(frozen=True)
class BinaryForm:
    """f(x, y) = sum a_i x^i y^(d-i), not identically zero."""

    coefficients: Tuple[Number, ...]

    def __post_init__(self):
        coeffs = tuple(_coerce(a) for a in self.coefficients)
        if len(coeffs) < 2:
            raise UnsupportedDegreeError(len(coeffs) - 1, "degree >= 1")
        if all(a == 0 for a in coeffs):
            raise ZeroFormError("the zero form is not a binary form")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def from_coefficients(cls, coefficients: Sequence) -> "BinaryForm":
        return cls(tuple(coefficients))

    @classmethod
    def power_form(cls, d: int, a0: Union[int, Fraction] = 1) -> "BinaryForm":
        """x^d - a0*y^d."""
        return cls((-as_fraction(a0),) + (0,) * (d - 1) + (1,))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def is_exact(self) -> bool:
        return all(isinstance(a, Fraction) for a in self.coefficients)

    @property
    def is_integral(self) -> bool:
        return self.is_exact and all(a.denominator == 1 for a in self.coefficients)

    def scale(self, lam: Number) -> "BinaryForm":
        lam = _coerce(lam)
        return BinaryForm(tuple(lam * a for a in self.coefficients))

    def __neg__(self) -> "BinaryForm":
        return self.scale(-1)

    def integer_coefficients(self) -> Tuple[int, ...]:
        if not self.is_integral:
            raise DomainError(f"form {self} is not integral")
        return tuple(a.numerator for a in self.coefficients)

    def sympy_poly(self) -> sympy.Poly:
        """f(t, 1) as a polynomial over QQ."""
        self.require_exact("sympy_poly")
        return sympy.Poly(
            [sympy.Rational(a.numerator, a.denominator) for a in reversed(self.coefficients)],
            _T,
            domain=sympy.QQ,
        )

    def require_exact(self, operation: str) -> None:
        if not self.is_exact:
            raise DomainError(f"{operation} needs rational coefficients")

    def __str__(self) -> str:
        return format_form(self)


def format_form(f: BinaryForm) -> str:
    """Render in the polynomial syntax accepted by the parser."""
    d = f.degree
    parts: List[str] = []
    for i in range(d, -1, -1):
        a = f.coefficients[i]
        if a == 0:
            continue
        monomial = "*".join(
            s for s in (_power("x", i), _power("y", d - i)) if s
        )
        if isinstance(a, complex):
            coeff = f"({a.real:.12g}{a.imag:+.12g}j)"
            parts.append(f"+ {coeff}*{monomial}" if monomial else f"+ {coeff}")
            continue
        sign = "-" if a < 0 else "+"
        mag = abs(a)
        if mag == 1 and monomial:
            body = monomial
        elif monomial:
            body = f"{mag}*{monomial}"
        else:
            body = str(mag)
        parts.append(f"{sign} {body}")
    text = " ".join(parts)
    if text.startswith("+ "):
        text = text[2:]
    elif text.startswith("- "):
        text = "-" + text[2:]
    return text


def _power(var: str, e: int) -> str:
    if e == 0:
        return ""
    return var if e == 1 else f"{var}^{e}"


def evaluate(f: BinaryForm, x: Number, y: Number) -> Number:
    """f(x, y) = sum a_i x^i y^(d-i)."""
    d = f.degree
    total: Number = 0
    for i, a in enumerate(f.coefficients):
        if a != 0:
            total += a * x**i * y ** (d - i)
    return total


def act(f: BinaryForm, M: Matrix2) -> BinaryForm:
    """f^M(x, y) = f(ax + by, cx + dy).

    Right action: act(f, M1 @ M2) == act(act(f, M1), M2).
    """
    d = f.degree
    u = [M.b, M.a]  # ax + by, indexed by power of x
    v = [M.d, M.c]  # cx + dy
    u_pows = [[Fraction(1)]]
    v_pows = [[Fraction(1)]]
    for _ in range(d):
        u_pows.append(_poly_mul(u_pows[-1], u))
        v_pows.append(_poly_mul(v_pows[-1], v))
    out: List[Number] = [Fraction(0)] * (d + 1)
    for i, a in enumerate(f.coefficients):
        if a == 0:
            continue
        term = _poly_mul(u_pows[i], v_pows[d - i])
        for k, t in enumerate(term):
            out[k] += a * t
    return BinaryForm(tuple(out))


def content(f: BinaryForm) -> Fraction:
    """Positive rational c with f / c primitive integral."""
    f.require_exact("content")
    den = reduce(math.lcm, (a.denominator for a in f.coefficients), 1)
    num = reduce(math.gcd, ((a * den).numerator for a in f.coefficients), 0)
    return Fraction(num, den)


def primitive_part(f: BinaryForm) -> Tuple[BinaryForm, Fraction]:
    """Split f = content * primitive with the top nonzero coefficient positive."""
    c = content(f)
    top = next(a for a in reversed(f.coefficients) if a != 0)
    if top < 0:
        c = -c
    return BinaryForm(tuple(a / c for a in f.coefficients)), c


# ============================================================================
# Discriminant
# ============================================================================


def _sylvester_resultant(p: Sequence[Fraction], q: Sequence[Fraction]) -> Fraction:
    """Homogeneous resultant of two forms given by coefficients in ascending x power.

    Formal degrees are len-1, so vanishing leading coefficients are allowed.
    """
    m, n = len(p) - 1, len(q) - 1
    size = m + n
    P = [sympy.Rational(c.numerator, c.denominator) for c in reversed(p)]
    Q = [sympy.Rational(c.numerator, c.denominator) for c in reversed(q)]
    rows = []
    for shift in range(n):
        rows.append([0] * shift + P + [0] * (size - m - 1 - shift))
    for shift in range(m):
        rows.append([0] * shift + Q + [0] * (size - n - 1 - shift))
    det = sympy.Matrix(rows).det(method="bareiss")
    det = sympy.Rational(det)
    return Fraction(int(det.p), int(det.q))


def _partials(f: BinaryForm) -> Tuple[List[Fraction], List[Fraction]]:
    d = f.degree
    a = f.coefficients
    fx = [(i + 1) * a[i + 1] for i in range(d)]
    fy = [(d - i) * a[i] for i in range(d)]
    return fx, fy


_DISCRIMINANT_SCALE: Dict[int, Fraction] = {}


def _discriminant_scale(d: int) -> Fraction:
    if d not in _DISCRIMINANT_SCALE:
        fx, fy = _partials(BinaryForm.power_form(d))
        target = Fraction((-1) ** (d * (d - 1) // 2) * d**d)
        _DISCRIMINANT_SCALE[d] = target / _sylvester_resultant(fx, fy)
    return _DISCRIMINANT_SCALE[d]


def discriminant(f: BinaryForm) -> Fraction:
    """Resultant of the partial derivatives, scaled so Δ(x^d - a0 y^d) = (-1)^(d(d-1)/2) d^d a0^(d-1).

    For odd d this is the classical discriminant; for even d it differs by sign.
    """
    f.require_exact("discriminant")
    if f.degree < 2:
        raise UnsupportedDegreeError(f.degree, "degree >= 2")
    fx, fy = _partials(f)
    return _discriminant_scale(f.degree) * _sylvester_resultant(fx, fy)


# ============================================================================
# Roots and divisors
# ============================================================================


@dataclass(frozen=True)
class RootPoint:
    """A projective root [x : y] with multiplicity, normalized to (a, 1) or (1, 0)."""

    x: complex
    y: complex
    multiplicity: int = 1

    def __post_init__(self):
        if self.multiplicity < 1:
            raise DomainError("multiplicity must be positive")
        if self.x == 0 and self.y == 0:
            raise DomainError("(0, 0) is not a projective point")

    @property
    def is_infinite(self) -> bool:
        return self.y == 0

    def vector(self) -> np.ndarray:
        return np.array([complex(self.x), complex(self.y)])

    def norm_squared(self) -> float:
        return abs(self.x) ** 2 + abs(self.y) ** 2


@dataclass(frozen=True)
class RootDivisor:
    """c * prod (x*y_i - y*x_i)^(b_i): the Chow representative of a form."""

    roots: Tuple[RootPoint, ...]
    leading_scalar: Number = Fraction(1)

    def __post_init__(self):
        if not self.roots:
            raise DomainError("a divisor needs at least one root")
        if self.leading_scalar == 0:
            raise DomainError("leading scalar must be nonzero")

    @property
    def degree(self) -> int:
        return sum(r.multiplicity for r in self.roots)

    @property
    def multiplicities(self) -> Tuple[int, ...]:
        return tuple(r.multiplicity for r in self.roots)

    @property
    def max_multiplicity(self) -> int:
        return max(self.multiplicities)

    def is_semistable(self) -> bool:
        return 2 * self.max_multiplicity <= self.degree

    def points(self) -> np.ndarray:
        """Root vectors as rows, without multiplicity."""
        return np.array([r.vector() for r in self.roots])


def from_divisor(div: RootDivisor) -> BinaryForm:
    """Expand c * prod (x*y_i - y*x_i)^(b_i) with complex coefficients."""
    poly: List[Number] = [complex(div.leading_scalar)]
    for r in div.roots:
        linear = [-complex(r.x), complex(r.y)]
        poly = _poly_mul(poly, _poly_pow(linear, r.multiplicity))
    return BinaryForm(tuple(complex(a) for a in poly))


def infinite_multiplicity(f: BinaryForm) -> int:
    """Number of vanishing top coefficients a_d, a_(d-1), ..."""
    k = 0
    for a in reversed(f.coefficients):
        if a != 0:
            break
        k += 1
    return k


def _sqf_factors(f: BinaryForm) -> List[Tuple[sympy.Poly, int]]:
    g = f.sympy_poly()
    if g.degree() <= 0:
        return []
    _, factors = g.sqf_list()
    return [(p, m) for p, m in factors if p.degree() > 0]


def _polish(coeffs: np.ndarray, z: complex, iterations: int) -> complex:
    """Newton steps, each accepted only if the residual decreases."""
    deriv = np.polyder(coeffs)
    value = np.polyval(coeffs, z)
    for _ in range(iterations):
        slope = np.polyval(deriv, z)
        if slope == 0:
            break
        step = value / slope
        candidate = z - step
        new_value = np.polyval(coeffs, candidate)
        if abs(new_value) >= abs(value):
            break
        z, value = candidate, new_value
        if abs(step) <= 1e-17 * max(1.0, abs(z)):
            break
    return complex(z)


# Coefficients with more bits than this leave the float range once converted.
_FLOAT_BITS = 1000


def _beyond_float_range(values: Sequence[Number]) -> bool:
    return any(
        isinstance(a, Fraction)
        and a != 0
        and max(abs(a.numerator).bit_length(), a.denominator.bit_length()) > _FLOAT_BITS
        for a in values
    )


def _ratio_log2(q: Fraction) -> int:
    return abs(q.numerator).bit_length() - q.denominator.bit_length()


def _scaled_roots(exact: Sequence[Fraction], iterations: int) -> List[complex]:
    """Roots of sum c_j t^(n-j) through t = 2^k u, with |coefficients in u| <= 2."""
    monic = [c / exact[0] for c in exact]
    k = max((-(-_ratio_log2(c) // j) for j, c in enumerate(monic) if j and c), default=0)
    s = Fraction(2) ** k
    coeffs = np.array([float(c / s**j) for j, c in enumerate(monic)], dtype=complex)
    if len(coeffs) == 2:
        found = [complex(-coeffs[1])]
    else:
        found = [_polish(coeffs, u, iterations) for u in np.roots(coeffs)]
    return [complex(math.ldexp(u.real, k), math.ldexp(u.imag, k)) for u in found]


def _factor_roots(factor: sympy.Poly, bits: int, iterations: int) -> List[complex]:
    exact = [Fraction(int(c.p), int(c.q)) for c in map(sympy.Rational, factor.all_coeffs())]
    try:
        if bits > 53:
            with mpmath.workprec(bits):
                found = mpmath.polyroots(
                    [mpmath.mpf(c.numerator) / c.denominator for c in exact],
                    maxsteps=200,
                    extraprec=bits,
                )
            out = [complex(z) for z in found]
        elif _beyond_float_range(exact):
            out = _scaled_roots(exact, iterations)
        else:
            coeffs = np.array([float(c) for c in exact], dtype=complex)
            if len(coeffs) == 2:
                out = [complex(-coeffs[1] / coeffs[0])]
            else:
                out = [_polish(coeffs, z, iterations) for z in np.roots(coeffs)]
    except (np.linalg.LinAlgError, OverflowError, ZeroDivisionError) as e:
        raise RootFindingError(f"roots of {factor.as_expr()} failed: {e}") from e
    if not all(math.isfinite(z.real) and math.isfinite(z.imag) for z in out):
        raise RootFindingError(f"roots of {factor.as_expr()} leave the float range")
    return out


def _mp(value: Number):
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    return mpmath.mpc(value)


def backward_error(f: BinaryForm, div: RootDivisor) -> float:
    """Max coefficient error of the reconstructed form relative to max |a_i|."""
    if not _beyond_float_range(f.coefficients) and not _beyond_float_range([div.leading_scalar]):
        rebuilt = from_divisor(div).coefficients
        scale = max(abs(complex(a)) for a in f.coefficients)
        return max(abs(complex(a) - b) for a, b in zip(f.coefficients, rebuilt)) / scale
    # mpf exponents are unbounded, so the expansion cannot overflow
    with mpmath.workprec(53):
        poly = [_mp(div.leading_scalar)]
        for r in div.roots:
            linear = [-mpmath.mpc(r.x), mpmath.mpc(r.y)]
            for _ in range(r.multiplicity):
                poly = _poly_mul(poly, linear)
        target = [_mp(a) for a in f.coefficients]
        scale = max(abs(a) for a in target)
        return float(max(abs(a - b) for a, b in zip(target, poly)) / scale)


def roots(
    f: BinaryForm,
    precision_bits: Optional[int] = None,
    tolerance: Optional[float] = None,
) -> RootDivisor:
    """Projective roots with exact multiplicities and the leading scalar.

    Multiplicities come from the squarefree decomposition of f(t, 1) over Q;
    roots of each squarefree factor come from companion-matrix eigenvalues
    polished by Newton iteration.
    """
    f.require_exact("roots")
    bits = precision_bits or config.precision.precision_bits
    tol = tolerance if tolerance is not None else config.precision.backward_error
    d = f.degree
    k_inf = infinite_multiplicity(f)

    finite: List[RootPoint] = []
    for factor, mult in _sqf_factors(f):
        for z in _factor_roots(factor, bits, config.precision.newton_iterations):
            finite.append(RootPoint(z, 1 + 0j, mult))
    finite.sort(key=lambda r: (round(r.x.real, 12), round(r.x.imag, 12), r.multiplicity))
    points = finite + ([RootPoint(1 + 0j, 0j, k_inf)] if k_inf else [])

    scalar = (-1) ** k_inf * f.coefficients[d - k_inf]
    div = RootDivisor(tuple(points), scalar)
    if div.degree != d:
        raise RootFindingError(f"found {div.degree} roots for a degree {d} form", form=f)

    err = backward_error(f, div)
    if err > tol:
        raise RootFindingError(
            f"roots of {f} reproduce the form only to {err:.3e}", form=f, backward_error=err
        )
    logger.debug(f"roots of {f}: {len(points)} distinct, backward error {err:.2e}")
    return div


# ============================================================================
# Multiplicities and stability
# ============================================================================


def multiplicities(f: BinaryForm) -> List[int]:
    """Exact root multiplicities over the algebraic closure, one entry per distinct root."""
    f.require_exact("multiplicities")
    out = [m for p, m in _sqf_factors(f) for _ in range(p.degree())]
    k_inf = infinite_multiplicity(f)
    if k_inf:
        out.append(k_inf)
    return sorted(out, reverse=True)


def max_multiplicity(f: BinaryForm) -> int:
    return multiplicities(f)[0]


def is_semistable(f: BinaryForm) -> bool:
    return 2 * max_multiplicity(f) <= f.degree


def is_stable(f: BinaryForm) -> bool:
    return 2 * max_multiplicity(f) < f.degree


def is_squarefree(f: BinaryForm) -> bool:
    return max_multiplicity(f) == 1


def _gf_max_multiplicity(coeffs: List[int], p: int) -> int:
    """Largest root multiplicity of sum c_i t^i over the algebraic closure of F_p."""
    while coeffs and coeffs[-1] % p == 0:
        coeffs = coeffs[:-1]
    if len(coeffs) <= 1:
        return 0
    if all(c % p == 0 for i, c in enumerate(coeffs) if i % p):
        # derivative vanishes: g(t) = h(t^p) = h(t)^p over F_p
        return p * _gf_max_multiplicity(coeffs[::p], p)
    g = sympy.Poly(list(reversed(coeffs)), _T, modulus=p)
    _, factors = g.sqf_list()
    return max((m for q, m in factors if q.degree() > 0), default=0)


def reduction_max_multiplicity(f: BinaryForm, p: int) -> int:
    """Largest multiplicity of a root of f mod p in P^1, counting the root at infinity."""
    if not is_probable_prime(p):
        raise DomainError(f"{p} is not prime")
    coeffs = [a % p for a in f.integer_coefficients()]
    if all(c == 0 for c in coeffs):
        raise NonPrimitiveError(f"{f} vanishes identically mod {p}")
    k_inf = 0
    for c in reversed(coeffs):
        if c:
            break
        k_inf += 1
    return max(k_inf, _gf_max_multiplicity(coeffs, p))


def reduction_semistable_at(f: BinaryForm, p: int) -> bool:
    """True when no root of f mod p has multiplicity above d/2."""
    return 2 * reduction_max_multiplicity(f, p) <= f.degree


# ============================================================================
# Automorphisms
# ============================================================================


def chordal_distance(u: np.ndarray, w: np.ndarray) -> float:
    return abs(u[0] * w[1] - u[1] * w[0]) / (np.linalg.norm(u) * np.linalg.norm(w))


def projectively_equal(A: np.ndarray, B: np.ndarray, tol: float) -> bool:
    """A and B agree up to a nonzero scalar."""
    a, b = A.reshape(-1), B.reshape(-1)
    minors = np.abs(np.outer(a, b) - np.outer(b, a))
    return float(minors.max()) <= tol * np.linalg.norm(a) * np.linalg.norm(b)


@dataclass(frozen=True)
class MoebiusMap:
    """A projective transformation of P^1(C), scaled so its largest-modulus entry is 1."""

    matrix: Tuple[Tuple[complex, complex], Tuple[complex, complex]]

    @classmethod
    def from_array(cls, A: np.ndarray) -> "MoebiusMap":
        A = np.asarray(A, dtype=complex)
        if abs(np.linalg.det(A)) < 1e-14 * np.abs(A).max() ** 2:
            raise SingularMatrixError("Moebius map must be invertible")
        flat = A.reshape(-1)
        moduli = np.abs(flat)
        pivot = int(np.flatnonzero(moduli >= (1 - 1e-9) * moduli.max())[0])
        A = A / flat[pivot]
        return cls(((complex(A[0, 0]), complex(A[0, 1])), (complex(A[1, 0]), complex(A[1, 1]))))

    def as_array(self) -> np.ndarray:
        return np.array(self.matrix, dtype=complex)

    def apply(self, v: np.ndarray) -> np.ndarray:
        return self.as_array() @ v

    def compose(self, other: "MoebiusMap") -> "MoebiusMap":
        return MoebiusMap.from_array(self.as_array() @ other.as_array())

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap.from_array(np.linalg.inv(self.as_array()))


@dataclass(frozen=True)
class AutomorphismGroup:
    """Moebius maps preserving the root set, with their induced permutations."""

    divisor: RootDivisor
    maps: Tuple[MoebiusMap, ...]
    permutations: Tuple[Tuple[int, ...], ...]
    orbits: Tuple[Tuple[int, ...], ...] = field(default=())

    @property
    def order(self) -> int:
        return len(self.maps)

    def contains(self, A: np.ndarray, tol: float = 1e-7) -> bool:
        return any(projectively_equal(m.as_array(), A, tol) for m in self.maps)


def _triple_frame(v0: np.ndarray, v1: np.ndarray, v2: np.ndarray) -> np.ndarray:
    """Matrix sending [1:0], [0:1], [1:1] to v0, v1, v2."""
    basis = np.column_stack([v0, v1])
    lam = np.linalg.solve(basis, v2)
    return basis * lam


def _root_orbits(n: int, permutations: Sequence[Sequence[int]]) -> Tuple[Tuple[int, ...], ...]:
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for perm in permutations:
        for i, j in enumerate(perm):
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    groups: Dict[int, List[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return tuple(tuple(g) for g in sorted(groups.values()))


def automorphism_group(f: BinaryForm, tol: float = 1e-7) -> AutomorphismGroup:
    """All Moebius maps permuting the roots of a squarefree form of degree >= 3.

    One fixed ordered triple of roots is sent to every ordered triple of distinct
    roots; the unique map doing so is kept when it permutes the whole root set.
    """
    if f.degree < 3:
        raise UnsupportedDegreeError(f.degree, "degree >= 3")
    if not is_squarefree(f):
        raise NotSquarefreeError(f"{f} has repeated roots; supply an orbit partition instead")

    div = roots(f)
    pts = [v / np.linalg.norm(v) for v in div.points()]
    n = len(pts)
    try:
        source_inv = np.linalg.inv(_triple_frame(pts[0], pts[1], pts[2]))
    except np.linalg.LinAlgError as e:
        raise NumericalError(f"roots of {f} are too close to frame: {e}") from e

    maps: List[MoebiusMap] = []
    perms: List[Tuple[int, ...]] = []
    for i, j, k in itertools.permutations(range(n), 3):
        try:
            M = _triple_frame(pts[i], pts[j], pts[k]) @ source_inv
        except np.linalg.LinAlgError:
            continue
        perm = []
        for v in pts:
            image = M @ v
            dists = [chordal_distance(image, w) for w in pts]
            best = int(np.argmin(dists))
            if dists[best] > tol:
                break
            perm.append(best)
        if len(perm) == n and len(set(perm)) == n:
            maps.append(MoebiusMap.from_array(M))
            perms.append(tuple(perm))

    logger.debug(f"automorphism group of {f}: order {len(maps)}")
    return AutomorphismGroup(
        divisor=div,
        maps=tuple(maps),
        permutations=tuple(perms),
        orbits=_root_orbits(n, perms),
    )

