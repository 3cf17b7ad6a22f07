"""
SL2-invariants of binary forms of degree 3 to 6 built from transvectants.

Each generator is a fixed transvectant word in the form f. The word is expanded
once over Q[a_0, ..., a_d] with sympy's sparse polynomial rings and cached as an
exact term table, so evaluation on a concrete form is a sum of monomials.

Normalizations:
    d = 3   Delta = c * (H, H)_2 with H = (f, f)_2, scaled so Delta(x^3 - y^3) = -27
    d = 4   I = (f, f)_4, J = (f, H)_4; primitive integer polynomials
    d = 5   i = (f, f)_4, j = (f, i)_2, tau = (j, j)_2;
            I4 = (i, i)_2, I8 = (tau, i)_2, I12 = (tau, tau)_2; primitive integer polynomials
    d = 6   Clebsch-type A, B, C, D of degrees 2, 4, 6, 10; A scaled so A(x^6 - y^6) = -6,
            B, C, D primitive integer polynomials

Primitive generators are signed so the coefficient of their lexicographically
largest monomial is positive.
"""

import logging
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Dict, List, Sequence, Tuple, Union

from sympy.polys.domains import QQ
from sympy.polys.rings import ring

from .binary_forms import BinaryForm
from .errors import DomainError, NullconeError, UnsupportedDegreeError
from .weighted_projective import WeightedPoint, Weights

logger = logging.getLogger(__name__)

SUPPORTED_DEGREES = (3, 4, 5, 6)


# ============================================================================
# Transvectants
# ============================================================================


@dataclass(frozen=True)
class Covariant:
    """Coefficients c_0..c_n of a covariant of order n (c_i multiplies x^i y^(n-i)).

    Unlike a BinaryForm it may be identically zero or of order 0.
    """

    coefficients: Tuple[Fraction, ...]

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coefficients)

    @property
    def value(self) -> Fraction:
        if self.order != 0:
            raise DomainError(f"covariant of order {self.order} is not a constant")
        return self.coefficients[0]

    def to_form(self) -> BinaryForm:
        return BinaryForm(self.coefficients)


def _falling(n: int, k: int) -> int:
    return math.perm(n, k) if 0 <= k <= n else 0


def _derivative(coeffs: Sequence, x_order: int, y_order: int) -> List:
    """d^(x_order + y_order) / dx^x_order dy^y_order of sum c_i x^i y^(n-i)."""
    n = len(coeffs) - 1
    return [
        coeffs[i] * (_falling(i, x_order) * _falling(n - i, y_order))
        for i in range(x_order, n - y_order + 1)
    ]


def _multiply(p: Sequence, q: Sequence, zero) -> List:
    out = [zero] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return out


def _transvect(f: Sequence, g: Sequence, k: int) -> List:
    """Omega-process sum without the factorial normalization.

    Works over any coefficient ring closed under + and integer *, which lets the
    same code run on Fractions and on symbolic polynomial coefficients.
    """
    m, n = len(f) - 1, len(g) - 1
    zero = f[0] * 0
    out = [zero] * (m + n - 2 * k + 1)
    for j in range(k + 1):
        weight = (-1) ** j * math.comb(k, j)
        term = _multiply(_derivative(f, k - j, j), _derivative(g, j, k - j), zero)
        out = [acc + t * weight for acc, t in zip(out, term)]
    return out


def transvectant(
    f: Union[BinaryForm, Covariant], g: Union[BinaryForm, Covariant], k: int
) -> Covariant:
    """k-th transvectant (f, g)_k by the Omega process, exactly.

    (f, g)_k = ((m-k)! (n-k)! / (m! n!)) sum_j (-1)^j C(k, j)
               d^k f / dx^(k-j) dy^j * d^k g / dx^j dy^(k-j)
    """
    fc, gc = tuple(f.coefficients), tuple(g.coefficients)
    if any(not isinstance(c, Fraction) for c in fc + gc):
        raise DomainError("transvectants need rational coefficients")
    m, n = len(fc) - 1, len(gc) - 1
    if k < 0 or k > min(m, n):
        raise DomainError(f"transvectant order {k} outside 0..{min(m, n)}")
    norm = Fraction(
        math.factorial(m - k) * math.factorial(n - k), math.factorial(m) * math.factorial(n)
    )
    return Covariant(tuple(c * norm for c in _transvect(fc, gc, k)))


# ============================================================================
# Generators
# ============================================================================


@dataclass(frozen=True)
class InvariantGenerator:
    """One basis invariant as a term table sum(num * a^e) / denominator."""

    name: str
    weight: int
    word: str
    normalization: str
    terms: Tuple[Tuple[Tuple[int, ...], int], ...]
    denominator: int

    def evaluate(self, coefficients: Sequence[Fraction]) -> Fraction:
        max_exp = max((max(e) for e, _ in self.terms), default=0)
        powers = []
        for a in coefficients:
            row = [Fraction(1)]
            for _ in range(max_exp):
                row.append(row[-1] * a)
            powers.append(row)
        total = Fraction(0)
        for exps, num in self.terms:
            term = Fraction(num)
            for i, e in enumerate(exps):
                if e:
                    term *= powers[i][e]
            total += term
        return total / self.denominator


@dataclass(frozen=True)
class InvariantBasis:
    """Generators of the invariant ring in one degree with their weights."""

    degree: int
    generators: Tuple[InvariantGenerator, ...]

    @property
    def weights(self) -> Weights:
        return Weights(tuple(g.weight for g in self.generators))

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    @property
    def delta(self) -> int:
        return self.weights.delta

    @property
    def m(self) -> int:
        return self.weights.m

    def evaluate(self, f: BinaryForm) -> Tuple[Fraction, ...]:
        if f.degree != self.degree:
            raise DomainError(f"basis for degree {self.degree} applied to degree {f.degree}")
        f.require_exact("invariant evaluation")
        return tuple(g.evaluate(f.coefficients) for g in self.generators)

    def header(self) -> Dict[str, str]:
        """Generator words and normalizations, for report headers."""
        return {g.name: f"{g.word}; {g.normalization}" for g in self.generators}


def _generator_words(d: int, f: List) -> List[Tuple[str, int, str, object]]:
    T = _transvect
    if d == 3:
        H = T(f, f, 2)
        return [("Delta", 4, "(H,H)_2 with H=(f,f)_2", T(H, H, 2)[0])]
    if d == 4:
        H = T(f, f, 2)
        return [
            ("I", 2, "(f,f)_4", T(f, f, 4)[0]),
            ("J", 3, "(f,H)_4 with H=(f,f)_2", T(f, H, 4)[0]),
        ]
    if d == 5:
        i = T(f, f, 4)
        j = T(f, i, 2)
        tau = T(j, j, 2)
        return [
            ("I4", 4, "(i,i)_2 with i=(f,f)_4", T(i, i, 2)[0]),
            ("I8", 8, "(tau,i)_2 with j=(f,i)_2, tau=(j,j)_2", T(tau, i, 2)[0]),
            ("I12", 12, "(tau,tau)_2", T(tau, tau, 2)[0]),
        ]
    if d == 6:
        i = T(f, f, 4)
        delta = T(i, i, 2)
        y1 = T(f, i, 4)
        y2 = T(i, y1, 2)
        y3 = T(i, y2, 2)
        return [
            ("A", 2, "(f,f)_6", T(f, f, 6)[0]),
            ("B", 4, "(i,i)_4 with i=(f,f)_4", T(i, i, 4)[0]),
            ("C", 6, "(i,Delta)_4 with Delta=(i,i)_2", T(i, delta, 4)[0]),
            ("D", 10, "(y3,y1)_2 with y1=(f,i)_4, y2=(i,y1)_2, y3=(i,y2)_2", T(y3, y1, 2)[0]),
        ]
    raise UnsupportedDegreeError(d, "3..6")


# Generators pinned by a value on x^d - y^d instead of by integrality.
_ANCHORS: Dict[Tuple[int, str], Fraction] = {
    (3, "Delta"): Fraction(-27),
    (6, "A"): Fraction(-6),
}


def _to_fraction(c) -> Fraction:
    r = QQ.to_sympy(c)
    return Fraction(int(r.p), int(r.q))


def _term_table(poly) -> List[Tuple[Tuple[int, ...], Fraction]]:
    return sorted(((tuple(m), _to_fraction(c)) for m, c in poly.terms()), reverse=True)


def _build_generator(d: int, name: str, weight: int, word: str, poly) -> InvariantGenerator:
    table = _term_table(poly)
    if not table:
        raise DomainError(f"generator {name} for degree {d} vanishes identically")

    anchor = _ANCHORS.get((d, name))
    if anchor is not None:
        probe = InvariantGenerator(name, weight, word, "", tuple((e, c.numerator) for e, c in table), 1)
        if any(c.denominator != 1 for _, c in table):
            raise DomainError(f"unexpected denominators in generator {name}")
        value = probe.evaluate(BinaryForm.power_form(d).coefficients)
        scale = anchor / value
        normalization = f"scaled so {name}(x^{d} - y^{d}) = {anchor}"
    else:
        den = reduce(math.lcm, (c.denominator for _, c in table), 1)
        gcd = reduce(math.gcd, ((c * den).numerator for _, c in table), 0)
        scale = Fraction(den, gcd)
        if table[0][1] < 0:
            scale = -scale
        normalization = "primitive integer polynomial"

    scaled = [(e, c * scale) for e, c in table]
    den = reduce(math.lcm, (c.denominator for _, c in scaled), 1)
    terms = tuple((e, (c * den).numerator) for e, c in scaled)
    return InvariantGenerator(name, weight, word, normalization, terms, den)


def _build_basis(d: int) -> InvariantBasis:
    logger.info(f"Expanding invariant generators for degree {d}")
    R, *gens = ring(",".join(f"a{i}" for i in range(d + 1)), QQ)
    words = _generator_words(d, list(gens))
    generators = tuple(_build_generator(d, *w) for w in words)
    logger.info(
        f"Degree {d} basis ready: "
        + ", ".join(f"{g.name} ({len(g.terms)} terms)" for g in generators)
    )
    return InvariantBasis(degree=d, generators=generators)


_BASES: Dict[int, InvariantBasis] = {}
_BASES_LOCK = threading.Lock()


def invariant_basis(d: int) -> InvariantBasis:
    """The generator set for degree d in 3..6, built on first use."""
    if d not in SUPPORTED_DEGREES:
        raise UnsupportedDegreeError(d, "3..6")
    basis = _BASES.get(d)
    if basis is None:
        with _BASES_LOCK:
            basis = _BASES.get(d)
            if basis is None:
                basis = _build_basis(d)
                _BASES[d] = basis
    return basis


# ============================================================================
# Invariant points
# ============================================================================


@dataclass(frozen=True)
class InvariantPoint:
    """(xi_0(f), ..., xi_n(f)) with weights; all zero exactly on the nullcone."""

    degree: int
    values: Tuple[Fraction, ...]
    weights: Weights
    names: Tuple[str, ...]

    @property
    def is_nullcone(self) -> bool:
        return all(v == 0 for v in self.values)

    def point(self) -> WeightedPoint:
        if self.is_nullcone:
            raise NullconeError(f"all degree {self.degree} invariants vanish: moduli point undefined")
        return WeightedPoint(self.values, self.weights)


def evaluate_invariants(f: BinaryForm) -> InvariantPoint:
    """xi(f) for a form of degree 3..6."""
    basis = invariant_basis(f.degree)
    return InvariantPoint(
        degree=f.degree,
        values=basis.evaluate(f),
        weights=basis.weights,
        names=basis.names,
    )
