"""
Reduction of integral binary forms.

Two searches live here:
    - minimal_height_search: best-first descent over GL2(Z) words in the shift,
      swap and sign generators, lowering max |a_i| of the primitive form.
      The result is an upper bound for the minimal height, never a certificate.
    - local_reduction: Type A reduction at a prime p by the substitutions
      (x, y) -> (x + beta y, p y) and (x, y) -> (p x, y) followed by removal of
      the p-power content, iterated while the discriminant valuation drops.
"""

import heapq
import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Set, Tuple

from config import config

from .binary_forms import (
    BinaryForm,
    Matrix2,
    act,
    discriminant,
    primitive_part,
    reduction_max_multiplicity,
)
from .errors import DomainError, NotPrimeError, UnstableFormError
from .exact_arith import factorize, is_probable_prime, valuation

logger = logging.getLogger(__name__)


# ============================================================================
# Minimal height search
# ============================================================================

# name -> (matrix, action on ascending integer coefficients)
GENERATORS: Dict[str, Tuple[int, int, int, int]] = {
    "x+y": (1, 1, 0, 1),
    "x-y": (1, -1, 0, 1),
    "y+x": (1, 0, 1, 1),
    "y-x": (1, 0, -1, 1),
    "swap": (0, 1, 1, 0),
    "-x": (-1, 0, 0, 1),
}


def _shift_x(coeffs: Tuple[int, ...], t: int) -> Tuple[int, ...]:
    """Coefficients of f(x + t y, y)."""
    d = len(coeffs) - 1
    return tuple(
        sum(coeffs[i] * math.comb(i, k) * t ** (i - k) for i in range(k, d + 1))
        for k in range(d + 1)
    )


def _apply_generator(coeffs: Tuple[int, ...], name: str) -> Tuple[int, ...]:
    if name == "x+y":
        return _shift_x(coeffs, 1)
    if name == "x-y":
        return _shift_x(coeffs, -1)
    if name == "y+x":
        return tuple(reversed(_shift_x(tuple(reversed(coeffs)), 1)))
    if name == "y-x":
        return tuple(reversed(_shift_x(tuple(reversed(coeffs)), -1)))
    if name == "swap":
        return tuple(reversed(coeffs))
    if name == "-x":
        return tuple(a if i % 2 == 0 else -a for i, a in enumerate(coeffs))
    raise DomainError(f"unknown generator {name!r}")


def _normalize(coeffs: Tuple[int, ...]) -> Tuple[int, ...]:
    g = math.gcd(*coeffs)
    top = next(a for a in reversed(coeffs) if a != 0)
    if top < 0:
        g = -g
    return tuple(a // g for a in coeffs)


def _matmul(A: Tuple[int, ...], B: Tuple[int, ...]) -> Tuple[int, int, int, int]:
    return (
        A[0] * B[0] + A[1] * B[2],
        A[0] * B[1] + A[1] * B[3],
        A[2] * B[0] + A[3] * B[2],
        A[2] * B[1] + A[3] * B[3],
    )


@dataclass
class MinimalModel:
    """Best representative found by minimal_height_search."""

    form: BinaryForm
    upper: float  # log max |a_i| of the primitive representative
    matrix: Matrix2
    word: Tuple[str, ...] = ()
    nodes: int = 0

    @property
    def improved(self) -> bool:
        return bool(self.word)


def minimal_height_search(
    f: BinaryForm,
    word_length: Optional[int] = None,
    entry_bound: Optional[int] = None,
    node_budget: Optional[int] = None,
) -> MinimalModel:
    """Descend over GL2(Z) words up to the given length, keeping the lowest naive height.

    act(f, model.matrix) is a rational multiple of model.form. The best model only
    changes on a strict improvement, so the identity comes back when nothing helps.
    """
    f.require_exact("minimal_height_search")
    word_length = word_length if word_length is not None else config.search.word_length
    entry_bound = entry_bound or config.search.entry_bound
    node_budget = node_budget or config.search.node_budget

    start = _normalize(primitive_part(f)[0].integer_coefficients())
    identity = (1, 0, 0, 1)
    best_key = max(abs(a) for a in start)
    best = (start, identity, ())
    visited: Set[Tuple[int, ...]] = {start}
    counter = itertools.count()
    heap = [(best_key, 0, next(counter), start, identity, ())]
    nodes = 0

    while heap and nodes < node_budget and best_key > 1:
        key, length, _, coeffs, matrix, word = heapq.heappop(heap)
        nodes += 1
        if length >= word_length:
            continue
        for name, gen in GENERATORS.items():
            child_matrix = _matmul(matrix, gen)
            if max(abs(e) for e in child_matrix) > entry_bound:
                continue
            child = _normalize(_apply_generator(coeffs, name))
            if child in visited:
                continue
            visited.add(child)
            child_key = max(abs(a) for a in child)
            child_word = word + (name,)
            if child_key < best_key:
                best_key = child_key
                best = (child, child_matrix, child_word)
            heapq.heappush(heap, (child_key, length + 1, next(counter), child, child_matrix, child_word))

    coeffs, matrix, word = best
    logger.debug(f"minimal height search on {f}: max coefficient {best_key} after {nodes} nodes")
    return MinimalModel(
        form=BinaryForm(coeffs),
        upper=math.log(best_key),
        matrix=Matrix2(*matrix),
        word=word,
        nodes=nodes,
    )


# ============================================================================
# Local (Type A) reduction
# ============================================================================


@dataclass
class ReductionStep:
    matrix: Matrix2
    content_exponent: int
    form: BinaryForm


@dataclass
class LocalReduction:
    """Outcome of local_reduction at one prime."""

    prime: int
    original: BinaryForm
    model: BinaryForm
    matrix: Matrix2
    steps: List[ReductionStep] = field(default_factory=list)
    discriminant_valuation_before: Optional[int] = None
    discriminant_valuation_after: Optional[int] = None
    reduction_multiplicity: int = 0
    semistable_reduction: bool = True

    @property
    def improved(self) -> bool:
        return bool(self.steps)


def _p_content_exponent(f: BinaryForm, p: int) -> int:
    return min(valuation(a, p) for a in f.coefficients if a != 0)


def _candidates(p: int) -> List[Matrix2]:
    return [Matrix2(1, beta, 0, p) for beta in range(p)] + [Matrix2(p, 0, 0, 1)]


def _disc_valuation(f: BinaryForm, p: int) -> Optional[int]:
    if f.degree < 2:
        return None
    delta = discriminant(f)
    return None if delta == 0 else valuation(delta, p)


def local_reduction(f: BinaryForm, p: int, max_steps: int = 64) -> LocalReduction:
    """Reduce f at p until no substitution of determinant p leaves content p^k with k > d/2.

    Each accepted step lowers v_p(Δ) by (d-1)(2k-d).
    """
    if not is_probable_prime(p):
        raise NotPrimeError(f"{p} is not prime")
    model, _ = primitive_part(f)
    d = f.degree
    total = Matrix2.identity()
    steps: List[ReductionStep] = []
    for _ in range(max_steps):
        for M in _candidates(p):
            image = act(model, M)
            k = _p_content_exponent(image, p)
            if 2 * k > d:
                model, _ = primitive_part(image.scale(Fraction(1, p**k)))
                total = total @ M
                steps.append(ReductionStep(M, k, model))
                logger.debug(f"p={p}: step {M} removed p^{k}")
                break
        else:
            break

    multiplicity = reduction_max_multiplicity(model, p)
    return LocalReduction(
        prime=p,
        original=f,
        model=model,
        matrix=total,
        steps=steps,
        discriminant_valuation_before=_disc_valuation(primitive_part(f)[0], p),
        discriminant_valuation_after=_disc_valuation(model, p),
        reduction_multiplicity=multiplicity,
        semistable_reduction=2 * multiplicity <= d,
    )


def bad_primes(f: BinaryForm) -> List[int]:
    """Primes dividing the discriminant of the primitive model."""
    delta = discriminant(primitive_part(f)[0])
    if delta == 0:
        raise UnstableFormError(f"{f} has discriminant 0: every prime is bad")
    return list(factorize(delta.numerator).primes)
