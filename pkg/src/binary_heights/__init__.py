"""Heights of binary forms and weighted projective points over Q.

Modules:
- exact_arith: factorization, valuations and exact formal logarithms
- binary_forms: forms, group action, discriminants, roots, automorphisms
- invariants: transvectant invariants of degrees 3 to 6
- weighted_projective: weighted points and their heights
- heights: naive, moduli, Chow, GIT and invariant heights
- chow_optimizer: Chow-norm minimization over SU(2)\\SL2(C)
- reduction: GL2(Z) descent and local reduction at a prime
- relations, corpus: verification of one form and of corpora
"""

import logging
from typing import Optional

from .binary_forms import (
    BinaryForm,
    Matrix2,
    MoebiusMap,
    RootDivisor,
    act,
    automorphism_group,
    discriminant,
    evaluate,
    from_divisor,
    is_semistable,
    is_stable,
    max_multiplicity,
    primitive_part,
    reduction_semistable_at,
    roots,
)
from .chow_optimizer import HermitianCoset, minimize_chow_norm
from .errors import DomainError, HeightError, NumericalError
from .exact_arith import (
    Factorization,
    LogValue,
    Place,
    factorize,
    log_abs,
    product_formula_defect,
    valuation,
)
from .heights import (
    chow_height,
    cih_automorphism,
    cih_closed_form,
    cih_cubic_closed_form,
    cih_decomposition,
    cih_naive,
    git_height_point,
    moduli_height,
    naive_height,
)
from .invariants import evaluate_invariants, invariant_basis, transvectant
from .models import HeightReport
from .parsing import parse_form
from .reduction import bad_primes, local_reduction, minimal_height_search
from .relations import verify_relations
from .weighted_projective import (
    WeightedPoint,
    Weights,
    faltings_height_PN,
    local_hyperplane_height,
    lwh,
    normalize,
    scale,
    standard_height,
    veronese,
)

logger = logging.getLogger(__name__)


def verify_form(text: str, degree: Optional[int] = None, tolerance: Optional[float] = None) -> HeightReport:
    """
    Parse a form string and build its HeightReport.

    Accepts both the polynomial syntax ("x^3 - y^3") and the ascending
    coefficient list ("-1,0,0,1").
    """
    f = parse_form(text, degree)
    logger.info(f"Verifying {f}")
    return verify_relations(f, tolerance=tolerance)


__all__ = [
    "BinaryForm",
    "DomainError",
    "Factorization",
    "HeightError",
    "HeightReport",
    "HermitianCoset",
    "LogValue",
    "Matrix2",
    "MoebiusMap",
    "NumericalError",
    "Place",
    "RootDivisor",
    "WeightedPoint",
    "Weights",
    "act",
    "automorphism_group",
    "bad_primes",
    "chow_height",
    "cih_automorphism",
    "cih_closed_form",
    "cih_cubic_closed_form",
    "cih_decomposition",
    "cih_naive",
    "discriminant",
    "evaluate",
    "evaluate_invariants",
    "factorize",
    "faltings_height_PN",
    "from_divisor",
    "git_height_point",
    "invariant_basis",
    "is_semistable",
    "is_stable",
    "local_hyperplane_height",
    "local_reduction",
    "log_abs",
    "lwh",
    "max_multiplicity",
    "minimal_height_search",
    "minimize_chow_norm",
    "moduli_height",
    "naive_height",
    "normalize",
    "parse_form",
    "primitive_part",
    "product_formula_defect",
    "reduction_semistable_at",
    "roots",
    "scale",
    "standard_height",
    "transvectant",
    "valuation",
    "veronese",
    "verify_form",
    "verify_relations",
]
