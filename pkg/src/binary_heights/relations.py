"""
End-to-end verification of the height relations on one form.

Asserted relations (gated by the relation tolerance):
    R1  lwh(xi(f)) = cih_decomp(f) + chowh(f)
    R2  lwh(xi(f)) >= 0
    R3  h(veronese(xi(f))) = m * lwh(xi(f))
    R4  lwh(xi(f)) + (d / (m (n + 1))) h(P^n) >= 0

Everything else (the other readings of the invariant height, strict positivity
for stable forms, the moduli-vs-minimal ratio) goes to the ledger, which informs
but never fails a run.
"""

import itertools
import logging
from fractions import Fraction
from typing import Dict, List, Optional

from config import config

from .binary_forms import (
    BinaryForm,
    automorphism_group,
    multiplicities,
    primitive_part,
    roots,
)
from .errors import HeightError, UnsupportedDegreeError
from .exact_arith import LogValue
from .heights import (
    CIH_POWER_FORM_REFERENCE,
    chow_norm,
    cih_automorphism,
    cih_closed_form,
    cih_cubic_closed_form,
    cih_decomposition,
    cih_naive,
    git_height_point,
    moduli_height,
    moduli_minimal_log_ratio,
    naive_height,
)
from .invariants import InvariantPoint, evaluate_invariants, invariant_basis
from .models import ExactLogModel, HeightReport, LedgerEntry, RelationResidual
from .reduction import minimal_height_search
from .weighted_projective import lwh, standard_height, veronese, weighted_bound_margin

logger = logging.getLogger(__name__)

RELATIONS = {
    "R1": "lwh(xi(f)) = cih_decomp(f) + chowh(f)",
    "R2": "lwh(xi(f)) >= 0",
    "R3": "h(veronese(xi(f))) = m * lwh(xi(f))",
    "R4": "lwh(xi(f)) + (d/(m(n+1))) h(P^n) >= 0",
}

# Ledger readings compared pairwise.
CIH_READINGS = (
    "cih_decomposition",
    "cih_naive",
    "cih_closed_form",
    "cih_closed_form_reference",
    "cih_cubic_statement",
    "cih_cubic_proof",
    "cih_automorphism",
)


def _not_applicable(name: str, tolerance: float, note: str) -> RelationResidual:
    return RelationResidual(
        name=name, description=RELATIONS[name], tolerance=tolerance, status="n/a", note=note
    )


def _gate(name: str, residual: float, tolerance: float) -> RelationResidual:
    return RelationResidual(
        name=name,
        description=RELATIONS[name],
        residual=residual,
        tolerance=tolerance,
        status="pass" if residual <= tolerance else "fail",
    )


def power_form_parameter(f: BinaryForm) -> Optional[Fraction]:
    """a0 when f is a nonzero multiple of x^d - a0 y^d with a0 != 0."""
    a = f.coefficients
    if a[0] == 0 or a[-1] == 0 or any(c != 0 for c in a[1:-1]):
        return None
    return -a[0] / a[-1]


def _ledger(
    f: BinaryForm, xi: InvariantPoint, decomp_value: float, lwh_value: float, tolerance: float
) -> List[LedgerEntry]:
    entries = [
        LedgerEntry(reading="cih_decomposition", value=decomp_value),
        LedgerEntry(reading="cih_naive", value=cih_naive(f, xi)),
    ]

    a0 = power_form_parameter(f)
    if a0 is not None:
        entries.append(LedgerEntry(reading="cih_closed_form", value=cih_closed_form(f.degree, a0)))
        if f.degree == 3 and abs(a0) == 1:
            entries.append(
                LedgerEntry(
                    reading="cih_closed_form_reference",
                    value=CIH_POWER_FORM_REFERENCE,
                    note="alternative normalization of the power-form value",
                )
            )

    if f.degree == 3 and f.is_integral:
        cubic = cih_cubic_closed_form(f)
        note = "coefficient readings differ" if cubic.differ else ""
        entries.append(LedgerEntry(reading="cih_cubic_statement", value=cubic.statement, note=note))
        entries.append(LedgerEntry(reading="cih_cubic_proof", value=cubic.proof, note=note))

    try:
        entries.append(LedgerEntry(reading="cih_automorphism", value=cih_automorphism(f)))
    except HeightError as e:
        entries.append(LedgerEntry(reading="cih_automorphism", note=f"n/a: {e}"))

    if 2 * max(multiplicities(f)) < f.degree:
        note = "positive" if lwh_value > tolerance else "not positive for a stable form"
        entries.append(LedgerEntry(reading="lwh_xi_stable_positive", value=lwh_value, note=note))
    return entries


def _differences(entries: List[LedgerEntry]) -> Dict[str, float]:
    values = {e.reading: e.value for e in entries if e.reading in CIH_READINGS and e.value is not None}
    ordered = [r for r in CIH_READINGS if r in values]
    return {f"{a} - {b}": values[a] - values[b] for a, b in itertools.combinations(ordered, 2)}


def verify_relations(
    f: BinaryForm,
    tolerance: Optional[float] = None,
    precision_bits: Optional[int] = None,
) -> HeightReport:
    """Compute every height of f and check the decomposition relations.

    Forms in the nullcone get a degenerate report: invariant heights are
    infinite, so they stay null and every relation is marked n/a.
    """
    if f.degree not in (3, 4, 5, 6):
        raise UnsupportedDegreeError(f.degree, "3..6")
    f.require_exact("verify_relations")
    tolerance = tolerance if tolerance is not None else config.precision.relation_tolerance
    bits = precision_bits or config.precision.precision_bits

    mults = multiplicities(f)
    semistable = 2 * mults[0] <= f.degree
    stable = 2 * mults[0] < f.degree
    xi = evaluate_invariants(f)
    basis = invariant_basis(f.degree)
    div = roots(f, precision_bits=bits)
    norm = chow_norm(div, bits)
    search = minimal_height_search(f)

    report = HeightReport(
        form=str(f),
        coefficients=[str(a) for a in f.coefficients],
        degree=f.degree,
        semistable=semistable,
        stable=stable,
        nullcone=xi.is_nullcone,
        invariant_names=list(xi.names),
        invariant_values=[str(v) for v in xi.values],
        weights=list(xi.weights.q),
        invariant_header=basis.header(),
        naive=ExactLogModel.from_log(naive_height(f).exact, bits),
        minimal_upper=search.upper,
        minimal_word=list(search.word),
        chowh=norm.height,
        chow_scalar_term=norm.scalar_term,
        git_height=git_height_point(f, div),
    )

    if xi.is_nullcone or not semistable:
        report.flags = ["unstable", "infinite-invariant-height"]
        if xi.is_nullcone != (not semistable):
            report.flags.append("nullcone-multiplicity-mismatch")
            logger.warning(f"{f}: nullcone={xi.is_nullcone} but semistable={semistable}")
        note = "invariant heights are infinite for unstable forms"
        report.relations = [_not_applicable(name, tolerance, note) for name in RELATIONS]
        return report

    point = xi.point()
    weighted = lwh(point)
    moduli = moduli_height(f, xi)
    decomp = cih_decomposition(f, xi, div)
    _, scalar = primitive_part(f)

    report.lwh_xi = ExactLogModel.from_log(weighted.exact, bits)
    report.moduli = ExactLogModel.from_log(moduli.exact, bits)
    report.cih_decomp = decomp.value
    report.cih_primitive = decomp.value - LogValue.log_of(scalar).to_float(bits)
    report.cih_naive = decomp.naive

    m, n = point.weights.m, point.weights.n
    lwh_value = weighted.exact.to_float(bits)
    veronese_height = standard_height(veronese(point))
    r3 = (veronese_height.exact - weighted.exact * m).to_float(bits)
    report.faltings_margin = weighted_bound_margin(lwh_value, f.degree, m, n)
    report.relations = [
        _gate("R1", abs(lwh_value - decomp.value - norm.height), tolerance),
        _gate("R2", max(0.0, -lwh_value), tolerance),
        _gate("R3", abs(r3), tolerance),
        _gate("R4", max(0.0, -report.faltings_margin), tolerance),
    ]

    a0 = power_form_parameter(f)
    if a0 is not None:
        report.cih_closed_form = cih_closed_form(f.degree, a0)
    try:
        report.aut_group_order = automorphism_group(f).order if mults[0] == 1 else None
    except HeightError as e:
        logger.warning(f"automorphism group of {f} unavailable: {e}")

    report.moduli_minimal_log_ratio = moduli_minimal_log_ratio(moduli, search.upper, max(point.weights.q))
    report.ledger = _ledger(f, xi, decomp.value, lwh_value, tolerance)
    report.ledger.append(
        LedgerEntry(reading="moduli_minimal_log_ratio", value=report.moduli_minimal_log_ratio)
    )
    report.ledger_differences = _differences(report.ledger)

    if not report.passed:
        logger.warning(
            f"{f}: relation failure "
            + ", ".join(f"{r.name}={r.residual:.3e}" for r in report.relations if r.status == "fail")
        )
    return report
