"""
Corpora of integral binary forms: enumeration, persistence and bulk verification.

Forms are enumerated in lattice order over the box |a_i| <= B and kept when they
are primitive and lexicographically least among
{a, reversed(a), -a, -reversed(a)}. Results are produced in that order whatever
the worker count, so output files are byte-identical across runs.
"""

import csv
import functools
import itertools
import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Iterable, Iterator, List, Optional, Sequence, Tuple, TypeVar

import numpy as np
from pydantic import ValidationError

from config import config

from .binary_forms import BinaryForm
from .errors import CorpusError, DomainError, HeightError
from .heights import SEXTIC_MODULI_CONSTANT
from .models import (
    CSV_FLOAT_FIELDS,
    CorpusRecord,
    EnumerationSummary,
    HeightReport,
    RelationCount,
    VerifySummary,
)
from .parsing import parse_form
from .relations import RELATIONS, verify_relations

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


# ============================================================================
# Enumeration
# ============================================================================


def lattice_size(degree: int, bound: int) -> int:
    return (2 * bound + 1) ** (degree + 1)


def canonical_representative(coeffs: Sequence[int]) -> Tuple[int, ...]:
    c = tuple(coeffs)
    rev = tuple(reversed(c))
    return min(c, rev, tuple(-a for a in c), tuple(-a for a in rev))


def enumerate_forms(degree: int, bound: int, cap: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    """Primitive canonical coefficient tuples with |a_i| <= bound, in lattice order.

    The cap is checked before the first tuple is produced.
    """
    if degree not in (3, 4, 5, 6):
        raise DomainError(f"enumeration supports degrees 3..6, got {degree}")
    if bound < 0:
        raise DomainError("bound must be nonnegative")
    cap = cap or config.enumeration.lattice_cap
    size = lattice_size(degree, bound)
    if size > cap:
        raise DomainError(f"lattice of {size} tuples exceeds the cap {cap}")
    return _lattice(degree, bound)


def _lattice(degree: int, bound: int) -> Iterator[Tuple[int, ...]]:
    for coeffs in itertools.product(range(-bound, bound + 1), repeat=degree + 1):
        if math.gcd(*coeffs) != 1:
            continue
        if canonical_representative(coeffs) == coeffs:
            yield coeffs


def random_forms(count: int, degree: int, bound: int, seed: int = 0) -> List[Tuple[int, ...]]:
    """count integer tuples uniform in [-bound, bound]^(d+1), the zero tuple redrawn."""
    if bound < 1:
        raise DomainError("random forms need bound >= 1")
    rng = np.random.default_rng(seed)
    out: List[Tuple[int, ...]] = []
    while len(out) < count:
        coeffs = tuple(int(a) for a in rng.integers(-bound, bound + 1, size=degree + 1))
        if any(coeffs):
            out.append(coeffs)
    return out


# ============================================================================
# Workers
# ============================================================================


def parallel_map(func: Callable[[T], R], items: Iterable[T], workers: int, chunk_size: int) -> Iterator[R]:
    """Ordered map, through a process pool when workers > 1."""
    if workers <= 1:
        yield from map(func, items)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(func, items, chunksize=chunk_size)


def build_record(coeffs: Tuple[int, ...], tolerance: Optional[float] = None, timings: bool = False) -> CorpusRecord:
    """CorpusRecord for one tuple; numerical failures become status 'error'."""
    start = time.perf_counter()
    f = BinaryForm(coeffs)
    try:
        record = CorpusRecord.from_report(list(coeffs), verify_relations(f, tolerance=tolerance))
    except HeightError as e:
        logger.warning(f"{f}: {type(e).__name__}: {e}")
        record = CorpusRecord(
            degree=f.degree,
            coefficients=list(coeffs),
            form=str(f),
            status="error",
            error=f"{type(e).__name__}: {e}",
            passed=False,
        )
    if timings:
        record.wall_time = time.perf_counter() - start
    return record


def _report_or_error(f: BinaryForm, tolerance: Optional[float]) -> Tuple[BinaryForm, Optional[HeightReport], Optional[str]]:
    try:
        return f, verify_relations(f, tolerance=tolerance), None
    except HeightError as e:
        return f, None, f"{type(e).__name__}: {e}"


# ============================================================================
# Persistence
# ============================================================================


def write_records(
    records: Iterable[CorpusRecord],
    out: Optional[Path] = None,
    csv_path: Optional[Path] = None,
) -> Iterator[CorpusRecord]:
    """Stream records to JSONL and CSV while passing them through."""
    try:
        jsonl = open(out, "w", encoding="utf-8") if out else None
        table = open(csv_path, "w", encoding="utf-8", newline="") if csv_path else None
    except OSError as e:
        raise CorpusError(f"cannot open output: {e}") from e
    try:
        writer = None
        if table:
            writer = csv.DictWriter(
                table, fieldnames=["degree", "coefficients", *CSV_FLOAT_FIELDS], lineterminator="\n"
            )
            writer.writeheader()
        for record in records:
            if jsonl:
                jsonl.write(record.to_json() + "\n")
            if writer:
                writer.writerow(record.csv_row())
            yield record
    except OSError as e:
        raise CorpusError(f"write failed: {e}") from e
    finally:
        for handle in (jsonl, table):
            if handle:
                handle.close()


def read_corpus(path: Path) -> List[BinaryForm]:
    """Forms from a JSONL corpus; each line needs 'coefficients' or 'form'."""
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise CorpusError(f"cannot read corpus {path}: {e}") from e

    forms: List[BinaryForm] = []
    for number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            data = json.loads(line)
            if "coefficients" in data:
                forms.append(BinaryForm(tuple(data["coefficients"])))
            else:
                forms.append(parse_form(data["form"]))
        except (json.JSONDecodeError, KeyError, TypeError, ValidationError, DomainError) as e:
            raise CorpusError(f"{path}:{number}: malformed record ({e})") from e
    logger.info(f"Read {len(forms)} forms from {path}")
    return forms


# ============================================================================
# Runs
# ============================================================================


def verify_forms(
    forms: Sequence[BinaryForm],
    source: str,
    tolerance: Optional[float] = None,
    workers: Optional[int] = None,
) -> VerifySummary:
    """Verify every form and aggregate pass/fail counts, max residuals and the ledger."""
    tolerance = tolerance if tolerance is not None else config.precision.relation_tolerance
    workers = workers or config.enumeration.workers
    summary = VerifySummary(
        source=source,
        total=len(forms),
        tolerance=tolerance,
        relations={name: RelationCount() for name in RELATIONS},
    )
    if not forms:
        summary.warnings.append("no forms to verify")
        logger.warning(f"{source}: no forms to verify")
        return summary

    task = functools.partial(_report_or_error, tolerance=tolerance)
    for f, report, error in parallel_map(task, forms, workers, config.enumeration.chunk_size):
        if report is None:
            summary.errors += 1
            summary.warnings.append(f"{f}: {error}")
            continue
        if not report.semistable or report.nullcone:
            summary.skipped_unstable += 1
            continue
        summary.checked += 1
        for r in report.relations:
            counts = summary.relations[r.name]
            if r.status == "pass":
                counts.passed += 1
            elif r.status == "fail":
                counts.failed += 1
            else:
                counts.not_applicable += 1
            if r.residual is not None:
                summary.max_residuals[r.name] = max(summary.max_residuals.get(r.name, 0.0), r.residual)
        for key, value in report.ledger_differences.items():
            summary.ledger_max_abs[key] = max(summary.ledger_max_abs.get(key, 0.0), abs(value))
        if not report.passed:
            summary.violations.append(report.form)

    logger.info(
        f"Verified {summary.checked}/{summary.total} forms from {source}: "
        f"{len(summary.violations)} violation(s), {summary.skipped_unstable} unstable"
    )
    return summary


def enumerate_corpus(
    degree: int,
    bound: int,
    out: Optional[Path] = None,
    csv_path: Optional[Path] = None,
    workers: Optional[int] = None,
    timings: bool = False,
    tolerance: Optional[float] = None,
) -> Tuple[EnumerationSummary, List[CorpusRecord]]:
    """Enumerate, verify and persist every canonical primitive form in the box."""
    workers = workers or config.enumeration.workers
    tuples = list(enumerate_forms(degree, bound))
    summary = EnumerationSummary(
        degree=degree,
        bound=bound,
        lattice_size=lattice_size(degree, bound),
        out=str(out) if out else None,
        csv=str(csv_path) if csv_path else None,
    )
    if degree == 6:
        summary.sextic_constant_log = math.log(SEXTIC_MODULI_CONSTANT)
    if not tuples:
        summary.warnings.append(f"no primitive forms with |a_i| <= {bound}")
        logger.warning(f"degree {degree}, bound {bound}: nothing to enumerate")

    logger.info(f"Enumerating {len(tuples)} forms of degree {degree} with |a_i| <= {bound}")
    task = functools.partial(build_record, tolerance=tolerance, timings=timings)
    records = list(
        write_records(parallel_map(task, tuples, workers, config.enumeration.chunk_size), out, csv_path)
    )

    for record in records:
        summary.records += 1
        if record.status == "unstable":
            summary.unstable += 1
            continue
        if record.status == "error":
            summary.errors += 1
            continue
        if not record.passed:
            summary.failed += 1
        ratio = record.moduli_minimal_log_ratio
        if ratio is not None and (
            summary.max_moduli_minimal_log_ratio is None or ratio > summary.max_moduli_minimal_log_ratio
        ):
            summary.max_moduli_minimal_log_ratio = ratio
            summary.max_ratio_form = record.form
        margin = record.faltings_margin
        if margin is not None and (summary.min_faltings_margin is None or margin < summary.min_faltings_margin):
            summary.min_faltings_margin = margin

    if summary.sextic_constant_log is not None and summary.max_moduli_minimal_log_ratio is not None:
        summary.below_sextic_constant = summary.max_moduli_minimal_log_ratio < summary.sextic_constant_log
    return summary, records
