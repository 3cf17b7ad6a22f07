#!/usr/bin/env python3
"""
Command-line front end for binary form heights.

Commands:
    height         all heights and relation residuals of one form
    verify         relation check over a corpus file or a random sample
    enumerate      primitive forms in a coefficient box, persisted as JSONL
    reduce         local minimality at primes and the GL2(Z) descent
    minimize-arch  Chow-norm minimization over SU(2)\\SL2(C)
    roots          the Chow representative of a form

Forms are written either as polynomials in x and y ("x^3 - 2*y^3") or as
ascending coefficient lists a_0,...,a_d ("-2,0,0,1" is x^3 - 2y^3).

Exit codes: 0 clean, 1 relation violation, 2 domain or numerical error, 3 I/O error.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent))

from config import config
from binary_heights.binary_forms import (
    BinaryForm,
    RootDivisor,
    RootPoint,
    discriminant,
    format_form,
    roots,
)
from binary_heights.chow_optimizer import minimize_chow_norm
from binary_heights.corpus import enumerate_corpus, random_forms, read_corpus, verify_forms
from binary_heights.errors import CorpusError, DomainError, HeightError, NumericalError
from binary_heights.heights import chow_norm
from binary_heights.models import (
    MinimizationReport,
    PrimeReduction,
    ReductionReport,
    ReportModel,
    complex_str,
)
from binary_heights.parsing import parse_form
from binary_heights.reduction import bad_primes, local_reduction, minimal_height_search
from binary_heights.relations import verify_relations

logger = logging.getLogger("hforms")

FORM_SYNTAX = """\
Forms are polynomials in x and y ("x^3 - 2*y^3") or ascending coefficient
lists a_0,...,a_d ("-2,0,0,1" is x^3 - 2y^3). A list starting with a minus
sign goes after "--": hforms height --degree 3 -- -2,0,0,1
"""

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_DOMAIN = 2
EXIT_IO = 3


def _emit(model: ReportModel, title: str, as_json: bool) -> None:
    if as_json:
        print(model.model_dump_json(indent=2))
        return
    print("=" * 60)
    print(title)
    print("=" * 60)
    print(model.to_yaml(), end="")


# ============================================================================
# Commands
# ============================================================================


def cmd_height(args) -> int:
    f = parse_form(args.form, args.degree)
    report = verify_relations(f, tolerance=args.tolerance, precision_bits=args.precision)
    _emit(report, f"HEIGHTS OF {report.form}", args.json)
    return EXIT_OK if report.passed else EXIT_VIOLATION


def cmd_verify(args) -> int:
    if args.corpus:
        forms = read_corpus(Path(args.corpus))
        source = args.corpus
    elif args.random:
        if args.degree is None:
            raise DomainError("--random needs --degree")
        tuples = random_forms(args.random, args.degree, args.bound, seed=args.seed)
        forms = [BinaryForm(t) for t in tuples]
        source = f"random n={args.random} d={args.degree} B={args.bound} seed={args.seed}"
    else:
        raise DomainError("verify needs --corpus or --random")
    summary = verify_forms(forms, source, tolerance=args.tolerance, workers=args.workers)
    _emit(summary, "VERIFICATION SUMMARY", args.json)
    return EXIT_OK if summary.passed else EXIT_VIOLATION


def cmd_enumerate(args) -> int:
    summary, records = enumerate_corpus(
        args.degree,
        args.bound,
        out=Path(args.out) if args.out else None,
        csv_path=Path(args.csv) if args.csv else None,
        workers=args.workers,
        timings=args.timings,
        tolerance=args.tolerance,
    )
    _emit(summary, f"ENUMERATION d={args.degree} B={args.bound}", args.json)
    return EXIT_OK if summary.failed == 0 else EXIT_VIOLATION


def _matrix_strings(M) -> List[List[str]]:
    return [[str(e) for e in row] for row in M.rows()]


def cmd_reduce(args) -> int:
    f = parse_form(args.form, args.degree)
    if not f.is_integral:
        raise DomainError("reduce needs an integral form")
    primes = bad_primes(f) if args.all_bad_primes or args.prime is None else [args.prime]
    entries = []
    for p in primes:
        result = local_reduction(f, p)
        entries.append(
            PrimeReduction(
                prime=p,
                reduction_multiplicity=result.reduction_multiplicity,
                semistable_reduction=result.semistable_reduction,
                improved=result.improved,
                steps=len(result.steps),
                transformation=_matrix_strings(result.matrix),
                model=format_form(result.model),
                discriminant_valuation_before=result.discriminant_valuation_before,
                discriminant_valuation_after=result.discriminant_valuation_after,
            )
        )
    search = minimal_height_search(f)
    report = ReductionReport(
        form=format_form(f),
        discriminant=str(discriminant(f)) if f.degree >= 2 else "n/a",
        primes=entries,
        minimal_upper=search.upper,
        search_word=list(search.word),
        search_model=format_form(search.form),
        search_nodes=search.nodes,
    )
    _emit(report, f"REDUCTION OF {report.form}", args.json)
    return EXIT_OK


def parse_points(text: str) -> RootDivisor:
    """Projective points "x:y" or "x:y*m", comma separated; entries are Python complex literals."""
    points = []
    for item in text.split(","):
        item = item.strip()
        try:
            mult = 1
            if "*" in item:
                item, m = item.rsplit("*", 1)
                mult = int(m)
            x, y = (complex(part.strip()) for part in item.split(":"))
        except ValueError as e:
            raise DomainError(f"cannot read projective point {item!r}") from e
        points.append(RootPoint(x, y, mult))
    return RootDivisor(tuple(points))


def cmd_minimize_arch(args) -> int:
    form: Optional[BinaryForm] = None
    if args.points:
        div = parse_points(args.points)
    elif args.form:
        form = parse_form(args.form, args.degree)
        div = roots(form, precision_bits=args.precision)
    else:
        raise DomainError("minimize-arch needs a form or --points")
    result = minimize_chow_norm(div, objective=args.objective, form=form, real=args.real)
    report = MinimizationReport(
        form=format_form(form) if form else None,
        objective=result.objective,
        coset=[[complex_str(z) for z in row] for row in result.coset.matrix],
        min_value=result.min_value,
        iterations=result.iterations,
        residual=result.residual,
        orbit_values=result.orbit_values,
    )
    _emit(report, "CHOW NORM MINIMIZATION", args.json)
    return EXIT_OK


def cmd_roots(args) -> int:
    f = parse_form(args.form, args.degree)
    if not 1 <= f.degree <= 10:
        raise DomainError(f"roots supports degrees 1..10, got {f.degree}")
    div = roots(f, precision_bits=args.precision)
    norm = chow_norm(div, args.precision)
    data = {
        "schema_version": config.enumeration.schema_version,
        "form": format_form(f),
        "leading_scalar": str(div.leading_scalar),
        "roots": [
            {"x": complex_str(r.x), "y": complex_str(r.y), "multiplicity": r.multiplicity}
            for r in div.roots
        ],
        "chow_scalar_term": float(f"{norm.scalar_term:.15g}"),
        "chow_root_terms": [float(f"{t:.15g}") for t in norm.root_terms],
        "chowh": float(f"{norm.height:.15g}"),
    }
    if args.json:
        print(json.dumps(data, indent=2))
    else:
        print("=" * 60)
        print(f"CHOW REPRESENTATIVE OF {data['form']}")
        print("=" * 60)
        print(f"Leading scalar: {data['leading_scalar']}")
        for r, term in zip(data["roots"], data["chow_root_terms"]):
            print(f"  [{r['x']} : {r['y']}]  multiplicity {r['multiplicity']}  (1/2) b log|p|^2 = {term}")
        print(f"log|c| = {data['chow_scalar_term']}")
        print(f"chowh  = {data['chowh']}")
    return EXIT_OK


# ============================================================================
# Entry point
# ============================================================================


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hforms",
        description="Heights of binary forms and weighted projective points",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=FORM_SYNTAX,
    )
    parser.add_argument("--verbose", action="store_true", help="Log at DEBUG level")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, form: str = "required") -> None:
        if form != "none":
            p.add_argument(
                "form",
                nargs="?" if form == "optional" else None,
                help="Polynomial in x, y or ascending coefficient list",
            )
            p.add_argument("--degree", type=int, help="Expected degree")
        p.add_argument("--json", action="store_true", help="Print JSON instead of the YAML table")
        p.add_argument(
            "--precision",
            type=int,
            default=config.precision.precision_bits,
            help="Working precision in bits; above 53 uses mpmath (default: %(default)s)",
        )

    p = sub.add_parser("height", help="All heights of one form")
    common(p)
    p.add_argument("--tolerance", type=float, help="Relation tolerance")
    p.set_defaults(handler=cmd_height)

    p = sub.add_parser("verify", help="Check relations over a corpus or random sample")
    common(p, form="none")
    p.add_argument("--corpus", help="JSONL corpus file")
    p.add_argument("--random", type=int, help="Number of random forms")
    p.add_argument("--degree", type=int, help="Degree of random forms")
    p.add_argument("--bound", type=int, default=5, help="Coefficient bound (default: %(default)s)")
    p.add_argument("--seed", type=int, default=0, help="Random seed (default: %(default)s)")
    p.add_argument("--tolerance", type=float, help="Relation tolerance")
    p.add_argument("--workers", type=int, help="Worker processes (default: HFORMS_WORKERS)")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("enumerate", help="Enumerate primitive forms with |a_i| <= bound")
    common(p, form="none")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--out", help="JSONL output file")
    p.add_argument("--csv", help="CSV output file (floats only)")
    p.add_argument("--timings", action="store_true", help="Add wall_time to records")
    p.add_argument("--tolerance", type=float, help="Relation tolerance")
    p.add_argument("--workers", type=int, help="Worker processes (default: HFORMS_WORKERS)")
    p.set_defaults(handler=cmd_enumerate)

    p = sub.add_parser("reduce", help="Local minimality and GL2(Z) descent")
    common(p)
    group = p.add_mutually_exclusive_group()
    group.add_argument("-p", "--prime", type=int, help="Reduce at this prime")
    group.add_argument("--all-bad-primes", action="store_true", help="Reduce at every prime dividing the discriminant (default)")
    p.set_defaults(handler=cmd_reduce)

    p = sub.add_parser("minimize-arch", help="Minimize the Chow norm over SU(2)\\SL2(C)")
    common(p, form="optional")
    p.add_argument("--points", help='Projective points instead of a form, e.g. "1:0,0:1" or "1j:1*2"')
    p.add_argument("--objective", choices=["chow", "coeff"], default="chow")
    p.add_argument("--real", action="store_true", help="Restrict to real symmetric cosets")
    p.set_defaults(handler=cmd_minimize_arch)

    p = sub.add_parser("roots", help="Chow representative of a form of degree 1..10")
    common(p)
    p.set_defaults(handler=cmd_roots)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )

    try:
        return args.handler(args)
    except (CorpusError, OSError) as e:
        logger.error(f"I/O error: {e}")
        return EXIT_IO
    except DomainError as e:
        logger.error(f"Domain error: {e}")
        return EXIT_DOMAIN
    except NumericalError as e:
        logger.error(f"Numerical failure: {e}")
        return EXIT_DOMAIN
    except HeightError as e:
        logger.error(f"Error: {e}")
        return EXIT_DOMAIN
    except (ArithmeticError, np.linalg.LinAlgError) as e:
        logger.error(f"Numerical failure: {type(e).__name__}: {e}")
        return EXIT_DOMAIN


if __name__ == "__main__":
    exit(main())
