"""
Pydantic models for reports, corpus records and run summaries.

Floats are rounded to 15 significant digits when dumped, so JSON output is
stable across platforms. Exact logarithms are serialized as lists of
{"coeff": "p/q", "prime": p}.
"""

import math
from typing import Any, Dict, List, Literal, Optional

import yaml
from pydantic import BaseModel, Field, model_serializer

from config import config

from .exact_arith import LogValue

RelationStatus = Literal["pass", "fail", "n/a"]


def round_float(value: float) -> Optional[float]:
    if math.isnan(value) or math.isinf(value):
        return None
    return float(f"{value:.15g}")


def _round_floats(data: Any) -> Any:
    if isinstance(data, float):
        return round_float(data)
    if isinstance(data, dict):
        return {k: _round_floats(v) for k, v in data.items()}
    if isinstance(data, list):
        return [_round_floats(v) for v in data]
    return data


class ReportModel(BaseModel):
    """Base model: rounds floats on dump and renders YAML."""

    @model_serializer(mode="wrap")
    def serialize_rounded(self, handler):
        return _round_floats(handler(self))

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.model_dump(mode="json"), sort_keys=False, allow_unicode=True)


# ============================================================================
# Exact values
# ============================================================================


class ExactLogTerm(ReportModel):
    coeff: str = Field(description="Rational coefficient of log(prime), as 'p/q' or an integer")
    prime: int = Field(description="The prime p")


class ExactLogModel(ReportModel):
    """A formal combination sum coeff * log(prime) with its float value."""

    terms: List[ExactLogTerm] = Field(default_factory=list, description="Nonzero terms by prime")
    value: float = Field(description="Float evaluation of the combination")

    @classmethod
    def from_log(cls, log: LogValue, bits: int = 53) -> "ExactLogModel":
        return cls(
            terms=[ExactLogTerm(coeff=str(c), prime=p) for p, c in log.terms],
            value=log.to_float(bits),
        )


# ============================================================================
# Height reports
# ============================================================================


class RelationResidual(ReportModel):
    name: str = Field(description="Relation identifier, e.g. 'R1'")
    description: str = Field(description="What the relation asserts")
    residual: Optional[float] = Field(default=None, description="Absolute residual or shortfall")
    tolerance: float = Field(description="Gate applied to the residual")
    status: RelationStatus = Field(description="pass, fail, or n/a when the relation does not apply")
    note: str = Field(default="", description="Why the relation is n/a, when it is")


class LedgerEntry(ReportModel):
    """A recorded value that informs but never gates a run."""

    reading: str = Field(description="Name of the quantity")
    value: Optional[float] = Field(default=None, description="Value, or null when unavailable")
    note: str = Field(default="", description="Context or reason the value is missing")


class HeightReport(ReportModel):
    """Every height of one form plus the residuals of the checked relations."""

    schema_version: str = Field(default_factory=lambda: config.enumeration.schema_version)
    form: str = Field(description="The form in polynomial syntax")
    coefficients: List[str] = Field(description="Ascending coefficients a_0..a_d")
    degree: int
    semistable: bool
    stable: bool
    nullcone: bool = Field(description="All invariants vanish")
    flags: List[str] = Field(default_factory=list, description="Degenerate-case markers")

    invariant_names: List[str] = Field(default_factory=list)
    invariant_values: List[str] = Field(default_factory=list, description="Exact values xi_j(f)")
    weights: List[int] = Field(default_factory=list, description="Degrees q_j of the invariants")
    invariant_header: Dict[str, str] = Field(
        default_factory=dict, description="Transvectant word and normalization per generator"
    )

    naive: ExactLogModel = Field(description="Weil height of the coefficient point")
    minimal_upper: float = Field(description="Upper bound for the minimal height from the GL2(Z) search")
    minimal_word: List[str] = Field(default_factory=list, description="Generator word of the best model")
    moduli: Optional[ExactLogModel] = Field(default=None, description="Weil height of the invariant point")
    lwh_xi: Optional[ExactLogModel] = Field(default=None, description="Moduli weighted height of xi(f)")
    chowh: float = Field(description="Chow height")
    chow_scalar_term: float = Field(description="log|c| of the Chow representative")
    cih_decomp: Optional[float] = Field(default=None, description="Invariant height with the Chow metric")
    cih_primitive: Optional[float] = Field(default=None, description="cih_decomp of the primitive model")
    cih_naive: Optional[float] = None
    cih_closed_form: Optional[float] = Field(default=None, description="Power-form closed form, when f is one")
    git_height: float = Field(description="GIT height of the zero-cycle of f")
    faltings_margin: Optional[float] = None
    aut_group_order: Optional[int] = None
    moduli_minimal_log_ratio: Optional[float] = None

    relations: List[RelationResidual] = Field(default_factory=list)
    ledger: List[LedgerEntry] = Field(default_factory=list)
    ledger_differences: Dict[str, float] = Field(
        default_factory=dict, description="Pairwise differences between invariant-height readings"
    )

    @property
    def passed(self) -> bool:
        return all(r.status != "fail" for r in self.relations)

    def relation(self, name: str) -> RelationResidual:
        return next(r for r in self.relations if r.name == name)

    def ledger_value(self, reading: str) -> Optional[float]:
        entry = next((e for e in self.ledger if e.reading == reading), None)
        return entry.value if entry else None


# ============================================================================
# Corpus
# ============================================================================


class CorpusRecord(ReportModel):
    """One flattened line of a corpus file."""

    schema_version: str = Field(default_factory=lambda: config.enumeration.schema_version)
    degree: int
    coefficients: List[int] = Field(description="Ascending integer coefficients a_0..a_d")
    form: str
    status: Literal["ok", "unstable", "error"] = "ok"
    error: Optional[str] = None
    semistable: bool = False
    stable: bool = False
    naive: Optional[float] = None
    minimal_upper: Optional[float] = None
    moduli: Optional[float] = None
    lwh_xi: Optional[float] = None
    chowh: Optional[float] = None
    cih_decomp: Optional[float] = None
    cih_naive: Optional[float] = None
    git_height: Optional[float] = None
    faltings_margin: Optional[float] = None
    aut_group_order: Optional[int] = None
    moduli_minimal_log_ratio: Optional[float] = None
    r1_residual: Optional[float] = None
    r3_residual: Optional[float] = None
    passed: bool = True
    wall_time: Optional[float] = Field(default=None, description="Seconds; only written with --timings")

    @classmethod
    def from_report(cls, coefficients: List[int], report: HeightReport) -> "CorpusRecord":
        ok = report.semistable and not report.nullcone
        r1 = report.relation("R1") if report.relations else None
        r3 = report.relation("R3") if report.relations else None
        return cls(
            degree=report.degree,
            coefficients=list(coefficients),
            form=report.form,
            status="ok" if ok else "unstable",
            semistable=report.semistable,
            stable=report.stable,
            naive=report.naive.value,
            minimal_upper=report.minimal_upper,
            moduli=report.moduli.value if report.moduli else None,
            lwh_xi=report.lwh_xi.value if report.lwh_xi else None,
            chowh=report.chowh,
            cih_decomp=report.cih_decomp,
            cih_naive=report.cih_naive,
            git_height=report.git_height,
            faltings_margin=report.faltings_margin,
            aut_group_order=report.aut_group_order,
            moduli_minimal_log_ratio=report.moduli_minimal_log_ratio,
            r1_residual=r1.residual if r1 else None,
            r3_residual=r3.residual if r3 else None,
            passed=report.passed,
        )

    def to_json(self) -> str:
        exclude = {"wall_time"} if self.wall_time is None else None
        return self.model_dump_json(exclude=exclude)

    def csv_row(self) -> Dict[str, Any]:
        data = self.model_dump(mode="json")
        row: Dict[str, Any] = {"degree": self.degree, "coefficients": " ".join(map(str, self.coefficients))}
        row.update({k: data[k] for k in CSV_FLOAT_FIELDS})
        return row


CSV_FLOAT_FIELDS = (
    "naive",
    "minimal_upper",
    "moduli",
    "lwh_xi",
    "chowh",
    "cih_decomp",
    "cih_naive",
    "git_height",
    "faltings_margin",
    "moduli_minimal_log_ratio",
    "r1_residual",
    "r3_residual",
)


class RelationCount(ReportModel):
    passed: int = 0
    failed: int = 0
    not_applicable: int = 0


class VerifySummary(ReportModel):
    schema_version: str = Field(default_factory=lambda: config.enumeration.schema_version)
    source: str = Field(description="Corpus path or random-sample description")
    total: int = 0
    checked: int = 0
    skipped_unstable: int = 0
    errors: int = 0
    tolerance: float
    relations: Dict[str, RelationCount] = Field(default_factory=dict)
    max_residuals: Dict[str, float] = Field(default_factory=dict)
    ledger_max_abs: Dict[str, float] = Field(
        default_factory=dict, description="Largest |difference| per ledger pair, never gating"
    )
    violations: List[str] = Field(default_factory=list, description="Forms failing an asserted relation")
    warnings: List[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


class EnumerationSummary(ReportModel):
    schema_version: str = Field(default_factory=lambda: config.enumeration.schema_version)
    degree: int
    bound: int
    lattice_size: int
    records: int = 0
    unstable: int = 0
    errors: int = 0
    failed: int = 0
    max_moduli_minimal_log_ratio: Optional[float] = None
    max_ratio_form: Optional[str] = None
    sextic_constant_log: Optional[float] = None
    below_sextic_constant: Optional[bool] = None
    min_faltings_margin: Optional[float] = None
    out: Optional[str] = None
    csv: Optional[str] = None
    warnings: List[str] = Field(default_factory=list)


# ============================================================================
# Reduction and optimizer reports
# ============================================================================


class PrimeReduction(ReportModel):
    prime: int
    reduction_multiplicity: int = Field(description="Largest root multiplicity of f mod p")
    semistable_reduction: bool
    improved: bool = Field(description="A substitution lowered the discriminant valuation")
    steps: int
    transformation: List[List[str]] = Field(description="Composite substitution matrix")
    model: str = Field(description="Reduced model in polynomial syntax")
    discriminant_valuation_before: Optional[int] = None
    discriminant_valuation_after: Optional[int] = None


class ReductionReport(ReportModel):
    schema_version: str = Field(default_factory=lambda: config.enumeration.schema_version)
    form: str
    discriminant: str
    primes: List[PrimeReduction] = Field(default_factory=list)
    minimal_upper: float
    search_word: List[str] = Field(default_factory=list)
    search_model: str
    search_nodes: int


class MinimizationReport(ReportModel):
    schema_version: str = Field(default_factory=lambda: config.enumeration.schema_version)
    form: Optional[str] = None
    objective: Literal["chow", "coeff"]
    coset: List[List[str]] = Field(description="Hermitian det-1 matrix P, entries as complex strings")
    min_value: float
    iterations: int
    residual: Optional[float] = Field(default=None, description="Relative balanced-condition residual")
    orbit_values: List[float] = Field(default_factory=list)


def complex_str(z: complex) -> str:
    z = complex(z)
    return f"{z.real:.15g}{z.imag:+.15g}j"
