import csv
import itertools
import json
import math

import pytest

from binary_heights.binary_forms import BinaryForm
from binary_heights.corpus import (
    build_record,
    canonical_representative,
    enumerate_corpus,
    enumerate_forms,
    random_forms,
    read_corpus,
    verify_forms,
)
from binary_heights.errors import CorpusError, DomainError
from binary_heights.models import CSV_FLOAT_FIELDS, CorpusRecord


def test_canonical_representative():
    assert canonical_representative((-1, 0, 0, 1)) == (-1, 0, 0, 1)
    assert canonical_representative((1, 0, 0, -1)) == (-1, 0, 0, 1)
    assert canonical_representative((0, 1, 2)) == (-2, -1, 0)


def test_enumeration_is_a_transversal():
    forms = list(enumerate_forms(3, 1))
    assert len(forms) == len(set(forms))
    assert all(math.gcd(*c) == 1 and canonical_representative(c) == c for c in forms)
    every = {
        canonical_representative(c)
        for c in itertools.product(range(-1, 2), repeat=4)
        if math.gcd(*c) == 1
    }
    assert set(forms) == every
    assert forms == sorted(forms)


def test_enumeration_edges():
    assert list(enumerate_forms(3, 0)) == []
    with pytest.raises(DomainError):
        enumerate_forms(6, 10, cap=1000)
    with pytest.raises(DomainError):
        enumerate_forms(2, 3)


def test_random_forms_are_reproducible():
    a = random_forms(20, 4, 5, seed=7)
    assert a == random_forms(20, 4, 5, seed=7)
    assert all(len(c) == 5 and any(c) and max(map(abs, c)) <= 5 for c in a)
    with pytest.raises(DomainError):
        random_forms(1, 3, 0)


def test_build_record():
    record = build_record((-1, 0, 0, 1))
    assert record.status == "ok"
    assert record.r3_residual == 0
    assert record.wall_time is None
    assert "wall_time" not in json.loads(record.to_json())
    timed = build_record((-1, 0, 0, 1), timings=True)
    assert timed.wall_time is not None
    unstable = build_record((0, 0, 1, 0))
    assert unstable.status == "unstable" and unstable.cih_decomp is None


def test_enumerate_corpus_writes_reproducible_files(tmp_path):
    out, table = tmp_path / "c3.jsonl", tmp_path / "c3.csv"
    summary, records = enumerate_corpus(3, 1, out=out, csv_path=table)
    lines = out.read_text().splitlines()
    assert summary.records == len(records) == len(lines) == len(list(enumerate_forms(3, 1)))
    assert summary.failed == 0 and summary.errors == 0
    assert summary.unstable > 0
    assert [CorpusRecord.model_validate_json(line).coefficients for line in lines] == [
        r.coefficients for r in records
    ]

    with open(table, newline="") as handle:
        rows = list(csv.DictReader(handle))
    assert list(rows[0]) == ["degree", "coefficients", *CSV_FLOAT_FIELDS]
    assert len(rows) == len(records)

    first = out.read_bytes()
    enumerate_corpus(3, 1, out=out)
    assert out.read_bytes() == first


def test_read_corpus_round_trip(tmp_path):
    path = tmp_path / "mixed.jsonl"
    path.write_text(
        json.dumps({"coefficients": [-1, 0, 0, 1]}) + "\n\n" + json.dumps({"form": "x^4 + y^4"}) + "\n"
    )
    forms = read_corpus(path)
    assert forms == [BinaryForm.power_form(3), BinaryForm((1, 0, 0, 0, 1))]


def test_read_corpus_errors(tmp_path):
    with pytest.raises(CorpusError):
        read_corpus(tmp_path / "missing.jsonl")
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"coefficients": [1, 0, 1]}\n{"nothing": 1}\n')
    with pytest.raises(CorpusError, match=":2:"):
        read_corpus(bad)


def test_verify_forms():
    forms = [BinaryForm.power_form(3), BinaryForm((0, 0, 1, 0)), BinaryForm((1, 2, 0, 1))]
    summary = verify_forms(forms, "inline")
    assert summary.total == 3
    assert summary.checked == 2
    assert summary.skipped_unstable == 1
    assert summary.passed
    assert summary.relations["R1"].passed == 2
    assert "cih_decomposition - cih_naive" in summary.ledger_max_abs


def test_verify_nothing_warns():
    summary = verify_forms([], "empty")
    assert summary.passed
    assert summary.warnings


@pytest.mark.slow
def test_worker_count_does_not_change_output(tmp_path):
    one, two = tmp_path / "one.jsonl", tmp_path / "two.jsonl"
    enumerate_corpus(4, 1, out=one, workers=1)
    enumerate_corpus(4, 1, out=two, workers=2)
    assert one.read_bytes() == two.read_bytes()


@pytest.mark.slow
def test_sextic_box(tmp_path):
    summary, records = enumerate_corpus(6, 1, out=tmp_path / "c6.jsonl")
    assert summary.failed == 0
    assert summary.min_faltings_margin is not None and summary.min_faltings_margin >= 0
    assert summary.max_moduli_minimal_log_ratio is not None
    assert math.isfinite(summary.max_moduli_minimal_log_ratio)
    assert summary.sextic_constant_log == pytest.approx(math.log(2**28 * 3**9 * 5**5 * 7 * 11 * 13 * 17 * 43))
    assert summary.below_sextic_constant


@pytest.mark.slow
def test_cubic_box(tmp_path):
    summary, records = enumerate_corpus(3, 2, out=tmp_path / "c3.jsonl")
    assert summary.records == len(records) == len(list(enumerate_forms(3, 2)))
    assert summary.failed == 0
    assert summary.max_moduli_minimal_log_ratio is not None
    assert math.isfinite(summary.max_moduli_minimal_log_ratio)
    assert summary.min_faltings_margin >= 0
