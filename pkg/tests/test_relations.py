import math
from fractions import Fraction

import pytest

from binary_heights import verify_form
from binary_heights.binary_forms import BinaryForm, is_semistable
from binary_heights.errors import UnsupportedDegreeError
from binary_heights.heights import chow_height, cih_decomposition
from binary_heights.invariants import evaluate_invariants
from binary_heights.relations import RELATIONS, power_form_parameter, verify_relations
from binary_heights.weighted_projective import lwh

from conftest import LOG2, product_form, random_integral_form


@pytest.fixture(scope="module")
def cubic_report():
    return verify_relations(BinaryForm.power_form(3))


def test_report_of_x3_minus_y3(cubic_report):
    report = cubic_report
    assert report.semistable and report.stable and not report.nullcone
    assert report.invariant_values == ["-27"]
    assert report.lwh_xi.value == 0
    assert report.chowh == pytest.approx(1.5 * LOG2, abs=1e-12)
    assert report.cih_decomp == pytest.approx(-1.5 * LOG2, abs=1e-10)
    assert report.cih_closed_form == pytest.approx(0.56403, abs=5e-5)
    assert report.git_height == pytest.approx(LOG2 / 2, abs=1e-12)
    assert report.aut_group_order == 6
    assert report.minimal_upper == 0
    assert report.passed
    assert [r.status for r in report.relations] == ["pass"] * 4
    assert report.relation("R3").residual == 0


def test_ledger_of_x3_minus_y3(cubic_report):
    report = cubic_report
    assert report.ledger_value("cih_decomposition") == pytest.approx(-1.5 * LOG2, abs=1e-10)
    assert report.ledger_value("cih_closed_form_reference") == 0.215
    assert report.ledger_value("cih_cubic_statement") == pytest.approx(0.30410, abs=1e-4)
    assert report.ledger_value("cih_cubic_proof") == pytest.approx(-3 / 8 * LOG2, abs=1e-10)
    assert report.ledger_value("cih_automorphism") == pytest.approx(0.304099, abs=1e-5)
    diff = report.ledger_differences["cih_decomposition - cih_closed_form"]
    assert diff == pytest.approx(-1.5 * LOG2 - 0.56403, abs=1e-4)


def test_degenerate_report(unstable_cubic):
    report = verify_relations(unstable_cubic)
    assert not report.semistable
    assert report.nullcone
    assert "unstable" in report.flags and "infinite-invariant-height" in report.flags
    assert {r.status for r in report.relations} == {"n/a"}
    assert report.cih_decomp is None and report.lwh_xi is None
    assert report.passed
    assert report.chowh == pytest.approx(0, abs=1e-15)


def test_report_serializes(cubic_report):
    data = cubic_report.model_dump(mode="json")
    assert data["schema_version"] == "hforms-1"
    assert data["naive"]["terms"] == []
    assert data["lwh_xi"]["value"] == 0
    assert [r["name"] for r in data["relations"]] == list(RELATIONS)
    assert "reading: cih_decomposition" in cubic_report.to_yaml()


def test_scaling_moves_only_the_decomposition():
    f = product_form((1, -1), (1, 1), (1, -2), (1, 3))
    base, doubled = verify_relations(f), verify_relations(f.scale(2))
    assert doubled.cih_decomp == pytest.approx(base.cih_decomp + math.log(2), abs=1e-9)
    assert doubled.cih_primitive == pytest.approx(base.cih_primitive, abs=1e-9)
    assert doubled.lwh_xi.value == pytest.approx(base.lwh_xi.value, abs=1e-12)


@pytest.mark.parametrize("d", [3, 4, 5, 6])
def test_relations_hold_on_random_forms(d, rng):
    checked = 0
    while checked < 3:
        f = random_integral_form(rng, d, bound=3)
        if not is_semistable(f):
            continue
        report = verify_relations(f)
        assert report.passed, report.relations
        assert report.faltings_margin >= -1e-12
        checked += 1


@pytest.mark.slow
@pytest.mark.parametrize("d", [3, 6])
def test_decomposition_identity_at_scale(d, rng):
    checked = 0
    while checked < 200:
        f = random_integral_form(rng, d)
        if not is_semistable(f):
            continue
        xi = evaluate_invariants(f)
        residual = lwh(xi.point()).value - cih_decomposition(f, xi).value - chow_height(f)
        assert abs(residual) < 1e-6
        checked += 1


def test_power_form_parameter():
    assert power_form_parameter(BinaryForm.power_form(5, 3)) == 3
    assert power_form_parameter(BinaryForm((4, 0, 0, -2))) == 2
    assert power_form_parameter(BinaryForm((1, 1, 0, 1))) is None
    assert power_form_parameter(BinaryForm((0, 0, 0, 1))) is None


def test_rational_forms_are_accepted():
    report = verify_relations(BinaryForm((Fraction(1, 2), 0, 0, Fraction(-3, 2))))
    assert report.passed
    assert report.cih_closed_form is not None


def test_degree_outside_the_invariant_range():
    with pytest.raises(UnsupportedDegreeError):
        verify_relations(BinaryForm((1, 0, 1)))


def test_verify_form_accepts_both_syntaxes():
    a = verify_form("x^3 - y^3")
    b = verify_form("-1,0,0,1", degree=3)
    assert a.chowh == b.chowh


def test_form_beyond_the_float_range():
    report = verify_relations(BinaryForm.power_form(3, 10**320))
    assert report.chowh == pytest.approx(320 * math.log(10), rel=1e-9)
    assert report.relation("R1").status == "pass"
    assert math.isfinite(report.cih_closed_form)
