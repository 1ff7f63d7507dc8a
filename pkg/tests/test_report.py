import json
import random

import pytest

from nilgeo import catalog
from nilgeo.document import from_entry, parse_document
from nilgeo.report import CHECKS, GROUPS, NAMES, run_report

FAST = [n for n in catalog.names() if n != "aff-A4"]


def report(name, checks=None):
    return run_report(from_entry(catalog.get(name)), checks)


def statuses(rep):
    return {r.check: r.status for r in rep.records}


@pytest.mark.parametrize("name", FAST)
def test_catalog_reports_pass(name):
    rep = report(name)
    assert rep.verdict == "pass", rep.to_text()
    assert rep.exit_code == 0


def test_aff_a3_hkt_is_expected_fail():
    st = statuses(report("aff-A3", GROUPS["hkt"]))
    assert st["hkt"] == "expected-fail"
    assert st["hkt_space"] == "pass"


def test_aff_t3_everything_passes():
    assert set(statuses(report("aff-t3")).values()) == {"pass"}


def test_torus_everything_passes():
    assert set(statuses(report("torus1")).values()) == {"pass"}


def test_hkt_expectation_defaults_to_abelian():
    doc = from_entry(catalog.get("aff-A3"))
    doc.expect = {}
    assert statuses(run_report(doc, ["hkt"]))["hkt"] == "expected-fail"
    doc.expect = {"hkt": True}
    rep = run_report(doc, ["hkt"])
    assert statuses(rep)["hkt"] == "fail" and rep.exit_code == 1


def test_wrong_manifest_fails():
    doc = from_entry(catalog.get("kodaira"))
    doc.expect = {"abelian": {"J": False}}
    assert statuses(run_report(doc, ["abelian"]))["abelian[J]"] == "fail"


def test_missing_triple_is_not_applicable():
    rep = report("kodaira", GROUPS["obata"])
    assert set(statuses(rep).values()) == {"not-applicable"}
    assert not rep.applicable and rep.exit_code == 0


def test_non_nilpotent_skips_theorem_checks():
    rep = report("aff-C")
    st = statuses(rep)
    assert st["canonical[I]"] == st["sl"] == st["lee[I]"] == "skipped"
    assert rep.exit_code == 0
    assert report("aff-C", GROUPS["canonical"]).exit_code == 1


def test_broken_jacobi_isolated():
    text = json.dumps({
        "format": "nilgeo-algebra/1", "name": "bad", "dim": 3,
        "brackets": [{"x": 1, "y": 2, "terms": [{"k": 3, "coeff": "1"}]},
                     {"x": 2, "y": 3, "terms": [{"k": 1, "coeff": "1"}]},
                     {"x": 1, "y": 3, "terms": [{"k": 1, "coeff": "1"}]}],
    })
    rep = run_report(parse_document(text), GROUPS["check"])
    st = statuses(rep)
    assert st["jacobi"] == "fail" and rep.exit_code == 1


def test_non_integrable_structure_only_affects_its_label():
    doc = from_entry(catalog.get("kodaira"))
    from nilgeo.linalg import ExactMatrix
    doc.structures["I"] = ExactMatrix([[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]])
    st = statuses(run_report(doc, GROUPS["check"] + GROUPS["canonical"]))
    assert st["integrable[I]"] == "fail"
    assert st["canonical[I]"] == "skipped"
    assert st["integrable[J]"] == st["canonical[J]"] == "pass"


def test_unknown_check():
    with pytest.raises(ValueError, match="unknown checks: nope"):
        report("torus1", ["nope"])


def test_deterministic_and_order_independent():
    a = report("aff-t3").to_json()
    assert report("aff-t3").to_json() == a
    names = list(NAMES)
    random.Random(1).shuffle(names)
    assert report("aff-t3", names).records == report("aff-t3", NAMES).records


def test_json_schema():
    data = json.loads(report("iwasawa").to_json())
    assert data["name"] == "iwasawa" and data["verdict"] == "pass"
    for rec in data["records"]:
        assert set(rec) == {"check", "claim", "status", "value", "witness"}
        assert rec["status"] in {"pass", "fail", "expected-fail", "value", "not-applicable", "skipped", "error"}


def test_groups_cover_known_checks():
    assert {c for g in GROUPS.values() for c in g} <= set(NAMES)
    assert len(NAMES) == len(set(NAMES)) == len(CHECKS)


def test_text_report_shape():
    text = report("torus1", GROUPS["check"]).to_text().splitlines()
    assert text[0] == "report for torus1" and text[-1] == "verdict: PASS"
