import json

import pytest

from garnier.catalog import registry_get
from garnier.transforms import get_degeneration
from garnier.verify import (
    CheckReport,
    apply_ledger,
    check_commuting_flows,
    check_degeneration,
    check_first_integrals,
    check_kimura_readings,
    check_poisson,
    check_relations,
    load_ledger,
    mutation_reports,
    plan,
    poisson_bracket,
    report_lines,
    run_suite,
    summarize,
)


def test_canonical_bracket():
    s = registry_get("autoG14")
    p1, q1 = s.gen("p1"), s.gen("q1")
    assert poisson_bracket(p1, q1, s.pairs) == s.ring.one()
    assert poisson_bracket(q1, p1, s.pairs) == -s.ring.one()


def test_poisson_and_first_integrals_of_autonomous_system():
    s = registry_get("autoG14")
    assert check_poisson(s).verdict == "pass"
    for k, h in enumerate(s.hamiltonians):
        assert check_first_integrals(s, h, f"K{k + 1}").verdict == "pass"
    assert check_first_integrals(s, s.gen("q1"), "q1").verdict == "fail"


def test_first_integrals_need_autonomy():
    with pytest.raises(ValueError):
        check_first_integrals(registry_get("dVV"), registry_get("dVV").gen("x"))


def test_commuting_flows_detect_a_broken_hamiltonian():
    s = registry_get("SdeG4")
    broken = s.with_hamiltonians([s.hamiltonians[0] + s.gen("x") * s.gen("y") ** 2,
                                  s.hamiltonians[1]])
    rep = check_commuting_flows(broken)
    assert rep.verdict == "fail" and rep.witness


def test_report_invariants():
    with pytest.raises(ValueError):
        CheckReport("x", "fail")
    with pytest.raises(ValueError):
        CheckReport("x", "pass", "witness")
    with pytest.raises(ValueError):
        CheckReport("x", "maybe")


def test_report_json_excludes_timing_on_request():
    r = CheckReport("a:b", "pass", millis=12, detail="d")
    assert "millis" not in json.loads(r.to_json(timing=False))
    assert json.loads(r.to_json())["millis"] == 12


def test_ledger_downgrades_matching_failures_only():
    reps = [CheckReport("symmetry:uraS:u1", "fail", "w"), CheckReport("symmetry:uraS:u2", "fail", "w"),
            CheckReport("symmetry:uraS:u3", "pass")]
    out = apply_ledger(reps, {"symmetry:uraS:u1": "typo"})
    assert [r.verdict for r in out] == ["warn", "fail", "pass"]
    assert out[0].note == "typo" and out[0].witness == "w"


def test_bundled_ledger_parses():
    ledger = load_ledger()
    assert "symmetry:uraS:u1" in ledger
    assert all(note for note in ledger.values())


def test_plan_rejects_unknown_names():
    with pytest.raises(ValueError):
        plan(["nope"], ["symmetry"])
    with pytest.raises(ValueError):
        plan(["dVV"], ["nope"])


def test_degeneration_with_printed_identification():
    reps = check_degeneration(get_degeneration("dVV:to-SdeGa"))
    assert [r.verdict for r in reps] == ["pass"]


def test_degeneration_reports_printed_labels_separately():
    reps = check_degeneration(get_degeneration("SdeG3:to-SdeG4"))
    assert reps[0].verdict == "pass" and "A1->a3" in reps[0].detail
    assert reps[1].id.endswith(":printed-labels") and reps[1].verdict == "fail"
    assert check_degeneration(get_degeneration("SdeG3:to-SdeG4"), relabel=False)[0].verdict == "fail"


def test_kimura_lowercase_reading_passes():
    reps = {r.id: r.verdict for r in check_kimura_readings()}
    assert reps["kimura:displayed-field:lowercase"] == "pass"
    assert reps["kimura:displayed-field:mixed-case"] == "fail"


def test_weyl_relations():
    reps = {r.id: r.verdict for r in check_relations("autoG14")}
    assert reps["relation:autoG14:s0^2=id"] == "pass"
    assert reps["relation:autoG14:pi*s0*pi=s2"] == "pass"
    assert reps["relation:autoG14:(s0*s1)^4=id"] == "pass"


def test_mutations_are_caught():
    reps = mutation_reports(only=["autoG14"])
    assert len(reps) >= 5
    assert all(r.verdict == "pass" for r in reps)


def test_serial_and_parallel_runs_agree():
    keys, kinds = ["SdeG4", "autoG14"], ["compatibility", "symmetry", "holomorphy"]
    serial = run_suite(keys, kinds, jobs=1)
    parallel = run_suite(keys, kinds, jobs=3)
    assert report_lines(serial, timing=False) == report_lines(parallel, timing=False)
    assert summarize(serial)["fail"] == 0
