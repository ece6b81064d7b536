"""Acceptance suite: one verdict line per criterion.

Run ``pytest tests/test_acceptance.py -v``; the verdict lines are repeated
in the "acceptance criteria" section of the terminal summary.  Criteria 7
and 9 cannot be met with the published data and are marked as expected
failures (strict), so they still print FAIL and would turn the run red if
they ever started passing unnoticed.
"""

import time

import pytest

from garnier.catalog import registry_get, registry_keys
from garnier.numerics import benchmark_autoG14
from garnier.transforms import get_degeneration, get_transform
from garnier.verify import (
    check_commuting_flows,
    check_composition_pi3,
    check_degeneration,
    check_mkdv_reduction,
    check_poisson,
    check_transform,
    load_ledger,
    apply_ledger,
    mutation_reports,
    run_suite,
    summarize,
)

LEDGER = load_ledger()


def test_criterion_01_poisson_commutativity(record):
    t0 = time.perf_counter()
    rep = check_poisson(registry_get("autoG14"))
    elapsed = time.perf_counter() - t0
    ok = rep.verdict == "pass" and elapsed < 1.0
    record(1, ok, f"{rep.id} {rep.verdict} in {elapsed:.3f} s")
    assert ok


def test_criterion_02_commuting_flows(record):
    t0 = time.perf_counter()
    reps = [check_commuting_flows(registry_get(k), use_constraint=False)
            for k in ("autoG14", "dVV", "SdeG3", "SdeG4")]
    elapsed = time.perf_counter() - t0
    ok = all(r.verdict == "pass" for r in reps) and elapsed < 60
    record(2, ok, ", ".join(f"{r.id} {r.verdict}" for r in reps)
           + f" (symbolic parameters, {elapsed:.2f} s)")
    assert ok


def test_criterion_03_holomorphy_suites(record):
    t0 = time.perf_counter()
    reps = run_suite(registry_keys(amended=True), ["holomorphy"], jobs=4)
    elapsed = time.perf_counter() - t0
    counts = summarize(reps)
    ok = counts["fail"] == 0 and counts["error"] == 0 and elapsed < 600
    record(3, ok, f"{len(reps)} chart reports: {counts}, ledgered warnings carry witnesses "
                  f"({elapsed:.1f} s)")
    assert all(r.witness for r in reps if r.verdict == "warn")
    assert ok


def test_criterion_04_degenerations(record):
    edges = ["uraS:to-dVV", "dVV:to-SdeG3", "dVV:to-SdeGa", "SdeG3:to-SdeG4"]
    parts = []
    ok = True
    for did in edges:
        reps = apply_ledger(check_degeneration(get_degeneration(did)), LEDGER)
        main = reps[0]
        ok = ok and main.verdict == "pass"
        note = main.detail
        if len(reps) > 1:
            note += f"; printed labels {reps[1].verdict}"
        parts.append(f"{did} {main.verdict} ({note})")
    record(4, ok, "; ".join(parts))
    assert ok


def test_criterion_05_okamoto_transform(record):
    src = registry_get("G11111")
    m = get_transform("G11111:S", src)
    rep = check_transform(m, src, registry_get(m.target))
    ok = rep.verdict == "pass"
    record(5, ok, f"{rep.id} {rep.verdict} ({rep.detail})")
    assert ok


def test_criterion_06_pi3_composition(record):
    reps = check_composition_pi3()
    ok = all(r.verdict == "pass" for r in reps)
    record(6, ok, ", ".join(f"{r.id} {r.verdict}" for r in reps))
    assert ok


CRITERION7_SYSTEMS = ["uraS", "SdeGH-3v", "dVV", "deGHS", "SdeG3", "SdeGa", "ASdeGa",
                      "SdeG4", "autoG14", "SdeGaK"]
# systems whose printed Hamiltonian is ledgered are evaluated on the amended one
AMENDED_FOR = {"SdeGH-3v": "SdeGH-3v.amended", "SdeGaK": "SdeGaK.amended"}


@pytest.mark.xfail(strict=True, reason="six printed maps need amendment; 47/53 < 90%")
def test_criterion_07_symmetry_suites(record):
    keys = [AMENDED_FOR.get(k, k) for k in CRITERION7_SYSTEMS]
    reps = run_suite(keys, ["symmetry", "relations"], jobs=4)
    listed = [r for r in reps if r.id.startswith("symmetry:") and not r.id.endswith(".amended")]
    amended = [r for r in reps if r.id.startswith("symmetry:") and r.id.endswith(".amended")]
    d3 = [r for r in reps if r.id.startswith("relation:autoG14:")
          and ("^2=id" in r.id or "pi*" in r.id)]
    outright = sum(r.verdict == "pass" for r in listed)
    covered = all(r.verdict in ("pass", "warn") for r in listed + amended + d3)
    rate = outright / len(listed)
    ok = covered and rate >= 0.9 and all(r.verdict == "pass" for r in d3)
    warned = ", ".join(r.id.split(":", 1)[1] for r in listed if r.verdict != "pass")
    record(7, ok, f"{outright}/{len(listed)} = {rate:.1%} pass outright; ledgered: {warned}; "
                  f"all amended readings pass: {all(r.verdict == 'pass' for r in amended)}; "
                  f"D3 relations pass: {all(r.verdict == 'pass' for r in d3)}")
    assert covered
    assert ok


def test_criterion_08_mkdv_reduction(record):
    reps = check_mkdv_reduction()
    ok = len(reps) == 3 and all(r.verdict == "pass" for r in reps)
    record(8, ok, ", ".join(f"{r.id} {r.verdict}" for r in reps))
    assert ok


@pytest.mark.xfail(strict=True, reason="the benchmark trajectory has a movable pole at t=0.9764")
def test_criterion_09_numerics(record):
    res = benchmark_autoG14(horizon=1.0)
    record(9, res.ok, res.summary())
    assert res.ok


def test_criterion_10_mutation_control(record):
    reps = mutation_reports()
    ok = len(reps) >= 10 and all(r.verdict == "pass" for r in reps)
    record(10, ok, f"{sum(r.verdict == 'pass' for r in reps)}/{len(reps)} mutations caught")
    assert ok
