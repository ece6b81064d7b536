import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from garnier.algebra import substitute
from garnier.catalog import build_system, painleve_hamiltonian, registry_get
from garnier.numerics import (
    NumericError,
    NumericState,
    SingularityError,
    benchmark_autoG14,
    drift_report,
    evaluate,
    integrate_flow,
    write_csv,
)

AUTO = registry_get("autoG14")
PARAMS = {"a0": 0.25, "a1": -0.5, "a2": 0.25}


def test_painleve_ii_at_origin():
    s = AUTO
    h = painleve_hamiltonian("II", (s.gen("q1"), s.gen("p1"), s.gen("t")), (s.gen("a0"),))
    assert evaluate(h, {"q1": 0.0, "p1": 0.0, "t": 0.0, "a0": 0.0}) == 0.0


def test_k1_reference_value():
    vals = {"q1": 1, "p1": 1, "q2": 1, "p2": 1, "a0": 0, "a2": 0}
    exact = substitute(AUTO.hamiltonians[0], {k: AUTO.ring.constant(v) for k, v in vals.items()})
    got = evaluate(AUTO.hamiltonians[0], {k: float(v) for k, v in vals.items()})
    assert got == float(Fraction(exact.constant_value().parts()[0])) == 0.0


def test_singular_denominator():
    f = 1 / (AUTO.gen("t") - AUTO.gen("s"))
    with pytest.raises(SingularityError) as exc:
        evaluate(f, {"t": 0.3, "s": 0.3})
    assert "t - s" in exc.value.denominator


DVV = registry_get("dVV")
DVV_NAMES = list(DVV.phase) + list(DVV.times) + list(DVV.params)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=7),
                min_size=len(DVV_NAMES), max_size=len(DVV_NAMES)))
def test_evaluate_agrees_with_exact(vals):
    s, names = DVV, DVV_NAMES
    f = s.hamiltonians[0]
    point = dict(zip(names, vals))
    den = substitute(f.den, {k: s.ring.constant(v) for k, v in point.items()})
    if den.is_zero() or abs(float(Fraction(den.constant_value().parts()[0]))) < 1e-6:
        return
    exact = substitute(f, {k: s.ring.constant(v) for k, v in point.items()})
    want = float(Fraction(exact.constant_value().parts()[0]))
    got = evaluate(f, {k: float(v) for k, v in point.items()})
    assert math.isclose(got, want, rel_tol=1e-12, abs_tol=1e-12)


def _toy(h):
    return build_system("toy", [("x", "y")], ["t"], [], hams=[h])


def test_free_motion():
    s = _toy("y^2/2")
    traj = integrate_flow(s, 0, NumericState.for_system(s, [0.0, 1.0]), 1.0, 1e-2)
    assert abs(traj.end.phase["x"] - 1.0) < 1e-10


def test_zero_hamiltonian_is_constant():
    s = _toy("0")
    traj = integrate_flow(s, 0, NumericState.for_system(s, [0.3, -2.0]), 1.0, 0.1)
    assert np.all(traj.points == traj.points[0])


def test_bad_inputs():
    with pytest.raises(NumericError):
        NumericState.for_system(AUTO, [1, 1, 1])
    with pytest.raises(NumericError):
        NumericState.for_system(AUTO, [1, 1, 1, 1], params={"a0": 1, "a1": 1, "a2": 1},
                                check_constraint=True)
    with pytest.raises(NumericError):
        integrate_flow(AUTO, 0, NumericState.for_system(AUTO, [1, 1, 1, 1], params=PARAMS),
                       1.0, 0.0)


def test_singularity_aborts_with_last_good_state():
    s = _toy("y/(2*t-1)")      # the field has a pole at t = 1/2
    start = NumericState.for_system(s, [0.0, 0.0])
    with pytest.raises(SingularityError) as exc:
        integrate_flow(s, 0, start, 1.0, 1e-3)
    last = exc.value.trajectory.end
    assert last.times["t"] < 0.5 and np.isfinite(last.phase["x"])
    assert exc.value.denominator == "t - 1/2"


def test_drift_on_a_pole_free_horizon():
    start = NumericState.for_system(AUTO, [1, 1, 1, 1], params=PARAMS, check_constraint=True)
    traj = integrate_flow(AUTO, 0, start, 0.5, 1e-3)
    k1, k2, q1 = drift_report(AUTO, [*AUTO.hamiltonians, AUTO.gen("q1")], traj)
    assert k1 <= 1e-8 and k2 <= 1e-8
    assert q1 > 1e-3
    assert drift_report(AUTO, [AUTO.ring.constant(3)], traj) == [0.0]


def test_benchmark_hits_a_movable_pole_before_unit_time():
    res = benchmark_autoG14(horizon=1.0)
    assert res.pole is not None and 0.97 < res.pole < 0.98
    assert not res.ok


def test_benchmark_protocol_on_reduced_horizon():
    res = benchmark_autoG14(horizon=0.5)
    assert res.ok, res.summary()
    assert 8 <= res.halving_ratio <= 32
    assert res.reference_error < 1e-8


def test_benchmark_protocol_from_off_diagonal_start():
    # the benchmark start lies where the s-flow is stationary; this one does not
    res = benchmark_autoG14(horizon=1.0, start=(0.1, 0.2, -0.1, 0.3))
    assert res.ok, res.summary()
    assert res.commutation > 0


def test_csv_layout(tmp_path):
    start = NumericState.for_system(AUTO, [1, 1, 1, 1], params=PARAMS)
    traj = integrate_flow(AUTO, 0, start, 0.01, 1e-3)
    out = tmp_path / "traj.csv"
    write_csv(str(out), AUTO, traj, {"K1": AUTO.hamiltonians[0]})
    rows = out.read_text().splitlines()
    assert rows[0] == "t,q1,p1,q2,p2,K1"
    assert len(rows) == len(traj) + 1
