"""Floating-point evaluation and fixed-step RK4 integration of catalog flows.

Exact rational functions are compiled once into Horner-form Python
expressions and then evaluated in double precision.  Every denominator is
guarded: a value within ``SINGULAR_TOL`` of zero raises
:class:`SingularityError` instead of silently losing accuracy.

Examples
--------
>>> from garnier.catalog import registry_get
>>> sys = registry_get("autoG14")
>>> start = NumericState.for_system(sys, phase=[1, 1, 1, 1],
...                                 params={"a0": 0.25, "a1": -0.5, "a2": 0.25})
>>> traj = integrate_flow(sys, 0, start, to_time=0.5, step=1e-3)
>>> max(drift_report(sys, sys.hamiltonians, traj)) < 1e-8
True
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .algebra import FieldElement, Polynomial, RationalFunction
from .catalog import HamiltonianSystem, vector_field

__all__ = [
    "SINGULAR_TOL",
    "NumericError",
    "SingularityError",
    "NumericState",
    "CompiledFunction",
    "compile_function",
    "evaluate",
    "Trajectory",
    "integrate_flow",
    "drift_report",
    "write_csv",
    "benchmark_autoG14",
    "BenchmarkResult",
]

SINGULAR_TOL = 1e-12


class NumericError(ArithmeticError):
    """Invalid numeric input (dimension, constraint, complex coefficients)."""


class SingularityError(NumericError):
    """A denominator came within ``SINGULAR_TOL`` of zero.

    ``denominator`` is the text of the offending denominator and
    ``trajectory`` holds the states computed before the failure, if any.
    """

    def __init__(self, message: str, denominator: str = "", trajectory=None):
        super().__init__(message)
        self.denominator = denominator
        self.trajectory = trajectory


@dataclass(frozen=True)
class NumericState:
    """Values of the times, phase variables and parameters of one point."""

    times: Mapping[str, float]
    phase: Mapping[str, float]
    params: Mapping[str, float] = field(default_factory=dict)

    @classmethod
    def for_system(cls, sys: HamiltonianSystem, phase: Sequence[float] | Mapping[str, float],
                   times: Sequence[float] | Mapping[str, float] | None = None,
                   params: Sequence[float] | Mapping[str, float] | None = None,
                   check_constraint: bool = False) -> "NumericState":
        """Build a state from sequences in the system's order or from mappings.

        Raises
        ------
        NumericError
            Wrong dimension, missing names, or a violated constraint when
            ``check_constraint`` is set.
        """
        def as_map(vals, names, what):
            if vals is None:
                vals = [0.0] * len(names)
            if isinstance(vals, Mapping):
                missing = [n for n in names if n not in vals]
                extra = [n for n in vals if n not in names]
                if missing or extra:
                    raise NumericError(f"{what}: missing {missing}, unexpected {extra}")
                return {n: float(vals[n]) for n in names}
            vals = list(vals)
            if len(vals) != len(names):
                raise NumericError(f"{what}: expected {len(names)} values, got {len(vals)}")
            return {n: float(v) for n, v in zip(names, vals)}

        state = cls(as_map(times, sys.times, "times"), as_map(phase, sys.phase, "phase"),
                    as_map(params, sys.params, "params"))
        if check_constraint and sys.constraint is not None:
            c = evaluate(sys.constraint, state)
            if abs(c) > SINGULAR_TOL:
                raise NumericError(f"parameters violate {sys.constraint} = 0 "
                                   f"(value {c!r})")
        return state

    def values(self) -> dict[str, float]:
        out = dict(self.params)
        out.update(self.times)
        out.update(self.phase)
        return out


def _coef_literal(c: FieldElement) -> tuple[str, bool]:
    a, b, r, d = c.parts()
    re = float(a) + float(r) * math.sqrt(2)
    im = float(b) + float(d) * math.sqrt(2)
    if im == 0.0 and b == 0 and d == 0:
        return repr(re), False
    return repr(complex(re, im)), True


def _horner(terms: list[tuple[tuple[int, ...], FieldElement]], order: Sequence[int],
            depth: int, flags: list[bool]) -> str:
    if depth == len(order):
        total = FieldElement(0)
        for _, c in terms:
            total = total + c
        lit, cplx = _coef_literal(total)
        flags[0] = flags[0] or cplx
        return lit
    pos = order[depth]
    groups: dict[int, list] = {}
    for e, c in terms:
        groups.setdefault(e[pos], []).append((e, c))
    degs = sorted(groups, reverse=True)
    var = f"v[{pos}]"
    expr = _horner(groups[degs[0]], order, depth + 1, flags)
    prev = degs[0]
    for d in degs[1:]:
        gap = prev - d
        mul = var if gap == 1 else f"{var}**{gap}"
        expr = f"({expr})*{mul} + ({_horner(groups[d], order, depth + 1, flags)})"
        prev = d
    if prev:
        expr = f"({expr})*{var}" + (f"**{prev}" if prev > 1 else "")
    return expr


def _compile_poly(p: Polynomial, names: Sequence[str]) -> tuple[str, bool]:
    terms = list(p.terms().items())
    if not terms:
        return "0.0", False
    pos = [p.ring.index[n] for n in names]
    # reorder exponent vectors to the evaluation order of ``names``
    local = [(tuple(e[i] for i in pos), c) for e, c in terms]
    unknown = [n for n in p.variables() if n not in names]
    if unknown:
        raise NumericError(f"no value for {unknown}")
    used = [i for i, n in enumerate(names) if n in p.variables()]
    flags = [False]
    return _horner(local, used, 0, flags), flags[0]


class CompiledFunction:
    """A rational function compiled for evaluation at value vectors.

    The value vector lists the variables in ``names`` order.
    """

    def __init__(self, f: RationalFunction, names: Sequence[str]):
        self.names = tuple(names)
        self.text = str(f)
        self.den_text = str(f.den)
        num_src, c1 = _compile_poly(f.num, self.names)
        den_src, c2 = _compile_poly(f.den, self.names)
        self.is_complex = c1 or c2
        self._num = eval(compile(f"lambda v: {num_src}", "<numerics>", "eval"))
        self._den = eval(compile(f"lambda v: {den_src}", "<numerics>", "eval"))
        self._den_const = f.den.is_constant()

    def __call__(self, v) -> float | complex:
        den = self._den(v)
        if not self._den_const and abs(den) <= SINGULAR_TOL:
            raise SingularityError(f"near-singular denominator {self.den_text} = {den}",
                                   self.den_text)
        return self._num(v) / den


def compile_function(f: RationalFunction, names: Sequence[str]) -> CompiledFunction:
    return CompiledFunction(f, names)


def evaluate(f: RationalFunction, at: NumericState | Mapping[str, float]) -> float | complex:
    """Double-precision value of ``f``; complex only if a coefficient is.

    Raises
    ------
    SingularityError
        The denominator is within ``SINGULAR_TOL`` of zero.
    NumericError
        A variable of ``f`` has no value.
    """
    vals = at.values() if isinstance(at, NumericState) else dict(at)
    names = sorted(vals)
    return CompiledFunction(f, names)([vals[n] for n in names])


@dataclass
class Trajectory:
    """States along one flow: ``points[k]`` is the phase vector at ``clock[k]``."""

    system: str
    time_name: str
    phase_names: tuple[str, ...]
    clock: np.ndarray
    points: np.ndarray
    base: NumericState

    def state(self, k: int) -> NumericState:
        times = dict(self.base.times)
        times[self.time_name] = float(self.clock[k])
        return NumericState(times, dict(zip(self.phase_names, map(float, self.points[k]))),
                            self.base.params)

    @property
    def end(self) -> NumericState:
        return self.state(len(self.clock) - 1)

    def __len__(self) -> int:
        return len(self.clock)


def _layout(sys: HamiltonianSystem) -> list[str]:
    return list(sys.phase) + list(sys.times) + list(sys.params)


def integrate_flow(sys: HamiltonianSystem, time_index: int, start: NumericState,
                   to_time: float, step: float) -> Trajectory:
    """Classical fixed-step RK4 along the flow of one time.

    The selected time runs from its value in ``start`` to ``to_time``; the
    last step is shortened to land exactly.  The other times stay fixed.

    Raises
    ------
    NumericError
        Non-positive step or a complex-coefficient field.
    SingularityError
        A denominator vanished; ``exc.trajectory`` ends at the last good state.
    """
    if not step > 0:
        raise NumericError("step must be positive")
    names = _layout(sys)
    field_ = [CompiledFunction(c, names) for c in vector_field(sys, time_index)]
    if any(f.is_complex for f in field_):
        raise NumericError(f"{sys.name} has complex coefficients; real trajectories only")
    tname = sys.times[time_index]
    n = len(sys.phase)
    tpos = n + time_index
    v = np.array([start.phase[x] for x in sys.phase] + [start.times[t] for t in sys.times]
                 + [start.params[a] for a in sys.params], dtype=float)
    t0 = float(start.times[tname])
    span = float(to_time) - t0
    nsteps = max(1, int(math.ceil(abs(span) / step - 1e-9)))
    h_full = span / nsteps
    clock = np.empty(nsteps + 1)
    points = np.empty((nsteps + 1, n))
    clock[0] = t0
    points[0] = v[:n]

    def rhs(t, y):
        w = v.copy()
        w[:n] = y
        w[tpos] = t
        return np.array([f(w) for f in field_])

    y = v[:n].copy()
    t = t0
    for k in range(nsteps):
        h = h_full
        try:
            with np.errstate(over="raise", invalid="raise"):
                k1 = rhs(t, y)
                k2 = rhs(t + h / 2, y + h / 2 * k1)
                k3 = rhs(t + h / 2, y + h / 2 * k2)
                k4 = rhs(t + h, y + h * k3)
                y_next = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            if not np.all(np.isfinite(y_next)):
                raise FloatingPointError("non-finite state")
        except SingularityError as exc:
            done = Trajectory(sys.name, tname, tuple(sys.phase), clock[:k + 1].copy(),
                              points[:k + 1].copy(), start)
            raise SingularityError(f"{exc} near {tname} = {t!r}", exc.denominator, done) from None
        except (FloatingPointError, OverflowError):
            done = Trajectory(sys.name, tname, tuple(sys.phase), clock[:k + 1].copy(),
                              points[:k + 1].copy(), start)
            raise SingularityError(f"solution escapes to infinity near {tname} = {t!r} "
                                   "(movable pole)", "", done) from None
        y = y_next
        t = t0 + (k + 1) * h_full
        clock[k + 1] = t
        points[k + 1] = y
    return Trajectory(sys.name, tname, tuple(sys.phase), clock, points, start)


def _integral_values(sys: HamiltonianSystem, f: RationalFunction, traj: Trajectory) -> np.ndarray:
    names = _layout(sys)
    cf = CompiledFunction(f, names)
    base = traj.base
    tail = [base.times[t] for t in sys.times] + [base.params[a] for a in sys.params]
    tidx = len(sys.phase) + list(sys.times).index(traj.time_name)
    out = np.empty(len(traj))
    for k in range(len(traj)):
        w = list(traj.points[k]) + tail
        w[tidx] = traj.clock[k]
        out[k] = cf(w)
    return out


def drift_report(sys: HamiltonianSystem, integrals: Iterable[RationalFunction],
                 trajectory: Trajectory) -> list[float]:
    """``max_k |f(state_k) - f(state_0)|`` for each integral ``f``."""
    if len(trajectory) == 0:
        raise NumericError("empty trajectory")
    out = []
    for f in integrals:
        vals = _integral_values(sys, f, trajectory)
        out.append(float(np.max(np.abs(vals - vals[0]))))
    return out


def write_csv(path: str, sys: HamiltonianSystem, trajectory: Trajectory,
              integrals: Mapping[str, RationalFunction] | None = None) -> None:
    """Header row (time, phase variables, integrals), then one row per step."""
    integrals = dict(integrals or {})
    cols = [_integral_values(sys, f, trajectory) for f in integrals.values()]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([trajectory.time_name, *trajectory.phase_names, *integrals])
        for k in range(len(trajectory)):
            w.writerow([repr(float(trajectory.clock[k])),
                        *(repr(float(x)) for x in trajectory.points[k]),
                        *(repr(float(c[k])) for c in cols)])


BENCHMARK_START = (1.0, 1.0, 1.0, 1.0)
BENCHMARK_PARAMS = {"a0": 0.25, "a1": -0.5, "a2": 0.25}
DRIFT_TOL = 1e-8
RATIO_RANGE = (8.0, 32.0)
COMMUTATION_TOL = 1e-6


@dataclass
class BenchmarkResult:
    """Figures of the conservation benchmark of the autonomous system.

    ``pole`` is the time at which the t-flow escaped to infinity, or
    ``None``; when it is set the other figures are ``None``.
    """

    horizon: float
    step: float
    drift: dict[str, float] | None = None
    reference_error: float | None = None
    halving_ratio: float | None = None
    commutation: float | None = None
    pole: float | None = None
    message: str = ""

    @property
    def ok(self) -> bool:
        if self.pole is not None or self.drift is None:
            return False
        lo, hi = RATIO_RANGE
        return (max(self.drift.values()) <= DRIFT_TOL
                and lo <= self.halving_ratio <= hi
                and self.commutation <= COMMUTATION_TOL)

    def summary(self) -> str:
        if self.pole is not None:
            return f"horizon {self.horizon}: {self.message}"
        d = ", ".join(f"{k} {v:.3e}" for k, v in self.drift.items())
        return (f"horizon {self.horizon}, step {self.step}: drift {d}; "
                f"halving ratio {self.halving_ratio:.2f}; "
                f"reference error {self.reference_error:.3e}; "
                f"t/s commutation {self.commutation:.3e}")


def benchmark_autoG14(horizon: float = 1.0, step: float = 1e-3,
                      reference_step: float = 1e-5,
                      start: Sequence[float] = BENCHMARK_START,
                      params: Mapping[str, float] = BENCHMARK_PARAMS) -> BenchmarkResult:
    """Conservation, order and commutation figures for the autonomous system.

    Integrates the t-flow over ``[0, horizon]`` and reports the drift of
    both Hamiltonians at ``step``, the endpoint distance from a run at
    ``reference_step``, the ratio of K1 drifts at ``step`` and ``step/2``,
    and the distance between the endpoints of t-then-s and s-then-t, each
    over ``horizon``.  A movable pole inside the interval is reported in
    ``pole`` rather than raised.
    """
    from .catalog import registry_get

    sys = registry_get("autoG14")
    st = NumericState.for_system(sys, start, params=params, check_constraint=True)
    out = BenchmarkResult(horizon=horizon, step=step)
    try:
        traj = integrate_flow(sys, 0, st, horizon, step)
        drift = drift_report(sys, sys.hamiltonians, traj)
        half = drift_report(sys, sys.hamiltonians[:1], integrate_flow(sys, 0, st, horizon, step / 2))
        ref = integrate_flow(sys, 0, st, horizon, reference_step)
        ts = integrate_flow(sys, 1, traj.end, horizon, step).end
        st_ = integrate_flow(sys, 0, integrate_flow(sys, 1, st, horizon, step).end,
                             horizon, step).end
    except SingularityError as exc:
        out.pole = float(exc.trajectory.clock[-1]) if exc.trajectory is not None else math.nan
        out.message = str(exc)
        return out
    out.drift = dict(zip(("K1", "K2"), drift))
    out.halving_ratio = drift[0] / half[0] if half[0] else math.inf
    out.reference_error = float(np.max(np.abs(traj.points[-1] - ref.points[-1])))
    out.commutation = max(abs(ts.phase[x] - st_.phase[x]) for x in sys.phase)
    return out
