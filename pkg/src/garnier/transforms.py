"""Birational maps between coupled Painleve systems.

A :class:`BirationalMap` sends a point ``(phase, times, params)`` of a source
system to new values given by rational expressions in the source ring.  The
new coordinates carry the same names as the old ones, so a chart
``x_1 = 1/x`` is stored as the image ``x -> 1/x``.

The module also holds the library of every chart, symmetry and degeneration
scheme of the catalog, addressed by ids of the form ``"<system>:<label>"``.
"""

from __future__ import annotations

import functools
import threading
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .algebra import (
    AlgebraError,
    RationalFunction,
    Ring,
    Variable,
    _univariate,
    limit_epsilon_zero,
    parse_expression,
    substitute,
)
from .catalog import HamiltonianSystem, registry_get, vector_field

__all__ = [
    "BirationalMap",
    "SymmetryTransformation",
    "DegenerationScheme",
    "DegeneratedSystem",
    "TransformError",
    "solve_triangular",
    "inverse_map",
    "check_symplectic",
    "SymplecticResult",
    "hamiltonian_field",
    "pushforward_vector_field",
    "gauge_residual",
    "transform_residuals",
    "equivariance_residuals",
    "limit_fields",
    "reconstruct_hamiltonian",
    "compose",
    "identity_map",
    "maps_differ",
    "power",
    "apply_degeneration",
    "degeneration_ids",
    "get_degeneration",
    "transform_ids",
    "get_transform",
    "manifest",
    "base_system",
    "amended_home",
]


class TransformError(AlgebraError):
    """A map cannot be built, inverted or applied."""


# ---------------------------------------------------------------------------
# maps


@dataclass(frozen=True)
class BirationalMap:
    """Rational map on the variables of a system.

    Attributes
    ----------
    ring : Ring
        Ring of the source system; all images live in it.
    phase : tuple of str
        Phase variables in pair order.  Every phase variable has an image.
    images : dict
        Image of each mapped variable.  Keys are names in the target
        system (equal to the source names for charts and symmetries).
        Times and parameters that are absent are mapped identically.
    label : str
        Identifier such as ``"dVV:pi3"``.
    kind : str
        ``"chart"``, ``"symmetry"``, ``"transform"`` or ``"step"``.
    gauge : tuple of (str, RationalFunction)
        Per-time function subtracted from that time's Hamiltonian before
        the field is pushed forward.
    fixed : dict
        Values imposed on source parameters before comparing, e.g. ``eta=1``.
    target : str or None
        Registry key of the target system when it differs from the source.
    """

    ring: Ring
    phase: tuple[str, ...]
    images: Mapping[str, RationalFunction]
    label: str = ""
    kind: str = "chart"
    gauge: tuple[tuple[str, RationalFunction], ...] = ()
    fixed: Mapping[str, RationalFunction] = field(default_factory=dict)
    target: str | None = None
    note: str = ""

    def image(self, name: str) -> RationalFunction:
        if name in self.images:
            return self.images[name]
        return self.ring.gen(name)

    @property
    def times(self) -> tuple[str, ...]:
        return self.ring.names_of_kind("time")

    @property
    def params(self) -> tuple[str, ...]:
        return self.ring.names_of_kind("parameter")

    def time_images(self) -> dict[str, RationalFunction]:
        return {t: self.images[t] for t in self.images if t not in self.phase
                and (t not in self.ring.index or self.ring.kind_of(t) == "time")
                and t not in self.params}

    def param_images(self) -> dict[str, RationalFunction]:
        return {a: v for a, v in self.images.items() if a in self.ring.index
                and self.ring.kind_of(a) == "parameter"}

    def full_images(self) -> dict[str, RationalFunction]:
        """Images of every source variable, identity where unmapped."""
        out = {n: self.image(n) for n in self.ring.names}
        out.update(self.images)
        return out

    def is_time_dependent(self) -> bool:
        return any(t in self.images[v].variables() for v in self.phase for t in self.times)

    def gauge_for(self, time: str) -> RationalFunction | None:
        for t, g in self.gauge:
            if t == time:
                return g
        return None

    def to_ring(self, ring: Ring) -> "BirationalMap":
        return BirationalMap(
            ring=ring, phase=self.phase,
            images={k: v.to_ring(ring) for k, v in self.images.items()},
            label=self.label, kind=self.kind,
            gauge=tuple((t, g.to_ring(ring)) for t, g in self.gauge),
            fixed={k: v.to_ring(ring) for k, v in self.fixed.items()},
            target=self.target, note=self.note,
        )

    def to_text(self) -> str:
        lines = [f"map {self.label or '(anonymous)'} [{self.kind}]"]
        for k in self.ring.names:
            if k in self.images:
                lines.append(f"  {k} -> {self.images[k].to_text()}")
        for k, v in self.images.items():
            if k not in self.ring.index:
                lines.append(f"  {k} -> {v.to_text()}")
        for t, g in self.gauge:
            lines.append(f"  gauge[{t}] = {g.to_text()}")
        return "\n".join(lines)


class SymmetryTransformation(BirationalMap):
    """A map of a system to itself at transformed parameters."""


def identity_map(ring: Ring, phase: Sequence[str], label: str = "id") -> BirationalMap:
    return BirationalMap(ring=ring, phase=tuple(phase),
                         images={v: ring.gen(v) for v in phase}, label=label, kind="symmetry")


def compose(a: BirationalMap, b: BirationalMap) -> BirationalMap:
    """The map ``a o b``: apply ``b`` first, then ``a``.

    Time and parameter images are composed together with the phase part.
    """
    if tuple(a.phase) != tuple(b.phase):
        raise TransformError(f"incompatible phase variables {a.phase} and {b.phase}")
    ring = a.ring.union(b.ring)
    inner = {k: v.to_ring(ring) for k, v in b.full_images().items()}
    names = list(dict.fromkeys(list(b.images) + list(a.images)))
    images = {}
    for n in names:
        images[n] = substitute(a.image(n).to_ring(ring), inner)
    return BirationalMap(ring=ring, phase=a.phase, images=images,
                         label=f"{a.label}*{b.label}", kind=a.kind)


def power(m: BirationalMap, k: int) -> BirationalMap:
    out = identity_map(m.ring, m.phase)
    for _ in range(k):
        out = compose(m, out)
    return out


def maps_differ(a: BirationalMap, b: BirationalMap,
                names: Iterable[str] | None = None) -> list[tuple[str, RationalFunction]]:
    """Names whose images differ, with the difference of the images."""
    ring = a.ring.union(b.ring)
    if names is None:
        names = list(dict.fromkeys(list(a.images) + list(b.images)))
    out = []
    for n in names:
        d = a.image(n).to_ring(ring) - b.image(n).to_ring(ring)
        if not d.is_zero():
            out.append((n, d))
    return out


# ---------------------------------------------------------------------------
# inversion


def _linear_parts(f: RationalFunction, u: str):
    """Split ``f = (n1 u + n0)/(d1 u + d0)``; None when ``f`` is not Moebius in ``u``."""
    nc = _univariate(f.num, u)
    dc = _univariate(f.den, u)
    if len(nc) > 2 or len(dc) > 2:
        return None
    zero = f.num.__class__.constant(f.ring, 0)
    n0, n1 = nc[0], (nc[1] if len(nc) > 1 else zero)
    d0, d1 = dc[0], (dc[1] if len(dc) > 1 else zero)
    rf = RationalFunction.from_polynomial
    return rf(n0), rf(n1), rf(d0), rf(d1)


def solve_triangular(equations: Mapping[str, RationalFunction],
                     unknowns: Sequence[str]) -> dict[str, RationalFunction]:
    """Solve ``gen(k) = equations[k]`` for the unknowns.

    Each step picks an equation that, after back-substitution, depends on
    exactly one unsolved unknown through a Moebius expression, and solves
    it.  Charts and degeneration schemes are triangular in this sense.

    Raises
    ------
    TransformError
        When no equation can be solved at some stage.
    """
    pending = list(unknowns)
    solved: dict[str, RationalFunction] = {}
    used: set[str] = set()
    while pending:
        progress = False
        for key, expr in equations.items():
            if key in used:
                continue
            f = substitute(expr, solved) if solved else expr
            deps = [u for u in pending if u in f.variables()]
            if len(deps) != 1:
                continue
            u = deps[0]
            parts = _linear_parts(f, u)
            if parts is None:
                continue
            n0, n1, d0, d1 = parts
            target = f.ring.gen(key) if key in f.ring.index else expr.ring.gen(key)
            den = target * d1 - n1
            if den.is_zero():
                continue
            sol = (n0 - target * d0) / den
            solved = {k: substitute(v, {u: sol}) for k, v in solved.items()}
            solved[u] = sol
            used.add(key)
            pending.remove(u)
            progress = True
        if not progress:
            raise TransformError(f"cannot solve for {', '.join(pending)}: map is not triangular")
    return solved


def inverse_map(m: BirationalMap) -> dict[str, RationalFunction]:
    """Old variables in terms of the new ones (same names), verified both ways.

    Only phase variables and mapped times are inverted; parameters are
    treated as constants of the map.
    """
    return _inverse_cached(m)


@functools.lru_cache(maxsize=512)
def _inverse_cached(m: BirationalMap) -> dict[str, RationalFunction]:
    ring = m.ring
    names = list(m.phase) + [t for t in m.times if t in m.images]
    fresh = {n: "N" + n for n in names}
    ext = ring.extend(Variable(fresh[n], ring.kind_of(n)) for n in names)
    eqs = {fresh[n]: m.image(n).to_ring(ext) for n in names}
    sol = solve_triangular(eqs, names)
    back = {fresh[n]: ext.gen(n) for n in names}
    inv = {n: substitute(sol[n], back).to_ring(ring) for n in names}
    fwd = {n: m.image(n) for n in names}
    for n in names:
        if substitute(fwd[n], inv) != ring.gen(n) or substitute(inv[n], fwd) != ring.gen(n):
            raise TransformError(f"round trip of {m.label} fails at {n}")
    return inv


# BirationalMap is frozen but holds dicts; hash by identity for the cache.
BirationalMap.__hash__ = object.__hash__  # type: ignore[assignment]
BirationalMap.__eq__ = object.__eq__  # type: ignore[assignment]


# ---------------------------------------------------------------------------
# symplecticity and fields


@dataclass(frozen=True)
class SymplecticResult:
    ok: bool
    entry: tuple[int, int] | None = None
    value: RationalFunction | None = None
    expected: int | None = None

    def __bool__(self):
        return self.ok

    def witness(self) -> str:
        if self.ok:
            return ""
        return f"entry ({self.entry[0]},{self.entry[1]}) = {self.value}, expected {self.expected}"


def check_symplectic(m: BirationalMap, pairs: Sequence[tuple[str, str]]) -> SymplecticResult:
    """Verify ``J^T Omega J = Omega`` for the phase part of ``m``.

    Entry ``(i, j)`` is the Lagrange bracket of the source variables
    ``v_i, v_j`` (1-based in the output).  Raises when the Jacobian
    determinant vanishes identically.
    """
    phase = [v for pair in pairs for v in pair]
    imgs = [m.image(v) for v in phase]
    jac = [[g.derivative(v) for v in phase] for g in imgs]
    _check_rank(jac)
    n = len(phase)
    for i in range(n):
        for j in range(i + 1, n):
            val = m.ring.zero()
            for k in range(0, n, 2):
                val = val + jac[k][i] * jac[k + 1][j] - jac[k + 1][i] * jac[k][j]
            expected = 1 if (i % 2 == 0 and j == i + 1) else 0
            if val != expected:
                return SymplecticResult(False, (i + 1, j + 1), val, expected)
    return SymplecticResult(True)


def _check_rank(jac) -> None:
    """Fraction-free elimination; raise when the determinant is identically zero."""
    rows = [list(r) for r in jac]
    n = len(rows)
    for c in range(n):
        piv = next((r for r in range(c, n) if not rows[r][c].is_zero()), None)
        if piv is None:
            raise TransformError("map is not generically invertible (Jacobian determinant is 0)")
        rows[c], rows[piv] = rows[piv], rows[c]
        for r in range(c + 1, n):
            if not rows[r][c].is_zero():
                f = rows[r][c] / rows[c][c]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[c])]


def hamiltonian_field(h: RationalFunction, pairs: Sequence[tuple[str, str]]) -> list[RationalFunction]:
    out = []
    for q, p in pairs:
        out.append(h.derivative(p))
        out.append(-h.derivative(q))
    return out


def pushforward_vector_field(m: BirationalMap, sys: HamiltonianSystem, time_index: int,
                             bindings: Mapping[str, RationalFunction] | None = None,
                             subtract_gauge: bool = False) -> list[RationalFunction]:
    """Field of the transformed system along the new time ``time_index``.

    The new field along the new time ``T_a`` is
    ``sum_b dt_b/dT_a (Dm V_b + dm/dt_b)`` evaluated at the preimage, where
    ``V_b`` is the field of ``H_b``.  ``bindings`` (for example a
    constraint solution) is substituted into the result.

    With ``subtract_gauge`` the map's gauge term, read in the old
    variables, is subtracted from ``H_b`` before differentiating.  This
    pushes forward a different flow and is kept only to compare the two
    readings of a gauge shift; :func:`gauge_residual` is the check that
    relates the gauge to the Hamiltonians.
    """
    ring = sys.ring.union(m.ring)
    mm = m if m.ring == ring else m.to_ring(ring)
    inv = inverse_map(mm)
    times = sys.times
    new_time = times[time_index]
    comps = []
    for b, tb in enumerate(times):
        h = sys.hamiltonians[b].to_ring(ring)
        g = mm.gauge_for(tb)
        if subtract_gauge and g is not None:
            h = h - g
        V = hamiltonian_field(h, sys.pairs)
        row = []
        for c in sys.phase:
            img = mm.image(c)
            val = img.derivative(tb)
            for v, vv in zip(sys.phase, V):
                val = val + img.derivative(v) * vv
            row.append(val)
        comps.append(row)
    out = []
    for k in range(len(sys.phase)):
        total = ring.zero()
        for b, tb in enumerate(times):
            if tb in inv:
                factor = inv[tb].derivative(new_time)
            else:
                factor = ring.one() if tb == new_time else ring.zero()
            if factor.is_zero():
                continue
            total = total + factor * substitute(comps[b][k], inv)
        out.append(substitute(total, bindings) if bindings else total)
    return out


def gauge_residual(m: BirationalMap, sys: HamiltonianSystem, time_index: int,
                   bindings: Mapping[str, RationalFunction] | None = None
                   ) -> RationalFunction:
    """Phase-dependent part of ``H_new - H o m^-1 + g`` for the declared gauge ``g``.

    ``H_new`` is the Hamiltonian reconstructed from the pushed-forward
    field and ``g`` is written in the original coordinates, so it is
    composed with ``m^-1`` like ``H``.  The gauge is correct exactly when
    the result is zero.
    """
    field_ = pushforward_vector_field(m, sys, time_index, bindings)
    hnew = reconstruct_hamiltonian(field_, sys.pairs)
    inv = inverse_map(m)
    hold = substitute(sys.hamiltonians[time_index].to_ring(m.ring), inv)
    g = m.gauge_for(sys.times[time_index])
    diff = hnew - hold + (substitute(g, inv) if g is not None else 0)
    if bindings:
        diff = substitute(diff, bindings)
    # drop the part depending on times and parameters only
    grads = [diff.derivative(v) for v in sys.phase]
    if all(d.is_zero() for d in grads):
        return diff.ring.zero()
    return diff


def transform_residuals(m: BirationalMap, source: HamiltonianSystem,
                        target: HamiltonianSystem,
                        bindings: Mapping[str, RationalFunction] | None = None
                        ) -> list[tuple[str, str, RationalFunction]]:
    """Nonzero entries of the equivariance identity of ``m``.

    For every source time ``t_b`` and target phase variable ``c`` the
    residual is ``D m_c . V_b + dm_c/dt_b - sum_a dT_a/dt_b Vt_a,c``
    where ``Vt`` is the target field evaluated at the images of the
    phase variables, times and parameters.  ``m.fixed`` and ``bindings``
    are applied before comparing.
    """
    fields = [vector_field(target, a) for a in range(len(target.times))]
    return equivariance_residuals(m, source, target.ring, target.phase, target.times,
                                  fields, bindings)


def equivariance_residuals(m: BirationalMap, source: HamiltonianSystem, target_ring: Ring,
                           target_phase: Sequence[str], target_times: Sequence[str],
                           target_fields: Sequence[Sequence[RationalFunction]],
                           bindings: Mapping[str, RationalFunction] | None = None
                           ) -> list[tuple[str, str, RationalFunction]]:
    """Like :func:`transform_residuals` for a target given by explicit fields."""
    ring = m.ring.union(source.ring).union(target_ring)
    img = {k: v.to_ring(ring) for k, v in m.images.items()}
    at = {}
    for n in target_ring.names:
        if n in img:
            at[n] = img[n]
        elif n in source.ring.index:
            at[n] = ring.gen(n)
        else:
            raise TransformError(f"{m.label}: no image for target variable {n}")
    tfields = [[substitute(c.to_ring(ring), at) for c in comps] for comps in target_fields]
    extra = dict(m.fixed)
    if bindings:
        extra.update(bindings)
    out = []
    for b, tb in enumerate(source.times):
        V = [v.to_ring(ring) for v in vector_field(source, b)]
        for k, c in enumerate(target_phase):
            g = at[c]
            lhs = g.derivative(tb)
            for v, vv in zip(source.phase, V):
                lhs = lhs + g.derivative(v) * vv
            rhs = ring.zero()
            for a, ta in enumerate(target_times):
                f = at[ta].derivative(tb)
                if not f.is_zero():
                    rhs = rhs + f * tfields[a][k]
            r = lhs - rhs
            if extra:
                r = substitute(r, extra)
            if not r.is_zero():
                out.append((tb, c, r))
    return out


def reconstruct_hamiltonian(field_: Sequence[RationalFunction],
                            pairs: Sequence[tuple[str, str]]) -> RationalFunction:
    """Hamiltonian with the given field, normalized to vanish at the origin.

    Raises
    ------
    TransformError
        When a component is not polynomial in the phase variables or the
        field is not Hamiltonian (the contracted one-form is not closed).
    """
    phase = [v for pair in pairs for v in pair]
    form: dict[str, RationalFunction] = {}
    for k, (q, p) in enumerate(pairs):
        qdot, pdot = field_[2 * k], field_[2 * k + 1]
        form[q] = -pdot
        form[p] = qdot
    for v, f in form.items():
        if not f.is_polynomial_in(phase):
            raise TransformError(f"component d{v} is not polynomial in the phase variables")
    for i, a in enumerate(phase):
        for b in phase[i + 1:]:
            if form[a].derivative(b) != form[b].derivative(a):
                raise TransformError(f"field is not Hamiltonian: d/d{b} of the {a}-component "
                                     f"differs from d/d{a} of the {b}-component")
    ring = form[phase[0]].ring
    for f in form.values():
        ring = ring.union(f.ring)
    idx = [ring.index[v] for v in phase]
    total = ring.zero()
    for v, f in form.items():
        f = f.to_ring(ring)
        terms = f.num.terms()
        scaled = {}
        for exps, c in terms.items():
            k = sum(exps[i] for i in idx)
            scaled[exps] = c / (k + 1)
        num = f.num.from_terms(ring, scaled)
        total = total + ring.gen(v) * RationalFunction(num, f.den)
    return total


# ---------------------------------------------------------------------------
# library of charts and symmetries


def base_system(key: str) -> str:
    return key.split(".", 1)[0]


# Charts: images of the phase variables in pair order.
_CHARTS: dict[str, list[tuple[str, list[str]]]] = {
    "G11111": [
        ("chart1", ["1/x", "-x*(x*y+z*w+a1)", "z/x", "x*w"]),
        ("chart2", ["1/x", "-x*(x*y+z*w+a1+a2)", "z/x", "x*w"]),
        ("chart3", ["-y*(x*y-a3)", "1/y", "z", "w"]),
        ("chart4", ["x", "y", "-w*(z*w-a4)", "1/w"]),
        ("chart5", ["-((x+z-1)*y-a5)*y", "1/y", "z", "w-y"]),
        ("chart6", ["-((x+t*z/s-t)*y-a6)*y", "1/y", "z", "w-t*y/s"]),
    ],
    "uraS": [
        ("chart1", ["1/x", "-x*(x*y+a2)", "z", "w"]),
        ("chart2", ["1/x", "-x*(x*y+z*w-a1)", "z/x", "x*w"]),
        ("chart3", ["x", "y", "1/z", "-(z*w+a4)*z"]),
        ("chart4", ["-(x*y+z*w-(a1+a3))*y", "1/y", "z*y", "w/y"]),
        ("chart5", ["-((x-1)*y+(z-1)*w-(a1+a5))*y", "1/y", "(z-1)*y", "w/y"]),
        ("chart6", ["-((x-t)*y+(z-s)*w-(a1+a6))*y", "1/y", "(z-s)*y", "w/y"]),
    ],
    "SdeGH-3v": [
        ("chart1", ["1/x", "-x*(x*y+z*w+q*p-a1)", "z/x", "x*w", "q/x", "x*p"]),
        ("chart2", ["1/x", "-x*(x*y+a2)", "z", "w", "q", "p"]),
        ("chart3", ["-(x*y+z*w+q*p-(a1+a3))*y", "1/y", "z*y", "w/y", "q*y", "p/y"]),
        ("chart4", ["x", "y", "1/z", "-(z*w+a4)*z", "q", "p"]),
        ("chart5", ["-((x-1)*y+(z-1)*w+(q-1)*p-(a1+a5))*y", "1/y", "(z-1)*y", "w/y",
                    "(q-1)*y", "p/y"]),
        ("chart6", ["-((x-t)*y+(z-s)*w+(q-u)*p-(a1+a6))*y", "1/y", "(z-s)*y", "w/y",
                    "(q-u)*y", "p/y"]),
        ("chart7", ["x", "y", "z", "w", "1/q", "-(q*p+a7)*q"]),
    ],
    "dV": [
        ("chart1", ["1/x", "-(x*y+z*w+nu+a3)*x", "z/x", "x*w"]),
        ("chart2", ["1/x", "-(x*y+z*w+nu)*x", "z/x", "x*w"]),
        ("chart3", ["x", "y-a1/x+eta*(z-1)/x^2", "z", "w-eta/x"]),
        ("chart4", ["x", "y", "-(z*w-a2)*w", "1/w"]),
        ("chart5", ["-((x+t*z/s-t)*y-a0)*y", "1/y", "z", "w-t*y/s"]),
    ],
    "dVV": [
        ("chart1", ["1/x", "-(y*x+a1)*x", "z", "w"]),
        ("chart2", ["x", "y", "1/z", "-(z*w+a2)*z"]),
        ("chart3", ["-(y*x+w*z-a3)*y", "1/y", "z*y", "w/y"]),
        ("chart4", ["-((x-1)*y+(z-1)*w-a4)*y", "1/y", "(z-1)*y", "w/y"]),
        ("chart5", ["1/x", "-((y+t*w/s+t)*x+a5)*x", "z-t*x/s", "w"]),
    ],
    "deGHS": [
        ("chart1", ["1/x", "-(y*x+a1)*x", "z", "w", "q", "p"]),
        ("chart2", ["x", "y", "1/z", "-(z*w+a2)*z", "q", "p"]),
        ("chart3", ["x", "y", "z", "w", "1/q", "-(q*p+a3)*q"]),
        ("chart4", ["-(y*x+w*z+p*q-a4)*y", "1/y", "z*y", "w/y", "q*y", "p/y"]),
        ("chart5", ["-((x-1)*y+(z-1)*w+(q-1)*p-a5)*y", "1/y", "(z-1)*y", "w/y",
                    "(q-1)*y", "p/y"]),
        ("chart6", ["1/x", "-((y+t*w/s+t*p/u+t)*x+a6)*x", "z-t*x/s", "w", "q-t*x/u", "p"]),
    ],
    "SdeG3": [
        ("chart1", ["-(x*y+z*w-a1)*y", "1/y", "z*y", "w/y"]),
        ("chart2", ["1/x", "-(y*x+a2)*x", "z", "w"]),
        ("chart3", ["x", "y", "1/z", "-(z*w+a3)*z"]),
        ("chart4", ["-((x-2*y-2*w+2*t)*y+(z-2*y-2*w+2*s)*w-a4)*y", "1/y",
                    "(z-2*y-2*w+2*s)*y", "w/y"]),
    ],
    "SdeGH3": [
        ("chart1", ["-(y*x+w*z+p*q-a1)*y", "1/y", "z*y", "w/y", "q*y", "p/y"]),
        ("chart2", ["1/x", "-(y*x+a2)*x", "z", "w", "q", "p"]),
        ("chart3", ["x", "y", "1/z", "-(w*z+a3)*z", "q", "p"]),
        ("chart4", ["x", "y", "z", "w", "1/q", "-(q*p+a4)*q"]),
        ("chart5", ["-((x-2*y-2*w-2*p+2*t)*y+(z-2*y-2*w-2*p+2*s)*w"
                    "+(q-2*y-2*w-2*p+2*u)*p-a5)*y", "1/y", "(z-2*y-2*w-2*p+2*s)*y", "w/y",
                    "(q-2*y-2*w-2*p+2*u)*y", "p/y"]),
    ],
    "SdeGa": [
        ("chart0", ["1/x", "-(y*x+a0)*x", "z", "w"]),
        ("chart1", ["x", "y+s*w/t+2*((z-s*x/t)*w-a1)/x+t/x^2", "(z-s*x/t)/x^2", "x^2*w"]),
        ("chart2", ["x", "y", "1/z", "-(z*w+a2)*z"]),
        ("chart3", ["1/x", "-((y+w-1)*x+a3)*x", "z-x", "w"]),
    ],
    "SdeGaH-3v": [
        ("chart0", ["1/x", "-(y*x+a0)*x", "z", "w", "q", "p"]),
        ("chart1", ["x", "y+s*w/t+u*p/t+2*((z-s*x/t)*w+(q-u*x/t)*p-a1)/x+t/x^2",
                    "(z-s*x/t)/x^2", "x^2*w", "(q-u*x/t)/x^2", "x^2*p"]),
        ("chart2", ["x", "y", "1/z", "-(z*w+a2)*z", "q", "p"]),
        ("chart3", ["1/x", "-((y+w+p-1)*x+a3)*x", "z-x", "w", "q-x", "p"]),
        ("chart4", ["x", "y", "z", "w", "1/q", "-(q*p+a4)*q"]),
    ],
    "ASdeGa": [
        ("chart1", ["1/x", "-(x*y+z*w+a1)*x", "z/x", "x*w"]),
        ("chart2", ["1/x", "-(x*y+z*w+a1+a2)*x", "z/x", "x*w"]),
        ("chart3", ["x", "y-eta0/z", "z", "w-a3/z+eta0*(x-s)/z^2"]),
        ("chart4", ["x", "y-a4/x+eta1*(z-t)/x^2", "z", "w-eta1/x"]),
    ],
    "SdeG4": [
        ("chart1", ["1/x", "-(y*x+a3)*x", "z", "w"]),
        ("chart2", ["1/x", "-((y+w-2*x^2-t)*x-2*((z-x)*x-(t-s)/4)*(w/x)+a2)*x",
                    "((z-x)*x-(t-s)/2)*x", "w/x^2"]),
        ("chart3", ["x", "y", "1/z", "-(z*w+a1)*z"]),
    ],
    "autoG14": [
        ("R0", ["q1", "p1", "1/q2", "-(q2*p2+a0)*q2"]),
        ("R1", ["1/q1", "-((p1+p2-2*q1^2)*q1-2*(q2-q1)*p2+a1)*q1", "(q2-q1)*q1^2", "p2/q1^2"]),
        ("R2", ["1/q1", "-(q1*p1+a2)*q1", "q2", "p2"]),
    ],
    "SdeGaK": [
        ("chart1", ["1/x", "-(y*x+a3)*x", "z", "w", "q", "p"]),
        ("chart2", ["1/x", "-((y+w+p-2*x^2-t)*x-2*((z-x)*x-(t-s)/4)*(w/x)"
                    "-2*((q-x)*x-(t-u)/4)*(p/x)+a2)*x",
                    "((z-x)*x-(t-s)/2)*x", "w/x^2", "((q-x)*x-(t-u)/2)*x", "p/x^2"]),
        ("chart3", ["x", "y", "1/z", "-(z*w+a1)*z", "q", "p"]),
        ("chart4", ["x", "y", "z", "w", "1/q", "-(q*p+a4)*q"]),
    ],
}

# Gauge shifts that the two-form identities attach to a chart, one per time.
_GAUGES: dict[tuple[str, str], list[str]] = {
    ("G11111", "chart6"): ["(1-z/s)*y", "(1-x/t)*w"],
    ("uraS", "chart6"): ["y", "w"],
}

# Symmetries: images of the tuple (phase, times, params) in the order of
# ``_ORDER`` (default: phase, times, then parameters as registered).
_ORDER: dict[str, list[str]] = {
    "dV": ["x", "y", "z", "w", "eta", "t", "s", "a0", "a1", "a2", "a3", "nu"],
}

_U3 = "(x*y+z*w-a1)"
_U3b = "(x*y+z*w-a1-a3)"
_V3 = "(x*y+z*w+q*p-a1)"
_V3b = "(x*y+z*w+q*p-a1-a3)"
_P3 = "(x*y+z*w-a3)"
_P4 = "(y*(x-1)+w*(z-1)-a4)"
_D3 = "(x*y+z*w+q*p-a4)"
_D4a = "((1-x)*y+(1-z)*w+(1-q)*p+a5)"
_D4b = "((x-1)*y+(z-1)*w+(q-1)*p-a5)"
_S6 = "(s*u*y+t*u*w+t*s*p+t*s*u)"
_G3 = "(x*y+z*w-a1)"
_G3b = "(x*y+z*w+q*p-a1)"

_SYMMETRIES: dict[str, list[tuple[str, list[str]]]] = {
    "uraS": [
        ("u1", ["x+a2/y", "y", "z", "w", "t", "s", "a1+a1", "-a2", "a3", "a4", "a5", "a6"]),
        ("u2", ["x", "y", "z+a4/w", "w", "t", "s", "a1+a4", "a2", "a3", "-a4", "a5", "a6"]),
        ("u3", [f"x*{_U3}/{_U3b}", f"y*{_U3b}/{_U3}", f"z*{_U3}/{_U3b}", f"w*{_U3b}/{_U3}",
                "t", "s", "a1+a3", "a2", "-a3", "a4", "a5", "a6"]),
        ("phi1", ["1/x", "-(x*y+a2)*x", "1/z", "-(z*w+a4)*z", "1/t", "1/s",
                  "-a1-a2-a3-a4", "a2", "a3", "a4", "1-a6", "1-a5"]),
        ("phi2", ["1-x", "-y", "1-z", "-w", "1-t", "1-s", "a1", "a2", "a5", "a4", "a3", "a6"]),
        ("phi3", ["(t-x)/(t-1)", "-(t-1)*y", "(s-z)/(s-1)", "-(s-1)*w", "t/(t-1)", "s/(s-1)",
                  "a1", "a2", "a6", "a4", "a5", "a3"]),
    ],
    "SdeGH-3v": [
        ("u2", ["x+a2/y", "y", "z", "w", "q", "p", "t", "s", "u",
                "a1+a1", "-a2", "a3", "a4", "a5", "a6", "a7"]),
        ("u4", ["x", "y", "z+a4/w", "w", "q", "p", "t", "s", "u",
                "a1+a4", "a2", "a3", "-a4", "a5", "a6", "a7"]),
        ("u7", ["x", "y", "z", "w", "q", "p+a7/p", "t", "s", "u",
                "a1+a7", "a2", "a3", "a4", "a5", "a6", "-a7"]),
        ("u3", [f"x*{_V3}/{_V3b}", f"y*{_V3b}/{_V3}", f"z*{_V3}/{_V3b}", f"w*{_V3b}/{_V3}",
                f"q*{_V3}/{_V3b}", f"p*{_V3b}/{_V3}", "t", "s", "u",
                "a1+a3", "a2", "-a3", "a4", "a5", "a6", "a7"]),
        ("phi1", ["1/x", "-(x*y+a2)*x", "1/z", "-(z*w+a4)*z", "1/q", "-(q*p+a7)*q",
                  "1/t", "1/s", "1/u", "-a1-a2-a3-a4-a7", "a2", "a3", "a4", "1-a6", "1-a5", "a7"]),
        ("phi2", ["1-x", "-y", "1-z", "-w", "1-q", "-p", "1-t", "1-s", "1-u",
                  "a1", "a2", "a5", "a4", "a3", "a6", "a7"]),
        ("phi3", ["(t-x)/(t-1)", "-(t-1)*y", "(s-z)/(s-1)", "-(s-1)*w", "(u-q)/(u-1)",
                  "-(u-1)*p", "t/(t-1)", "s/(s-1)", "u/(u-1)",
                  "a1", "a2", "a6", "a4", "a5", "a3", "a7"]),
    ],
    "dV": [
        ("s0", ["x", "y-s*a0/(s*x+t*z-t*s)", "z", "w-t*a0/(s*x+t*z-t*s)", "eta", "t", "s",
                "-a0", "a1", "a2", "-a3", "nu"]),
        ("s1", ["x", "y-a1/x+eta*(z-1)/x^2", "z", "w-eta/x", "-eta", "t", "s",
                "a0", "-a1", "a2", "-a3", "nu"]),
        ("s2", ["x", "y", "z", "w-a2/z", "eta", "t", "s", "a0", "a1", "-a2", "a3", "nu+a2"]),
        ("s3", ["x", "y", "z", "w", "eta", "t", "s", "a0", "a1", "a2", "-a3", "nu+a3"]),
    ],
    "dVV": [
        ("s1", ["x+a1/y", "y", "z", "w", "t", "s", "-a1", "a2", "a3+a1", "a4+a1", "a5"]),
        ("s2", ["x", "y", "z+a2/w", "w", "t", "s", "a1", "-a2", "a3+a2", "a4+a2", "a5"]),
        ("s5", ["x+a5/(y+t*w/s+t)", "y", "z+t*a5/(s*(y+t*w/s+t))", "w", "t", "s",
                "a1", "a2", "a3+a5", "a4+a5", "-a5"]),
        ("pi1", ["z", "w", "x", "y", "s", "t", "a2", "a1", "a3", "a4", "a5"]),
        ("pi2", ["1-x", "-y", "1-z", "-w", "-t", "-s", "a1", "a2", "a4", "a3", "a5"]),
        ("pi3", [f"-{_P3}/(t*x)", f"t*x*(x*y+a1)/{_P3}", f"-{_P3}/(s*z)", f"s*z*(z*w+a2)/{_P3}",
                 "-t", "-s", "a1", "a2", "a4+a5-1", "a3+a5", "1-a5"]),
        ("pi4", [f"-{_P4}/(t*(x-1))", f"t*(x-1)*((x-1)*y+a1)/{_P4}", f"-{_P4}/(s*(z-1))",
                 f"s*(z-1)*((z-1)*w+a2)/{_P4}", "t", "s", "a1", "a2", "a3+a5-1", "a4+a5", "1-a5"]),
    ],
    "deGHS": [
        ("s1", ["x+a1/y", "y", "z", "w", "q", "p", "t", "s", "u",
                "-a1", "a2", "a3", "a4+a1", "a5+a1", "a6"]),
        ("s2", ["x", "y", "z+a2/w", "w", "t", "s", "u",
                "a1", "-a2", "a3", "a4+a2", "a5+a2", "a6"]),
        ("s3", ["x", "y", "z", "w", "q+a3/p", "p", "t", "s", "u",
                "a1", "a2", "-a3", "a4+a3", "a5+a3", "a6"]),
        ("s6", [f"x+a6*s*u/{_S6}", "y", f"z+a6*t*u/{_S6}", "w", f"q+a6*t*s/{_S6}", "p",
                "t", "s", "u", "a1", "a2", "a3", "a4+a6", "a5+a6", "-a6"]),
        ("pi1", ["z", "w", "q", "p", "x", "y", "s", "u", "t", "a3", "a2", "a1", "a4", "a5", "a6"]),
        ("pi2", ["1-x", "-y", "1-z", "-w", "1-q", "-p", "-t", "-s", "-u",
                 "a1", "a2", "a3", "a5", "a4", "a6"]),
        ("pi3", [f"-{_D3}/(t*x)", f"t*x*(x*y+a1)/{_D3}", f"-{_D3}/(s*z)", f"s*z*(z*w+a2)/{_D3}",
                 f"-{_D3}/(u*q)", f"u*q*(q*p+a3)/{_D3}", "-t", "-s", "-u",
                 "a1", "a2", "a3", "a5+a6-1", "a4+a6", "1-a6"]),
        ("pi4", [f"{_D4a}/(t*(x-1))", f"t*(x-1)*((x-1)*y+a1)/{_D4b}", f"{_D4a}/(s*(z-1))",
                 f"s*(z-1)*((z-1)*w+a2)/{_D4b}", f"{_D4a}/(u*(q-1))",
                 f"u*(q-1)*((q-1)*p+a3)/{_D4b}", "t", "s", "u",
                 "a1", "a2", "a3", "a4+a6-1", "a5+a6", "1-a6"]),
    ],
    "SdeG3": [
        ("s2", ["x+a2/y", "y", "z", "w", "t", "s", "a1+a2", "-a2", "a3", "a4+a2"]),
        ("s3", ["x", "y", "z+a3/w", "w", "t", "s", "a1+a3", "a2", "-a3", "a4+a3"]),
        ("pi1", ["z", "w", "x", "y", "s", "t", "a1", "a3", "a2", "a4"]),
        ("pi2", ["I*(x-2*y-2*w+2*t)", "-I*y", "I*(z-2*y-2*w+2*s)", "-I*w", "-I*t", "-I*s",
                 "a4", "a2", "a3", "a1"]),
        ("pi3", [f"2*I*{_G3}/x", f"I*x*(x*y+a2)/(2*{_G3})", f"2*I*{_G3}/z",
                 f"I*z*(z*w+a3)/(2*{_G3})", "-I*t", "-I*s", "-a1-a2-a3", "a2", "a3", "1+a1"]),
    ],
    "SdeGH3": [
        ("s2", ["x+a2/y", "y", "z", "w", "q", "p", "t", "s", "u",
                "a1+a1", "-a2", "a3", "a4", "a5+a2"]),
        ("s3", ["x", "y", "z+a3/w", "w", "t", "s", "u", "a1+a3", "a2", "-a3", "a4", "a5+a3"]),
        ("s4", ["x", "y", "z", "w", "q+a4/p", "p", "t", "s", "u",
                "a1+a4", "a2", "a3", "-a4", "a5+a4"]),
        ("pi1", ["z", "w", "q", "p", "x", "y", "s", "u", "t", "a1", "a3", "a4", "a2", "a5"]),
        ("pi2", ["I*(x-2*y-2*w-2*p+2*t)", "-I*y", "I*(z-2*y-2*w-2*p+2*s)", "-I*w",
                 "I*(q-2*y-2*w-2*p+2*u)", "-I*p", "-I*t", "-I*s", "-I*u",
                 "a5", "a2", "a3", "a4", "a1"]),
        ("pi3", [f"2*I*{_G3b}/x", f"I*x*(x*y+a2)/(2*{_G3b})", f"2*I*{_G3b}/z",
                 f"I*z*(z*w+a3)/(2*{_G3b})", f"2*I*{_G3b}/q", f"I*q*(q*p+a4)/(2*{_G3b})",
                 "-I*t", "-I*s", "-I*u", "-a1-a2-a3-a4", "a2", "a3", "a4", "1+a1"]),
    ],
    "SdeGa": [
        ("s0", ["x+a0/y", "y", "z", "w", "t", "s", "-a0", "a1+a0", "a2", "a3"]),
        ("s2", ["x", "y", "z+a2/w", "w", "t", "s", "a0", "a1+a2", "-a2", "a3"]),
        ("s3", ["x+a3/(y+w-1)", "y", "z+a3/(y+w-1)", "w", "t", "s", "a0", "a1+a3", "a2", "-a3"]),
        ("pi1", ["z", "w", "x", "y", "s", "t", "a2", "a1", "a0", "a3"]),
        ("pi2", ["t/x", "-(x*y+a0)*x/t", "s/z", "-(z*w+a2)*z/s", "t", "s",
                 "a0", "a1+a3-1/2", "a2", "1-a3"]),
        ("pi3", ["x-z", "y", "-z", "1-y-w", "t-s", "-s", "a0", "a1", "a3", "a2"]),
    ],
    "SdeGaH-3v": [
        ("s0", ["x+a0/y", "y", "z", "w", "q", "p", "t", "s", "u",
                "-a0", "a1+a0", "a2", "a3", "a4"]),
        ("s2", ["x", "y", "z+a2/w", "w", "q", "p", "t", "s", "u",
                "a0", "a1+a2", "-a2", "a3", "a4"]),
        ("s3", ["x+a3/(y+w+p-1)", "y", "z+a3/(y+w+p-1)", "w", "q+a3/(y+w+p-1)", "p",
                "t", "s", "u", "a0", "a1+a3", "a2", "-a3", "a4"]),
        ("s4", ["x", "y", "z", "w", "q+a4/p", "p", "t", "s", "u",
                "a0", "a1+a4", "a2", "a3", "-a4"]),
        ("pi1", ["z", "w", "q", "p", "x", "y", "s", "u", "t", "a2", "a1", "a4", "a3", "a0"]),
        ("pi2", ["t/x", "-(x*y+a0)*x/t", "s/z", "-(z*w+a2)*z/s", "u/q", "-(q*p+a4)*q/u",
                 "t", "s", "u", "a0", "a1+a3-1/2", "a2", "1-a3", "a4"]),
    ],
    "ASdeGa": [
        ("s2", ["x", "y", "z", "w", "t", "s", "eta0", "eta1", "a1+a2", "-a2", "a3", "a4"]),
        ("s3", ["x", "y-eta0/z", "z", "w-a3/z+eta0*(x-s)/z^2", "t", "s",
                "-eta0", "eta1", "a1+a3", "a2", "-a3", "a4"]),
        ("s4", ["x", "y-a4/x+eta1*(z-t)/x^2", "z", "w-eta1/x", "t", "s",
                "eta0", "-eta1", "a1+a4", "a2", "a3", "-a4"]),
    ],
    "SdeG4": [
        ("s1", ["x+a3/y", "y", "z", "w", "t", "s", "a1", "a2+a3", "-a3"]),
        ("s3", ["x", "y", "z+a1/w", "w", "t", "s", "-a1", "a2+a1", "a3"]),
        ("pi1", ["z", "w", "x", "y", "s", "t", "a3", "a2", "a1"]),
    ],
    "autoG14": [
        ("s0", ["q1", "p1", "q2+a0/p2", "p2", "t", "s", "-a0", "a1+2*a0", "a2"]),
        ("s1", ["q1", "p1-a1/(q1-q2)", "q2", "p2+a1/(q1-q2)", "t", "s", "a0+a1", "-a1", "a2+a1"]),
        ("s2", ["q1+a2/p1", "p1", "q2", "p2", "t", "s", "a0", "a1+2*a2", "-a2"]),
        ("pi", ["q2", "p2", "q1", "p1", "t", "s", "a2", "a1", "a0"]),
    ],
    "SdeGaK": [
        ("s1", ["x+a3/y", "y", "z", "w", "q", "p", "t", "s", "u", "a1", "a2+a3", "-a3", "a4"]),
        ("s3", ["x", "y", "z+a1/w", "w", "q", "p", "t", "s", "u", "-a1", "a2+a1", "a3", "a4"]),
        ("s4", ["x", "y", "z", "w", "q+a4/p", "p", "t", "s", "u", "a1", "a2+a4", "a3", "-a4"]),
        ("pi1", ["z", "w", "q", "p", "x", "y", "s", "u", "t", "a3", "a2", "a4", "a1"]),
    ],
}

# Corrected readings of printed symmetries that fail as printed.  Each is
# evaluated on the named system and reported under "<label>.amended"; the
# printed reading is always checked as well.
_AMENDED_SYMMETRIES: dict[str, list[tuple[str, list[str], str, str]]] = {
    "uraS": [
        ("u1", ["x+a2/y", "y", "z", "w", "t", "s", "a1+a2", "-a2", "a3", "a4", "a5", "a6"],
         "uraS", "a1+a1 read as a1+a2"),
    ],
    "SdeGH-3v": [
        ("u2", ["x+a2/y", "y", "z", "w", "q", "p", "t", "s", "u",
                "a1+a2", "-a2", "a3", "a4", "a5", "a6", "a7"],
         "SdeGH-3v.amended", "a1+a1 read as a1+a2"),
        ("u7", ["x", "y", "z", "w", "q+a7/p", "p", "t", "s", "u",
                "a1+a7", "a2", "a3", "a4", "a5", "a6", "-a7"],
         "SdeGH-3v.amended", "p+a7/p in the q slot read as q+a7/p"),
    ],
    "dV": [
        ("s0", ["x", "y-s*a0/(s*x+t*z-t*s)", "z", "w-t*a0/(s*x+t*z-t*s)", "eta", "t", "s",
                "-a0", "a1", "a2", "-a3", "nu+a0+a3"],
         "dV.amended", "nu mapped to nu+a0+a3, which preserves the constraint"),
        ("s1", ["x", "y-a1/x+eta*(z-1)/x^2", "z", "w-eta/x", "-eta", "t", "s",
                "a0", "-a1", "a2", "-a3", "nu+a1+a3"],
         "dV.amended", "nu mapped to nu+a1+a3, which preserves the constraint"),
    ],
    "deGHS": [
        ("s2", ["x", "y", "z+a2/w", "w", "q", "p", "t", "s", "u",
                "a1", "-a2", "a3", "a4+a2", "a5+a2", "a6"],
         "deGHS", "unchanged q, p restored in the tuple"),
        ("pi1", ["z", "w", "q", "p", "x", "y", "s", "u", "t",
                 "a2", "a3", "a1", "a4", "a5", "a6"],
         "deGHS", "parameter part a3, a2, a1 read as the cycle a2, a3, a1"),
    ],
    "SdeGH3": [
        ("s2", ["x+a2/y", "y", "z", "w", "q", "p", "t", "s", "u",
                "a1+a2", "-a2", "a3", "a4", "a5+a2"],
         "SdeGH3", "a1+a1 read as a1+a2"),
        ("s3", ["x", "y", "z+a3/w", "w", "q", "p", "t", "s", "u",
                "a1+a3", "a2", "-a3", "a4", "a5+a3"],
         "SdeGH3", "unchanged q, p restored in the tuple"),
    ],
    "SdeGaK": [
        ("pi1", ["z", "w", "q", "p", "x", "y", "s", "u", "t", "a4", "a2", "a1", "a3"],
         "SdeGaK.amended", "parameter part matched to the amended system's pi"),
    ],
}

# Steps whose composite is the symmetry pi3 of dVV (phase and time images).
_STEPS: dict[str, list[tuple[str, dict[str, str]]]] = {
    "dVV": [
        ("g1", {"x": "x", "y": "y+(z*w-a3)/x", "z": "z/x", "w": "x*w"}),
        ("g2", {"x": "x-(z*w-a1-a3)/y", "y": "y", "z": "z/y", "w": "w*y"}),
        ("g3", {"x": "y", "y": "-x", "z": "1/z", "w": "-(z*w+a2)*z"}),
        ("g4", {"x": "-x/t", "y": "-t*y", "z": "-z/s", "w": "-s*w", "t": "-t", "s": "-s"}),
    ],
}

# Maps between different systems: images keyed by target names.
_TRANSFORMS: dict[str, dict] = {
    "G11111:S": dict(
        source="G11111", target="uraS",
        images={"x": "x+(z*w+a1)/y", "y": "y", "z": "w/y", "w": "-z*y", "t": "t", "s": "t/s"},
    ),
    "dV:to-dVV": dict(
        source="dV", target="dVV",
        images={"x": "x*(x*y+z*w+nu)", "y": "1/x", "z": "x*w", "w": "-z/x",
                "t": "-1/t", "s": "-s/t",
                "a1": "a3", "a2": "a2", "a3": "nu", "a4": "a1+nu", "a5": "a0"},
        fixed={"eta": "1"},
    ),
    "SdeG4:kimura": dict(
        source="SdeG4", target="Kimura-times",
        images={"x": "x", "y": "y", "z": "z", "w": "w", "T": "t", "S": "s-t"},
    ),
}


def _system_order(sys: HamiltonianSystem) -> list[str]:
    key = base_system(sys.name)
    if key in _ORDER:
        return _ORDER[key]
    return list(sys.phase) + list(sys.times) + list(sys.params)


def _entries(key: str) -> list[tuple[str, str]]:
    out = []
    for label, _ in _CHARTS.get(key, []):
        out.append((label, "chart"))
    for label, _ in _SYMMETRIES.get(key, []):
        out.append((label, "symmetry"))
    for label, *_ in _AMENDED_SYMMETRIES.get(key, []):
        out.append((label + ".amended", "amended"))
    for label, _ in _STEPS.get(key, []):
        out.append((label, "step"))
    for tid, entry in _TRANSFORMS.items():
        if entry["source"] == key:
            out.append((tid.split(":", 1)[1], "transform"))
    return out


def transform_ids(system: str | None = None, kind: str | None = None) -> list[str]:
    """Registered transform ids, optionally restricted to a system or kind.

    Kinds are ``chart``, ``symmetry``, ``amended`` (corrected readings of
    printed symmetries), ``step`` and ``transform``.
    """
    keys = [system] if system else list(dict.fromkeys(
        list(_CHARTS) + list(_SYMMETRIES) + list(_STEPS)
        + list(_AMENDED_SYMMETRIES) + [s["source"] for s in _TRANSFORMS.values()]))
    out = []
    for key in keys:
        for label, k in _entries(base_system(key)):
            if kind is None or k == kind:
                out.append(f"{key}:{label}")
    return out


def _parse_all(ring: Ring, texts: Mapping[str, str]) -> dict[str, RationalFunction]:
    return {k: parse_expression(v, ring) for k, v in texts.items()}


def get_transform(tid: str, system: HamiltonianSystem | None = None) -> BirationalMap:
    """Build the registered map ``tid`` on the ring of ``system``.

    ``system`` defaults to the registry entry named by the id prefix; pass
    an amended variant to evaluate the same map on it.

    Raises
    ------
    KeyError
        Unknown id.
    TransformError
        Printed tuple whose length does not match the variables.
    """
    key, label = tid.split(":", 1)
    base = base_system(key)
    sys = system or registry_get(key)
    ring = sys.ring
    for lab, texts in _CHARTS.get(base, []):
        if lab == label:
            images = dict(zip(sys.phase, (parse_expression(t, ring) for t in texts)))
            gauge = tuple((t, parse_expression(g, ring))
                          for t, g in zip(sys.times, _GAUGES.get((base, lab), [])))
            return BirationalMap(ring=ring, phase=sys.phase, images=images, label=tid,
                                 kind="chart", gauge=gauge)
    for lab, texts in _SYMMETRIES.get(base, []):
        if lab == label:
            order = _system_order(sys)
            if len(texts) != len(order):
                raise TransformError(
                    f"{tid}: printed tuple has {len(texts)} entries for the "
                    f"{len(order)} variables ({', '.join(order)})")
            images = {n: parse_expression(t, ring) for n, t in zip(order, texts)}
            images = {n: v for n, v in images.items() if n in sys.phase or v != ring.gen(n)}
            return SymmetryTransformation(ring=ring, phase=sys.phase, images=images, label=tid,
                                          kind="symmetry")
    for lab, texts, where, note in _AMENDED_SYMMETRIES.get(base, []):
        if lab + ".amended" == label:
            if system is None:
                sys = registry_get(where)
                ring = sys.ring
            order = _system_order(sys)
            images = {n: parse_expression(t, ring) for n, t in zip(order, texts)}
            images = {n: v for n, v in images.items() if n in sys.phase or v != ring.gen(n)}
            return SymmetryTransformation(ring=ring, phase=sys.phase, images=images, label=tid,
                                          kind="amended", note=note)
    for lab, texts in _STEPS.get(base, []):
        if lab == label:
            images = {v: ring.gen(v) for v in sys.phase}
            images.update(_parse_all(ring, texts))
            return BirationalMap(ring=ring, phase=sys.phase, images=images, label=tid,
                                 kind="step")
    entry = _TRANSFORMS.get(f"{base}:{label}")
    if entry is not None:
        target = registry_get(entry["target"])
        wring = ring.union(target.ring)
        images = _parse_all(wring, entry["images"])
        fixed = _parse_all(wring, entry.get("fixed", {}))
        return BirationalMap(ring=wring, phase=sys.phase, images=images, label=tid,
                             kind="transform", fixed=fixed, target=entry["target"])
    raise KeyError(f"unknown transform {tid!r}")


def amended_home(tid: str) -> str:
    """Registry key of the system on which an amended reading is evaluated."""
    key, label = tid.split(":", 1)
    for lab, _, where, _ in _AMENDED_SYMMETRIES.get(base_system(key), []):
        if lab + ".amended" == label:
            return where
    raise KeyError(f"unknown amended transform {tid!r}")


def manifest() -> list[dict]:
    """Machine-readable list of every registered transform."""
    out = []
    for tid in transform_ids():
        key, label = tid.split(":", 1)
        kind = dict(_entries(key))[label]
        entry = {"id": tid, "system": key, "label": label, "kind": kind}
        if kind == "transform":
            entry["target"] = _TRANSFORMS[tid]["target"]
        if (key, label) in _GAUGES:
            entry["gauge"] = list(_GAUGES[(key, label)])
        out.append(entry)
    for did in degeneration_ids():
        d = _SCHEMES[did]
        out.append({"id": did, "system": d.source, "label": did.split(":", 1)[1],
                    "kind": "degeneration", "target": d.target})
    return out


# ---------------------------------------------------------------------------
# degenerations


@dataclass(frozen=True)
class DegenerationScheme:
    """Change of parameters, variables and times depending on ``eps``.

    Attributes
    ----------
    source, target : str
        Registry keys.
    new_params : tuple of str
        Names of the new parameters (``A0``, ``A1``, ...).
    params : dict
        Old parameter -> expression in the new parameters and ``eps``.
    forward : dict
        New variable or time -> expression in the old ones.
    backward : dict
        Old variable or time -> expression in the new ones.
    rename : dict
        New name -> target name, applied after the limit.
    eps : str
        Name of the small parameter; ``eps_kind`` its declared kind.
    """

    source: str
    target: str
    new_params: tuple[str, ...]
    params: Mapping[str, str]
    forward: Mapping[str, str]
    backward: Mapping[str, str]
    rename: Mapping[str, str]
    eps: str = "eps"
    eps_kind: str = "epsilon"
    label: str = ""

    @property
    def new_phase(self) -> tuple[str, ...]:
        return tuple(n for n in self.rename if n not in self.new_times and n not in self.new_params)

    @property
    def new_times(self) -> tuple[str, ...]:
        tgt = registry_get(self.target)
        return tuple(n for n, m in self.rename.items() if m in tgt.times)


@dataclass(frozen=True)
class DegeneratedSystem:
    """Result of a degeneration: fields in the new variables, exact in ``eps``.

    ``hamiltonians`` holds reconstructed Hamiltonians when every field is
    polynomial in the new phase variables, otherwise ``None``.
    """

    scheme: DegenerationScheme
    ring: Ring
    pairs: tuple[tuple[str, str], ...]
    times: tuple[str, ...]
    fields: tuple[tuple[RationalFunction, ...], ...]
    forward: Mapping[str, RationalFunction]
    backward: Mapping[str, RationalFunction]
    hamiltonians: tuple[RationalFunction, ...] | None = None


def _scheme_ring(d: DegenerationScheme) -> Ring:
    src = registry_get(d.source)
    tgt = registry_get(d.target)
    new_phase = [n for n in d.rename if tgt.ring.kind_of(d.rename[n]) == "phase"]
    new_times = [n for n in d.rename if tgt.ring.kind_of(d.rename[n]) == "time"]
    extra = [Variable(n, "phase") for n in new_phase]
    extra += [Variable(n, "time") for n in new_times]
    extra += [Variable(d.eps, d.eps_kind)]
    extra += [Variable(a, "parameter") for a in d.new_params]
    return src.ring.union(tgt.ring).extend(extra)


def apply_degeneration(d: DegenerationScheme) -> DegeneratedSystem:
    """Rewrite the source system in the new variables, exactly in ``eps``.

    The field along a new time ``T_a`` is
    ``sum_b dt_b/dT_a (DF V_b + dF/dt_b)`` where ``F`` gives the new
    variables in terms of the old, evaluated at the old variables written
    in the new ones and the old parameters written in the new parameters.

    Raises
    ------
    TransformError
        When the relations cannot be solved in either direction.
    """
    key = id(d)
    with _DEG_LOCK:
        hit = _DEG_CACHE.get(key)
    if hit is not None and hit.scheme is d:
        return hit
    out = _apply_degeneration(d)
    with _DEG_LOCK:
        _DEG_CACHE[key] = out
    return out


_DEG_CACHE: dict[int, DegeneratedSystem] = {}
_DEG_LOCK = threading.Lock()


def _apply_degeneration(d: DegenerationScheme) -> DegeneratedSystem:
    src = registry_get(d.source)
    tgt = registry_get(d.target)
    ring = _scheme_ring(d)
    inv_rename = {v: k for k, v in d.rename.items()}
    new_phase = [inv_rename[v] for v in tgt.phase]
    new_times = [inv_rename[t] for t in tgt.times]
    old_vars = list(src.phase) + list(src.times)
    new_vars = new_phase + new_times
    P = _parse_all(ring, d.params)
    fwd_given = _parse_all(ring, d.forward)
    back = _parse_all(ring, d.backward)
    missing_old = [v for v in old_vars if v not in back]
    if missing_old:
        eqs = {k: substitute(v, back) for k, v in fwd_given.items()}
        back.update(solve_triangular(eqs, missing_old))
    back = {k: substitute(v, P) for k, v in back.items()}
    F = solve_triangular(back, new_vars)
    # F expresses new variables in old ones; old parameters may occur only via P
    F = {k: v for k, v in F.items()}
    fields = []
    for a, Ta in enumerate(new_times):
        comps = []
        for c in new_phase:
            total = ring.zero()
            for b, tb in enumerate(src.times):
                factor = back[tb].derivative(Ta)
                if factor.is_zero():
                    continue
                V = [v.to_ring(ring) for v in vector_field(src, b)]
                expr = F[c].derivative(tb)
                for v, vv in zip(src.phase, V):
                    expr = expr + F[c].derivative(v) * vv
                total = total + factor * expr
            comps.append(total)
        bind = dict(back)
        bind.update(P)
        fields.append(tuple(substitute(e, bind) for e in comps))
    hams = None
    pairs = tuple((new_phase[2 * k], new_phase[2 * k + 1]) for k in range(len(new_phase) // 2))
    return DegeneratedSystem(scheme=d, ring=ring, pairs=pairs, times=tuple(new_times),
                             fields=tuple(fields), forward=F, backward=back, hamiltonians=hams)


def limit_fields(dsys: DegeneratedSystem) -> list[list[RationalFunction]]:
    """Componentwise ``eps -> 0`` limit, renamed to the target's names."""
    d = dsys.scheme
    ring = dsys.ring
    ren = {k: ring.gen(v) for k, v in d.rename.items()}
    out = []
    for comps in dsys.fields:
        out.append([substitute(limit_epsilon_zero(c, d.eps), ren) for c in comps])
    return out


_SCHEMES: dict[str, DegenerationScheme] = {}


def _scheme(did, **kw):
    _SCHEMES[did] = DegenerationScheme(label=did, **kw)


_REN2 = {"X": "x", "Y": "y", "Z": "z", "W": "w", "T": "t", "S": "s"}

_scheme(
    "uraS:to-dVV", source="uraS", target="dVV",
    new_params=("A1", "A2", "A3", "A4", "A5"),
    params={"a1": "A3+A5-1", "a2": "A1", "a3": "1-A5", "a4": "A2",
            "a5": "A4+A5-1/eps", "a6": "1-A3-A5+1/eps"},
    forward={"T": "(t-1)/eps", "S": "(s-1)/eps", "X": "x/(x-1)", "Z": "z/(z-1)",
             "Y": "-(x-1)*((x-1)*y+a2)", "W": "-(z-1)*((z-1)*w+a4)"},
    backward={},
    rename={**_REN2, "A1": "a1", "A2": "a2", "A3": "a3", "A4": "a4", "A5": "a5"},
)
_scheme(
    "dVV:to-SdeG3", source="dVV", target="SdeG3",
    new_params=("A1", "A2", "A3", "A4"),
    params={"a1": "A1", "a2": "A2", "a3": "A3", "a4": "-1/(2*eps^2)",
            "a5": "1-A1-A2-A3+1/(2*eps^2)"},
    forward={},
    backward={"t": "(1+2*eps*T)/(2*eps^2)", "s": "(1+2*eps*S)/(2*eps^2)",
              "x": "eps*X/(eps*X-1)", "z": "eps*Z/(eps*Z-1)",
              "y": "-(eps*X-1)*((eps*X-1)*Y+eps*A2)/eps",
              "w": "-(eps*Z-1)*((eps*Z-1)*W+eps*A2)/eps"},
    rename={**_REN2, "A1": "a1", "A2": "a2", "A3": "a3", "A4": "a4"},
)
_scheme(
    "dVV:to-SdeGa", source="dVV", target="SdeGa",
    new_params=("A0", "A1", "A2", "A3"),
    params={"a1": "A0", "a2": "A2", "a3": "1/eps", "a4": "2*A1-1/eps", "a5": "A3"},
    forward={"X": "-t*(x-1)", "Z": "-s*(z-1)", "Y": "-y/t", "W": "-w/s"},
    backward={"t": "-eps*T", "s": "-eps*S"},
    rename={**_REN2, "A0": "a0", "A1": "a1", "A2": "a2", "A3": "a3"},
)
_scheme(
    "SdeG3:to-SdeG4", source="SdeG3", target="SdeG4",
    new_params=("A1", "A2", "A3"),
    params={"a1": "1/(4*eps^6)", "a2": "A1", "a3": "A3", "a4": "A2-1/(4*eps^6)"},
    forward={},
    backward={"t": "-(1-eps^4*T)/(sqrt2*eps^3)", "s": "-(1-eps^4*S)/(sqrt2*eps^3)",
              "x": "(1+2*eps^2*X)/(sqrt2*eps^3)", "z": "(1+2*eps^2*Z)/(sqrt2*eps^3)",
              "y": "eps*Y/sqrt2", "w": "eps*W/sqrt2"},
    rename={**_REN2, "A1": "a1", "A2": "a2", "A3": "a3"},
)


def degeneration_ids() -> list[str]:
    return list(_SCHEMES)


def get_degeneration(did: str) -> DegenerationScheme:
    if did not in _SCHEMES:
        raise KeyError(f"unknown degeneration {did!r}")
    return _SCHEMES[did]
