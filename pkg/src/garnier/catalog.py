"""Registry of coupled Painleve Hamiltonian systems.

Every system is built once from short infix formulas in the variables
``x, y, z, w, q, p`` (or ``q1, p1, q2, p2``), the times ``t, s, u`` and the
parameters ``a0 ... a7``, ``eta``, ``eta0``, ``eta1``, ``nu``.  Symmetric
systems store the Hamiltonian of the first time and obtain the others by
applying their cyclic permutation ``pi``.
"""

from __future__ import annotations

import fnmatch
import threading
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .algebra import (
    AlgebraError,
    RationalFunction,
    Ring,
    Variable,
    degree_in,
    parse_expression,
    substitute,
)

__all__ = [
    "HamiltonianSystem",
    "COUPLING_FAMILIES",
    "painleve_hamiltonian",
    "coupling_R",
    "registry_get",
    "registry_keys",
    "registry_filter",
    "vector_field",
    "phase_degree",
    "dump",
    "make_ring",
    "build_system",
]


@dataclass(frozen=True)
class HamiltonianSystem:
    """A multi-time Hamiltonian system with symbolic parameters.

    Attributes
    ----------
    name : str
        Registry key.
    pairs : tuple of (str, str)
        Symplectic pairs ``(coordinate, momentum)``.
    times : tuple of str
        One time variable per Hamiltonian.
    params : tuple of str
        Parameter names in their conventional order.
    hamiltonians : tuple of RationalFunction
        ``hamiltonians[k]`` generates the flow in ``times[k]``.
    constraint : RationalFunction or None
        Affine expression in the parameters that vanishes on the
        parameter space of the system (stored, never applied implicitly).
    degree_record : int
        Total degree of the Hamiltonians in the phase variables.
    pi : dict or None
        Source text of the cyclic symmetry used to build the later
        Hamiltonians, as ``{"vars": [...], "params": [...]}``.
    """

    name: str
    pairs: tuple[tuple[str, str], ...]
    times: tuple[str, ...]
    params: tuple[str, ...]
    hamiltonians: tuple[RationalFunction, ...]
    ring: Ring
    constraint: RationalFunction | None = None
    degree_record: int = 0
    pi: Mapping | None = None
    description: str = ""
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def phase(self) -> tuple[str, ...]:
        return tuple(v for pair in self.pairs for v in pair)

    def gen(self, name: str) -> RationalFunction:
        return self.ring.gen(name)

    def expr(self, text: str) -> RationalFunction:
        return parse_expression(text, self.ring)

    def constraint_solution(self) -> dict[str, RationalFunction]:
        """Binding that eliminates the last listed parameter via the constraint."""
        if self.constraint is None:
            return {}
        last = self.params[-1]
        c = self.constraint.derivative(last)
        if c.is_zero() or not c.is_constant():
            raise AlgebraError(f"constraint of {self.name} is not affine in {last}")
        rest = self.constraint - c * self.gen(last)
        return {last: -rest / c}

    def with_hamiltonians(self, hams: Sequence[RationalFunction], name: str | None = None
                          ) -> "HamiltonianSystem":
        return HamiltonianSystem(
            name=name or self.name, pairs=self.pairs, times=self.times, params=self.params,
            hamiltonians=tuple(hams), ring=self.ring, constraint=self.constraint,
            degree_record=self.degree_record, pi=self.pi, description=self.description,
            notes=self.notes,
        )


# ---------------------------------------------------------------------------
# building blocks


def painleve_hamiltonian(kind: str, vars: Sequence[RationalFunction],
                         params: Sequence[RationalFunction]) -> RationalFunction:
    """Classical Painleve Hamiltonian ``H_kind(x, y, t; params)``.

    Parameters
    ----------
    kind : {"VI", "V", "IV", "III", "II"}
    vars : (x, y, t)
        Coordinate, momentum and time as rational functions.
    params : sequence
        5, 3, 2, 2 or 1 parameters respectively.
    """
    arity = {"VI": 5, "V": 3, "IV": 2, "III": 2, "II": 1}
    if kind not in arity:
        raise KeyError(f"unknown Painleve kind {kind!r}")
    if len(params) != arity[kind]:
        raise ValueError(f"H_{kind} takes {arity[kind]} parameters, got {len(params)}")
    x, y, t = vars
    if kind == "VI":
        a0, a1, a2, a3, a4 = params
        inner = (y * y * (x - t) * (x - 1) * x
                 - ((a0 - 1) * (x - 1) * x + a3 * (x - t) * x + a4 * (x - t) * (x - 1)) * y
                 + a2 * (a1 + a2) * (x - t))
        return inner / (t * (t - 1))
    if kind == "V":
        a1, a2, a3 = params
        return (x * (x - 1) * y * (y + t) + a2 * t * x - a3 * x * y - a1 * y * (x - 1)) / t
    if kind == "IV":
        a1, a2 = params
        return -x * x * y + 2 * x * y * y - 2 * t * x * y - 2 * a1 * y - a2 * x
    if kind == "III":
        a0, a1 = params
        return (x * x * y * (y - 1) + x * ((1 - 2 * a1) * y - a0) + t * y) / t
    (a1,) = params
    return y * y / 2 - (x * x + t / 2) * y - a1 * x


def _R_VI(ql, pl, qm, pm, tl, tm, a, b):
    return (b * ql * pl / (tl - tm)
            + a * (tm - 1) * qm * pm / ((tl - 1) * (tl - tm))
            + (tl * pl + (ql * pl + a) * ql) * qm * pm / (tl * (tl - 1))
            - (tl * (qm * pm + b) * pl * qm + tm * (ql * pl + a) * ql * pm) / (tl * (tl - tm)))


def _R_VI_amended(ql, pl, qm, pm, tl, tm, a, b):
    """The P_VI coupling with the quartic term that the two-variable system carries."""
    return (_R_VI(ql, pl, qm, pm, tl, tm, a, b)
            + 2 * (tm - 1) * ql * pl * qm * pm / ((tl - 1) * (tl - tm)))


def _R_V(ql, pl, qm, pm, tl, tm, a, b):
    return (b * tm * ql * pl / (tl * (tl - tm))
            + a * qm * pm / (tl - tm)
            - (tl * ql * ql * pl * pm + tl * pl * qm * pm + a * tl * ql * pm
               + tm * pl * qm * qm * pm - tm * pl * qm * pm + b * tm * pl * qm
               - 2 * tl * ql * pl * qm * pm) / (tl * (tl - tm)))


def _R_IV(ql, pl, qm, pm, tl, tm, a, b):
    return (b * ql * pl / (tl - tm)
            + a * qm * pm / (tl - tm)
            - (ql * ql * pl * pm + 2 * tm * pl * qm * pm - 2 * tl * pl * qm * pm
               - 2 * ql * pl * qm * pm + pl * qm * qm * pm + b * pl * qm + a * ql * pm) / (tl - tm))


def _R_III(ql, pl, qm, pm, tl, tm, a, b):
    return (b * tm * ql * pl / (tl * (tl - tm))
            + a * qm * pm / (tl - tm)
            - (tl * pl * qm * qm * pm + tm * ql * ql * pl * pm - 2 * tl * ql * pl * qm * pm
               + b * tl * pl * qm + a * tm * ql * pm) / (tl * (tl - tm)))


def _R_II(ql, pl, qm, pm, tl, tm, a, b):
    return ((b * ql * pl - b * pl * qm - a * ql * pm + a * qm * pm) / (tl - tm)
            - (2 * (ql - qm) ** 2 - tl + tm) * pl * pm / (2 * (tl - tm)))


#: Coupling terms R(q_l, p_l, q_m, p_m, t_l, t_m; alpha, beta), keyed by the
#: Painleve type of the three-variable system that uses them.
COUPLING_FAMILIES: dict[str, Callable[..., RationalFunction]] = {
    "VI": _R_VI,
    "VI-amended": _R_VI_amended,
    "V": _R_V,
    "IV": _R_IV,
    "III": _R_III,
    "II": _R_II,
}


def coupling_R(family: str, args: Sequence[RationalFunction]) -> RationalFunction:
    """Instantiate a coupling family at ``(q_l, p_l, q_m, p_m, t_l, t_m, alpha, beta)``."""
    if family not in COUPLING_FAMILIES:
        raise KeyError(f"unknown coupling family {family!r}")
    if len(args) != 8:
        raise ValueError("coupling term takes exactly 8 arguments")
    return COUPLING_FAMILIES[family](*args)


# ---------------------------------------------------------------------------
# system construction


def make_ring(pairs, times, params, extra=()) -> Ring:
    vs = [Variable(v, "phase") for pair in pairs for v in pair]
    vs += [Variable(t, "time") for t in times]
    vs += [Variable(a, "parameter") for a in params]
    vs += list(extra)
    return Ring(vs)


def apply_pi(h: RationalFunction, ring: Ring, pi: Mapping, names: Sequence[str],
             params: Sequence[str]) -> RationalFunction:
    """Substitute the listed images of ``pi`` into ``h``."""
    bind = {}
    for n, img in zip(names, pi["vars"]):
        bind[n] = parse_expression(img, ring)
    for n, img in zip(params, pi["params"]):
        bind[n] = parse_expression(img, ring)
    return substitute(h, bind)


def build_system(name, pairs, times, params, h1=None, hams=None, pi=None, constraint=None,
                 degree_record=0, description="", notes=()) -> HamiltonianSystem:
    pairs = tuple(tuple(p) for p in pairs)
    ring = make_ring(pairs, times, params)
    if hams is None:
        hams = [h1(ring) if callable(h1) else parse_expression(h1, ring)]
        names = [v for pair in pairs for v in pair] + list(times)
        for _ in range(len(times) - 1):
            hams.append(apply_pi(hams[-1], ring, pi, names, params))
    else:
        hams = [h(ring) if callable(h) else parse_expression(h, ring) for h in hams]
    cons = parse_expression(constraint, ring) if constraint else None
    return HamiltonianSystem(
        name=name, pairs=pairs, times=tuple(times), params=tuple(params),
        hamiltonians=tuple(hams), ring=ring, constraint=cons, degree_record=degree_record,
        pi=pi, description=description, notes=tuple(notes),
    )


def _g(ring: Ring, *names: str) -> list[RationalFunction]:
    return [ring.gen(n) for n in names]


def _e(ring: Ring, text: str) -> RationalFunction:
    return parse_expression(text, ring)


XYZW = (("x", "y"), ("z", "w"))
XYZWQP = (("x", "y"), ("z", "w"), ("q", "p"))


def _G11111(ring):
    x, y, z, w, t, s, a1, a2, a3, a4, a5 = _g(ring, "x", "y", "z", "w", "t", "s",
                                                "a1", "a2", "a3", "a4", "a5")
    base = painleve_hamiltonian("VI", (x, y, t), (1 - 2 * a1 - a2 - a3 - a5, a2, a1, a5, a3))
    return base + _e(ring, "-a4*s*x*y/(t*(t-s)) - a3*(s-1)*z*w/((t-1)*(t-s))"
                           " + 2*(s-1)*x*y*z*w/((t-1)*(t-s))"
                           " - (t*(x*y-a3)*y*z + s*(z*w-a4)*x*w)/(t*(t-s))"
                           " + (2*(x*y+a1)+z*w+a2)*x*z*w/(t*(t-1))")


def _uraS(ring):
    x, y, t, a1, a2, a3, a5 = _g(ring, "x", "y", "t", "a1", "a2", "a3", "a5")
    base = painleve_hamiltonian("VI", (x, y, t), (1 - a1 - a2 - a3 - a5, -a1 - a2, a2, a1 + a5, a1 + a3))
    return base + _e(ring, "a4*x*y/(t-s) + (a2*(s-1)*z*w + 2*(s-1)*x*y*z*w)/((t-1)*(t-s))"
                           " + (t*y+(x*y+a2)*x)*z*w/(t*(t-1))"
                           " - (t*(z*w+a4)*y*z + s*(x*y+a2)*x*w)/(t*(t-s))")


def _three(kind, base_params, r_params1, r_params2, family=None):
    """H_1 = H_kind(x,y,t) + R(x,y,z,w,t,s) + R(x,y,q,p,t,u)."""
    family = family or kind

    def build(ring):
        x, y, z, w, q, p, t, s, u = _g(ring, "x", "y", "z", "w", "q", "p", "t", "s", "u")
        base = painleve_hamiltonian(kind, (x, y, t), [_e(ring, b) for b in base_params])
        ra = [_e(ring, b) for b in r_params1]
        rb = [_e(ring, b) for b in r_params2]
        return (base + coupling_R(family, (x, y, z, w, t, s, *ra))
                + coupling_R(family, (x, y, q, p, t, u, *rb)))

    return build


def _dVV(ring):
    x, y, t, a1, a3, a4 = _g(ring, "x", "y", "t", "a1", "a3", "a4")
    return painleve_hamiltonian("V", (x, y, t), (a3, a1, a4)) + _e(
        ring, "-a2*s*x*y/(t*(s-t)) - a1*z*w/(s-t)"
              " + (t*x^2*y*w + t*y*z*w + a1*t*x*w + s*y*z^2*w - s*y*z*w + a2*s*y*z"
              " - 2*t*x*y*z*w)/(t*(s-t))")


def _SdeG3(ring):
    x, y, t, a1, a2 = _g(ring, "x", "y", "t", "a1", "a2")
    return painleve_hamiltonian("IV", (x, y, t), (a1, a2)) + _e(
        ring, "a3*x*y/(t-s) + a2*z*w/(t-s)"
              " - (x^2*y*w - 2*(t-s)*y*z*w - 2*x*y*z*w + y*z^2*w + a3*y*z + a2*x*w)/(t-s)")


def _SdeGa(ring):
    x, y, t, a0, a1 = _g(ring, "x", "y", "t", "a0", "a1")
    return painleve_hamiltonian("III", (x, y, t), (a0, a1)) + _e(
        ring, "a2*s*x*y/(t*(t-s)) + a0*z*w/(t-s)"
              " - (t*y*z^2*w + s*x^2*y*w - 2*t*x*y*z*w + a2*t*y*z + a0*s*x*w)/(t*(t-s))")


_ASDEGA_H1 = (
    "(-x^3*y^2 + s*x^2*y^2 - (2*a1+a2)*x^2*y + ((2*a1+a2)*s + eta1*t)*x*y)/(t*s)"
    " - (a1*(a1+a2)*x + eta1*t*s*y)/(t*s)"
    " + (z^3*w^2 - t*z^2*w^2 + (2*a1+a2)*z^2*w + (a3*t - eta0*s)*z*w)/t^2"
    " + (a1*(a1+a2)*z + eta0*t*s*w)/t^2"
    " - (eta0*s - a3*t)*x*y/t^2 + eta1*z*w/s"
    " - x*z*(2*(t*x-s*z)*y*w - s*x*y^2 + t*z*w^2 - (2*a1+a2)*(s*y-t*w))/(t^2*s)"
)


def _SdeG4(ring):
    x, y, t, a3 = _g(ring, "x", "y", "t", "a3")
    return painleve_hamiltonian("II", (x, y, t), (a3,)) + _e(
        ring, "a1*x*y/(t-s) - a1*y*z/(t-s) - a3*x*w/(t-s) + a3*z*w/(t-s)"
              " - (2*(x-z)^2 - (t-s))*y*w/(2*(t-s))")


_DV_K1 = ("(x^2*(x-t)*y^2 + 2*x^2*z*y*w + x*z*(z-s)*w^2"
          " - ((a0+a2-1)*x^2 + a1*x*(x-t) + eta*(x-t) + eta*t*z)*y"
          " - ((a0+a1-1)*x*z + a2*x*(z-s) + eta*(s-1)*z)*w + nu*(nu+a3)*x)/t^2")
_DV_K2 = ("(x^2*z*y^2 + 2*x*z*(z-s)*y*w + (z*(z-1)*(z-s) + s*(s-1)*x*z/t)*w^2"
          " - ((a0+a1-1)*x*z + a2*x*(z-s) - eta*(s-1)*z)*y"
          " - ((a0-1)*z*(z-1) + a1*z*(z-s) + a2*(z-1)*(z-s) + s*(s-1)*(a2*x+eta*z)/t)*w"
          " + nu*(nu+a3)*z)/(s*(s-1))")

_KIMURA_H1 = "-x^2*y + y^2/2 - T*y/2 - a3*x - z^2*w + w^2/2 - S*w/2 - a1*z - T*w/2 + y*w"
_KIMURA_H2 = ("-(x-z)*(x*w-z*w-a1)*y/S + y*w/2 - T*w/2 - a3*x*w/S + a3*z*w/S"
              " - z^2*w + w^2/2 - S*w/2 - a1*z")

_AUTO_K1 = "-q1^2*p1 + p1^2/2 - a2*q1 - q2^2*p2 + p2^2/2 - a0*q2 + p1*p2"
_AUTO_K2 = ("q1^2*p1*p2 + q2^2*p1*p2 - 2*q1*p1*q2*p2 - a0*q1*p1 - a2*q2*p2"
            " + a0*p1*q2 + a2*q1*p2")

_PI2 = {"vars": ["z", "w", "x", "y", "s", "t"]}
_PI3 = {"vars": ["z", "w", "q", "p", "x", "y", "s", "u", "t"]}


def _pi2(params):
    return {**_PI2, "params": list(params)}


def _pi3(params):
    return {**_PI3, "params": list(params)}


_DEFINITIONS: dict[str, dict] = {
    "G11111": dict(
        pairs=XYZW, times=("t", "s"), params=("a1", "a2", "a3", "a4", "a5", "a6"),
        h1=_G11111, pi=_pi2(["a1", "a2", "a4", "a3", "a5", "a6"]),
        constraint="2*a1+a2+a3+a4+a5+a6-1", degree_record=5,
        description="Garnier system in two variables, symmetric form",
    ),
    "uraS": dict(
        pairs=XYZW, times=("t", "s"), params=("a1", "a2", "a3", "a4", "a5", "a6"),
        h1=_uraS, pi=_pi2(["a1", "a4", "a3", "a2", "a5", "a6"]),
        constraint="2*a1+a2+a3+a4+a5+a6-1", degree_record=5,
        description="Garnier system in two variables after the Okamoto-type transform",
    ),
    "SdeGH-3v": dict(
        pairs=XYZWQP, times=("t", "s", "u"),
        params=("a1", "a2", "a3", "a4", "a5", "a6", "a7"),
        h1=_three("VI", ["1-a1-a2-a3-a5", "-a1-a2", "a2", "a1+a5", "a1+a3"],
                  ["a2", "a4"], ["a2", "a7"]),
        pi=_pi3(["a1", "a4", "a3", "a7", "a5", "a6", "a2"]),
        constraint="2*a1+a2+a3+a4+a5+a6+a7-1", degree_record=5,
        description="Garnier-type system in three variables built from P_VI",
    ),
    "dV": dict(
        pairs=XYZW, times=("t", "s"), params=("eta", "a0", "a1", "a2", "a3", "nu"),
        hams=[_DV_K1, _DV_K2], constraint="2*nu+a0+a1+a2+a3-1", degree_record=5,
        description="degenerate Garnier system G(1,1,1,2)",
    ),
    "dVV": dict(
        pairs=XYZW, times=("t", "s"), params=("a1", "a2", "a3", "a4", "a5"),
        h1=_dVV, pi=_pi2(["a2", "a1", "a3", "a4", "a5"]),
        constraint="a1+a2+a3+a4+a5-1", degree_record=4,
        description="degenerate Garnier system G(1,1,1,2), symmetric form built from P_V",
    ),
    "deGHS": dict(
        pairs=XYZWQP, times=("t", "s", "u"), params=("a1", "a2", "a3", "a4", "a5", "a6"),
        h1=_three("V", ["a4", "a1", "a5"], ["a1", "a2"], ["a1", "a3"]),
        pi=_pi3(["a2", "a3", "a1", "a4", "a5", "a6"]),
        constraint="a1+a2+a3+a4+a5+a6-1", degree_record=4,
        description="three-variable system built from P_V",
    ),
    "SdeG3": dict(
        pairs=XYZW, times=("t", "s"), params=("a1", "a2", "a3", "a4"),
        h1=_SdeG3, pi=_pi2(["a1", "a3", "a2", "a4"]),
        constraint="a1+a2+a3+a4-1", degree_record=4,
        description="two-variable symmetric system built from P_IV",
    ),
    "SdeGH3": dict(
        pairs=XYZWQP, times=("t", "s", "u"), params=("a1", "a2", "a3", "a4", "a5"),
        h1=_three("IV", ["a1", "a2"], ["a2", "a3"], ["a2", "a4"]),
        pi=_pi3(["a1", "a3", "a4", "a2", "a5"]),
        constraint="a1+a2+a3+a4+a5-1", degree_record=4,
        description="three-variable system built from P_IV",
    ),
    "SdeGa": dict(
        pairs=XYZW, times=("t", "s"), params=("a0", "a1", "a2", "a3"),
        h1=_SdeGa, pi=_pi2(["a2", "a1", "a0", "a3"]),
        constraint="a0+2*a1+a2+a3-1", degree_record=4,
        description="two-variable symmetric system built from P_III",
    ),
    "SdeGaH-3v": dict(
        pairs=XYZWQP, times=("t", "s", "u"), params=("a0", "a1", "a2", "a3", "a4"),
        h1=_three("III", ["a0", "a1"], ["a0", "a2"], ["a0", "a4"]),
        pi=_pi3(["a2", "a1", "a4", "a3", "a0"]),
        constraint="a0+2*a1+a2+a3+a4-1", degree_record=4,
        description="three-variable system built from P_III",
    ),
    "ASdeGa": dict(
        pairs=XYZW, times=("t", "s"), params=("eta0", "eta1", "a1", "a2", "a3", "a4"),
        h1=_ASDEGA_H1, pi=_pi2(["eta1", "eta0", "a1", "a2", "a4", "a3"]),
        constraint="2*a1+a2+a3+a4-1", degree_record=5,
        description="alternative two-variable generalization of P_III",
    ),
    "SdeG4": dict(
        pairs=XYZW, times=("t", "s"), params=("a1", "a2", "a3"),
        h1=_SdeG4, pi=_pi2(["a3", "a2", "a1"]),
        constraint="a1+a2+a3-1", degree_record=4,
        description="two-variable symmetric system built from P_II",
    ),
    "Kimura-times": dict(
        pairs=XYZW, times=("T", "S"), params=("a1", "a2", "a3"),
        hams=[_KIMURA_H1, _KIMURA_H2], constraint="a1+a2+a3-1", degree_record=4,
        description="the P_II system in the times T = t, S = s - t",
    ),
    "autoG14": dict(
        pairs=(("q1", "p1"), ("q2", "p2")), times=("t", "s"), params=("a0", "a1", "a2"),
        hams=[_AUTO_K1, _AUTO_K2], constraint="a0+a1+a2", degree_record=4,
        description="autonomous two-time system with D_3^(2) symmetry",
    ),
    "SdeGaK": dict(
        pairs=XYZWQP, times=("t", "s", "u"), params=("a1", "a2", "a3", "a4"),
        h1=_three("II", ["a3"], ["a3", "a1"], ["a3", "a4"]),
        pi=_pi3(["a3", "a2", "a4", "a1"]),
        constraint="a1+a2+a3+a4-1", degree_record=4,
        description="three-variable system built from P_II",
    ),
}

# Variants that differ from the printed formulas by one targeted correction.
# They are never used in place of the printed systems; checks run on both so
# that a failure of the printed form comes with a confirmed diagnosis.
_AMENDED: dict[str, dict] = {
    "dV.amended": dict(
        _DEFINITIONS["dV"],
        hams=[_DV_K1.replace("+ eta*(s-1)*z)*w", "- eta*(s-1)*z)*w"), _DV_K2],
        notes=("sign of eta*(s-1)*z in the w-coefficient of K1 flipped to match the "
               "identical bracket in the y-coefficient of K2",),
    ),
    "SdeGH-3v.amended": dict(
        _DEFINITIONS["SdeGH-3v"],
        h1=_three("VI", ["1-a1-a2-a3-a5", "-a1-a2", "a2", "a1+a5", "a1+a3"],
                  ["a2", "a4"], ["a2", "a7"], family="VI-amended"),
        notes=("coupling term completed with 2(t_m-1)q_l p_l q_m p_m/((t_l-1)(t_l-t_m)), "
               "as in the two-variable system uraS",),
    ),
    "SdeGaK.amended": dict(
        _DEFINITIONS["SdeGaK"],
        pi=_pi3(["a4", "a2", "a1", "a3"]),
        notes=("parameter part of pi replaced by its inverse permutation, the one "
               "that carries the parameter of each Painleve block to the next block",),
    ),
}

_CACHE: dict[str, HamiltonianSystem] = {}
_LOCK = threading.Lock()


def registry_keys(amended: bool = False) -> list[str]:
    """Keys of the printed systems, optionally followed by the amended variants."""
    return list(_DEFINITIONS) + (list(_AMENDED) if amended else [])


def registry_filter(pattern: str, amended: bool = False) -> list[str]:
    return [k for k in registry_keys(amended) if fnmatch.fnmatchcase(k, pattern)]


def registry_get(name: str) -> HamiltonianSystem:
    """Return the fully constructed system registered under ``name``."""
    entry = _DEFINITIONS.get(name) or _AMENDED.get(name)
    if entry is None:
        raise KeyError(f"unknown system {name!r}; known: {', '.join(_DEFINITIONS)}")
    with _LOCK:
        if name not in _CACHE:
            _CACHE[name] = build_system(name, **entry)
        return _CACHE[name]


# ---------------------------------------------------------------------------
# derived data


def vector_field(sys: HamiltonianSystem, time_index: int) -> list[RationalFunction]:
    """Hamiltonian vector field of the given time, ordered like ``sys.phase``."""
    if not 0 <= time_index < len(sys.times):
        raise IndexError(f"{sys.name} has {len(sys.times)} times")
    h = sys.hamiltonians[time_index]
    out = []
    for q, p in sys.pairs:
        out.append(h.derivative(p))
        out.append(-h.derivative(q))
    return out


def phase_degree(sys: HamiltonianSystem, time_index: int = 0) -> int:
    h = sys.hamiltonians[time_index]
    if not h.is_polynomial_in(sys.phase):
        raise AlgebraError("Hamiltonian is not polynomial in the phase variables")
    return degree_in(h.num, sys.phase)


def dump(sys: HamiltonianSystem) -> str:
    """Canonical text dump of a system."""
    lines = [
        f"system: {sys.name}",
        f"pairs: {' '.join(f'({q},{p})' for q, p in sys.pairs)}",
        f"times: {' '.join(sys.times)}",
        f"params: {' '.join(sys.params)}",
        f"degree: {sys.degree_record}",
        f"constraint: {sys.constraint.to_text() if sys.constraint is not None else 'none'}",
    ]
    for t, h in zip(sys.times, sys.hamiltonians):
        lines.append(f"H[{t}]: {h.to_text()}")
    return "\n".join(lines) + "\n"
