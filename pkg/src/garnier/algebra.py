"""Exact sparse polynomial and rational-function arithmetic over Q(i, sqrt 2).

Polynomials live in a :class:`Ring`, an ordered list of :class:`Variable`
objects.  Storage is delegated to FLINT multivariate polynomials with
rational coefficients; the two algebraic units ``i`` and ``sqrt(2)`` are
carried as two hidden generators reduced modulo ``i^2 + 1`` and
``r^2 - 2`` after every product, so every coefficient seen from the
outside is a :class:`FieldElement`.

Rational functions are always stored reduced (numerator and denominator
coprime) with a denominator whose leading coefficient, in graded
lexicographic order over the ring's variable order, is 1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping, Sequence, Union

import flint

__all__ = [
    "FieldElement",
    "Variable",
    "Ring",
    "Polynomial",
    "RationalFunction",
    "AlgebraError",
    "PoleError",
    "I",
    "SQRT2",
    "arith",
    "differentiate",
    "substitute",
    "gcd",
    "subresultant_gcd",
    "degree_in",
    "limit_epsilon_zero",
    "parse_polynomial",
    "parse_rational",
    "parse_expression",
]

KINDS = ("phase", "time", "epsilon", "parameter")
_KIND_RANK = {k: n for n, k in enumerate(KINDS)}
_HIDDEN = ("_I", "_R2")


class AlgebraError(ArithmeticError):
    pass


class PoleError(AlgebraError):
    """Raised when an epsilon limit hits a pole."""


# ---------------------------------------------------------------------------
# coefficient field


def _q(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, flint.fmpq):
        return Fraction(int(v.p), int(v.q))
    if isinstance(v, flint.fmpz):
        return Fraction(int(v))
    if isinstance(v, float):
        raise TypeError("floating point coefficients are not allowed")
    return Fraction(v)


def _is_scalar(v) -> bool:
    return isinstance(v, (FieldElement, int, Fraction, flint.fmpq, flint.fmpz))


class FieldElement:
    """Element a + b*i + c*r2 + d*i*r2 of Q(i, sqrt 2), r2 = sqrt(2)."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a=0, b=0, c=0, d=0):
        self.a = _q(a)
        self.b = _q(b)
        self.c = _q(c)
        self.d = _q(d)

    @classmethod
    def coerce(cls, v) -> "FieldElement":
        if isinstance(v, FieldElement):
            return v
        return cls(v)

    def parts(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.d)

    def is_zero(self) -> bool:
        return not (self.a or self.b or self.c or self.d)

    def is_rational(self) -> bool:
        return not (self.b or self.c or self.d)

    def __eq__(self, other):
        if not _is_scalar(other):
            return NotImplemented
        return self.parts() == FieldElement.coerce(other).parts()

    def __hash__(self):
        if self.is_rational():
            return hash(self.a)
        return hash(self.parts())

    def __add__(self, other):
        if not _is_scalar(other):
            return NotImplemented
        o = FieldElement.coerce(other)
        return FieldElement(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(-self.a, -self.b, -self.c, -self.d)

    def __sub__(self, other):
        if not _is_scalar(other):
            return NotImplemented
        return self + (-FieldElement.coerce(other))

    def __rsub__(self, other):
        if not _is_scalar(other):
            return NotImplemented
        return FieldElement.coerce(other) - self

    def __mul__(self, other):
        if not _is_scalar(other):
            return NotImplemented
        o = FieldElement.coerce(other)
        a1, b1, c1, d1 = self.parts()
        a2, b2, c2, d2 = o.parts()
        # i^2 = -1, r2^2 = 2, (i r2)^2 = -2
        return FieldElement(
            a1 * a2 - b1 * b2 + 2 * c1 * c2 - 2 * d1 * d2,
            a1 * b2 + b1 * a2 + 2 * c1 * d2 + 2 * d1 * c2,
            a1 * c2 + c1 * a2 - b1 * d2 - d1 * b2,
            a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
        )

    __rmul__ = __mul__

    def conj_i(self) -> "FieldElement":
        return FieldElement(self.a, -self.b, self.c, -self.d)

    def conj_r(self) -> "FieldElement":
        return FieldElement(self.a, self.b, -self.c, -self.d)

    def norm(self) -> Fraction:
        """Norm down to Q: product of the four conjugates."""
        n = self * self.conj_i() * self.conj_r() * self.conj_i().conj_r()
        assert n.is_rational()
        return n.a

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        if self.is_rational():
            return FieldElement(1 / self.a)
        co = self.conj_i() * self.conj_r() * self.conj_i().conj_r()
        n = self.norm()
        return FieldElement(co.a / n, co.b / n, co.c / n, co.d / n)

    def __truediv__(self, other):
        if not _is_scalar(other):
            return NotImplemented
        return self * FieldElement.coerce(other).inverse()

    def __rtruediv__(self, other):
        if not _is_scalar(other):
            return NotImplemented
        return FieldElement.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = FieldElement(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def to_complex(self) -> complex:
        r2 = 2.0 ** 0.5
        return complex(float(self.a) + float(self.c) * r2, float(self.b) + float(self.d) * r2)

    def to_text(self) -> str:
        return f"{self.a}+{self.b}*i+{self.c}*r2+{self.d}*i*r2"

    _TEXT = re.compile(
        r"^(-?\d+(?:/\d+)?)\+(-?\d+(?:/\d+)?)\*i\+(-?\d+(?:/\d+)?)\*r2\+(-?\d+(?:/\d+)?)\*i\*r2$"
    )

    @classmethod
    def from_text(cls, text: str) -> "FieldElement":
        m = cls._TEXT.match(text.strip())
        if not m:
            raise ValueError(f"malformed scalar {text!r}")
        return cls(*(Fraction(g) for g in m.groups()))

    def __repr__(self):
        if self.is_rational():
            return f"FieldElement({self.a})"
        return f"FieldElement({self.to_text()})"


I = FieldElement(0, 1)
SQRT2 = FieldElement(0, 0, 1)


# ---------------------------------------------------------------------------
# variables and rings


@dataclass(frozen=True, order=False)
class Variable:
    name: str
    kind: str = "parameter"

    def __post_init__(self):
        if self.kind not in _KIND_RANK:
            raise ValueError(f"unknown variable kind {self.kind!r}")
        if not re.fullmatch(r"[A-Za-z][A-Za-z0-9]*", self.name):
            raise ValueError(f"bad variable name {self.name!r}")

    def __str__(self):
        return self.name


class Ring:
    """Ordered variable context.

    Variables are sorted by kind (phase, time, epsilon, parameter), keeping
    the given order inside each kind; that order is the canonical monomial
    order used for serialization and normalization.
    """

    def __init__(self, variables: Iterable[Variable]):
        seen: dict[str, Variable] = {}
        for v in variables:
            old = seen.get(v.name)
            if old is not None and old.kind != v.kind:
                raise ValueError(f"variable {v.name} declared as {old.kind} and {v.kind}")
            seen.setdefault(v.name, v)
        order = list(seen.values())
        order.sort(key=lambda v: _KIND_RANK[v.kind])  # stable
        self.variables: tuple[Variable, ...] = tuple(order)
        self.names: tuple[str, ...] = tuple(v.name for v in order)
        self.index = {n: k for k, n in enumerate(self.names)}
        self.nvars = len(self.names)
        self.ctx = flint.fmpq_mpoly_ctx.get(self.names + _HIDDEN, "deglex")
        gens = self.ctx.gens()
        self._i = gens[-2]
        self._r = gens[-1]
        self._imod = self._i ** 2 + 1
        self._rmod = self._r ** 2 - 2
        self._conj_i_gens = gens[:-2] + (-self._i, self._r)
        self._conj_r_gens = gens[:-2] + (self._i, -self._r)

    def __repr__(self):
        return f"Ring({', '.join(self.names)})"

    def __eq__(self, other):
        return isinstance(other, Ring) and self.variables == other.variables

    def __hash__(self):
        return hash(self.variables)

    def __contains__(self, name) -> bool:
        if isinstance(name, Variable):
            name = name.name
        return name in self.index

    def variable(self, name: str) -> Variable:
        return self.variables[self.index[name]]

    def kind_of(self, name: str) -> str:
        return self.variable(name).kind

    def names_of_kind(self, kind: str) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables if v.kind == kind)

    def union(self, other: "Ring") -> "Ring":
        if other is self or other == self:
            return self
        return Ring(self.variables + other.variables)

    def extend(self, variables: Iterable[Variable]) -> "Ring":
        extra = tuple(variables)
        if all(v.name in self.index for v in extra):
            return self
        return Ring(self.variables + extra)

    # constructors -----------------------------------------------------
    def gen(self, name: str) -> "RationalFunction":
        return RationalFunction.from_polynomial(self.poly_gen(name))

    def poly_gen(self, name: str) -> "Polynomial":
        return Polynomial(self, self.ctx.gens()[self.index[name]])

    def gens(self) -> dict[str, "RationalFunction"]:
        return {n: self.gen(n) for n in self.names}

    def constant(self, c) -> "RationalFunction":
        return RationalFunction.from_polynomial(Polynomial.constant(self, c))

    def zero(self) -> "RationalFunction":
        return self.constant(0)

    def one(self) -> "RationalFunction":
        return self.constant(1)

    # unit reduction ---------------------------------------------------
    def _reduce(self, p):
        degs = p.degrees()
        if degs[-2] >= 2:
            p = divmod(p, self._imod)[1]
        if degs[-1] >= 2:
            p = divmod(p, self._rmod)[1]
        return p

    def _scalar(self, c: FieldElement):
        ctx = self.ctx
        a, b, cc, d = (flint.fmpq(x.numerator, x.denominator) for x in c.parts())
        out = ctx.constant(a)
        if b:
            out += b * self._i
        if cc:
            out += cc * self._r
        if d:
            out += d * self._i * self._r
        return out


def _as_fmpq(x: Fraction) -> flint.fmpq:
    return flint.fmpq(x.numerator, x.denominator)


# ---------------------------------------------------------------------------
# polynomials


Scalar = Union[int, Fraction, FieldElement]


class Polynomial:
    """Sparse multivariate polynomial with coefficients in Q(i, sqrt 2)."""

    __slots__ = ("ring", "p", "_hash")

    def __init__(self, ring: Ring, p):
        self.ring = ring
        self.p = p
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def constant(cls, ring: Ring, c: Scalar) -> "Polynomial":
        return cls(ring, ring._scalar(FieldElement.coerce(c)))

    @classmethod
    def from_terms(cls, ring: Ring, terms: Mapping[tuple[int, ...], Scalar]) -> "Polynomial":
        ctx = ring.ctx
        acc = ctx.from_dict({})
        plain: dict = {}
        for exps, c in terms.items():
            if len(exps) != ring.nvars:
                raise ValueError("exponent vector length does not match ring")
            c = FieldElement.coerce(c)
            for k, part in enumerate(c.parts()):
                if part:
                    key = tuple(exps) + ((1 if k in (1, 3) else 0), (1 if k in (2, 3) else 0))
                    plain[key] = plain.get(key, 0) + _as_fmpq(part)
        if plain:
            acc = ctx.from_dict(plain)
        return cls(ring, acc)

    def _wrap(self, p) -> "Polynomial":
        return Polynomial(self.ring, p)

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring is self.ring or other.ring == self.ring:
                return other
            raise AlgebraError("polynomials from different rings; promote first")
        return Polynomial.constant(self.ring, other)

    def to_ring(self, ring: Ring) -> "Polynomial":
        if ring is self.ring:
            return self
        if ring == self.ring:
            return Polynomial(ring, ring.ctx.from_dict(self.p.to_dict()))
        missing = [n for n in self.variables() if n not in ring.index]
        if missing:
            raise AlgebraError(f"ring {ring!r} lacks variables {missing}")
        return Polynomial(ring, self.p.project_to_context(ring.ctx))

    # inspection ---------------------------------------------------------
    def is_zero(self) -> bool:
        return self.p.is_zero()

    def is_one(self) -> bool:
        return self.p.is_one()

    def is_constant(self) -> bool:
        degs = self.p.degrees()
        return all(d <= 0 for d in degs[:-2])

    def is_rational(self) -> bool:
        degs = self.p.degrees()
        return degs[-2] <= 0 and degs[-1] <= 0

    def variables(self) -> tuple[str, ...]:
        degs = self.p.degrees()
        return tuple(n for n, d in zip(self.ring.names, degs) if d > 0)

    def degree(self, name: str) -> int:
        if self.is_zero():
            raise AlgebraError("degree of the zero polynomial")
        if name not in self.ring.index:
            return 0
        return max(0, self.p.degrees()[self.ring.index[name]])

    def terms(self) -> dict[tuple[int, ...], FieldElement]:
        """Exponent vector (ring order) -> coefficient."""
        out: dict[tuple[int, ...], list[Fraction]] = {}
        n = self.ring.nvars
        for exps, c in self.p.to_dict().items():
            key = tuple(exps[:n])
            slot = exps[n] + 2 * exps[n + 1]
            parts = out.setdefault(key, [Fraction(0)] * 4)
            parts[slot] += _q(c)
        return {k: FieldElement(*v) for k, v in out.items()}

    def sorted_terms(self) -> list[tuple[tuple[int, ...], FieldElement]]:
        """Terms in canonical graded lexicographic order, leading term first."""
        return sorted(self.terms().items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)

    def leading_coefficient(self) -> FieldElement:
        if self.is_zero():
            raise AlgebraError("leading coefficient of zero polynomial")
        if self.is_rational():
            return FieldElement(_q(self.p.leading_coefficient()))
        return self.sorted_terms()[0][1]

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        lc = self.leading_coefficient()
        if lc == 1:
            return self
        return self.scale(lc.inverse())

    def scale(self, c: Scalar) -> "Polynomial":
        c = FieldElement.coerce(c)
        if c.is_rational():
            return self._wrap(self.p * _as_fmpq(c.a))
        return self._wrap(self.ring._reduce(self.p * self.ring._scalar(c)))

    def components(self) -> list["Polynomial"]:
        """Split into the four rational parts along 1, i, r2, i*r2."""
        if self.is_rational():
            return [self]
        n = self.ring.nvars
        parts: list[dict] = [{}, {}, {}, {}]
        for exps, c in self.p.to_dict().items():
            slot = exps[n] + 2 * exps[n + 1]
            parts[slot][tuple(exps[:n]) + (0, 0)] = c
        ctx = self.ring.ctx
        return [Polynomial(self.ring, ctx.from_dict(d)) for d in parts if d]

    def conj_i(self) -> "Polynomial":
        if self.p.degrees()[-2] <= 0:
            return self
        return self._wrap(self.p.compose(*self.ring._conj_i_gens))

    def conj_r(self) -> "Polynomial":
        if self.p.degrees()[-1] <= 0:
            return self
        return self._wrap(self.p.compose(*self.ring._conj_r_gens))

    def cofactor_to_rational(self) -> "Polynomial":
        """Product of the non-trivial conjugates; self * result is rational."""
        has_i = self.p.degrees()[-2] > 0
        has_r = self.p.degrees()[-1] > 0
        if not has_r:
            return self.conj_i()
        if not has_i:
            return self.conj_r()
        a = self.conj_i()
        return a * self.conj_r() * a.conj_r()

    def norm(self) -> "Polynomial":
        if self.is_rational():
            return self
        n = self * self.cofactor_to_rational()
        assert n.is_rational()
        return n

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        return self._wrap(self.p + o.p)

    __radd__ = __add__

    def __neg__(self):
        return self._wrap(-self.p)

    def __sub__(self, other):
        o = self._coerce(other)
        return self._wrap(self.p - o.p)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return self._wrap(self.ring._reduce(self.p * o.p))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        if self.is_rational():
            return self._wrap(self.p ** n)
        out = Polynomial.constant(self.ring, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def exact_div(self, other) -> "Polynomial":
        o = self._coerce(other)
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if o.is_rational():
            try:
                return self._wrap(self.p / o.p)
            except Exception as exc:  # flint DomainError
                raise AlgebraError("inexact polynomial division") from exc
        co = o.cofactor_to_rational()
        return (self * co).exact_div(o * co)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            if other.ring is not self.ring and other.ring != self.ring:
                ring = self.ring.union(other.ring)
                return self.to_ring(ring).p == other.to_ring(ring).p
            return self.p == other.p
        try:
            return self.p == self._coerce(other).p
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            names = self.ring.names
            self._hash = hash(frozenset(
                (tuple((names[k], e) for k, e in enumerate(exps) if e), c)
                for exps, c in self.terms().items()
            ))
        return self._hash

    def derivative(self, name: str) -> "Polynomial":
        if name not in self.ring.index:
            return Polynomial.constant(self.ring, 0)
        return self._wrap(self.p.derivative(self.ring.index[name]))

    def compose(self, values: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Simultaneous polynomial substitution (target ring = values' ring or own)."""
        if not values:
            return self
        ring = self.ring
        for v in values.values():
            ring = ring.union(v.ring)
        src = self.to_ring(ring) if ring != self.ring else self
        gens = list(ring.ctx.gens())
        for name, v in values.items():
            if name in ring.index:
                gens[ring.index[name]] = v.to_ring(ring).p
        return Polynomial(ring, ring._reduce(src.p.compose(*gens)))

    def degree_in(self, names: Iterable[str]) -> int:
        return degree_in(self, names)

    # text ---------------------------------------------------------------
    def to_text(self) -> str:
        if self.is_zero():
            return "0"
        names = self.ring.names
        out = []
        for exps, c in self.sorted_terms():
            mono = "*".join(f"{names[k]}^{e}" for k, e in enumerate(exps) if e)
            out.append(f"[{c.to_text()}]" + (f"*{mono}" if mono else ""))
        return " + ".join(out)

    def __str__(self):
        return str(self.p).replace("_I", "i").replace("_R2", "sqrt2")

    def __repr__(self):
        return f"Polynomial({self})"


def degree_in(f: Polynomial, names: Iterable[str]) -> int:
    """Maximum total degree of ``f`` in the listed variables."""
    if isinstance(f, RationalFunction):
        f = f.num
    if f.is_zero():
        raise AlgebraError("degree of the zero polynomial is undefined")
    idx = [f.ring.index[n] for n in names if n in f.ring.index]
    if not idx:
        return 0
    return max(sum(e[k] for k in idx) for e in f.p.monoms())


# ---------------------------------------------------------------------------
# gcd


def _univariate(p: Polynomial, name: str) -> list[Polynomial]:
    """Coefficients of ``p`` as a polynomial in ``name``, lowest degree first."""
    k = p.ring.index[name]
    buckets: dict[int, dict] = {}
    for exps, c in p.p.to_dict().items():
        e = exps[k]
        key = exps[:k] + (0,) + exps[k + 1:]
        buckets.setdefault(e, {})[key] = c
    deg = max(buckets) if buckets else 0
    ctx = p.ring.ctx
    return [Polynomial(p.ring, ctx.from_dict(buckets.get(e, {}))) for e in range(deg + 1)]


def _from_univariate(coeffs: Sequence[Polynomial], name: str, ring: Ring) -> Polynomial:
    x = ring.poly_gen(name)
    out = Polynomial.constant(ring, 0)
    for c in reversed(coeffs):
        out = out * x + c
    return out


def _udeg(c: list[Polynomial]) -> int:
    d = len(c) - 1
    while d >= 0 and c[d].is_zero():
        d -= 1
    return d


def _utrim(c: list[Polynomial]) -> list[Polynomial]:
    d = _udeg(c)
    return c[: d + 1]


def _prem(a: list[Polynomial], b: list[Polynomial]) -> list[Polynomial]:
    """Pseudo-remainder of univariate coefficient lists."""
    a = list(a)
    db = _udeg(b)
    lb = b[db]
    da = _udeg(a)
    e = da - db + 1
    while da >= db and da >= 0:
        la = a[da]
        shift = da - db
        a = [c * lb for c in a]
        for k in range(db + 1):
            a[k + shift] = a[k + shift] - la * b[k]
        a = _utrim(a)
        da = _udeg(a)
        e -= 1
    if e > 0:
        f = lb ** e
        a = [c * f for c in a]
    return a


def _content(coeffs: Sequence[Polynomial]) -> Polynomial:
    return reduce(subresultant_gcd, [c for c in coeffs if not c.is_zero()])


def subresultant_gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """GCD over Q(i, sqrt 2) by recursive content extraction and the
    subresultant pseudo-remainder sequence.  Result is monic."""
    if p.ring != q.ring:
        ring = p.ring.union(q.ring)
        p, q = p.to_ring(ring), q.to_ring(ring)
    ring = p.ring
    if p.is_zero():
        return q.monic()
    if q.is_zero():
        return p.monic()
    present = [n for n in ring.names if p.degree(n) > 0 or q.degree(n) > 0]
    if not present:
        return Polynomial.constant(ring, 1)
    v = present[0]
    if p.degree(v) == 0 or q.degree(v) == 0:
        # v occurs in one argument only: gcd divides every v-coefficient
        a, b = (p, q) if p.degree(v) > 0 else (q, p)
        return subresultant_gcd(_content(_univariate(a, v)), b)
    A = _univariate(p, v)
    B = _univariate(q, v)
    ca, cb = _content(A), _content(B)
    c = subresultant_gcd(ca, cb)
    A = [x.exact_div(ca) for x in A]
    B = [x.exact_div(cb) for x in B]
    if _udeg(A) < _udeg(B):
        A, B = B, A
    g = Polynomial.constant(ring, 1)
    h = Polynomial.constant(ring, 1)
    while True:
        d = _udeg(A) - _udeg(B)
        r = _prem(A, B)
        if _udeg(r) < 0:
            break
        if _udeg(r) == 0:
            B = [Polynomial.constant(ring, 1)]
            break
        div = g * h ** d
        A, B = B, [x.exact_div(div) for x in r]
        g = A[_udeg(A)]
        if d == 0:
            pass
        elif d == 1:
            h = g
        else:
            h = (g ** d).exact_div(h ** (d - 1))
    cB = _content(B)
    B = [x.exact_div(cB) for x in B]
    return (c * _from_univariate(B, v, ring)).monic()


def gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Monic greatest common divisor; ``gcd(p, 0)`` is ``p`` made monic."""
    if p.ring != q.ring:
        ring = p.ring.union(q.ring)
        p, q = p.to_ring(ring), q.to_ring(ring)
    if p.is_zero():
        return q.monic()
    if q.is_zero():
        return p.monic()
    if p.is_rational() and q.is_rational():
        return Polynomial(p.ring, p.p.gcd(q.p)).monic()
    return _gcd_extension(p, q)


def _gcd_extension(p: Polynomial, q: Polynomial) -> Polynomial:
    ring = p.ring
    # common factors defined over Q divide every rational component
    g0 = ring.ctx.from_dict({})
    for comp in p.components() + q.components():
        g0 = g0.gcd(comp.p)
    g0 = Polynomial(ring, g0)
    if not g0.is_one():
        p, q = p.exact_div(g0), q.exact_div(g0)
    # a remaining common factor must divide both norms
    if Polynomial(ring, p.norm().p.gcd(q.norm().p)).is_constant():
        return g0.monic()
    return (g0 * subresultant_gcd(p, q)).monic()


# ---------------------------------------------------------------------------
# rational functions


class RationalFunction:
    """Reduced quotient of two polynomials in a common ring."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Polynomial, den: Polynomial | None = None, *, reduced: bool = False):
        if den is None:
            den = Polynomial.constant(num.ring, 1)
            reduced = True
        if num.ring != den.ring:
            ring = num.ring.union(den.ring)
            num, den = num.to_ring(ring), den.to_ring(ring)
        if not reduced:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def from_polynomial(cls, p: Polynomial) -> "RationalFunction":
        return cls(p, Polynomial.constant(p.ring, 1), reduced=True)

    @property
    def ring(self) -> Ring:
        return self.num.ring

    def to_ring(self, ring: Ring) -> "RationalFunction":
        if ring is self.ring:
            return self
        return RationalFunction(self.num.to_ring(ring), self.den.to_ring(ring), reduced=True)

    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Polynomial):
            return RationalFunction.from_polynomial(other)
        return RationalFunction.from_polynomial(Polynomial.constant(self.ring, other))

    def _common(self, other) -> tuple["RationalFunction", "RationalFunction"]:
        o = self._coerce(other)
        if o.ring is self.ring or o.ring == self.ring:
            return self, o
        ring = self.ring.union(o.ring)
        return self.to_ring(ring), o.to_ring(ring)

    # predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def is_polynomial_in(self, names: Iterable[str]) -> bool:
        """True when the reduced denominator involves none of ``names``."""
        dv = set(self.den.variables())
        return not dv.intersection(names)

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def variables(self) -> tuple[str, ...]:
        vs = set(self.num.variables()) | set(self.den.variables())
        return tuple(n for n in self.ring.names if n in vs)

    def constant_value(self) -> FieldElement:
        if not self.is_constant():
            raise AlgebraError("not a constant")
        if self.num.is_zero():
            return FieldElement(0)
        return self.num.leading_coefficient() / self.den.leading_coefficient()

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        a, b = self._common(other)
        if a.is_zero():
            return b
        if b.is_zero():
            return a
        if a.den == b.den:
            return RationalFunction(a.num + b.num, a.den)
        if a.den.is_constant() and b.den.is_constant():
            return RationalFunction(a.num * b.den + b.num * a.den, a.den * b.den)
        g = gcd(a.den, b.den)
        da = a.den.exact_div(g)
        db = b.den.exact_div(g)
        return RationalFunction(a.num * db + b.num * da, a.den * db)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, reduced=True)

    def __sub__(self, other):
        a, b = self._common(other)
        return a + (-b)

    def __rsub__(self, other):
        a, b = self._common(other)
        return b + (-a)

    def __mul__(self, other):
        a, b = self._common(other)
        if a.is_zero() or b.is_zero():
            return RationalFunction.from_polynomial(Polynomial.constant(a.ring, 0))
        g1 = gcd(a.num, b.den)
        g2 = gcd(b.num, a.den)
        num = a.num.exact_div(g1) * b.num.exact_div(g2)
        den = a.den.exact_div(g2) * b.den.exact_div(g1)
        if den.is_rational():
            lc = den.leading_coefficient()
            if lc != 1:
                inv = lc.inverse()
                num, den = num.scale(inv), den.scale(inv)
            return RationalFunction(num, den, reduced=True)
        return RationalFunction(num, den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        a, b = self._common(other)
        return a * b.inverse()

    def __rtruediv__(self, other):
        a, b = self._common(other)
        return b * a.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction(self.num ** n, self.den ** n, reduced=True)

    def __eq__(self, other):
        try:
            a, b = self._common(other)
        except (TypeError, ValueError):
            return NotImplemented
        return a.num == b.num and a.den == b.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # calculus -----------------------------------------------------------
    def derivative(self, name: str) -> "RationalFunction":
        dn = self.num.derivative(name)
        dd = self.den.derivative(name)
        if dd.is_zero():
            if dn.is_zero():
                return RationalFunction.from_polynomial(dn)
            return RationalFunction(dn, self.den)
        return RationalFunction(dn * self.den - self.num * dd, self.den * self.den)

    def subs(self, bindings: Mapping[str, "RationalFunction"]) -> "RationalFunction":
        return substitute(self, bindings)

    def evaluate_exact(self, values: Mapping[str, Scalar]) -> "RationalFunction":
        ring = self.ring
        return substitute(self, {k: ring.constant(v) for k, v in values.items()})

    # text ---------------------------------------------------------------
    def to_text(self) -> str:
        if self.den.is_one():
            return f"({self.num.to_text()})"
        return f"({self.num.to_text()})/({self.den.to_text()})"

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RationalFunction({self})"


def _normalize(num: Polynomial, den: Polynomial) -> tuple[Polynomial, Polynomial]:
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    ring = num.ring
    if num.is_zero():
        return num, Polynomial.constant(ring, 1)
    if not den.is_rational():
        lc = den.leading_coefficient()
        inv = lc.inverse()
        den2 = den.scale(inv)
        if den2.is_rational():
            num, den = num.scale(inv), den2
        else:
            co = den.cofactor_to_rational()
            num, den = num * co, den * co
    if den.is_constant():
        c = den.leading_coefficient().inverse()
        return num.scale(c), Polynomial.constant(ring, 1)
    g = gcd(num, den)
    if not g.is_one():
        num, den = num.exact_div(g), den.exact_div(g)
    lc = den.leading_coefficient()
    if lc != 1:
        inv = lc.inverse()
        num, den = num.scale(inv), den.scale(inv)
    return num, den


def _to_rf(ring: Ring, v) -> RationalFunction:
    if isinstance(v, RationalFunction):
        return v
    if isinstance(v, Polynomial):
        return RationalFunction.from_polynomial(v)
    return ring.constant(v)


def arith(lhs: RationalFunction, rhs: RationalFunction, op: str) -> RationalFunction:
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    if op == "div":
        return lhs / rhs
    raise ValueError(f"unknown operation {op!r}")


def differentiate(f, v: Union[str, Variable]) -> RationalFunction:
    name = v.name if isinstance(v, Variable) else v
    if isinstance(f, Polynomial):
        f = RationalFunction.from_polynomial(f)
    return f.derivative(name)


def _subs_poly(p: Polynomial, bindings: Mapping[str, RationalFunction], ring: Ring) -> RationalFunction:
    """Substitute rational functions into a polynomial by grouping
    variables with a shared denominator and homogenizing each group."""
    p = p.to_ring(ring)
    if p.is_zero():
        return RationalFunction.from_polynomial(p)
    active = {k: v for k, v in bindings.items() if k in ring.index and p.degree(k) > 0}
    if not active:
        return RationalFunction.from_polynomial(p)
    poly_vals = {k: v.num for k, v in active.items() if v.den.is_one()}
    frac_vals = {k: v for k, v in active.items() if not v.den.is_one()}
    if not frac_vals:
        return RationalFunction.from_polynomial(p.compose(poly_vals))
    groups: dict[Polynomial, list[str]] = {}
    for k, v in frac_vals.items():
        groups.setdefault(v.den, []).append(k)
    group_list = list(groups.items())
    idx = ring.index
    gidx = [[idx[k] for k in names] for _, names in group_list]
    fixed = {k: v.num for k, v in frac_vals.items()}
    fixed.update(poly_vals)
    ctx = ring.ctx
    # split p into pieces indexed by per-group degree, each piece handled by compose
    pieces: dict[tuple[int, ...], dict] = {}
    for exps, c in p.p.to_dict().items():
        key = tuple(sum(exps[i] for i in g) for g in gidx)
        pieces.setdefault(key, {})[exps] = c
    maxdeg = [max(k[j] for k in pieces) for j in range(len(group_list))]
    dens = [d for d, _ in group_list]
    pow_cache: dict[tuple[int, int], Polynomial] = {}

    def dpow(j: int, e: int) -> Polynomial:
        if (j, e) not in pow_cache:
            pow_cache[(j, e)] = dens[j] ** e
        return pow_cache[(j, e)]

    num = Polynomial.constant(ring, 0)
    for key, terms in pieces.items():
        piece = Polynomial(ring, ctx.from_dict(terms)).compose(fixed)
        for j, e in enumerate(key):
            if maxdeg[j] - e:
                piece = piece * dpow(j, maxdeg[j] - e)
        num = num + piece
    den = Polynomial.constant(ring, 1)
    for j, d in enumerate(dens):
        if maxdeg[j]:
            den = den * dpow(j, maxdeg[j])
    return RationalFunction(num, den)


def substitute(f, bindings: Mapping) -> RationalFunction:
    """Simultaneous substitution; right-hand sides read in the old variables."""
    if isinstance(f, Polynomial):
        f = RationalFunction.from_polynomial(f)
    ring = f.ring
    clean: dict[str, RationalFunction] = {}
    for k, v in bindings.items():
        name = k.name if isinstance(k, Variable) else k
        rv = _to_rf(ring, v)
        clean[name] = rv
        ring = ring.union(rv.ring)
    clean = {k: v.to_ring(ring) for k, v in clean.items()}
    num = _subs_poly(f.num, clean, ring)
    if f.den.is_constant():
        return num * RationalFunction(Polynomial.constant(ring, 1), f.den.to_ring(ring))
    den = _subs_poly(f.den, clean, ring)
    if den.is_zero():
        raise AlgebraError("substitution produces a zero denominator")
    return num / den


def limit_epsilon_zero(f: RationalFunction, eps: Union[str, Variable]) -> RationalFunction:
    """Value at eps = 0 of the reduced form, or PoleError."""
    name = eps.name if isinstance(eps, Variable) else eps
    ring = f.ring
    if name in ring.index and ring.kind_of(name) != "epsilon":
        raise AlgebraError(f"{name} is declared as {ring.kind_of(name)}, not epsilon")
    if name not in ring.index or (f.num.degree(name) == 0 and f.den.degree(name) == 0):
        return f
    zero = {name: Polynomial.constant(ring, 0)}
    d0 = f.den.compose(zero)
    if d0.is_zero():
        raise PoleError(f"pole at {name}=0: denominator {f.den}")
    return RationalFunction(f.num.compose(zero), d0)


# ---------------------------------------------------------------------------
# text parsing

_TERM = re.compile(r"^\[([^\]]+)\](?:\*(.*))?$")


def parse_polynomial(text: str, ring: Ring) -> Polynomial:
    text = text.strip()
    if text == "0":
        return Polynomial.constant(ring, 0)
    terms: dict[tuple[int, ...], FieldElement] = {}
    for chunk in text.split(" + "):
        m = _TERM.match(chunk.strip())
        if not m:
            raise ValueError(f"malformed term {chunk!r}")
        coeff = FieldElement.from_text(m.group(1))
        exps = [0] * ring.nvars
        if m.group(2):
            for factor in m.group(2).split("*"):
                name, _, e = factor.partition("^")
                if name not in ring.index or not e:
                    raise ValueError(f"malformed factor {factor!r}")
                exps[ring.index[name]] += int(e)
        key = tuple(exps)
        terms[key] = terms.get(key, FieldElement(0)) + coeff
    return Polynomial.from_terms(ring, terms)


def parse_rational(text: str, ring: Ring) -> RationalFunction:
    text = text.strip()
    if not text.startswith("("):
        raise ValueError("rational text must start with '('")
    depth = 0
    for k, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0:
                break
    num = parse_polynomial(text[1:k], ring)
    rest = text[k + 1:]
    if not rest:
        return RationalFunction.from_polynomial(num)
    if not (rest.startswith("/(") and rest.endswith(")")):
        raise ValueError(f"malformed rational text {text!r}")
    den = parse_polynomial(rest[2:-1], ring)
    return RationalFunction(num, den, reduced=True)


# ---------------------------------------------------------------------------
# expression parsing


def parse_expression(text: str, ring: Ring, constants: Mapping[str, RationalFunction] | None = None
                     ) -> RationalFunction:
    """Read an infix expression such as ``"(x-t)*y^2/(t*(t-1))"``.

    Names resolve to ring generators, then to ``constants``; ``I`` is the
    imaginary unit and ``sqrt2`` is the square root of 2.  Only integer
    literals, ``+ - * / ^`` (or ``**``) and parentheses are accepted.
    """
    import ast

    consts = dict(constants or {})
    tree = ast.parse(text.replace("^", "**"), mode="eval")

    def ev(node) -> RationalFunction:
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                exp = node.right
                sign = 1
                if isinstance(exp, ast.UnaryOp) and isinstance(exp.op, ast.USub):
                    sign, exp = -1, exp.operand
                if not (isinstance(exp, ast.Constant) and isinstance(exp.value, int)):
                    raise ValueError("exponents must be integer literals")
                return ev(node.left) ** (sign * exp.value)
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                return a / b
            raise ValueError(f"unsupported operator in {text!r}")
        if isinstance(node, ast.UnaryOp):
            v = ev(node.operand)
            if isinstance(node.op, ast.USub):
                return -v
            if isinstance(node.op, ast.UAdd):
                return v
            raise ValueError(f"unsupported unary operator in {text!r}")
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return ring.constant(node.value)
        if isinstance(node, ast.Name):
            name = node.id
            if name in ring.index:
                return ring.gen(name)
            if name in consts:
                return consts[name]
            if name == "I":
                return ring.constant(I)
            if name == "sqrt2":
                return ring.constant(SQRT2)
            raise ValueError(f"unknown name {name!r} in {text!r}")
        raise ValueError(f"unsupported syntax in {text!r}")

    return ev(tree)
