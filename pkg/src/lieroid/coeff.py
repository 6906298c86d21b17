"""Exact rational functions in chart coordinates.

Every coefficient in the engine is a :class:`Scalar`, an element of the
field Q(x1, ..., xn).  Numerator and denominator are sparse multivariate
polynomials over Q (python-flint ``fmpq_mpoly``); fractions are kept
reduced with a monic denominator under the graded-lex order, so two equal
values always have identical representations.

A :class:`Chart` fixes the coordinate names.  Charts are interned by name
tuple, and a chart with no coordinates is legal (coefficients collapse to Q).
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import flint


class DivisionByZero(ZeroDivisionError):
    pass


class PoleAtPoint(ArithmeticError):
    """The denominator of a scalar vanishes at the evaluation point."""


class ChartMismatch(ValueError):
    pass


def _fmpq(q) -> flint.fmpq:
    if isinstance(q, flint.fmpq):
        return q
    if isinstance(q, int):
        return flint.fmpq(q)
    q = Fraction(q)
    return flint.fmpq(q.numerator, q.denominator)


class Chart:
    """Coordinate system; owns the polynomial context for its scalars."""

    _cache: dict[tuple[str, ...], "Chart"] = {}

    def __new__(cls, names: Sequence[str] = ()):
        names = tuple(names)
        chart = cls._cache.get(names)
        if chart is None:
            if len(set(names)) != len(names):
                raise ValueError(f"duplicate coordinate names in {names}")
            chart = super().__new__(cls)
            chart.names = names
            chart.ctx = flint.fmpq_mpoly_ctx.get(names, "deglex")
            chart._one_poly = chart.ctx.from_dict({(0,) * len(names): 1})
            chart._zero_poly = chart.ctx.from_dict({})
            cls._cache[names] = chart
        return chart

    def __reduce__(self):
        return (Chart, (self.names,))

    @property
    def dim(self) -> int:
        return len(self.names)

    def __repr__(self) -> str:
        return f"Chart({list(self.names)})"

    def const(self, q) -> "Scalar":
        if isinstance(q, Scalar):
            if q.chart is not self:
                raise ChartMismatch(f"{q.chart} vs {self}")
            return q
        num = self.ctx.from_dict({(0,) * self.dim: _fmpq(q)}) if q else self._zero_poly
        return Scalar._raw(self, num, self._one_poly)

    def zero(self) -> "Scalar":
        return Scalar._raw(self, self._zero_poly, self._one_poly)

    def one(self) -> "Scalar":
        return Scalar._raw(self, self._one_poly, self._one_poly)

    def var(self, i: int | str) -> "Scalar":
        if isinstance(i, str):
            i = self.names.index(i)
        mono = [0] * self.dim
        mono[i] = 1
        return Scalar._raw(self, self.ctx.from_dict({tuple(mono): 1}), self._one_poly)

    def gens(self) -> tuple["Scalar", ...]:
        return tuple(self.var(i) for i in range(self.dim))

    def poly(self, terms: dict[tuple[int, ...], object]) -> "Scalar":
        """Polynomial scalar from ``{exponent tuple: rational coefficient}``."""
        d = {tuple(m): _fmpq(c) for m, c in terms.items() if c}
        return Scalar._raw(self, self.ctx.from_dict(d), self._one_poly)


class Scalar:
    """Reduced fraction num/den of polynomials, den monic; immutable."""

    __slots__ = ("chart", "num", "den", "_hash")

    def __init__(self, chart: Chart, num, den=None):
        ctx = chart.ctx
        if den is None:
            den = chart._one_poly
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        n, d = _reduce(num, den, chart)
        self.chart = chart
        self.num = n
        self.den = d
        self._hash = None

    @classmethod
    def _raw(cls, chart: Chart, num, den) -> "Scalar":
        # caller guarantees num/den is already canonical
        s = object.__new__(cls)
        s.chart = chart
        s.num = num
        s.den = den
        s._hash = None
        return s

    # --- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        c = self.num.leading_coefficient() if not self.num.is_zero() else flint.fmpq(0)
        return Fraction(int(c.p), int(c.q))

    # --- coercion ---------------------------------------------------------
    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.chart is not self.chart:
                raise ChartMismatch(f"{other.chart} vs {self.chart}")
            return other
        if isinstance(other, (int, Rational, flint.fmpq)):
            return self.chart.const(other)
        return NotImplemented

    # --- field operations -------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.num.is_zero():
            return self
        if self.num.is_zero():
            return o
        if self.den == o.den:
            if self.den.is_one():
                return Scalar._raw(self.chart, self.num + o.num, self.den)
            return _make(self.chart, self.num + o.num, self.den)
        return _make(self.chart, self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw(self.chart, -self.num, self.den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.num.is_zero() or o.num.is_zero():
            return self.chart.zero()
        if self.den.is_one() and o.den.is_one():
            return Scalar._raw(self.chart, self.num * o.num, self.den)
        # cross-cancel before multiplying keeps the factors small
        n1, d2 = _cancel(self.num, o.den)
        n2, d1 = _cancel(o.num, self.den)
        return _make_monic(self.chart, n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.num.is_zero():
            raise DivisionByZero("inverse of zero scalar")
        return _make_monic(self.chart, self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            raise TypeError("only integer exponents are supported")
        if e < 0:
            return self.inverse() ** (-e)
        if e == 0:
            return self.chart.one()
        return Scalar._raw(self.chart, self.num ** e, self.den ** e)

    # --- calculus ---------------------------------------------------------
    def partial(self, i: int) -> "Scalar":
        if not 0 <= i < self.chart.dim:
            raise IndexError(f"coordinate index {i} out of range for {self.chart}")
        dn = self.num.derivative(i)
        if self.den.is_constant():
            return Scalar._raw(self.chart, dn, self.den)
        dd = self.den.derivative(i)
        return _make(self.chart, dn * self.den - self.num * dd, self.den * self.den)

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.chart.dim:
            raise ValueError(f"point has {len(point)} coordinates, chart has {self.chart.dim}")
        vals = [_fmpq(p) for p in point]
        if self.chart.dim == 0:
            d = self.den.leading_coefficient()
            n = self.num.leading_coefficient() if not self.num.is_zero() else flint.fmpq(0)
        else:
            d = self.den(*vals)
            n = self.num(*vals)
        if d == 0:
            raise PoleAtPoint(f"denominator of {self} vanishes at {tuple(point)}")
        v = n / d
        return Fraction(int(v.p), int(v.q))

    # --- identity ---------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.chart is other.chart and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Rational, flint.fmpq)):
            return self.is_constant() and self.constant_value() == Fraction(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_value())
            else:
                self._hash = hash((self.chart.names,
                                   tuple(sorted(self.num.to_dict().items())),
                                   tuple(sorted(self.den.to_dict().items()))))
        return self._hash

    def __reduce__(self):
        return (_unpickle, (self.chart.names, self.num.to_dict(), self.den.to_dict()))

    def __str__(self) -> str:
        return format_scalar(self)

    def __repr__(self) -> str:
        return f"Scalar({format_scalar(self)!r})"


def _unpickle(names, num, den):
    chart = Chart(names)
    return Scalar(chart, chart.ctx.from_dict(num), chart.ctx.from_dict(den))


def _cancel(n, d):
    if d.is_constant() or n.is_constant():
        return n, d
    g = n.gcd(d)
    if g.is_constant():
        return n, d
    return n / g, d / g


def _reduce(n, d, chart: Chart):
    if n.is_zero():
        return chart._zero_poly, chart._one_poly
    n, d = _cancel(n, d)
    lc = d.leading_coefficient()
    if lc != 1:
        n = n / lc
        d = d / lc
    return n, d


def _make(chart: Chart, n, d) -> Scalar:
    n, d = _reduce(n, d, chart)
    return Scalar._raw(chart, n, d)


def _make_monic(chart: Chart, n, d) -> Scalar:
    # n and d already coprime
    if n.is_zero():
        return chart.zero()
    lc = d.leading_coefficient()
    if lc != 1:
        n = n / lc
        d = d / lc
    return Scalar._raw(chart, n, d)


# --- formatting --------------------------------------------------------------

def _format_poly(p, names: Sequence[str]) -> str:
    terms = p.to_dict()
    if not terms:
        return "0"
    # fixed deglex order, highest first
    keys = sorted(terms, key=lambda m: (sum(m), m), reverse=True)
    parts = []
    for m in keys:
        c = terms[m]
        c = Fraction(int(c.p), int(c.q))
        mono = "*".join(
            names[i] if e == 1 else f"{names[i]}^{e}" for i, e in enumerate(m) if e
        )
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        parts.append((sign, body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def format_scalar(s: Scalar) -> str:
    num = _format_poly(s.num, s.chart.names)
    if s.den.is_one():
        return num
    den = _format_poly(s.den, s.chart.names)
    return f"({num})/({den})"


# --- convenience -------------------------------------------------------------

def arith(op: str, a: Scalar, b: Scalar | None = None) -> Scalar:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "neg":
        return -a
    raise ValueError(f"unknown operation {op!r}")


def partial(a: Scalar, i: int) -> Scalar:
    return a.partial(i)


def evaluate(a: Scalar, point: Sequence) -> Fraction:
    return a.evaluate(point)


def scalar_sum(chart: Chart, items: Iterable[Scalar]) -> Scalar:
    total = chart.zero()
    for s in items:
        total = total + s
    return total
