"""Exact rational functions over a coordinate chart.

Every coefficient in the engine is a :class:`RationalExpr`: a quotient of two
multivariate polynomials with rational coefficients, kept in lowest terms with
a monic denominator.  Because the form is canonical, ``==`` decides
mathematical equality.  Polynomial arithmetic and gcds are delegated to FLINT.
"""
from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import flint


class ZeroDenominator(ZeroDivisionError):
    """Raised when a denominator is identically zero."""


class Chart:
    """An ordered list of distinct coordinate names."""

    __slots__ = ("coords", "ctx", "__dict__")

    def __init__(self, coords: Iterable[str]):
        coords = tuple(coords)
        if not coords:
            raise ValueError("a chart needs at least one coordinate")
        if len(set(coords)) != len(coords):
            raise ValueError(f"duplicate coordinate names in {coords}")
        for c in coords:
            if not c.isidentifier():
                raise ValueError(f"invalid coordinate name {c!r}")
        self.coords = coords
        self.ctx = flint.fmpq_mpoly_ctx.get(coords, "deglex")

    @property
    def dim(self) -> int:
        return len(self.coords)

    def index(self, name: str) -> int:
        return self.coords.index(name)

    def __eq__(self, other):
        return isinstance(other, Chart) and self.coords == other.coords

    def __hash__(self):
        return hash(("Chart", self.coords))

    def __repr__(self):
        return f"Chart({', '.join(self.coords)})"

    # element constructors

    @cached_property
    def zero(self) -> "RationalExpr":
        return RationalExpr._raw(self, self.ctx.constant(0), self.ctx.constant(1))

    @cached_property
    def one(self) -> "RationalExpr":
        return RationalExpr._raw(self, self.ctx.constant(1), self.ctx.constant(1))

    def const(self, value) -> "RationalExpr":
        if isinstance(value, Fraction):
            value = flint.fmpq(value.numerator, value.denominator)
        return RationalExpr._raw(self, self.ctx.constant(value), self.ctx.constant(1))

    def coord(self, i: int | str) -> "RationalExpr":
        if isinstance(i, str):
            i = self.index(i)
        return RationalExpr._raw(self, self.ctx.gens()[i], self.ctx.constant(1))

    def coord_funcs(self) -> list["RationalExpr"]:
        return [self.coord(i) for i in range(self.dim)]

    def extend(self, *names: str) -> "Chart":
        return Chart(self.coords + tuple(names))


def _poly(chart: Chart, value):
    if isinstance(value, flint.fmpq_mpoly):
        return value
    if isinstance(value, Fraction):
        value = flint.fmpq(value.numerator, value.denominator)
    return chart.ctx.constant(value)


class RationalExpr:
    """An element of Q(x_1, ..., x_n) in canonical form.

    Instances are immutable.  Arithmetic with ints and Fractions is supported;
    mixing expressions from different charts raises ``ValueError``.
    """

    __slots__ = ("chart", "num", "den", "_hash")

    def __init__(self, chart: Chart, num, den=1):
        num = _poly(chart, num)
        den = _poly(chart, den)
        if den.is_zero():
            raise ZeroDenominator("denominator is identically zero")
        if num.is_zero():
            num, den = chart.ctx.constant(0), chart.ctx.constant(1)
        else:
            g = num.gcd(den)
            if not g.is_one():
                num = num / g
                den = den / g
            lc = den.leading_coefficient()
            if lc != 1:
                num = num / lc
                den = den / lc
        self.chart = chart
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def _raw(cls, chart, num, den):
        obj = cls.__new__(cls)
        obj.chart = chart
        obj.num = num
        obj.den = den
        obj._hash = None
        return obj

    # predicates

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def __bool__(self):
        return not self.num.is_zero()

    # arithmetic

    def _coerce(self, other) -> "RationalExpr":
        if isinstance(other, RationalExpr):
            if other.chart is not self.chart and other.chart != self.chart:
                raise ValueError(f"cannot combine expressions on {self.chart} and {other.chart}")
            return other
        if isinstance(other, (int, Fraction, flint.fmpq)):
            return self.chart.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        d1, d2 = self.den, other.den
        if d1.is_one() and d2.is_one():
            num = self.num + other.num
            if num.is_zero():
                return self.chart.zero
            return RationalExpr._raw(self.chart, num, d1)
        # both operands are reduced, so only g = gcd(d1, d2) can divide the new numerator
        g = d1 if d1 == d2 else d1.gcd(d2)
        if g.is_one():
            return RationalExpr._raw(self.chart, self.num * d2 + other.num * d1, d1 * d2)
        e1, e2 = d1 / g, d2 / g
        num = self.num * e2 + other.num * e1
        if num.is_zero():
            return self.chart.zero
        h = num.gcd(g)
        if not h.is_one():
            num, g = num / h, g / h
        return RationalExpr._raw(self.chart, num, e1 * e2 * g)

    __radd__ = __add__

    def __neg__(self):
        return RationalExpr._raw(self.chart, -self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.num.is_zero() or other.num.is_zero():
            return self.chart.zero
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        if not d2.is_one():
            g = n1.gcd(d2)
            if not g.is_one():
                n1, d2 = n1 / g, d2 / g
        if not d1.is_one():
            g = n2.gcd(d1)
            if not g.is_one():
                n2, d1 = n2 / g, d1 / g
        return RationalExpr._raw(self.chart, n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def inverse(self) -> "RationalExpr":
        if self.num.is_zero():
            raise ZeroDenominator("inverse of the zero expression")
        return RationalExpr(self.chart, self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        return RationalExpr._raw(self.chart, self.num**k, self.den**k)

    def __eq__(self, other):
        if isinstance(other, RationalExpr):
            return self.chart == other.chart and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.den.is_one() and self.num == _poly(self.chart, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.chart.coords, str(self.num), str(self.den)))
        return self._hash

    # calculus

    def diff(self, i: int) -> "RationalExpr":
        """Partial derivative along the i-th chart coordinate."""
        if self.num.is_zero():
            return self
        dn = self.num.derivative(i)
        if self.den.is_one():
            return RationalExpr._raw(self.chart, dn, self.den)
        dd = self.den.derivative(i)
        if dd.is_zero():
            return RationalExpr(self.chart, dn, self.den)
        return RationalExpr(self.chart, dn * self.den - self.num * dd, self.den * self.den)

    def substitute(self, target: Chart, images: Sequence["RationalExpr"]) -> "RationalExpr":
        """Compose with a map whose i-th component is ``images[i]`` (expressions on ``target``)."""
        if len(images) != self.chart.dim:
            raise ValueError("need one image per source coordinate")
        if all(im.den.is_one() for im in images):
            nums = [im.num for im in images]
            return RationalExpr(target, self.num.compose(*nums, ctx=target.ctx),
                                self.den.compose(*nums, ctx=target.ctx))
        return _eval_poly(self.num, target, images) / _eval_poly(self.den, target, images)

    def to_chart(self, target: Chart) -> "RationalExpr":
        """Re-express on a chart whose coordinates include ours (by name)."""
        return self.substitute(target, [target.coord(c) for c in self.chart.coords])

    # printing

    def __str__(self):
        return format_expr(self)

    def __repr__(self):
        return f"RationalExpr({self})"


def _eval_poly(p, target: Chart, images) -> RationalExpr:
    total = target.zero
    powers: dict[tuple[int, int], RationalExpr] = {}
    for exps, coeff in p.terms():
        term = target.const(coeff)
        for i, e in enumerate(exps):
            if e:
                key = (i, e)
                if key not in powers:
                    powers[key] = images[i] ** int(e)
                term = term * powers[key]
        total = total + term
    return total


def format_expr(e: RationalExpr) -> str:
    """Canonical string, parseable by :func:`gencontact.symkernel.grammar.parse_expr`."""
    num = str(e.num)
    if e.den.is_one():
        return num
    den = str(e.den)
    if len(e.num) > 1:
        num = f"({num})"
    if not den.isidentifier() and not den.isdigit():
        den = f"({den})"
    return f"{num}/{den}"


def normalize(chart: Chart, numerator, denominator=1) -> RationalExpr:
    """Bring ``numerator/denominator`` into canonical form.

    Both arguments may be RationalExprs, ints, Fractions or FLINT polynomials.
    """
    if isinstance(numerator, RationalExpr) or isinstance(denominator, RationalExpr):
        n = numerator if isinstance(numerator, RationalExpr) else chart.const(numerator) \
            if not isinstance(numerator, flint.fmpq_mpoly) else RationalExpr(chart, numerator)
        d = denominator if isinstance(denominator, RationalExpr) else chart.const(denominator) \
            if not isinstance(denominator, flint.fmpq_mpoly) else RationalExpr(chart, denominator)
        return n / d
    return RationalExpr(chart, numerator, denominator)
