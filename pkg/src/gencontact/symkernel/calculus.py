"""Forms, multivector fields and (1,1)-tensors on a chart, with Cartan calculus.

Antisymmetric objects store components only on strictly increasing index
tuples; absent keys are zero.  Sign conventions:

* ``contract(X, w)`` is the interior product into the first slot.
* ``schouten`` uses the left-derivative super formula, so on vector fields it
  is the Lie bracket and ``[P, Q] = -(-1)^{(p-1)(q-1)} [Q, P]``.
"""
from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .ring import Chart, RationalExpr


def _sort_sign(idx: Sequence[int]):
    """Sort an index tuple, returning (sorted, sign) or (None, 0) on repeats."""
    idx = list(idx)
    sign = 1
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(idx, idx[1:]):
        if a == b:
            return None, 0
    return tuple(idx), sign


class _Alternating:
    """Common storage for Form and Multivector."""

    __slots__ = ("chart", "degree", "comps")
    _prefix = ""

    def __init__(self, chart: Chart, degree: int, comps: Mapping[tuple, RationalExpr] | None = None):
        self.chart = chart
        self.degree = degree
        clean: dict[tuple, RationalExpr] = {}
        if comps:
            for key, val in comps.items():
                if isinstance(val, int):
                    val = chart.const(val)
                if val.is_zero():
                    continue
                if len(key) != degree:
                    raise ValueError(f"index {key} does not match degree {degree}")
                skey, sign = _sort_sign(key)
                if skey is None:
                    continue
                if skey[-1:] and skey[-1] >= chart.dim:
                    raise ValueError(f"index {key} out of range for {chart}")
                if skey in clean:
                    total = clean[skey] + (val if sign > 0 else -val)
                    if total.is_zero():
                        del clean[skey]
                    else:
                        clean[skey] = total
                else:
                    clean[skey] = val if sign > 0 else -val
        self.comps = clean

    @classmethod
    def _make(cls, chart, degree, comps):
        obj = cls.__new__(cls)
        obj.chart = chart
        obj.degree = degree
        obj.comps = comps
        return obj

    @classmethod
    def zero(cls, chart: Chart, degree: int):
        return cls._make(chart, degree, {})

    def __getitem__(self, key) -> RationalExpr:
        skey, sign = _sort_sign(key)
        if skey is None or skey not in self.comps:
            return self.chart.zero
        val = self.comps[skey]
        return val if sign > 0 else -val

    def is_zero(self) -> bool:
        return not self.comps

    def _check(self, other):
        if type(other) is not type(self) or other.degree != self.degree or other.chart != self.chart:
            raise TypeError(f"incompatible operands {self!r} and {other!r}")

    def __add__(self, other):
        self._check(other)
        comps = dict(self.comps)
        for k, v in other.comps.items():
            if k in comps:
                s = comps[k] + v
                if s.is_zero():
                    del comps[k]
                else:
                    comps[k] = s
            else:
                comps[k] = v
        return self._make(self.chart, self.degree, comps)

    def __neg__(self):
        return self._make(self.chart, self.degree, {k: -v for k, v in self.comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f):
        if isinstance(f, int):
            f = self.chart.const(f)
        if f.is_zero():
            return self.zero(self.chart, self.degree)
        return self._make(self.chart, self.degree, {k: f * v for k, v in self.comps.items()})

    def __mul__(self, f):
        if isinstance(f, (RationalExpr, int)):
            return self.scale(f)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        return (type(other) is type(self) and other.chart == self.chart
                and other.degree == self.degree and other.comps == self.comps)

    def __hash__(self):
        return hash((type(self).__name__, self.degree, frozenset(self.comps.items())))

    def wedge(self, other):
        if type(other) is not type(self):
            raise TypeError("wedge needs operands of the same kind")
        comps: dict[tuple, RationalExpr] = {}
        for k1, v1 in self.comps.items():
            for k2, v2 in other.comps.items():
                key, sign = _sort_sign(k1 + k2)
                if key is None:
                    continue
                term = v1 * v2
                if sign < 0:
                    term = -term
                comps[key] = comps[key] + term if key in comps else term
        return type(self)(self.chart, self.degree + other.degree, comps)

    def __xor__(self, other):
        return self.wedge(other)

    def map_coeffs(self, fn, chart: Chart | None = None):
        chart = chart or self.chart
        return type(self)(chart, self.degree, {k: fn(v) for k, v in self.comps.items()})

    def basis_label(self, key) -> str:
        if not key:
            return "1"
        return "^".join(self._prefix + self.chart.coords[i] for i in key)

    def items(self):
        """(label, coefficient) pairs in canonical order."""
        return [(self.basis_label(k), self.comps[k]) for k in sorted(self.comps)]

    def __str__(self):
        if not self.comps:
            return "0"
        parts = []
        for label, val in self.items():
            parts.append(f"({val})" if label == "1" else f"({val})*{label}")
        return " + ".join(parts)

    def __repr__(self):
        return f"{type(self).__name__}[{self.degree}]({self})"


class Form(_Alternating):
    """A differential k-form; key (i, j) means dx_i ^ dx_j."""

    __slots__ = ()
    _prefix = "d"

    def evaluate(self, *vectors: "Multivector") -> RationalExpr:
        if len(vectors) != self.degree:
            raise ValueError("wrong number of arguments")
        result = self
        for v in vectors:
            result = contract(v, result)
        return result[()]

    @classmethod
    def function(cls, f: RationalExpr) -> "Form":
        return cls(f.chart, 0, {(): f})

    @classmethod
    def coord_differential(cls, chart: Chart, i: int) -> "Form":
        return cls(chart, 1, {(i,): chart.one})


class Multivector(_Alternating):
    """A multivector field; key (i, j) means d/dx_i ^ d/dx_j."""

    __slots__ = ()
    _prefix = "d/d"

    def apply(self, f: RationalExpr) -> RationalExpr:
        """Directional derivative, for vector fields."""
        if self.degree != 1:
            raise ValueError("only vector fields act on functions")
        total = self.chart.zero
        for (i,), v in self.comps.items():
            total = total + v * f.diff(i)
        return total

    def evaluate(self, *covectors: Form) -> RationalExpr:
        """P(a_1, ..., a_k) with P = X_1 ^ ... ^ X_k giving det(a_i(X_j))."""
        if len(covectors) != self.degree:
            raise ValueError("wrong number of arguments")
        result = self
        for a in covectors:
            result = _left_contract(a, result)
        return result[()]

    def vector(self) -> list[RationalExpr]:
        return [self[(i,)] for i in range(self.chart.dim)]


def vector_field(chart: Chart, comps: Sequence) -> Multivector:
    return Multivector(chart, 1, {(i,): (c if isinstance(c, RationalExpr) else chart.const(c))
                                  for i, c in enumerate(comps)})


def covector(chart: Chart, comps: Sequence) -> Form:
    return Form(chart, 1, {(i,): (c if isinstance(c, RationalExpr) else chart.const(c))
                           for i, c in enumerate(comps)})


def _left_contract(a: Form, P: Multivector) -> Multivector:
    """Contract a 1-form into the first slot of a multivector."""
    comps: dict[tuple, RationalExpr] = {}
    for key, val in P.comps.items():
        for m, i in enumerate(key):
            ai = a[(i,)]
            if ai.is_zero():
                continue
            rest = key[:m] + key[m + 1:]
            term = ai * val
            if m % 2:
                term = -term
            comps[rest] = comps[rest] + term if rest in comps else term
    return Multivector(P.chart, P.degree - 1, comps)


def wedge(a, b):
    return a.wedge(b)


def exterior_d(w: Form) -> Form:
    """Exterior derivative."""
    chart = w.chart
    comps: dict[tuple, RationalExpr] = {}
    for key, val in w.comps.items():
        for j in range(chart.dim):
            if j in key:
                continue
            dv = val.diff(j)
            if dv.is_zero():
                continue
            skey, sign = _sort_sign((j,) + key)
            term = dv if sign > 0 else -dv
            comps[skey] = comps[skey] + term if skey in comps else term
    return Form(chart, w.degree + 1, comps)


def contract(X: Multivector, w: Form) -> Form:
    """Interior product i_X w of a vector field into the first slot."""
    if X.degree != 1:
        raise ValueError("contract needs a vector field")
    if w.degree == 0:
        raise ValueError("cannot contract into a function")
    comps: dict[tuple, RationalExpr] = {}
    for key, val in w.comps.items():
        for m, i in enumerate(key):
            xi = X.comps.get((i,))
            if xi is None:
                continue
            rest = key[:m] + key[m + 1:]
            term = xi * val
            if m % 2:
                term = -term
            comps[rest] = comps[rest] + term if rest in comps else term
    return Form(w.chart, w.degree - 1, comps)


def _super_derivative(P: Multivector, i: int) -> Multivector:
    return _left_contract(Form.coord_differential(P.chart, i), P)


def _coord_derivative(P, i: int):
    return P.map_coeffs(lambda v: v.diff(i))


def schouten(P: Multivector, Q: Multivector) -> Multivector:
    """Schouten-Nijenhuis bracket."""
    p, q = P.degree, Q.degree
    result = Multivector.zero(P.chart, p + q - 1)
    # (-1)^((p-1)(q-1)) times the right-derivative formula, written with left
    # derivatives: graded antisymmetric, [X, Q] = L_X Q, [dx^dy + x dx^dz, same] = -2 dx^dy^dz
    s1 = -1 if ((p - 1) * q) % 2 else 1
    s2 = -1 if q % 2 else 1
    for i in range(P.chart.dim):
        dQ = _coord_derivative(Q, i)
        if not dQ.is_zero() and p > 0:
            term = _super_derivative(P, i).wedge(dQ)
            result = result + term if s1 > 0 else result - term
        dP = _coord_derivative(P, i)
        if not dP.is_zero() and q > 0:
            term = _super_derivative(Q, i).wedge(dP)
            result = result + term if s2 > 0 else result - term
    return result


class Endomorphism:
    """A (1,1)-tensor field; ``m[i][j]`` is the d/dx_i component of a(d/dx_j)."""

    __slots__ = ("chart", "m")

    def __init__(self, chart: Chart, m: Sequence[Sequence]):
        n = chart.dim
        if len(m) != n or any(len(row) != n for row in m):
            raise ValueError("matrix shape does not match chart dimension")
        self.chart = chart
        self.m = tuple(tuple(v if isinstance(v, RationalExpr) else chart.const(v) for v in row) for row in m)

    @classmethod
    def identity(cls, chart: Chart):
        n = chart.dim
        return cls(chart, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, chart: Chart):
        n = chart.dim
        return cls(chart, [[0] * n for _ in range(n)])

    def apply(self, X: Multivector) -> Multivector:
        v = X.vector()
        n = self.chart.dim
        return vector_field(self.chart, [sum((self.m[i][j] * v[j] for j in range(n)), self.chart.zero)
                                         for i in range(n)])

    def transpose_apply(self, a: Form) -> Form:
        n = self.chart.dim
        return covector(self.chart, [sum((self.m[i][j] * a[(i,)] for i in range(n)), self.chart.zero)
                                     for j in range(n)])

    def __eq__(self, other):
        return isinstance(other, Endomorphism) and self.chart == other.chart and self.m == other.m

    def __hash__(self):
        return hash(self.m)

    def is_zero(self) -> bool:
        return all(v.is_zero() for row in self.m for v in row)

    def __sub__(self, other):
        return Endomorphism(self.chart, [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.m, other.m)])

    def __add__(self, other):
        return Endomorphism(self.chart, [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.m, other.m)])

    def __neg__(self):
        return Endomorphism(self.chart, [[-a for a in row] for row in self.m])

    def __matmul__(self, other):
        n = self.chart.dim
        return Endomorphism(self.chart, [[sum((self.m[i][k] * other.m[k][j] for k in range(n)), self.chart.zero)
                                          for j in range(n)] for i in range(n)])

    def __repr__(self):
        return f"Endomorphism({[[str(v) for v in row] for row in self.m]})"


def lie(X: Multivector, T):
    """Lie derivative of a function, form, multivector or (1,1)-tensor along X."""
    if isinstance(T, RationalExpr):
        return X.apply(T)
    if isinstance(T, Form):
        if T.degree == 0:
            return Form.function(X.apply(T[()]))
        return contract(X, exterior_d(T)) + exterior_d(contract(X, T))
    if isinstance(T, Multivector):
        return schouten(X, T)
    if isinstance(T, Endomorphism):
        chart, n = X.chart, X.chart.dim
        x = X.vector()
        m = T.m
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                v = X.apply(m[i][j])
                for k in range(n):
                    v = v - m[k][j] * x[i].diff(k) + m[i][k] * x[k].diff(j)
                row.append(v)
            out.append(row)
        return Endomorphism(chart, out)
    raise TypeError(f"cannot take Lie derivative of {type(T).__name__}")


class RationalMap:
    """A map between charts, given by target coordinates as functions on the source."""

    __slots__ = ("source", "target", "images")

    def __init__(self, source: Chart, target: Chart, images: Sequence):
        if len(images) != target.dim:
            raise ValueError("need one image per target coordinate")
        self.source = source
        self.target = target
        self.images = tuple(im if isinstance(im, RationalExpr) else source.const(im) for im in images)
        for im in self.images:
            if im.chart != source:
                raise ValueError("map components must live on the source chart")

    @classmethod
    def identity(cls, chart: Chart):
        return cls(chart, chart, chart.coord_funcs())

    @classmethod
    def by_names(cls, source: Chart, target: Chart, mapping: Mapping[str, str | RationalExpr]):
        from .grammar import parse_expr

        images = []
        for c in target.coords:
            v = mapping[c]
            images.append(parse_expr(v, source) if isinstance(v, str) else v)
        return cls(source, target, images)

    def __call__(self, f: RationalExpr) -> RationalExpr:
        """Compose a function on the target with this map."""
        return f.substitute(self.source, self.images)

    def compose(self, inner: "RationalMap") -> "RationalMap":
        """self o inner."""
        return RationalMap(inner.source, self.target, [inner(im) for im in self.images])

    def jacobian(self) -> list[list[RationalExpr]]:
        return [[im.diff(j) for j in range(self.source.dim)] for im in self.images]


def pullback(F: RationalMap, w):
    """Pull back a function or a form along F."""
    if isinstance(w, RationalExpr):
        return F(w)
    src = F.source
    if w.chart != F.target:
        raise ValueError("form does not live on the target of the map")
    dF = [covector(src, row) for row in F.jacobian()]
    result = Form.zero(src, w.degree)
    for key, val in w.comps.items():
        term = Form.function(F(val))
        for i in key:
            term = term.wedge(dF[i])
        result = result + term
    return result
