"""Atiyah algebroid DL, jet bundle J^1 L and the omni-Lie algebroid DL + J^1 L.

Everything is modelled on a single chart with L trivialized, so that

* a derivation is a pair ``(X, f)`` acting by ``lambda -> X(lambda) + f*lambda``;
  the identity derivation is ``(0, 1)``;
* an Atiyah k-form is ``w0 + e ^ w1`` where ``e`` is the dual of the identity
  derivation, i.e. ``e(X, f) = f``; ``comp0`` has degree k and ``comp1`` degree k-1;
* a jet section is an L-valued Atiyah 1-form ``(alpha, g)``, with
  ``j^1 lambda = (d lambda, lambda)``.

Frames are ordered ``(d/dx_1, ..., d/dx_n, 1)`` for DL and dually
``(dx_1, ..., dx_n, e)`` for J^1 L.  Non-trivial line bundles enter only
through :func:`atlas_compat`.
"""
from __future__ import annotations

from typing import Iterable, Iterator, Sequence

from .report import CheckResult
from .symkernel import (
    Chart,
    Form,
    Multivector,
    RationalExpr,
    RationalMap,
    contract,
    exterior_d,
    pullback,
    schouten,
    vector_field,
)
from .symkernel import linalg
from .symkernel.calculus import covector


class DegreeZero(ValueError):
    """Contraction into a degree-0 form."""


class NonInvertibleCocycle(ValueError):
    pass


class Derivation:
    """A section (X, f) of DL."""

    __slots__ = ("chart", "symbol", "weight")

    def __init__(self, symbol: Multivector, weight: RationalExpr | int = 0):
        if symbol.degree != 1:
            raise ValueError("the symbol of a derivation is a vector field")
        self.chart = symbol.chart
        self.symbol = symbol
        self.weight = weight if isinstance(weight, RationalExpr) else self.chart.const(weight)

    @classmethod
    def identity(cls, chart: Chart) -> "Derivation":
        return cls(Multivector.zero(chart, 1), chart.one)

    @classmethod
    def zero(cls, chart: Chart) -> "Derivation":
        return cls(Multivector.zero(chart, 1), chart.zero)

    @classmethod
    def from_vector(cls, chart: Chart, v: Sequence[RationalExpr]) -> "Derivation":
        return cls(vector_field(chart, v[:-1]), v[-1])

    def vector(self) -> list[RationalExpr]:
        return self.symbol.vector() + [self.weight]

    def __add__(self, other):
        return Derivation(self.symbol + other.symbol, self.weight + other.weight)

    def __neg__(self):
        return Derivation(-self.symbol, -self.weight)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f):
        return Derivation(self.symbol.scale(f), self.weight * f)

    def __eq__(self, other):
        return isinstance(other, Derivation) and self.symbol == other.symbol and self.weight == other.weight

    def __hash__(self):
        return hash((self.symbol, self.weight))

    def is_zero(self) -> bool:
        return self.symbol.is_zero() and self.weight.is_zero()

    def components(self):
        return self.symbol.items() + [("1", self.weight)]

    def __repr__(self):
        return f"Derivation({self.symbol}, {self.weight})"


def der_apply(D: Derivation, lam: RationalExpr) -> RationalExpr:
    """D(lambda) = X(lambda) + f*lambda."""
    return D.symbol.apply(lam) + D.weight * lam


def der_bracket(D: Derivation, E: Derivation) -> Derivation:
    """Commutator of derivations: ([X, Y], X(g) - Y(f))."""
    return Derivation(schouten(D.symbol, E.symbol), D.symbol.apply(E.weight) - E.symbol.apply(D.weight))


class AtiyahForm:
    """An Atiyah k-form ``comp0 + e ^ comp1``, L-valued unless ``l_valued`` is False."""

    __slots__ = ("chart", "degree", "comp0", "comp1", "l_valued")

    def __init__(self, comp0: Form, comp1: Form | None = None, l_valued: bool = True):
        self.chart = comp0.chart
        self.degree = comp0.degree
        self.l_valued = l_valued
        self.comp0 = comp0
        if self.degree == 0:
            if comp1 is not None and not comp1.is_zero():
                raise ValueError("a degree-0 Atiyah form has no e-component")
            self.comp1 = None
        else:
            if comp1 is None:
                comp1 = Form.zero(self.chart, self.degree - 1)
            if comp1.degree != self.degree - 1:
                raise ValueError("comp1 must have degree one less than comp0")
            self.comp1 = comp1

    # constructors

    @classmethod
    def section(cls, lam: RationalExpr) -> "AtiyahForm":
        return cls(Form.function(lam))

    @classmethod
    def zero(cls, chart: Chart, degree: int, l_valued: bool = True) -> "AtiyahForm":
        return cls(Form.zero(chart, degree), None if degree == 0 else Form.zero(chart, degree - 1), l_valued)

    @classmethod
    def jet(cls, alpha: Form, g: RationalExpr | int) -> "AtiyahForm":
        chart = alpha.chart
        g = g if isinstance(g, RationalExpr) else chart.const(g)
        return cls(alpha, Form.function(g))

    @classmethod
    def from_vector(cls, chart: Chart, v: Sequence[RationalExpr]) -> "AtiyahForm":
        return cls.jet(covector(chart, v[:-1]), v[-1])

    @classmethod
    def from_frame_matrix(cls, chart: Chart, W, l_valued: bool = True) -> "AtiyahForm":
        """The 2-form with ``w(e_a, e_b) = W[a][b]`` on the DL frame."""
        n = chart.dim
        comp0 = Form(chart, 2, {(i, j): W[i][j] for i in range(n) for j in range(i + 1, n)})
        comp1 = Form(chart, 1, {(i,): -W[i][n] for i in range(n)})
        return cls(comp0, comp1, l_valued)

    # access

    @property
    def value(self) -> RationalExpr:
        """The function underlying a degree-0 form."""
        if self.degree != 0:
            raise ValueError("only degree-0 forms have a value")
        return self.comp0[()]

    def vector(self) -> list[RationalExpr]:
        """Jet coordinates (alpha_1, ..., alpha_n, g) of a degree-1 form."""
        if self.degree != 1:
            raise ValueError("only degree-1 forms are jet sections")
        return [self.comp0[(i,)] for i in range(self.chart.dim)] + [self.comp1[()]]

    def evaluate(self, *ders: Derivation) -> RationalExpr:
        """w(D_1, ..., D_k) = w0(X_1..X_k) + sum_i (-1)^i f_i w1(X_1..^i..X_k)."""
        if len(ders) != self.degree:
            raise ValueError("wrong number of arguments")
        Xs = [d.symbol for d in ders]
        total = self.comp0.evaluate(*Xs)
        for i, d in enumerate(ders):
            if d.weight.is_zero():
                continue
            term = d.weight * self.comp1.evaluate(*(Xs[:i] + Xs[i + 1:]))
            total = total + term if i % 2 == 0 else total - term
        return total

    def frame_matrix(self):
        """W[a][b] = w(e_a, e_b) for a 2-form on the DL frame."""
        if self.degree != 2:
            raise ValueError("frame_matrix needs a 2-form")
        n = self.chart.dim
        W = linalg.zeros(self.chart, n + 1)
        for (i, j), v in self.comp0.comps.items():
            W[i][j] = v
            W[j][i] = -v
        for (i,), v in self.comp1.comps.items():
            W[i][n] = -v
            W[n][i] = v
        return W

    # algebra

    def _same(self, other):
        if not isinstance(other, AtiyahForm) or other.degree != self.degree or other.l_valued != self.l_valued:
            raise TypeError("incompatible Atiyah forms")

    def __add__(self, other):
        self._same(other)
        c1 = None if self.degree == 0 else self.comp1 + other.comp1
        return AtiyahForm(self.comp0 + other.comp0, c1, self.l_valued)

    def __neg__(self):
        return AtiyahForm(-self.comp0, None if self.degree == 0 else -self.comp1, self.l_valued)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f):
        return AtiyahForm(self.comp0.scale(f), None if self.degree == 0 else self.comp1.scale(f), self.l_valued)

    def wedge(self, other: "AtiyahForm") -> "AtiyahForm":
        """(a0 + e^a1) ^ (b0 + e^b1) = a0^b0 + e^(a1^b0 + (-1)^|a| a0^b1)."""
        if self.l_valued and other.l_valued:
            raise TypeError("cannot wedge two L-valued forms")
        c0 = self.comp0.wedge(other.comp0)
        c1 = Form.zero(self.chart, c0.degree - 1) if c0.degree > 0 else None
        if self.degree > 0:
            c1 = c1 + self.comp1.wedge(other.comp0)
        if other.degree > 0:
            t = self.comp0.wedge(other.comp1)
            c1 = c1 + t if self.degree % 2 == 0 else c1 - t
        return AtiyahForm(c0, c1, self.l_valued or other.l_valued)

    def __eq__(self, other):
        return (isinstance(other, AtiyahForm) and self.degree == other.degree and self.l_valued == other.l_valued
                and self.comp0 == other.comp0 and self.comp1 == other.comp1)

    def __hash__(self):
        return hash((self.comp0, self.comp1))

    def is_zero(self) -> bool:
        return self.comp0.is_zero() and (self.comp1 is None or self.comp1.is_zero())

    def components(self):
        items = list(self.comp0.items())
        if self.comp1 is not None:
            for label, v in self.comp1.items():
                items.append(("e" if label == "1" else "e^" + label, v))
        return items

    def __str__(self):
        items = self.components()
        if not items:
            return "0"
        return " + ".join(f"({v})" if lab == "1" else f"({v})*{lab}" for lab, v in items)

    def __repr__(self):
        return f"AtiyahForm[{self.degree}]({self})"


def sigma_star(eta: Form, l_valued: bool = True) -> AtiyahForm:
    """Pull back an ordinary form along the symbol map: (eta, 0)."""
    return AtiyahForm(eta, None, l_valued)


def jet_prolongation(lam: RationalExpr) -> AtiyahForm:
    """j^1 lambda = d_DL lambda = (d lambda, lambda)."""
    return atiyah_d(AtiyahForm.section(lam))


def atiyah_d(w: AtiyahForm) -> AtiyahForm:
    """d_DL: (w0, w1) -> (d w0, w0 - d w1) on L-valued forms, (d w0, -d w1) on real-valued ones."""
    d0 = exterior_d(w.comp0)
    if w.degree == 0:
        c1 = w.comp0 if w.l_valued else Form.zero(w.chart, 0)
        return AtiyahForm(d0, c1, w.l_valued)
    dw1 = exterior_d(w.comp1)
    c1 = w.comp0 - dw1 if w.l_valued else -dw1
    return AtiyahForm(d0, c1, w.l_valued)


def atiyah_contract(D: Derivation, w: AtiyahForm) -> AtiyahForm:
    """i_D (w0, w1) = (i_X w0 + f w1, -i_X w1)."""
    if w.degree == 0:
        raise DegreeZero("cannot contract into a degree-0 Atiyah form")
    c0 = contract(D.symbol, w.comp0) + w.comp1.scale(D.weight)
    if w.degree == 1:
        return AtiyahForm(c0, None, w.l_valued)
    return AtiyahForm(c0, -contract(D.symbol, w.comp1), w.l_valued)


def atiyah_lie(D: Derivation, w: AtiyahForm) -> AtiyahForm:
    """Cartan formula L_D = i_D d_DL + d_DL i_D."""
    out = atiyah_contract(D, atiyah_d(w))
    if w.degree > 0:
        out = out + atiyah_d(atiyah_contract(D, w))
    return out


def pairing(D: Derivation, psi: AtiyahForm) -> RationalExpr:
    """<D, psi>_L for a jet psi."""
    return atiyah_contract(D, psi).value


class OmniSection:
    """A section (D, psi) of DL + J^1 L."""

    __slots__ = ("der", "jet")

    def __init__(self, der: Derivation, jet: AtiyahForm):
        if jet.degree != 1 or not jet.l_valued:
            raise ValueError("the jet part must be an L-valued Atiyah 1-form")
        self.der = der
        self.jet = jet

    @property
    def chart(self):
        return self.der.chart

    @classmethod
    def zero(cls, chart: Chart) -> "OmniSection":
        return cls(Derivation.zero(chart), AtiyahForm.zero(chart, 1))

    @classmethod
    def of_der(cls, D: Derivation) -> "OmniSection":
        return cls(D, AtiyahForm.zero(D.chart, 1))

    @classmethod
    def of_jet(cls, psi: AtiyahForm) -> "OmniSection":
        return cls(Derivation.zero(psi.chart), psi)

    def __add__(self, other):
        return OmniSection(self.der + other.der, self.jet + other.jet)

    def __neg__(self):
        return OmniSection(-self.der, -self.jet)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f):
        return OmniSection(self.der.scale(f), self.jet.scale(f))

    def __eq__(self, other):
        return isinstance(other, OmniSection) and self.der == other.der and self.jet == other.jet

    def __hash__(self):
        return hash((self.der, self.jet))

    def is_zero(self) -> bool:
        return self.der.is_zero() and self.jet.is_zero()

    def components(self):
        return ([(f"D.{lab}", v) for lab, v in self.der.components()]
                + [(f"J.{lab}", v) for lab, v in self.jet.components()])

    def __repr__(self):
        return f"OmniSection({self.der!r}, {self.jet!r})"


def omni_pairing(a: OmniSection, b: OmniSection) -> RationalExpr:
    """<<(D, phi), (E, psi)>> = <D, psi> + <E, phi>."""
    return pairing(a.der, b.jet) + pairing(b.der, a.jet)


def dorfman(a: OmniSection, b: OmniSection) -> OmniSection:
    """Dorfman-Jacobi bracket ([D, E], L_D psi - i_E d_DL phi)."""
    jet = atiyah_lie(a.der, b.jet) - atiyah_contract(b.der, atiyah_d(a.jet))
    return OmniSection(der_bracket(a.der, b.der), jet)


# bundle maps ---------------------------------------------------------------

_KINDS = ("DL", "J1L")


class BundleMap:
    """A vector bundle map between DL and J^1 L, as a matrix in the standard frames.

    ``m[a][b]`` is the a-th frame coordinate of the image of the b-th frame element.
    """

    __slots__ = ("chart", "source", "target", "m")

    def __init__(self, chart: Chart, m, source: str = "DL", target: str = "DL"):
        if source not in _KINDS or target not in _KINDS:
            raise ValueError("bundle kinds are 'DL' or 'J1L'")
        n = chart.dim + 1
        if len(m) != n or any(len(r) != n for r in m):
            raise ValueError("matrix shape does not match rank n+1")
        self.chart = chart
        self.source = source
        self.target = target
        self.m = [[v if isinstance(v, RationalExpr) else chart.const(v) for v in row] for row in m]

    @classmethod
    def identity(cls, chart: Chart, kind: str = "DL"):
        return _wrap(chart, linalg.identity(chart, chart.dim + 1), kind, kind)

    @classmethod
    def zero(cls, chart: Chart, source: str = "DL", target: str = "DL"):
        return _wrap(chart, linalg.zeros(chart, chart.dim + 1), source, target)

    def __call__(self, section):
        v = section.vector()
        n = len(v)
        out = [sum((self.m[a][b] * v[b] for b in range(n) if not v[b].is_zero()), self.chart.zero)
               for a in range(n)]
        if self.target == "DL":
            return Derivation.from_vector(self.chart, out)
        return AtiyahForm.from_vector(self.chart, out)

    def __matmul__(self, other: "BundleMap") -> "BundleMap":
        if other.target != self.source:
            raise TypeError(f"cannot compose {self.source}<-{self.target} with {other.source}->{other.target}")
        return _wrap(self.chart, linalg.matmul(self.m, other.m), other.source, self.target)

    def _check(self, other):
        if (other.source, other.target) != (self.source, self.target):
            raise TypeError("bundle maps of different kinds")

    def __add__(self, other):
        self._check(other)
        return _wrap(self.chart, linalg.add(self.m, other.m), self.source, self.target)

    def __sub__(self, other):
        self._check(other)
        return _wrap(self.chart, linalg.sub(self.m, other.m), self.source, self.target)

    def __neg__(self):
        return _wrap(self.chart, linalg.neg(self.m), self.source, self.target)

    def scale(self, f):
        return _wrap(self.chart, linalg.scale(self.m, f), self.source, self.target)

    def __eq__(self, other):
        return (isinstance(other, BundleMap) and (self.source, self.target) == (other.source, other.target)
                and self.m == other.m)

    def __hash__(self):
        return hash(tuple(map(tuple, self.m)))

    def is_zero(self) -> bool:
        return linalg.is_zero(self.m)

    def _labels(self, kind):
        if kind == "DL":
            return [f"d/d{c}" for c in self.chart.coords] + ["1"]
        return [f"d{c}" for c in self.chart.coords] + ["e"]

    def components(self):
        src, dst = self._labels(self.source), self._labels(self.target)
        return [(f"{src[b]}->{dst[a]}", self.m[a][b])
                for b in range(len(src)) for a in range(len(dst))]

    def __repr__(self):
        return f"{type(self).__name__}({self.source}->{self.target}, {[[str(v) for v in r] for r in self.m]})"


class EndoDL(BundleMap):
    """An endomorphism of DL: (X, f) -> (A X + f b, xi(X) + c f)."""

    __slots__ = ()

    def __init__(self, chart: Chart, m):
        super().__init__(chart, m, "DL", "DL")

    @classmethod
    def from_blocks(cls, chart: Chart, A=None, b=None, xi=None, c=0) -> "EndoDL":
        n = chart.dim
        m = linalg.zeros(chart, n + 1)
        for i in range(n):
            for j in range(n):
                m[i][j] = chart.zero if A is None else _e(chart, A[i][j])
            m[i][n] = chart.zero if b is None else _e(chart, b[i])
            m[n][i] = chart.zero if xi is None else _e(chart, xi[i])
        m[n][n] = _e(chart, c)
        return cls(chart, m)

    @property
    def blocks(self):
        n = self.chart.dim
        A = [row[:n] for row in self.m[:n]]
        b = [row[n] for row in self.m[:n]]
        xi = self.m[n][:n]
        return A, b, xi, self.m[n][n]


def _e(chart, v):
    return v if isinstance(v, RationalExpr) else chart.const(v)


def _wrap(chart, m, source, target) -> BundleMap:
    if source == "DL" and target == "DL":
        return EndoDL(chart, m)
    return BundleMap(chart, m, source, target)


def adjoint(F: BundleMap) -> BundleMap:
    """F^dagger with <F^dagger(psi), v>_L = <psi, F(v)>_L."""
    dual = {"DL": "J1L", "J1L": "DL"}
    return _wrap(F.chart, linalg.transpose(F.m), dual[F.target], dual[F.source])


def flat(w: AtiyahForm) -> BundleMap:
    """w^flat: D -> i_D w."""
    return BundleMap(w.chart, linalg.transpose(w.frame_matrix()), "DL", "J1L")


class JacobiBivector:
    """J((alpha, f), (beta, g)) = Lambda(alpha, beta) + f i_E beta - g i_E alpha."""

    __slots__ = ("chart", "Lambda", "E")

    def __init__(self, Lambda: Multivector, E: Multivector | None = None):
        if Lambda.degree != 2:
            raise ValueError("Lambda must be a bivector")
        self.chart = Lambda.chart
        self.Lambda = Lambda
        self.E = E if E is not None else Multivector.zero(self.chart, 1)

    @classmethod
    def zero(cls, chart: Chart) -> "JacobiBivector":
        return cls(Multivector.zero(chart, 2))

    @classmethod
    def from_matrix(cls, chart: Chart, Jm) -> "JacobiBivector":
        n = chart.dim
        Lam = Multivector(chart, 2, {(i, j): Jm[i][j] for i in range(n) for j in range(i + 1, n)})
        E = vector_field(chart, [Jm[n][j] for j in range(n)])
        return cls(Lam, E)

    def matrix(self):
        """Jm[a][b] = J(eps_a, eps_b) on the jet frame."""
        n = self.chart.dim
        Jm = linalg.zeros(self.chart, n + 1)
        for (i, j), v in self.Lambda.comps.items():
            Jm[i][j] = v
            Jm[j][i] = -v
        for (j,), v in self.E.comps.items():
            Jm[n][j] = v
            Jm[j][n] = -v
        return Jm

    def __call__(self, psi: AtiyahForm, chi: AtiyahForm) -> RationalExpr:
        a, b = psi.vector(), chi.vector()
        Jm = self.matrix()
        total = self.chart.zero
        for i, ai in enumerate(a):
            if ai.is_zero():
                continue
            for j, bj in enumerate(b):
                if not Jm[i][j].is_zero() and not bj.is_zero():
                    total = total + ai * Jm[i][j] * bj
        return total

    def is_zero(self) -> bool:
        return self.Lambda.is_zero() and self.E.is_zero()

    def __eq__(self, other):
        return isinstance(other, JacobiBivector) and self.Lambda == other.Lambda and self.E == other.E

    def __hash__(self):
        return hash((self.Lambda, self.E))

    def components(self):
        return self.Lambda.items() + [("1^" + lab, v) for lab, v in self.E.items()]

    def __repr__(self):
        return f"JacobiBivector(Lambda={self.Lambda}, E={self.E})"


def sharp(J: JacobiBivector) -> BundleMap:
    """J^sharp with <J^sharp(psi), chi> = J(psi, chi)."""
    return BundleMap(J.chart, linalg.transpose(J.matrix()), "J1L", "DL")


# frames and probing --------------------------------------------------------

def der_frame(chart: Chart) -> list[tuple[str, Derivation]]:
    n = chart.dim
    out = []
    for i, c in enumerate(chart.coords):
        out.append((f"d/d{c}", Derivation(vector_field(chart, [1 if j == i else 0 for j in range(n)]))))
    out.append(("1", Derivation.identity(chart)))
    return out


def jet_frame(chart: Chart) -> list[tuple[str, AtiyahForm]]:
    out = [(f"d{c}", AtiyahForm.jet(Form.coord_differential(chart, i), 0)) for i, c in enumerate(chart.coords)]
    out.append(("e", AtiyahForm.jet(Form.zero(chart, 1), 1)))
    return out


def omni_frame(chart: Chart) -> list[tuple[str, OmniSection]]:
    return ([(lab, OmniSection.of_der(D)) for lab, D in der_frame(chart)]
            + [(lab, OmniSection.of_jet(p)) for lab, p in jet_frame(chart)])


def probes(frame: Sequence[tuple[str, object]], arity: int, multiples: bool = True) -> Iterator[tuple[str, tuple]]:
    """Argument tuples for deciding a residual operator.

    Every frame tuple, plus (when ``multiples``) every tuple in which exactly one
    argument is multiplied by a coordinate function.  A residual built from
    first-order brackets and tensorial maps vanishes identically iff it vanishes
    on all of these.
    """
    from itertools import product

    chart = frame[0][1].chart
    xs = list(zip(chart.coords, chart.coord_funcs()))
    for combo in product(frame, repeat=arity):
        labels = [lab for lab, _ in combo]
        items = [obj for _, obj in combo]
        yield f"({', '.join(labels)})", tuple(items)
        if not multiples:
            continue
        for pos in range(arity):
            for name, x in xs:
                labs = list(labels)
                labs[pos] = f"{name}*{labels[pos]}"
                its = list(items)
                its[pos] = items[pos].scale(x)
                yield f"({', '.join(labs)})", tuple(its)


# pullbacks and atlases ----------------------------------------------------

def atiyah_pullback(F: RationalMap, kappa: RationalExpr | int, w: AtiyahForm) -> AtiyahForm:
    """Pull back along a line-bundle map covering F that multiplies fibres by ``kappa``.

    Components: (kappa^-1 (F*w0 - dlog(kappa) ^ F*w1), kappa^-1 F*w1) for
    L-valued forms; real-valued forms skip the kappa^-1 factor.
    """
    src = F.source
    kappa = kappa if isinstance(kappa, RationalExpr) else src.const(kappa)
    if kappa.chart != src:
        raise ValueError("the cocycle must live on the source chart")
    if kappa.is_zero():
        raise NonInvertibleCocycle("cocycle is identically zero")
    inv = kappa.inverse()
    p0 = pullback(F, w.comp0)
    if w.degree == 0:
        return AtiyahForm(p0.scale(inv) if w.l_valued else p0, None, w.l_valued)
    p1 = pullback(F, w.comp1)
    if not kappa.is_constant():
        dlog = exterior_d(Form.function(kappa)).scale(inv)
        p0 = p0 - dlog.wedge(p1)
    if w.l_valued:
        return AtiyahForm(p0.scale(inv), p1.scale(inv), True)
    return AtiyahForm(p0, p1, False)


class TransitionData:
    """Overlap of two charts: ``F`` maps source coordinates to target coordinates,
    and ``cocycle`` (a function on the source) relates the trivializations of L."""

    __slots__ = ("F", "cocycle")

    def __init__(self, F: RationalMap, cocycle: RationalExpr | int):
        cocycle = cocycle if isinstance(cocycle, RationalExpr) else F.source.const(cocycle)
        if cocycle.is_zero():
            raise NonInvertibleCocycle("cocycle is identically zero")
        self.F = F
        self.cocycle = cocycle

    @property
    def source(self) -> Chart:
        return self.F.source

    @property
    def target(self) -> Chart:
        return self.F.target


def atlas_compat(source_data, target_data, tr: TransitionData, name: str = "atlas") -> CheckResult:
    """Residual of ``source_data - twisted pullback of target_data``.

    Data may be Atiyah forms or ordinary forms (read as structure forms sigma* theta).
    """
    def lift(d):
        return sigma_star(d) if isinstance(d, Form) else d

    src, tgt = lift(source_data), lift(target_data)
    result = CheckResult(name)
    result.add("transition", src - atiyah_pullback(tr.F, tr.cocycle, tgt))
    return result
