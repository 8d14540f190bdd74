"""Lie algebroids with a representation on L, IM Atiyah forms, chart-presented
Lie groupoids and multiplicative Atiyah forms.

A groupoid acts on L through a cocycle ``rep``: the arrow g maps the fibre over
s(g) to the fibre over t(g) by multiplication with rep(g).  Forms on the
groupoid take values in t*L.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .atiyah import (
    AtiyahForm,
    Derivation,
    DegreeZero,
    EndoDL,
    JacobiBivector,
    atiyah_contract,
    atiyah_d,
    atiyah_lie,
    atiyah_pullback,
    der_bracket,
    jet_frame,
    probes,
    sharp,
    sigma_star,
)
from .report import CheckResult
from .symkernel import Chart, Form, Multivector, RationalExpr, RationalMap, exterior_d, vector_field
from .symkernel import linalg

__all__ = [
    "InvalidAlgebroid",
    "NotMultiplicative",
    "UnsupportedGroupoid",
    "ASection",
    "LieAlgebroidPresentation",
    "check_lie_algebroid",
    "check_flat_connection",
    "jet_algebroid",
    "ImForm",
    "check_im_form",
    "atiyah_pullback",
    "GroupoidPresentation",
    "check_groupoid",
    "check_multiplicative",
    "lie_functor",
    "right_invariant_extension",
    "groupoid_connection",
    "induced_im_form",
    "decompose_atiyah",
    "recompose_atiyah",
    "coboundary_form",
    "check_chg_compatibility",
]


class InvalidAlgebroid(ValueError):
    pass


class NotMultiplicative(ValueError):
    pass


class UnsupportedGroupoid(ValueError):
    pass


def _const(chart: Chart, v) -> RationalExpr:
    return v if isinstance(v, RationalExpr) else chart.const(v)


# Lie algebroids -----------------------------------------------------------

class ASection:
    """A section sum_i f_i e_i of a presented Lie algebroid."""

    __slots__ = ("chart", "comps")

    def __init__(self, chart: Chart, comps: Sequence):
        self.chart = chart
        self.comps = tuple(_const(chart, c) for c in comps)

    @classmethod
    def basis(cls, chart: Chart, rank: int, i: int) -> "ASection":
        return cls(chart, [1 if j == i else 0 for j in range(rank)])

    def __add__(self, other):
        return ASection(self.chart, [a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other):
        return ASection(self.chart, [a - b for a, b in zip(self.comps, other.comps)])

    def __neg__(self):
        return ASection(self.chart, [-a for a in self.comps])

    def scale(self, f):
        return ASection(self.chart, [a * f for a in self.comps])

    def __eq__(self, other):
        return isinstance(other, ASection) and self.comps == other.comps

    def __hash__(self):
        return hash(self.comps)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def components(self):
        return [(f"e{i + 1}", c) for i, c in enumerate(self.comps)]

    def __repr__(self):
        return f"ASection({', '.join(str(c) for c in self.comps)})"


@dataclass(frozen=True)
class LieAlgebroidPresentation:
    """Frame e_1..e_m with anchor rows, structure functions and connection.

    ``anchor[i]`` lists the components of rho(e_i); ``brackets[i][j][k]`` is
    c^k_ij in [e_i, e_j] = sum_k c^k_ij e_k; ``gamma[i]`` is the weight of
    nabla_{e_i} = (rho(e_i), gamma_i).
    """

    chart: Chart
    anchor: tuple
    brackets: tuple
    gamma: tuple

    @classmethod
    def build(cls, chart: Chart, anchor, brackets=None, gamma=None) -> "LieAlgebroidPresentation":
        m = len(anchor)
        anchor = tuple(tuple(_const(chart, v) for v in row) for row in anchor)
        if any(len(row) != chart.dim for row in anchor):
            raise ValueError("anchor rows must have one entry per coordinate")
        if brackets is None:
            brackets = [[[0] * m for _ in range(m)] for _ in range(m)]
        c = tuple(tuple(tuple(_const(chart, v) for v in brackets[i][j]) for j in range(m)) for i in range(m))
        for i in range(m):
            for j in range(m):
                if len(c[i][j]) != m:
                    raise ValueError("structure functions must be m x m x m")
                if any(not (c[i][j][k] + c[j][i][k]).is_zero() for k in range(m)):
                    raise ValueError(f"structure functions not antisymmetric in ({i}, {j})")
        gamma = tuple(_const(chart, g) for g in (gamma if gamma is not None else [0] * m))
        if len(gamma) != m:
            raise ValueError("one connection coefficient per frame element")
        return cls(chart, anchor, c, gamma)

    @classmethod
    def tangent(cls, chart: Chart) -> "LieAlgebroidPresentation":
        n = chart.dim
        return cls.build(chart, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def rank(self) -> int:
        return len(self.anchor)

    def frame(self) -> list[tuple[str, ASection]]:
        return [(f"e{i + 1}", ASection.basis(self.chart, self.rank, i)) for i in range(self.rank)]

    def section(self, comps) -> ASection:
        return ASection(self.chart, comps)

    def rho(self, a: ASection) -> Multivector:
        n = self.chart.dim
        out = [self.chart.zero] * n
        for i, f in enumerate(a.comps):
            if f.is_zero():
                continue
            for k in range(n):
                out[k] = out[k] + f * self.anchor[i][k]
        return vector_field(self.chart, out)

    def nabla(self, a: ASection) -> Derivation:
        w = self.chart.zero
        for f, g in zip(a.comps, self.gamma):
            w = w + f * g
        return Derivation(self.rho(a), w)

    def bracket(self, a: ASection, b: ASection) -> ASection:
        m, ch = self.rank, self.chart
        out = [ch.zero] * m
        ra, rb = self.rho(a), self.rho(b)
        for i, f in enumerate(a.comps):
            for j, g in enumerate(b.comps):
                if f.is_zero() or g.is_zero():
                    continue
                fg = f * g
                for k in range(m):
                    out[k] = out[k] + fg * self.brackets[i][j][k]
        for j, g in enumerate(b.comps):
            out[j] = out[j] + ra.apply(g)
        for i, f in enumerate(a.comps):
            out[i] = out[i] - rb.apply(f)
        return ASection(ch, out)


def check_lie_algebroid(A: LieAlgebroidPresentation, multiples: bool = True) -> CheckResult:
    """Jacobi identity and anchor compatibility on frames and coordinate multiples."""
    res = CheckResult("lie_algebroid")
    res.declare("jacobiator")
    res.declare("anchor")
    frame = A.frame()
    if not frame:
        return res
    for label, (a, b, c) in probes(frame, 3, multiples):
        jac = (A.bracket(a, A.bracket(b, c)) + A.bracket(b, A.bracket(c, a)) + A.bracket(c, A.bracket(a, b)))
        res.add("jacobiator", jac, label)
    for label, (a, b) in probes(frame, 2, multiples):
        res.add("anchor", A.rho(A.bracket(a, b)) - der_bracket(Derivation(A.rho(a)), Derivation(A.rho(b))).symbol,
                label)
    return res


def check_flat_connection(A: LieAlgebroidPresentation, multiples: bool = True) -> CheckResult:
    """Curvature [nabla_a, nabla_b] - nabla_[a,b] as a derivation of L."""
    res = CheckResult("flat_connection")
    res.declare("curvature")
    frame = A.frame()
    if not frame:
        return res
    for label, (a, b) in probes(frame, 2, multiples):
        curv = der_bracket(A.nabla(a), A.nabla(b)) - A.nabla(A.bracket(a, b))
        res.add("curvature", curv, label)
    return res


def jet_algebroid(J: JacobiBivector) -> LieAlgebroidPresentation:
    """J^1 L with the bracket [-,-]_J, anchor sigma J# and nabla_psi = J# psi."""
    from .gcs import jet_bracket

    ch = J.chart
    Js = sharp(J)
    frame = [p for _, p in jet_frame(ch)]
    m = len(frame)
    ders = [Js(p) for p in frame]
    anchor = [d.symbol.vector() for d in ders]
    gamma = [d.weight for d in ders]
    c = [[[ch.zero] * m for _ in range(m)] for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            v = jet_bracket(J, frame[i], frame[j], Js).vector()
            c[i][j] = v
            c[j][i] = [-x for x in v]
    return LieAlgebroidPresentation.build(ch, anchor, c, gamma)


# IM forms -----------------------------------------------------------------

@dataclass(frozen=True)
class ImForm:
    """An IM Atiyah k-form stored by its values on the algebroid frame.

    ``D(sum f_i e_i) = sum f_i D(e_i) + sigma*(d f_i) ^ l(e_i)``.  When ``raw`` is
    given it is used as the operator D instead, and the Leibniz rule becomes a
    checked property.
    """

    chart: Chart
    degree: int
    l_frame: tuple
    D_frame: tuple
    raw: Callable | None = field(default=None, compare=False)

    @classmethod
    def build(cls, chart: Chart, degree: int, l_frame, D_frame, raw=None) -> "ImForm":
        if degree < 1:
            raise ValueError("IM forms have degree at least 1")
        if len(l_frame) != len(D_frame):
            raise ValueError("l and D need one value per frame element")
        for v in l_frame:
            if v.degree != degree - 1 or not v.l_valued:
                raise ValueError(f"l values must be L-valued of degree {degree - 1}")
        for v in D_frame:
            if v.degree != degree or not v.l_valued:
                raise ValueError(f"D values must be L-valued of degree {degree}")
        return cls(chart, degree, tuple(l_frame), tuple(D_frame), raw)

    @classmethod
    def zero(cls, chart: Chart, rank: int, degree: int) -> "ImForm":
        return cls.build(chart, degree, [AtiyahForm.zero(chart, degree - 1)] * rank,
                         [AtiyahForm.zero(chart, degree)] * rank)

    def l(self, a: ASection) -> AtiyahForm:
        out = AtiyahForm.zero(self.chart, self.degree - 1)
        for f, v in zip(a.comps, self.l_frame):
            if not f.is_zero():
                out = out + v.scale(f)
        return out

    def extended(self, a: ASection) -> AtiyahForm:
        out = AtiyahForm.zero(self.chart, self.degree)
        for f, D, l in zip(a.comps, self.D_frame, self.l_frame):
            if f.is_zero():
                continue
            out = out + D.scale(f)
            if not f.is_constant():
                out = out + sigma_star(exterior_d(Form.function(f)), l_valued=False).wedge(l)
        return out

    def D(self, a: ASection) -> AtiyahForm:
        return self.raw(a) if self.raw is not None else self.extended(a)


def _contract0(D: Derivation, w: AtiyahForm, degree: int) -> AtiyahForm:
    try:
        return atiyah_contract(D, w)
    except DegreeZero:
        return AtiyahForm.zero(D.symbol.chart, max(degree - 1, 0))


def check_im_form(A: LieAlgebroidPresentation, F: ImForm, multiples: bool = True) -> CheckResult:
    """Residuals R2-R4 of the IM equations (and R1 when D is given raw).

    R2: L_{nabla a} D(b) - L_{nabla b} D(a) - D([a, b])
    R3: L_{nabla a} l(b) - i_{nabla b} D(a) - l([a, b])
    R4: i_{nabla a} l(b) + i_{nabla b} l(a)
    Raises InvalidAlgebroid.
    """
    if F.chart != A.chart or len(F.l_frame) != A.rank:
        raise InvalidAlgebroid("IM form does not match the algebroid")
    bad = check_lie_algebroid(A, multiples)
    flat = check_flat_connection(A, multiples)
    if not (bad.passed and flat.passed):
        raise InvalidAlgebroid("not a Lie algebroid with flat connection: "
                               + ", ".join(bad.failing() + flat.failing()))
    res = CheckResult("im_form")
    for name in ("R1", "R2", "R3", "R4"):
        res.declare(name)
    frame = A.frame()
    if F.raw is not None:
        ch = A.chart
        for lab, a in frame:
            for fname, f in [("1", ch.one)] + list(zip(ch.coords, ch.coord_funcs())):
                lhs = F.raw(a.scale(f))
                rhs = F.raw(a).scale(f) + sigma_star(exterior_d(Form.function(f)), l_valued=False).wedge(F.l(a))
                res.add("R1", lhs - rhs, f"({fname}*{lab})")
    k = F.degree
    for label, (a, b) in probes(frame, 2, multiples):
        na, nb = A.nabla(a), A.nabla(b)
        Da, Db, lb = F.D(a), F.D(b), F.l(b)
        ab = A.bracket(a, b)
        res.add("R2", atiyah_lie(na, Db) - atiyah_lie(nb, Da) - F.D(ab), label)
        res.add("R3", atiyah_lie(na, lb) - atiyah_contract(nb, Da) - F.l(ab), label)
        if k >= 2:
            res.add("R4", atiyah_contract(na, lb) + atiyah_contract(nb, F.l(a)), label)
    return res


# groupoids ----------------------------------------------------------------

@dataclass(frozen=True)
class GroupoidPresentation:
    """A Lie groupoid on charts, with its action on L and right-invariant frame.

    ``G2`` is a chart of composable pairs with embeddings ``pr1``, ``pr2`` and
    multiplication ``m``.  ``ri_frame`` lists right-invariant s-vertical vector
    fields on G spanning ker ds; without it the Lie functor is unavailable.
    ``triples`` optionally presents composable triples as (G3, a12, a23) with
    a12(g1, g2, g3) = (g1 g2, g3) and a23 = (g1, g2 g3) in G2.
    """

    M: Chart
    G: Chart
    G2: Chart
    s: RationalMap
    t: RationalMap
    u: RationalMap
    inv: RationalMap
    m: RationalMap
    pr1: RationalMap
    pr2: RationalMap
    rep: RationalExpr
    kind: str = "custom"
    ri_frame: tuple | None = None
    triples: tuple | None = None

    def __post_init__(self):
        if self.rep.chart != self.G:
            raise ValueError("the representation cocycle lives on the arrow chart")
        if self.rep.is_zero():
            raise ValueError("the representation cocycle must not vanish")

    # built-in families

    @classmethod
    def pair(cls, M: Chart, rep: RationalExpr | str | None = None, names=None) -> "GroupoidPresentation":
        """M x M with t = first factor, s = second.  ``rep`` may be a cocycle on
        the arrow chart or an expression h on M, giving rep = h(t)/h(s)."""
        n = M.dim
        names = names or [[f"{c}{k}" for c in M.coords] for k in (1, 2, 3)]
        t_names, s_names, z_names = names
        G = Chart(list(t_names) + list(s_names))
        G2 = Chart(list(t_names) + list(s_names) + list(z_names))
        gx, g2x = G.coord_funcs(), G2.coord_funcs()
        X, Y, Z = g2x[:n], g2x[n:2 * n], g2x[2 * n:]
        mx = M.coord_funcs()
        s = RationalMap(G, M, gx[n:])
        t = RationalMap(G, M, gx[:n])
        u = RationalMap(M, G, mx + mx)
        inv = RationalMap(G, G, gx[n:] + gx[:n])
        pr1 = RationalMap(G2, G, X + Y)
        pr2 = RationalMap(G2, G, Y + Z)
        m = RationalMap(G2, G, X + Z)
        if rep is None:
            rep_g = G.one
        elif isinstance(rep, RationalExpr) and rep.chart == M:
            rep_g = t(rep) / s(rep)
        elif isinstance(rep, RationalExpr):
            rep_g = rep
        else:
            raise TypeError("rep must be a RationalExpr")
        ri = tuple(vector_field(G, [1 if j == i else 0 for j in range(2 * n)]) for i in range(n))
        G3 = Chart(list(t_names) + list(s_names) + list(z_names) + [f"{c}4" for c in M.coords])
        w = G3.coord_funcs()
        W1, W2, W3, W4 = w[:n], w[n:2 * n], w[2 * n:3 * n], w[3 * n:]
        a12 = RationalMap(G3, G2, W1 + W3 + W4)
        a23 = RationalMap(G3, G2, W1 + W2 + W4)
        return cls(M, G, G2, s, t, u, inv, m, pr1, pr2, rep_g, "pair", ri, (G3, a12, a23))

    @classmethod
    def bundle_of_groups(cls, M: Chart, fiber=("a",)) -> "GroupoidPresentation":
        """M x R^k with s = t = projection and fibrewise addition."""
        n, k = M.dim, len(fiber)
        G = Chart(list(M.coords) + list(fiber))
        G2 = Chart(list(M.coords) + [f"{a}1" for a in fiber] + [f"{a}2" for a in fiber])
        gx, g2x = G.coord_funcs(), G2.coord_funcs()
        X, A1, A2 = g2x[:n], g2x[n:n + k], g2x[n + k:]
        mx = M.coord_funcs()
        proj = RationalMap(G, M, gx[:n])
        u = RationalMap(M, G, mx + [M.zero] * k)
        inv = RationalMap(G, G, gx[:n] + [-a for a in gx[n:]])
        pr1 = RationalMap(G2, G, X + A1)
        pr2 = RationalMap(G2, G, X + A2)
        m = RationalMap(G2, G, X + [p + q for p, q in zip(A1, A2)])
        ri = tuple(vector_field(G, [1 if j == n + i else 0 for j in range(n + k)]) for i in range(k))
        G3 = Chart(list(M.coords) + [f"{a}{j}" for j in (1, 2, 3) for a in fiber])
        w = G3.coord_funcs()
        B1, B2, B3 = w[n:n + k], w[n + k:n + 2 * k], w[n + 2 * k:]
        Xw = w[:n]
        a12 = RationalMap(G3, G2, Xw + [p + q for p, q in zip(B1, B2)] + B3)
        a23 = RationalMap(G3, G2, Xw + B1 + [p + q for p, q in zip(B2, B3)])
        return cls(M, G, G2, proj, proj, u, inv, m, pr1, pr2, G.one, "bundle", ri, (G3, a12, a23))

    @classmethod
    def unit(cls, M: Chart) -> "GroupoidPresentation":
        ident = RationalMap.identity(M)
        return cls(M, M, M, ident, ident, ident, ident, ident, ident, ident, M.one, "unit", (), None)


def _map_residual(res: CheckResult, name: str, F: RationalMap, G: RationalMap) -> None:
    res.declare(name)
    for i, (a, b) in enumerate(zip(F.images, G.images)):
        d = a - b
        if not d.is_zero():
            res.residuals[name][F.target.coords[i]] = d


def check_groupoid(G: GroupoidPresentation) -> CheckResult:
    """Unit, source/target, composability, associativity and cocycle residuals."""
    res = CheckResult("groupoid")
    idM = RationalMap.identity(G.M)
    _map_residual(res, "s u = id", G.s.compose(G.u), idM)
    _map_residual(res, "t u = id", G.t.compose(G.u), idM)
    _map_residual(res, "s m = s pr2", G.s.compose(G.m), G.s.compose(G.pr2))
    _map_residual(res, "t m = t pr1", G.t.compose(G.m), G.t.compose(G.pr1))
    _map_residual(res, "s pr1 = t pr2", G.s.compose(G.pr1), G.t.compose(G.pr2))
    _map_residual(res, "s inv = t", G.s.compose(G.inv), G.t)
    if G.triples is not None:
        _, a12, a23 = G.triples
        _map_residual(res, "associativity", G.m.compose(a12), G.m.compose(a23))
    else:
        res.notes.append("no chart of triples supplied; associativity not checked")
    res.add("rep(m) - rep(pr1) rep(pr2)", G.m(G.rep) - G.pr1(G.rep) * G.pr2(G.rep))
    res.add("rep(u) - 1", G.u(G.rep) - G.M.one)
    return res


def _mult_pullbacks(G: GroupoidPresentation, w: AtiyahForm):
    kappa2 = G.pr1(G.rep).inverse()
    return (atiyah_pullback(G.m, 1, w), atiyah_pullback(G.pr1, 1, w), atiyah_pullback(G.pr2, kappa2, w))


def check_multiplicative(G: GroupoidPresentation, w: AtiyahForm) -> CheckResult:
    """m* w - pr1* w - pr2* w, the last one twisted by rep(g1)^-1."""
    if w.chart != G.G:
        raise ValueError("the form must live on the arrow chart")
    res = CheckResult("multiplicative")
    mw, p1, p2 = _mult_pullbacks(G, w)
    res.add("m*w - pr1*w - pr2*w", mw - p1 - p2)
    return res


def right_invariant_extension(G: GroupoidPresentation, a: ASection) -> Multivector:
    """The right-invariant s-vertical field a^r for a section of the Lie algebroid.
    Raises UnsupportedGroupoid."""
    if G.ri_frame is None:
        raise UnsupportedGroupoid("no right-translation data for this groupoid")
    out = Multivector.zero(G.G, 1)
    for f, X in zip(a.comps, G.ri_frame):
        if not f.is_zero():
            out = out + X.scale(G.t(f))
    return out


def _log_derivative(X: Multivector, f: RationalExpr) -> RationalExpr:
    return X.apply(f) / f


def groupoid_connection(G: GroupoidPresentation, V: Multivector) -> Derivation:
    """The canonical flat ker ds-connection on t*L along an s-vertical field V.

    Flat sections are g -> rep(g) c, so nabla_V = (V, -V(log rep))."""
    return Derivation(V, -_log_derivative(V, G.rep))


def _restrict(G: GroupoidPresentation, f: RationalExpr) -> RationalExpr:
    return G.u(f)


def lie_functor(G: GroupoidPresentation) -> LieAlgebroidPresentation:
    """ker ds along the units, with bracket from right-invariant fields and the
    induced representation on L.  Raises UnsupportedGroupoid."""
    if G.ri_frame is None:
        raise UnsupportedGroupoid("no right-translation data for this groupoid")
    M, frame = G.M, G.ri_frame
    m = len(frame)
    if m == 0:
        return LieAlgebroidPresentation.build(M, [])
    J = G.t.jacobian()
    anchor = []
    gamma = []
    for X in frame:
        v = X.vector()
        anchor.append([_restrict(G, sum((J[k][j] * v[j] for j in range(G.G.dim)), G.G.zero))
                       for k in range(M.dim)])
        gamma.append(_restrict(G, groupoid_connection(G, X).weight))
    # [X_i, X_j] = sum_k c^k_ij(t) X_k: solve along the units
    B = [[_restrict(G, X.vector()[r]) for X in frame] for r in range(G.G.dim)]
    rows = _independent_rows(B, m)
    Binv = linalg.inverse([B[r] for r in rows])
    c = [[[M.zero] * m for _ in range(m)] for _ in range(m)]
    for i in range(m):
        for j in range(m):
            br = der_bracket(Derivation(frame[i]), Derivation(frame[j])).symbol.vector()
            rhs = [_restrict(G, br[r]) for r in rows]
            c[i][j] = [sum((Binv[k][q] * rhs[q] for q in range(m)), M.zero) for k in range(m)]
    return LieAlgebroidPresentation.build(M, anchor, c, gamma)


def _independent_rows(B, m):
    rows = []
    for r in range(len(B)):
        trial = [B[q] for q in rows + [r]]
        if linalg.rank(trial) == len(trial):
            rows.append(r)
        if len(rows) == m:
            return rows
    raise UnsupportedGroupoid("right-invariant frame is degenerate along the units")


def induced_im_form(G: GroupoidPresentation, w: AtiyahForm, check: CheckResult | None = None) -> ImForm:
    """D(a) = u*(L_{nabla a^r} w) and l(a) = u*(i_{nabla a^r} w) on the algebroid frame.

    When ``check`` is given, the defining property nabla_a = t_*(nabla^G_{a^r})
    along the units is recorded there.  Raises NotMultiplicative.
    """
    mult = check_multiplicative(G, w)
    if not mult.passed:
        raise NotMultiplicative("the form is not multiplicative")
    A = lie_functor(G)
    k = w.degree
    if k < 1:
        raise ValueError("IM forms come from forms of degree at least 1")
    l_frame, D_frame = [], []
    Jt = G.t.jacobian()
    for i, (lab, a) in enumerate(A.frame()):
        V = right_invariant_extension(G, a)
        nab = groupoid_connection(G, V)
        D_frame.append(atiyah_pullback(G.u, 1, atiyah_lie(nab, w)))
        l_frame.append(atiyah_pullback(G.u, 1, atiyah_contract(nab, w)))
        if check is not None:
            v = V.vector()
            pushed = vector_field(G.M, [_restrict(G, sum((Jt[r][j] * v[j] for j in range(G.G.dim)), G.G.zero))
                                        for r in range(G.M.dim)])
            check.add("defining property", Derivation(pushed, _restrict(G, nab.weight)) - A.nabla(a), lab)
    return ImForm.build(G.M, k, l_frame, D_frame)


# decomposition and contact-Hitchin groupoids ------------------------------

def decompose_atiyah(w: AtiyahForm) -> tuple[Form, Form | None]:
    """w = sigma* mu0 + d_DL sigma* mu1 with mu1 = w1, mu0 = w0 - d w1."""
    if w.degree == 0:
        return w.comp0, None
    return w.comp0 - exterior_d(w.comp1), w.comp1


def recompose_atiyah(mu0: Form, mu1: Form | None, l_valued: bool = True) -> AtiyahForm:
    out = sigma_star(mu0, l_valued)
    if mu1 is not None:
        out = out + atiyah_d(sigma_star(mu1, l_valued))
    return out


def coboundary_form(G: GroupoidPresentation, mu: AtiyahForm) -> AtiyahForm:
    """t* mu - s* mu, with s* transported to t*L by the action; always multiplicative."""
    return atiyah_pullback(G.t, 1, mu) - atiyah_pullback(G.s, G.rep.inverse(), mu)


def check_chg_compatibility(G: GroupoidPresentation, Omega: AtiyahForm, Phi: EndoDL, omega_M: AtiyahForm) -> CheckResult:
    """Omega + Phi* Omega - s* omega_M + t* omega_M."""
    from .hitchin import endo_pullback

    res = CheckResult("chg_compatibility")
    lhs = Omega + endo_pullback(Phi, Omega)
    rhs = atiyah_pullback(G.s, G.rep.inverse(), omega_M) - atiyah_pullback(G.t, 1, omega_M)
    res.add("Omega + Phi*Omega - (s* w - t* w)", lhs - rhs)
    return res
