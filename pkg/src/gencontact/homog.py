"""Homogenization: generalized contact data on L <-> homogeneous generalized
complex data on M~ = M x R^x (fibre coordinate r, Euler field r d/dr).

Identifications used: a derivation (X, f) is the degree-0 vector field
X + f r d/dr; an L-valued Atiyah form (w0, w1) is the degree-1 form
r w0 + dr ^ w1; a jet (alpha, g) is r alpha + g dr.  Hence

    a(X) = A X + xi(X) r d/dr,  a(r d/dr) = b + c r d/dr,
    pi = Lambda / r + d/dr ^ E,  sigma = r w0 + dr ^ w1.
"""
from __future__ import annotations

from dataclasses import dataclass

from .atiyah import AtiyahForm, EndoDL, JacobiBivector
from .gcs import GacsTriple
from .report import CheckResult
from .symkernel import (
    Chart,
    Endomorphism,
    Form,
    Multivector,
    RationalExpr,
    contract,
    exterior_d,
    lie,
    vector_field,
)
from .symkernel import linalg
from .symkernel.calculus import covector


class NotHomogeneous(ValueError):
    pass


@dataclass(frozen=True)
class GcTriple:
    """Blocks (a, pi, sigma) of a generalized almost complex structure on a chart of M~."""

    a: Endomorphism
    pi: Multivector
    sigma: Form
    fiber: str = "r"

    def __post_init__(self):
        if self.pi.degree != 2 or self.sigma.degree != 2:
            raise ValueError("pi must be a bivector and sigma a 2-form")
        if not (self.a.chart == self.pi.chart == self.sigma.chart):
            raise ValueError("blocks live on different charts")
        if self.fiber not in self.chart.coords:
            raise ValueError(f"fibre coordinate {self.fiber!r} missing from chart")

    @property
    def chart(self) -> Chart:
        return self.a.chart

    @property
    def euler(self) -> Multivector:
        ch = self.chart
        k = ch.index(self.fiber)
        return vector_field(ch, [ch.coord(k) if i == k else 0 for i in range(ch.dim)])


def fiber_name(chart: Chart, preferred: str = "r") -> str:
    name = preferred
    while name in chart.coords:
        name += "_"
    return name


def homogenize(t: GacsTriple, fiber: str | None = None) -> GcTriple:
    chart = t.chart
    fiber = fiber or fiber_name(chart)
    tc = chart.extend(fiber)
    n = chart.dim
    r = tc.coord(n)
    lift = lambda f: f.to_chart(tc)  # noqa: E731

    A, b, xi, c = t.phi.blocks
    a = [[tc.zero] * (n + 1) for _ in range(n + 1)]
    for i in range(n):
        for j in range(n):
            a[i][j] = lift(A[i][j])
        a[i][n] = lift(b[i]) / r
        a[n][i] = lift(xi[i]) * r
    a[n][n] = lift(c)

    pi = {}
    for (i, j), v in t.J.Lambda.comps.items():
        pi[(i, j)] = lift(v) / r
    for (j,), v in t.J.E.comps.items():
        pi[(n, j)] = lift(v)

    sigma = {}
    for (i, j), v in t.omega.comp0.comps.items():
        sigma[(i, j)] = lift(v) * r
    for (j,), v in t.omega.comp1.comps.items():
        sigma[(n, j)] = lift(v)

    return GcTriple(Endomorphism(tc, a), Multivector(tc, 2, pi), Form(tc, 2, sigma), fiber)


def check_homogeneity(g: GcTriple) -> CheckResult:
    """L_E a = 0, L_E pi = -pi, L_E sigma = sigma."""
    E = g.euler
    res = CheckResult("homogeneity")
    la = lie(E, g.a)
    res.declare("L_E a")
    for i, row in enumerate(la.m):
        for j, v in enumerate(row):
            if not v.is_zero():
                res.residuals["L_E a"][f"[{i},{j}]"] = v
    res.add("L_E pi + pi", lie(E, g.pi) + g.pi)
    res.add("L_E sigma - sigma", lie(E, g.sigma) - g.sigma)
    return res


def dehomogenize(g: GcTriple) -> GacsTriple:
    """Read the blocks at r = 1.  Raises NotHomogeneous."""
    if not check_homogeneity(g).passed:
        raise NotHomogeneous("the generalized complex data is not homogeneous")
    tc = g.chart
    k = tc.index(g.fiber)
    base = Chart([c for c in tc.coords if c != g.fiber])
    rest = [i for i in range(tc.dim) if i != k]
    it = iter(base.coord_funcs())
    images = [base.one if i == k else next(it) for i in range(tc.dim)]
    at_one = lambda f: f.substitute(base, images)  # noqa: E731

    n = base.dim
    m = [[base.zero] * (n + 1) for _ in range(n + 1)]
    for bi, i in enumerate(rest):
        for bj, j in enumerate(rest):
            m[bi][bj] = at_one(g.a.m[i][j])
        m[bi][n] = at_one(g.a.m[i][k])
        m[n][bi] = at_one(g.a.m[k][i])
    m[n][n] = at_one(g.a.m[k][k])

    Lam = Multivector(base, 2, {(bi, bj): at_one(g.pi[(rest[bi], rest[bj])])
                                for bi in range(n) for bj in range(bi + 1, n)})
    E = vector_field(base, [at_one(g.pi[(k, i)]) for i in rest])
    w0 = Form(base, 2, {(bi, bj): at_one(g.sigma[(rest[bi], rest[bj])])
                        for bi in range(n) for bj in range(bi + 1, n)})
    w1 = covector(base, [at_one(g.sigma[(k, i)]) for i in rest])
    return GacsTriple(EndoDL(base, m), JacobiBivector(Lam, E), AtiyahForm(w0, w1))


# classical generalized complex geometry on M~ ------------------------------

class GenSection:
    """A section X + xi of TM + T*M."""

    __slots__ = ("vec", "form")

    def __init__(self, vec: Multivector, form: Form):
        self.vec = vec
        self.form = form

    @property
    def chart(self):
        return self.vec.chart

    def vector(self):
        return self.vec.vector() + [self.form[(i,)] for i in range(self.chart.dim)]

    @classmethod
    def from_vector(cls, chart: Chart, v):
        n = chart.dim
        return cls(vector_field(chart, v[:n]), covector(chart, v[n:]))

    def __add__(self, other):
        return GenSection(self.vec + other.vec, self.form + other.form)

    def __sub__(self, other):
        return GenSection(self.vec - other.vec, self.form - other.form)

    def scale(self, f):
        return GenSection(self.vec.scale(f), self.form.scale(f))

    def is_zero(self):
        return self.vec.is_zero() and self.form.is_zero()

    def __eq__(self, other):
        return isinstance(other, GenSection) and self.vec == other.vec and self.form == other.form

    def components(self):
        return self.vec.items() + self.form.items()


def classical_dorfman(a: GenSection, b: GenSection) -> GenSection:
    """[X + xi, Y + eta] = [X, Y] + L_X eta - i_Y d xi."""
    return GenSection(lie(a.vec, b.vec), lie(a.vec, b.form) - contract(b.vec, exterior_d(a.form)))


def gen_frame(chart: Chart):
    n = chart.dim
    out = []
    for i, c in enumerate(chart.coords):
        out.append((f"d/d{c}", GenSection(vector_field(chart, [1 if j == i else 0 for j in range(n)]),
                                          Form.zero(chart, 1))))
    for i, c in enumerate(chart.coords):
        out.append((f"d{c}", GenSection(Multivector.zero(chart, 1), Form.coord_differential(chart, i))))
    return out


class GcEndo:
    """The endomorphism with blocks (a, pi#; sigma_flat, -a*)."""

    def __init__(self, g: GcTriple):
        ch = g.chart
        n = ch.dim
        a = [list(r) for r in g.a.m]
        pim = [[g.pi[(i, j)] for j in range(n)] for i in range(n)]
        sgm = [[g.sigma[(i, j)] for j in range(n)] for i in range(n)]
        top = [a[i] + linalg.transpose(pim)[i] for i in range(n)]
        bottom = [linalg.transpose(sgm)[i] + [-v for v in linalg.transpose(a)[i]] for i in range(n)]
        self.chart = ch
        self.m = top + bottom

    def __call__(self, s: GenSection) -> GenSection:
        v = s.vector()
        N = len(v)
        out = [sum((self.m[i][j] * v[j] for j in range(N) if not v[j].is_zero()), self.chart.zero)
               for i in range(N)]
        return GenSection.from_vector(self.chart, out)


def check_gc(g: GcTriple, multiples: bool = True) -> CheckResult:
    """J^2 = -id, skew-symmetry for the tautological pairing, and vanishing
    Nijenhuis torsion for the classical Dorfman bracket."""
    from .atiyah import probes

    ch = g.chart
    Jm = GcEndo(g)
    M = Jm.m
    N = len(M)
    h = N // 2
    res = CheckResult("gc")
    sq = linalg.add(linalg.matmul(M, M), linalg.identity(ch, N))
    P = [[ch.one if (j == i + h or i == j + h) else ch.zero for j in range(N)] for i in range(N)]
    skew = linalg.add(linalg.matmul(linalg.matmul(P, linalg.transpose(M)), P), M)
    for name, mat in (("J^2 + id", sq), ("J^dagger + J", skew)):
        res.declare(name)
        for i, row in enumerate(mat):
            for j, v in enumerate(row):
                if not v.is_zero():
                    res.residuals[name][f"[{i},{j}]"] = v
    res.declare("N_J")
    if not res.passed:
        res.notes.append("not almost complex; torsion skipped")
        return res
    for label, (a, b) in probes(gen_frame(ch), 2, multiples):
        Ja, Jb = Jm(a), Jm(b)
        tor = (classical_dorfman(Ja, Jb) - classical_dorfman(a, b)
               - Jm(classical_dorfman(Ja, b)) - Jm(classical_dorfman(a, Jb)))
        res.add("N_J", tor, label)
    return res


def symplectization_identities(t: GacsTriple, theta: Form) -> CheckResult:
    """For phi = 0 triples built from a contact form theta: sigma = -d(r theta)
    and pi# inverts sigma_flat.

    With sigma_flat(X) = i_X sigma and <pi#(a), b> = pi(a, b), the condition
    J^2 = -id on the block operator reads pi# sigma_flat = -id; equivalently pi#
    is the inverse of X -> sigma(., X)."""
    g = homogenize(t)
    tc = g.chart
    r = tc.coord(g.fiber)
    res = CheckResult("symplectization")
    th = theta.map_coeffs(lambda f: f.to_chart(tc), tc)
    res.add("sigma + d(r theta)", g.sigma + exterior_d(th.scale(r)))
    n = tc.dim
    pis = linalg.transpose([[g.pi[(i, j)] for j in range(n)] for i in range(n)])
    sf = linalg.transpose([[g.sigma[(i, j)] for j in range(n)] for i in range(n)])
    prod = linalg.add(linalg.matmul(pis, sf), linalg.identity(tc, n))
    res.declare("pi# sigma_flat + id")
    for i, row in enumerate(prod):
        for j, v in enumerate(row):
            if not v.is_zero():
                res.residuals["pi# sigma_flat + id"][f"[{i},{j}]"] = v
    return res
