"""Generalized almost contact structures in block form and their integrability.

A structure is stored as a :class:`GacsTriple` ``(phi, J, omega)`` and acts on
``DL + J^1 L`` by

    I(D, psi) = (phi D + J#(psi), omega_flat(D) - phi^dagger(psi)).

With the engine's flat/sharp conventions the relation ``phi^2 = -id - J# omega_flat``
forces ``J# omega_flat = -id`` when ``phi = 0``, so the integrable contact triple
built from a contact form Omega is ``(0, Omega^-1, -Omega)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .atiyah import (
    AtiyahForm,
    BundleMap,
    Derivation,
    EndoDL,
    JacobiBivector,
    OmniSection,
    adjoint,
    atiyah_contract,
    atiyah_d,
    atiyah_lie,
    der_bracket,
    der_frame,
    dorfman,
    flat,
    jet_frame,
    jet_prolongation,
    omni_frame,
    probes,
    sharp,
)
from .report import CheckResult
from .symkernel import Chart, RationalExpr, schouten
from .symkernel import linalg

__all__ = [
    "GacsTriple", "JacobiBivector", "OmniEndo", "NotAlmost", "assemble_endo", "check_almost",
    "nijenhuis", "check_integrable", "jacobi_bracket", "jet_bracket", "check_jacobi",
    "check_equations", "check_prop_equivalence", "check_chg_subset", "omega_phi",
    "phi_nijenhuis",
]


class NotAlmost(ValueError):
    """The triple does not define a generalized almost contact structure."""


@dataclass(frozen=True)
class GacsTriple:
    phi: EndoDL
    J: JacobiBivector
    omega: AtiyahForm

    def __post_init__(self):
        if self.omega.degree != 2 or not self.omega.l_valued:
            raise ValueError("omega must be an L-valued Atiyah 2-form")
        if not (self.phi.chart == self.J.chart == self.omega.chart):
            raise ValueError("blocks live on different charts")

    @property
    def chart(self) -> Chart:
        return self.phi.chart

    @classmethod
    def build(cls, chart: Chart, phi: EndoDL | None = None, J: JacobiBivector | None = None,
              omega: AtiyahForm | None = None) -> "GacsTriple":
        return cls(phi if phi is not None else EndoDL.from_blocks(chart),
                   J if J is not None else JacobiBivector.zero(chart),
                   omega if omega is not None else AtiyahForm.zero(chart, 2))


class OmniEndo:
    """The endomorphism I of DL + J^1 L assembled from a triple."""

    def __init__(self, t: GacsTriple):
        self.triple = t
        self.phi = t.phi
        self.phi_dag = adjoint(t.phi)
        self.J_sharp = sharp(t.J)
        self.w_flat = flat(t.omega)

    def __call__(self, e: OmniSection) -> OmniSection:
        D, psi = e.der, e.jet
        return OmniSection(self.phi(D) + self.J_sharp(psi), self.w_flat(D) - self.phi_dag(psi))

    def matrix(self):
        """Block matrix in the frame (DL frame, jet frame)."""
        top = [a + b for a, b in zip(self.phi.m, self.J_sharp.m)]
        bottom = [a + b for a, b in zip(self.w_flat.m, linalg.neg(self.phi_dag.m))]
        return top + bottom


def assemble_endo(t: GacsTriple) -> OmniEndo:
    return OmniEndo(t)


def check_almost(t: GacsTriple) -> CheckResult:
    """Relations phi J# = J# phi^dag, phi^2 = -id - J# w_flat, w_flat phi = phi^dag w_flat,
    cross-checked against I^2 = -id and I^dagger = -I."""
    chart = t.chart
    I = OmniEndo(t)
    phi, phid, Js, wf = I.phi, I.phi_dag, I.J_sharp, I.w_flat
    ident = BundleMap.identity(chart)
    res = CheckResult("almost")
    res.add("phi J# - J# phi^dag", phi @ Js - Js @ phid)
    res.add("phi^2 + id + J# w_flat", phi @ phi + ident + Js @ wf)
    res.add("w_flat phi - phi^dag w_flat", wf @ phi - phid @ wf)
    relations_ok = res.passed

    M = I.matrix()
    N = len(M)
    sq = linalg.add(linalg.matmul(M, M), linalg.identity(chart, N))
    h = N // 2
    # pairing matrix swaps the DL and J^1 L halves
    P = [[chart.one if (j == i + h or i == j + h) else chart.zero for j in range(N)] for i in range(N)]
    dag = linalg.matmul(linalg.matmul(P, linalg.transpose(M)), P)
    skew = linalg.add(dag, M)
    _add_matrix(res, "I^2 + id", sq)
    _add_matrix(res, "I^dagger + I", skew)
    operator_ok = linalg.is_zero(sq) and linalg.is_zero(skew)
    if relations_ok != operator_ok:
        res.add("route mismatch", chart.one, "relations vs operator")
    return res


def _add_matrix(res: CheckResult, name: str, M):
    res.declare(name)
    for a, row in enumerate(M):
        for b, v in enumerate(row):
            if not v.is_zero():
                res.residuals[name][f"[{a},{b}]"] = v


def nijenhuis(I: OmniEndo, a: OmniSection, b: OmniSection) -> OmniSection:
    """N_I(a, b) = [[Ia, Ib]] - [[a, b]] - I[[Ia, b]] - I[[a, Ib]]."""
    Ia, Ib = I(a), I(b)
    return dorfman(Ia, Ib) - dorfman(a, b) - I(dorfman(Ia, b)) - I(dorfman(a, Ib))


def _require_almost(t: GacsTriple):
    almost = check_almost(t)
    if not almost.passed:
        raise NotAlmost("check_almost fails: " + ", ".join(almost.failing()))


def check_integrable(t: GacsTriple, multiples: bool = True) -> CheckResult:
    """Vanishing of the Nijenhuis torsion on frame pairs and coordinate multiples."""
    _require_almost(t)
    I = OmniEndo(t)
    res = CheckResult("integrable")
    res.declare("N_I")
    for label, (a, b) in probes(omni_frame(t.chart), 2, multiples):
        res.add("N_I", nijenhuis(I, a, b), label)
    return res


# Jacobi structures ---------------------------------------------------------

def jacobi_bracket(J: JacobiBivector, lam: RationalExpr, mu: RationalExpr) -> RationalExpr:
    """{lambda, mu}_J = J(j^1 lambda, j^1 mu)."""
    return J(jet_prolongation(lam), jet_prolongation(mu))


def jet_bracket(J: JacobiBivector, phi: AtiyahForm, psi: AtiyahForm, Js: BundleMap | None = None) -> AtiyahForm:
    """[phi, psi]_J = L_{J# phi} psi - L_{J# psi} phi - d_DL J(phi, psi)."""
    Js = Js or sharp(J)
    return (atiyah_lie(Js(phi), psi) - atiyah_lie(Js(psi), phi)
            - atiyah_d(AtiyahForm.section(J(phi, psi))))


def check_jacobi(J: JacobiBivector, multiples: bool = True) -> CheckResult:
    """Two independent routes: (a) the jet bracket is a Lie algebroid bracket with
    anchor sigma J#, (b) [Lambda, Lambda] = 2 E ^ Lambda and [E, Lambda] = 0."""
    Js = sharp(J)
    res = CheckResult("jacobi")
    res.declare("a: jacobiator")
    res.declare("a: anchor")
    frame = jet_frame(J.chart)
    for label, (p, q, r) in probes(frame, 3, multiples):
        jac = (jet_bracket(J, p, jet_bracket(J, q, r, Js), Js)
               - jet_bracket(J, jet_bracket(J, p, q, Js), r, Js)
               - jet_bracket(J, q, jet_bracket(J, p, r, Js), Js))
        res.add("a: jacobiator", jac, label)
    for label, (p, q) in probes(frame, 2, multiples):
        lhs = Js(jet_bracket(J, p, q, Js)).symbol
        rhs = schouten(Js(p).symbol, Js(q).symbol)
        res.add("a: anchor", lhs - rhs, label)
    L, E = J.Lambda, J.E
    res.add("b: [L,L] - 2 E^L", schouten(L, L) - E.wedge(L).scale(2))
    res.add("b: [E,L]", schouten(E, L))
    a_ok = res.residual_passed("a: jacobiator") and res.residual_passed("a: anchor")
    b_ok = res.residual_passed("b: [L,L] - 2 E^L") and res.residual_passed("b: [E,L]")
    if a_ok != b_ok:
        res.add("route mismatch", J.chart.one, "algebroid vs schouten")
    return res


def jacobi_routes(res: CheckResult) -> tuple[bool, bool]:
    a = res.residual_passed("a: jacobiator") and res.residual_passed("a: anchor")
    b = res.residual_passed("b: [L,L] - 2 E^L") and res.residual_passed("b: [E,L]")
    return a, b


# structure equations -------------------------------------------------------

def omega_phi(t: GacsTriple) -> AtiyahForm:
    """omega_phi(D, E) := omega(phi D, E), a 2-form when w_flat phi = phi^dag w_flat."""
    W = t.omega.frame_matrix()
    return AtiyahForm.from_frame_matrix(t.chart, linalg.matmul(linalg.transpose(t.phi.m), W))


def phi_nijenhuis(phi: EndoDL, D: Derivation, E: Derivation) -> Derivation:
    """N_phi(D, E) = [phi D, phi E] + phi^2 [D, E] - phi[phi D, E] - phi[D, phi E]."""
    pD, pE = phi(D), phi(E)
    return (der_bracket(pD, pE) + phi(phi(der_bracket(D, E)))
            - phi(der_bracket(pD, E)) - phi(der_bracket(D, pE)))


def _bracket_equation(res, t, Js, multiples):
    res.declare("J# bracket")
    for label, (p, q) in probes(jet_frame(t.chart), 2, multiples):
        res.add("J# bracket", Js(jet_bracket(t.J, p, q, Js)) - der_bracket(Js(p), Js(q)), label)


def _phi_dag_equation(res, t, Js, multiples):
    res.declare("phi^dag bracket")
    phid = adjoint(t.phi)
    for label, (p, q) in probes(jet_frame(t.chart), 2, multiples):
        lhs = phid(jet_bracket(t.J, p, q, Js))
        rhs = (atiyah_lie(Js(p), phid(q)) - atiyah_lie(Js(q), phid(p))
               - atiyah_d(AtiyahForm.section(t.J(phid(p), q))))
        res.add("phi^dag bracket", lhs - rhs, label)


def _n_phi_equation(res, t, Js, multiples):
    res.declare("N_phi")
    dw = atiyah_d(t.omega)
    for label, (D, E) in probes(der_frame(t.chart), 2, multiples):
        rhs = Js(atiyah_contract(E, atiyah_contract(D, dw)))
        res.add("N_phi", phi_nijenhuis(t.phi, D, E) - rhs, label)


def _omega_phi_equation(res, t, multiples):
    res.declare("omega_phi closed")
    phi = t.phi
    dwp = atiyah_d(omega_phi(t))
    dw = atiyah_d(t.omega)
    for label, (A, B, C) in probes(der_frame(t.chart), 3, multiples):
        lhs = dwp.evaluate(A, B, C)
        rhs = dw.evaluate(phi(A), B, C) + dw.evaluate(A, phi(B), C) + dw.evaluate(A, B, phi(C))
        res.add("omega_phi closed", lhs - rhs, label)


def check_equations(t: GacsTriple, multiples: bool = True) -> CheckResult:
    """Residuals of the four structure equations equivalent to integrability."""
    _require_almost(t)
    Js = sharp(t.J)
    res = CheckResult("equations")
    _bracket_equation(res, t, Js, multiples)
    _phi_dag_equation(res, t, Js, multiples)
    _n_phi_equation(res, t, Js, multiples)
    _omega_phi_equation(res, t, multiples)
    return res


class PropEquivalence(NamedTuple):
    torsion_vanishes: bool
    equations_hold: bool

    @property
    def agree(self) -> bool:
        return self.torsion_vanishes == self.equations_hold


def check_prop_equivalence(t: GacsTriple, multiples: bool = True) -> PropEquivalence:
    """Decide integrability both through N_I and through the four structure equations."""
    return PropEquivalence(check_integrable(t, multiples).passed, check_equations(t, multiples).passed)


def check_chg_subset(t: GacsTriple, multiples: bool = True) -> CheckResult:
    """The first two algebraic relations plus the bracket, phi^dag-bracket and
    N_phi equations: the data seen by contact-Hitchin groupoids."""
    I = OmniEndo(t)
    res = CheckResult("chg_subset")
    res.add("phi J# - J# phi^dag", I.phi @ I.J_sharp - I.J_sharp @ I.phi_dag)
    res.add("phi^2 + id + J# w_flat", I.phi @ I.phi + BundleMap.identity(t.chart) + I.J_sharp @ I.w_flat)
    _bracket_equation(res, t, I.J_sharp, multiples)
    _phi_dag_equation(res, t, I.J_sharp, multiples)
    _n_phi_equation(res, t, I.J_sharp, multiples)
    return res
