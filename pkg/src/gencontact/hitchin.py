"""Contact structures as Atiyah 2-forms, and contact-Hitchin pairs."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .atiyah import (
    AtiyahForm,
    BundleMap,
    EndoDL,
    JacobiBivector,
    adjoint,
    atiyah_d,
    flat,
    sigma_star,
)
from .gcs import GacsTriple
from .report import CheckResult
from .symkernel import Form
from .symkernel import linalg


class Degenerate(ValueError):
    """The Atiyah 2-form (or Jacobi bivector) is not invertible."""


class NotHitchin(ValueError):
    pass


class ContactForm(NamedTuple):
    form: AtiyahForm
    nondegenerate: bool


def is_nondegenerate(w: AtiyahForm) -> bool:
    W = w.frame_matrix()
    return linalg.rank(W) == len(W)


def contact_to_atiyah(theta: Form) -> ContactForm:
    """Omega = d_DL sigma* theta = (d theta, theta), with its nondegeneracy flag."""
    if theta.degree != 1:
        raise ValueError("a structure form is a 1-form")
    if theta.is_zero():
        raise ValueError("a structure form must not vanish identically")
    Om = atiyah_d(sigma_star(theta))
    return ContactForm(Om, is_nondegenerate(Om))


def invert_atiyah2(w: AtiyahForm) -> JacobiBivector:
    """The J with J# w_flat = id.  Raises Degenerate."""
    inv = linalg.inverse(w.frame_matrix())
    if inv is None:
        raise Degenerate("the Atiyah 2-form is degenerate")
    return JacobiBivector.from_matrix(w.chart, inv)


def atiyah_from_jacobi(J: JacobiBivector) -> AtiyahForm:
    """omega_J = J^-1, i.e. J# (omega_J)_flat = id.  Raises Degenerate."""
    inv = linalg.inverse(J.matrix())
    if inv is None:
        raise Degenerate("the Jacobi bivector is degenerate")
    return AtiyahForm.from_frame_matrix(J.chart, inv)


def endo_pullback(phi: BundleMap, w: AtiyahForm) -> AtiyahForm:
    """(phi* w)(D, E) = w(phi D, phi E)."""
    W = w.frame_matrix()
    return AtiyahForm.from_frame_matrix(w.chart, linalg.matmul(linalg.matmul(linalg.transpose(phi.m), W), phi.m),
                                        w.l_valued)


def twisted(phi: BundleMap, w: AtiyahForm) -> AtiyahForm:
    """w_phi(D, E) = w(phi D, E)."""
    W = w.frame_matrix()
    return AtiyahForm.from_frame_matrix(w.chart, linalg.matmul(linalg.transpose(phi.m), W), w.l_valued)


@dataclass(frozen=True)
class HitchinPair:
    Omega: AtiyahForm
    Phi: EndoDL

    @classmethod
    def from_theta(cls, theta: Form, Phi: EndoDL | None = None) -> "HitchinPair":
        Om = contact_to_atiyah(theta).form
        return cls(Om, Phi if Phi is not None else EndoDL.from_blocks(theta.chart))


def check_hitchin_pair(p: HitchinPair) -> CheckResult:
    """compat: Omega_flat Phi = Phi^dag Omega_flat, (ii) d_DL Omega_Phi = 0, plus
    closedness and nondegeneracy of Omega."""
    Om, Phi = p.Omega, p.Phi
    res = CheckResult("hitchin")
    wf = flat(Om)
    res.add("compat: Omega_flat Phi - Phi^dag Omega_flat", wf @ Phi - adjoint(Phi) @ wf)
    if res.residual_passed("compat: Omega_flat Phi - Phi^dag Omega_flat"):
        res.add("closed: d_DL Omega_Phi", atiyah_d(twisted(Phi, Om)))
    else:
        res.declare("closed: d_DL Omega_Phi")
        res.notes.append("Omega_Phi is not skew, closedness of Omega_Phi skipped")
    res.add("d_DL Omega", atiyah_d(Om))
    res.declare("nondegenerate")
    if not is_nondegenerate(Om):
        res.residuals["nondegenerate"]["det"] = Om.chart.one
        res.notes.append("Omega is degenerate")
    return res


def gcs_from_hitchin(p: HitchinPair) -> GacsTriple:
    """(H, Phi) -> (Phi, Omega^-1, -(Omega + Phi* Omega))."""
    check = check_hitchin_pair(p)
    if not check.passed:
        if not check.residual_passed("nondegenerate"):
            raise Degenerate("Omega is degenerate")
        raise NotHitchin("not a contact-Hitchin pair: " + ", ".join(check.failing()))
    J = invert_atiyah2(p.Omega)
    omega = -(p.Omega + endo_pullback(p.Phi, p.Omega))
    return GacsTriple(p.Phi, J, omega)


def hitchin_from_gcs(t: GacsTriple) -> HitchinPair:
    """Inverse direction, for triples with nondegenerate J."""
    return HitchinPair(atiyah_from_jacobi(t.J), t.phi)


def contact_triple(theta: Form) -> GacsTriple:
    """The integrable triple (0, Omega^-1, -Omega) of a contact form."""
    Om, ok = contact_to_atiyah(theta)
    if not ok:
        raise Degenerate("theta is not a contact form")
    return GacsTriple(EndoDL.from_blocks(theta.chart), invert_atiyah2(Om), -Om)
