import random

import pytest

import randgen as rg
from gencontact.atiyah import AtiyahForm, EndoDL, atiyah_d, atiyah_pullback
from gencontact.hitchin import contact_triple
from gencontact.imgroupoid import (
    GroupoidPresentation,
    ImForm,
    InvalidAlgebroid,
    LieAlgebroidPresentation,
    NotMultiplicative,
    UnsupportedGroupoid,
    check_chg_compatibility,
    check_flat_connection,
    check_groupoid,
    check_im_form,
    check_lie_algebroid,
    check_multiplicative,
    coboundary_form,
    decompose_atiyah,
    induced_im_form,
    jet_algebroid,
    lie_functor,
    recompose_atiyah,
    right_invariant_extension,
)
from gencontact.symkernel import Chart, Form, RationalMap, exterior_d, linalg, pullback, vector_field

M1 = Chart(["x"])
M2 = Chart(["x", "y"])
C3 = Chart(["x", "y", "z"])


def lie_algebra(brackets):
    """A bundle of Lie algebras over the line from structure constants."""
    m = len(brackets)
    return LieAlgebroidPresentation.build(M1, [[0] for _ in range(m)], brackets)


def so3(flip=False):
    c = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        c[i][j][k], c[j][i][k] = 1, -1
    if flip:
        c[2][0][1], c[0][2][1] = -1, 1
    return c


def exact_pair_form(G, lam):
    """(d f, f) with f = lam(t) - lam(s), the coboundary of the section lam."""
    return coboundary_form(G, atiyah_d(AtiyahForm(Form.function(lam), None, True)))


# Lie algebroids -----------------------------------------------------------------

def test_tangent_and_jet_algebroids():
    for ch in (M1, M2, C3):
        A = LieAlgebroidPresentation.tangent(ch)
        assert check_lie_algebroid(A).passed
        assert check_flat_connection(A).passed
    J = contact_triple(Form.coord_differential(C3, 2) - Form.coord_differential(C3, 0).scale(C3.coord(1))).J
    A = jet_algebroid(J)
    assert A.rank == 4
    assert check_lie_algebroid(A).passed
    assert check_flat_connection(A).passed


def test_structure_constant_examples():
    assert check_lie_algebroid(lie_algebra(so3())).passed
    assert check_lie_algebroid(lie_algebra(so3(flip=True))).passed
    c = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    c[0][1][2], c[1][0][2] = 1, -1
    c[0][2][0], c[2][0][0] = 1, -1
    res = check_lie_algebroid(lie_algebra(c))
    assert "jacobiator" in res.failing()
    with pytest.raises(ValueError):
        lie_algebra([[[0, 0], [1, 0]], [[1, 0], [0, 0]]])


def test_anchor_must_be_a_morphism():
    # rank 2 over the line, rho(e2) = x d/dx but [e1, e2] = 0
    A = LieAlgebroidPresentation.build(M1, [[1], [M1.coord(0)]], [[[0, 0], [0, 0]], [[0, 0], [0, 0]]])
    assert "anchor" in check_lie_algebroid(A).failing()


# IM forms -------------------------------------------------------------------------

def test_zero_im_form_passes():
    A = LieAlgebroidPresentation.tangent(M2)
    for k in (1, 2):
        assert check_im_form(A, ImForm.zero(M2, 2, k)).passed


def test_symmetry_condition_fails_example():
    A = LieAlgebroidPresentation.tangent(M1)
    dx = Form.coord_differential(M1, 0)
    F = ImForm.build(M1, 2, [AtiyahForm(dx, Form.zero(M1, 0), True)], [AtiyahForm.zero(M1, 2)])
    res = check_im_form(A, F)
    assert not res.residual_passed("R4")


def test_raw_leibniz_rule():
    A = LieAlgebroidPresentation.tangent(M1)
    zero = ImForm.zero(M1, 1, 1)
    ok = ImForm.build(M1, 1, zero.l_frame, zero.D_frame, raw=zero.extended)
    assert check_im_form(A, ok).residual_passed("R1")
    x = M1.coord(0)
    bad = ImForm.build(M1, 1, zero.l_frame, zero.D_frame,
                       raw=lambda a: AtiyahForm(exterior_d(Form.function(a.comps[0] * x)), Form.function(a.comps[0]), True))
    assert not check_im_form(A, bad).residual_passed("R1")


def test_im_form_rejects_non_algebroid():
    c = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    c[0][1][2], c[1][0][2] = 1, -1
    c[0][2][0], c[2][0][0] = 1, -1
    with pytest.raises(InvalidAlgebroid):
        check_im_form(lie_algebra(c), ImForm.zero(M1, 3, 1))


def test_im_form_build_validates():
    with pytest.raises(ValueError):
        ImForm.zero(M1, 1, 0)
    with pytest.raises(ValueError):
        ImForm.build(M1, 1, [AtiyahForm.zero(M1, 1)], [AtiyahForm.zero(M1, 1)])


# groupoids --------------------------------------------------------------------

def test_builtin_groupoids_satisfy_axioms():
    x = M2.coord(0)
    for G in (GroupoidPresentation.pair(M1), GroupoidPresentation.pair(M2, x * x + 1),
              GroupoidPresentation.bundle_of_groups(M1), GroupoidPresentation.bundle_of_groups(M2, ("a", "b")),
              GroupoidPresentation.unit(M2)):
        assert check_groupoid(G).passed, G.kind


def test_broken_groupoid_fails():
    G = GroupoidPresentation.pair(M1)
    x1, x2, x3 = G.G2.coord_funcs()
    bad = GroupoidPresentation(G.M, G.G, G.G2, G.s, G.t, G.u, G.inv,
                               RationalMap(G.G2, G.G, [x1, x2]), G.pr1, G.pr2, G.rep)
    assert not check_groupoid(bad).passed


def test_multiplicative_examples():
    G = GroupoidPresentation.pair(M1)
    x1, x2 = G.G.coord_funcs()
    lam = x1 * x1 - x2 * x2
    w = AtiyahForm(exterior_d(Form.function(lam)), Form.function(lam))
    assert w == exact_pair_form(G, M1.coord(0) * M1.coord(0))
    assert check_multiplicative(G, w).passed
    const = AtiyahForm(Form.zero(G.G, 1), Form.function(G.G.one))
    assert not check_multiplicative(G, const).passed
    B = GroupoidPresentation.bundle_of_groups(M1)
    a = B.G.coord(1)
    assert check_multiplicative(B, AtiyahForm(Form.coord_differential(B.G, 1), Form.function(a))).passed
    with pytest.raises(ValueError):
        check_multiplicative(G, AtiyahForm.zero(M1, 1))


def test_coboundaries_are_multiplicative():
    rng = random.Random(31)
    x = M1.coord(0)
    for G in (GroupoidPresentation.pair(M1), GroupoidPresentation.pair(M1, x * x + 1)):
        for k in (0, 1, 2):
            for _ in range(3):
                mu = rg.atiyah_form(rng, M1, k)
                assert check_multiplicative(G, coboundary_form(G, mu)).passed


def test_lie_functor():
    A = lie_functor(GroupoidPresentation.pair(M2))
    assert A.rank == 2
    assert check_lie_algebroid(A).passed
    for lab, e in A.frame():
        assert A.bracket(e, e).is_zero()
    assert [A.rho(e) for _, e in A.frame()] == [vector_field(M2, [1, 0]), vector_field(M2, [0, 1])]
    B = lie_functor(GroupoidPresentation.bundle_of_groups(M1))
    assert B.rank == 1 and B.rho(B.frame()[0][1]).is_zero()
    assert lie_functor(GroupoidPresentation.unit(M1)).rank == 0
    x = M1.coord(0)
    T = lie_functor(GroupoidPresentation.pair(M1, x * x + 1))
    assert check_flat_connection(T).passed
    D = T.nabla(T.frame()[0][1])
    # a flat section of L along d/dx must be proportional to x^2 + 1
    assert D.weight == -(2 * x) / (x * x + 1)


def test_right_invariant_extension():
    G = GroupoidPresentation.pair(M2)
    A = lie_functor(G)
    for _, a in A.frame():
        V = right_invariant_extension(G, a)
        for f in G.s.images:
            assert V.apply(f).is_zero()
    with pytest.raises(UnsupportedGroupoid):
        right_invariant_extension(GroupoidPresentation(M1, M1, M1, *[RationalMap.identity(M1)] * 7, M1.one), None)


def test_induced_im_form_examples():
    G = GroupoidPresentation.pair(M1)
    x = M1.coord(0)
    w = exact_pair_form(G, x * x)
    record = check_multiplicative(G, w)
    F = induced_im_form(G, w, record)
    assert record.residual_passed("defining property")
    assert F.l_frame == (AtiyahForm(Form.function(2 * x), None, True),)
    assert check_im_form(lie_functor(G), F).passed
    with pytest.raises(NotMultiplicative):
        induced_im_form(G, AtiyahForm(Form.zero(G.G, 1), Form.function(G.G.one)))


def test_induced_im_forms_satisfy_im_equations():
    rng = random.Random(32)
    x, y = M2.coord_funcs()
    for G in (GroupoidPresentation.pair(M1), GroupoidPresentation.pair(M1, M1.coord(0) + 2),
              GroupoidPresentation.pair(M2, x * y + 1)):
        A = lie_functor(G)
        for k in (1, 2):
            mu = rg.atiyah_form(rng, G.M, k)
            w = coboundary_form(G, mu)
            record = check_multiplicative(G, w)
            F = induced_im_form(G, w, record)
            assert record.passed
            assert check_im_form(A, F).passed


# decomposition and compatibility -----------------------------------------------

def test_decompose_recompose_round_trip():
    rng = random.Random(33)
    for n in (1, 2, 3):
        ch = rg.chart(n)
        for k in (1, 2):
            w = rg.atiyah_form(rng, ch, k)
            mu0, mu1 = decompose_atiyah(w)
            assert recompose_atiyah(mu0, mu1) == w
        lam = rg.poly(rng, ch)
        assert decompose_atiyah(atiyah_d(AtiyahForm(Form.function(lam), None, True))) == (Form.zero(ch, 1), Form.function(lam))
        f0 = rg.form(rng, ch, 0)
        assert recompose_atiyah(*decompose_atiyah(AtiyahForm(f0, None, True))) == AtiyahForm(f0, None, True)


def test_chg_compatibility_examples():
    G = GroupoidPresentation.pair(M1)
    zero = EndoDL.from_blocks(G.G)
    assert check_chg_compatibility(G, AtiyahForm.zero(G.G, 2), zero, AtiyahForm.zero(M1, 2)).passed
    x = M1.coord(0)
    wM = AtiyahForm(Form.zero(M1, 2), Form.coord_differential(M1, 0).scale(x * x + 1))
    assert not wM.is_zero()
    Om = atiyah_pullback(G.s, 1, wM) - atiyah_pullback(G.t, 1, wM)
    assert check_chg_compatibility(G, Om, zero, wM).passed
    dx1, dx2 = (Form.coord_differential(G.G, i) for i in range(2))
    res = check_chg_compatibility(G, Om + AtiyahForm(dx1 ^ dx2, Form.zero(G.G, 1)), zero, wM)
    assert not res.passed
    ident = EndoDL(G.G, linalg.identity(G.G, 3))
    assert check_chg_compatibility(G, Om.scale(G.G.const(1) / 2), ident, wM).passed
    assert not check_chg_compatibility(G, Om, ident, wM).passed


def test_coboundaries_vanish_along_units():
    rng = random.Random(35)
    G = GroupoidPresentation.pair(M2)
    for k in (0, 1, 2):
        w = coboundary_form(G, rg.atiyah_form(rng, M2, k))
        assert atiyah_pullback(G.u, 1, w).is_zero()
    assert pullback(G.u, Form.coord_differential(G.G, 0)) == Form.coord_differential(M2, 0)
