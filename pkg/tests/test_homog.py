import random

import pytest

import randgen as rg
from gencontact.atiyah import EndoDL
from gencontact.gcs import GacsTriple, check_almost, check_integrable
from gencontact.hitchin import contact_triple
from gencontact.homog import (
    GcEndo,
    GcTriple,
    GenSection,
    NotHomogeneous,
    check_gc,
    check_homogeneity,
    classical_dorfman,
    dehomogenize,
    fiber_name,
    gen_frame,
    homogenize,
    symplectization_identities,
)
from gencontact.symkernel import Chart, Endomorphism, Form, Multivector, exterior_d, lie, vector_field

C3 = Chart(["x", "y", "z"])
x, y, z = C3.coord_funcs()
dx, dy, dz = (Form.coord_differential(C3, i) for i in range(3))
THETA = dz - dx.scale(y)
R1 = Chart(["t"])
dt = Form.coord_differential(R1, 0)
X1 = Chart(["x"])


def complex_r1():
    return GacsTriple.build(X1, phi=EndoDL(X1, [[X1.zero, X1.const(-1)], [X1.one, X1.zero]]))


def test_homogenize_contact_r3():
    t = contact_triple(THETA)
    g = homogenize(t)
    tc = g.chart
    assert tc.coords == ("x", "y", "z", "r")
    r = tc.coord("r")
    th = THETA.map_coeffs(lambda f: f.to_chart(tc), tc)
    assert g.a == Endomorphism.zero(tc)
    assert g.sigma == -exterior_d(th.scale(r))
    assert check_homogeneity(g).passed


def test_homogenize_complex_r1():
    g = homogenize(complex_r1())
    tc = g.chart
    r = tc.coord("r")
    d_x, d_r = (vector_field(tc, [int(i == j) for j in range(2)]) for i in range(2))
    assert g.a.apply(d_x) == d_r.scale(r)
    assert g.a.apply(d_r.scale(r)) == -d_x
    assert g.pi.is_zero() and g.sigma.is_zero()
    assert g.a @ g.a == -Endomorphism.identity(tc)
    assert check_gc(g).passed


def test_homogenize_contact_r1():
    g = homogenize(contact_triple(dt))
    tc = g.chart
    dr, dT = Form.coord_differential(tc, 1), Form.coord_differential(tc, 0)
    d_t, d_r = (vector_field(tc, [int(i == j) for j in range(2)]) for i in range(2))
    assert g.sigma == -(dr ^ dT)
    assert g.pi == d_r ^ (-d_t)
    assert check_gc(g).passed


def test_fiber_name_avoids_clash():
    assert fiber_name(Chart(["r", "x"])) == "r_"
    assert homogenize(contact_triple(dt), fiber="s").chart.coords == ("t", "s")


def test_check_homogeneity_examples():
    tc = Chart(["t", "r"])
    dT, dr = Form.coord_differential(tc, 0), Form.coord_differential(tc, 1)
    zero_a = Endomorphism.zero(tc)
    ok = GcTriple(zero_a, Multivector.zero(tc, 2), dr ^ dT)
    res = check_homogeneity(ok)
    assert res.residual_passed("L_E sigma - sigma")
    xy = Chart(["x", "y", "r"])
    d = [vector_field(xy, [int(i == j) for j in range(3)]) for i in range(3)]
    pi = d[0] ^ d[1]
    res = check_homogeneity(GcTriple(Endomorphism.zero(xy), pi, Form.zero(xy, 2)))
    assert not res.residual_passed("L_E pi + pi")
    assert lie(GcTriple(Endomorphism.zero(xy), pi, Form.zero(xy, 2)).euler, pi).is_zero()
    with pytest.raises(NotHomogeneous):
        dehomogenize(GcTriple(Endomorphism.zero(xy), pi, Form.zero(xy, 2)))


def test_check_gc_broken_example():
    tc = Chart(["x", "y", "z", "r"])
    f = [Form.coord_differential(tc, i) for i in range(4)]
    r = tc.coord(3)
    # sigma = r dx^dy + dr^dz with pi = 0 is not almost complex
    g = GcTriple(Endomorphism.zero(tc), Multivector.zero(tc, 2), (f[0] ^ f[1]).scale(r) + (f[3] ^ f[2]))
    res = check_gc(g)
    assert not res.passed


def test_round_trips():
    rng = random.Random(8)
    cases = [contact_triple(THETA), complex_r1(), contact_triple(dt)]
    cases += [rg.random_triple(rng, rg.chart(n)) for n in (1, 2, 3)]
    for t in cases:
        g = homogenize(t)
        assert check_homogeneity(g).passed
        assert dehomogenize(g) == t
        assert homogenize(dehomogenize(g)) == g


def test_dehomogenize_reads_r1_contact():
    tc = Chart(["t", "r"])
    dT, dr = Form.coord_differential(tc, 0), Form.coord_differential(tc, 1)
    d_t, d_r = (vector_field(tc, [int(i == j) for j in range(2)]) for i in range(2))
    g = GcTriple(Endomorphism.zero(tc), d_r ^ (-d_t), -(dr ^ dT))
    assert dehomogenize(g) == contact_triple(dt)


def test_classical_dorfman_basics():
    tc = Chart(["x", "y"])
    X = vector_field(tc, [tc.coord(1), 0])
    Y = vector_field(tc, [0, tc.coord(0)])
    a = GenSection(X, Form.coord_differential(tc, 1).scale(tc.coord(0)))
    b = GenSection(Y, Form.zero(tc, 1))
    out = classical_dorfman(a, b)
    assert out.vec == lie(X, Y)
    assert len(gen_frame(tc)) == 4
    J = GcEndo(homogenize(complex_r1()))
    for _, s in gen_frame(J.chart):
        assert J(J(s)) == s.scale(J.chart.const(-1))


def test_verdict_matches_on_small_examples():
    rng = random.Random(9)
    cases = [complex_r1(), contact_triple(dt)]
    for _ in range(3):
        cases.append(rg.triple_from_pair(rg.hitchin_data(rng, rg.chart(1))))
    cases.append(rg.random_triple(rng, rg.chart(1)))
    for t in cases:
        on_m = check_almost(t).passed and check_integrable(t).passed
        g = homogenize(t)
        assert on_m == (check_homogeneity(g).passed and check_gc(g).passed)


def test_symplectization_identities():
    for theta in (THETA, dt, THETA.scale(x * x + 1)):
        res = symplectization_identities(contact_triple(theta), theta)
        assert res.passed, res.failing()
