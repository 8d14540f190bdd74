import random

import pytest

import randgen as rg
from gencontact.atiyah import AtiyahForm, BundleMap, EndoDL, atiyah_d, flat, sharp
from gencontact.gcs import check_almost, check_integrable
from gencontact.hitchin import (
    Degenerate,
    HitchinPair,
    NotHitchin,
    atiyah_from_jacobi,
    check_hitchin_pair,
    contact_to_atiyah,
    contact_triple,
    gcs_from_hitchin,
    hitchin_from_gcs,
    invert_atiyah2,
    is_nondegenerate,
)
from gencontact.imgroupoid import decompose_atiyah
from gencontact.symkernel import Chart, Form, linalg, vector_field

C3 = Chart(["x", "y", "z"])
x, y, z = C3.coord_funcs()
dx, dy, dz = (Form.coord_differential(C3, i) for i in range(3))
dX, dY, dZ = (vector_field(C3, [int(i == j) for j in range(3)]) for i in range(3))
THETA = dz - dx.scale(y)
R1 = Chart(["t"])
dt = Form.coord_differential(R1, 0)


def test_contact_to_atiyah_examples():
    Om, ok = contact_to_atiyah(THETA)
    assert Om == AtiyahForm(dx ^ dy, THETA, True) and ok
    assert atiyah_d(Om).is_zero()
    assert decompose_atiyah(Om) == (Form.zero(C3, 2), THETA)
    Om, ok = contact_to_atiyah(dz)
    assert Om == AtiyahForm(Form.zero(C3, 2), dz, True) and not ok
    Om, ok = contact_to_atiyah(dt)
    assert ok


def test_contact_to_atiyah_rejects_bad_input():
    with pytest.raises(ValueError):
        contact_to_atiyah(Form.zero(C3, 1))
    with pytest.raises(ValueError):
        contact_to_atiyah(dx ^ dy)


def test_invert_examples():
    J = invert_atiyah2(contact_to_atiyah(THETA).form)
    assert J.Lambda == dY ^ (dX + dZ.scale(y))
    assert J.E == -dZ
    J1 = invert_atiyah2(contact_to_atiyah(dt).form)
    assert J1.Lambda.is_zero()
    assert J1.E == -vector_field(R1, [1])
    with pytest.raises(Degenerate):
        invert_atiyah2(contact_to_atiyah(dz).form)


def test_invert_then_flat_is_identity():
    rng = random.Random(4)
    for n in (1, 3):
        ch = rg.chart(n)
        for _ in range(3):
            Om = contact_to_atiyah(rg.contact_theta(rng, ch)).form
            J = invert_atiyah2(Om)
            ident = BundleMap.identity(ch)
            assert sharp(J) @ flat(Om) == ident
            assert flat(Om) @ sharp(J) == BundleMap.identity(ch, "J1L")
            assert atiyah_from_jacobi(J) == Om


def test_check_hitchin_pair_examples():
    Om = contact_to_atiyah(THETA).form
    assert check_hitchin_pair(HitchinPair(Om, EndoDL.from_blocks(C3))).passed
    assert check_hitchin_pair(HitchinPair(Om, EndoDL(C3, linalg.identity(C3, 4)))).passed
    diag = EndoDL.from_blocks(C3, A=[[x if i == j else 0 for j in range(3)] for i in range(3)])
    res = check_hitchin_pair(HitchinPair(Om, diag))
    assert "compat: Omega_flat Phi - Phi^dag Omega_flat" in res.failing()


def test_gcs_from_hitchin_examples():
    Om = contact_to_atiyah(THETA).form
    p = HitchinPair.from_theta(THETA)
    t = gcs_from_hitchin(p)
    assert t == contact_triple(THETA)
    assert hitchin_from_gcs(t) == p
    with pytest.raises(Degenerate):
        hitchin_from_gcs(rg.GacsTriple.build(R1, phi=EndoDL(R1, [[R1.zero, R1.const(-1)], [R1.one, R1.zero]])))
    with pytest.raises(Degenerate):
        gcs_from_hitchin(HitchinPair.from_theta(dz))
    with pytest.raises(NotHitchin):
        gcs_from_hitchin(HitchinPair(Om, EndoDL.from_blocks(C3, A=[[x, 0, 0], [0, x, 0], [0, 0, x]])))


def test_random_pairs_give_integrable_triples_and_round_trip():
    rng = random.Random(21)
    for n, count in ((1, 6), (3, 2)):
        ch = rg.chart(n)
        for _ in range(count):
            p = rg.hitchin_data(rng, ch, closed=True)
            assert check_hitchin_pair(p).passed
            t = gcs_from_hitchin(p)
            assert check_almost(t).passed
            assert check_integrable(t).passed
            assert hitchin_from_gcs(t) == p
            assert gcs_from_hitchin(hitchin_from_gcs(t)) == t


def test_perturbed_pairs_fail_closedness():
    rng = random.Random(22)
    ch = rg.chart(3)
    p = rg.hitchin_data(rng, ch, closed=False)
    res = check_hitchin_pair(p)
    assert res.residual_passed("compat: Omega_flat Phi - Phi^dag Omega_flat")
    assert not res.residual_passed("closed: d_DL Omega_Phi")
    t = rg.triple_from_pair(p)
    assert check_almost(t).passed
    assert not check_integrable(t).passed
    assert is_nondegenerate(p.Omega)
