from fractions import Fraction as F

import mpmath
import pytest

from ramanujan_lab.modular_forms import (S2Undefined, Tau, check_e2_transformation,
                                         check_modular_relation, eisenstein, eta, fricke_residual,
                                         J_invariant, j_invariant, s2, theta_fourth_powers,
                                         uniformizer)
from ramanujan_lab.numerics import ApproxComplex, DomainError, QuadraticIrrational, embed
from ramanujan_lab.tables import SPECIAL_VALUES

Q = QuadraticIrrational.parse
BITS = 400


def mp_ball(v):
    return ApproxComplex.from_mpmath(v, err=mpmath.mpf(2) ** (-BITS + 40), prec=BITS)


def mp_tau(text):
    t = Q(text)
    return mpmath.mpc(mpmath.mpf(-t.b) / (2 * t.a), mpmath.sqrt(t.d) / (2 * t.a))


def mp_eisenstein(tau):
    """Independent q-series for E2, E4, E6 with mpmath."""
    q = mpmath.exp(2j * mpmath.pi * tau)
    s = {1: 0, 3: 0, 5: 0}
    n = 1
    while True:
        qn = q ** n
        for m in s:
            s[m] += n ** m * qn / (1 - qn)
        if abs(qn) * n ** 5 < mpmath.mpf(2) ** (-BITS):
            break
        n += 1
    return 1 - 24 * s[1], 1 + 240 * s[3], 1 - 504 * s[5]


@pytest.mark.parametrize("text", ["i", "(-1+sqrt(-3))/2", "sqrt(-2)/2", "(1+sqrt(-7))/8",
                                  "(-3+sqrt(-267))/6", "3/7+sqrt(-5)/3"])
def test_eisenstein_against_q_series(text):
    b = eisenstein(Q(text), 256)
    with mpmath.workprec(BITS + 20):
        tau = mp_tau(text)
        e2, e4, e6 = mp_eisenstein(tau)
        refs = [mp_ball(x) for x in (e2, e4, e6)]
    for mine, ref in zip((b.e2, b.e4, b.e6), refs):
        assert mine.intersects(ref)
        assert float(mine.radius) < 1e-70


@pytest.mark.parametrize("text", ["i", "sqrt(-2)", "(1+sqrt(-7))/2", "2*i", "(2+sqrt(-21))/5"])
def test_J_against_mpmath_kleinj(text):
    with mpmath.workprec(BITS):
        ref = mp_ball(mpmath.kleinj(mp_tau(text)))
    assert J_invariant(Q(text), 200).intersects(ref)


def test_J_at_rational_point():
    with mpmath.workprec(BITS):
        ref = mp_ball(mpmath.kleinj(mpmath.mpc(mpmath.mpf(1) / 5, 1)))
    assert J_invariant(Tau(rational=(F(1, 5), F(1))), 200).intersects(ref)


def test_eta_against_mpmath():
    with mpmath.workprec(BITS):
        ref = mp_ball(mpmath.eta(mp_tau("(1+sqrt(-7))/2")))
    assert eta(Q("(1+sqrt(-7))/2"), 256).intersects(ref)


def test_theta_against_mpmath():
    text = "sqrt(-2)/2"
    t2, t3, t4 = theta_fourth_powers(Q(text), 256)
    with mpmath.workprec(BITS):
        q = mpmath.exp(1j * mpmath.pi * mp_tau(text))
        refs = [mp_ball(mpmath.jtheta(k, 0, q) ** 4) for k in (2, 3, 4)]
    for mine, ref in zip((t2, t3, t4), refs):
        assert mine.intersects(ref)
    assert (t3 - t2 - t4).contains_zero()          # Jacobi's identity


@pytest.mark.parametrize("text,j", [("i", 1728), ("(-1+sqrt(-3))/2", 0), ("sqrt(-2)", 8000),
                                    ("(-1+sqrt(-7))/2", -3375), ("(-1+sqrt(-163))/2", -640320 ** 3)])
def test_integral_j_values(text, j):
    assert j_invariant(Q(text), 256).contains(j)


def test_invariance_of_J_and_s2():
    a = Q("(1+sqrt(-7))/8")
    red = a.reduce()[0]
    assert J_invariant(a, 200).intersects(J_invariant(red, 200))
    assert s2(a, 200).intersects(s2(red, 200))


@pytest.mark.parametrize("row", [r for r in SPECIAL_VALUES if r.s2 is not None],
                         ids=lambda r: f"{r.case}-{r.tau_text}")
def test_tabulated_s2(row):
    got = s2(row.tau, 300)
    x = row.s2
    assert got.intersects(embed(x, 320)) or got.intersects(embed(x, 320, -1))
    assert float(got.radius) < 1e-80


@pytest.mark.parametrize("row", SPECIAL_VALUES, ids=lambda r: f"{r.case}-{r.tau_text}")
def test_tabulated_uniformizers(row):
    got = uniformizer(row.case, row.tau, 256)
    v = row.value
    assert got.intersects(v.to_ball(300))
    if row.aux is not None:
        aux_case = {"2A": "2B", "3A": "3B"}[row.case]
        assert uniformizer(aux_case, row.tau, 256).intersects(row.aux.to_ball(300))


def test_s2_undefined_at_i():
    with pytest.raises(S2Undefined):
        s2(Q("i"), 128)


def test_height_guard():
    with pytest.raises(DomainError):
        eisenstein(Tau(rational=(F(0), F(1, 20))), 128)


@pytest.mark.parametrize("g", [(0, -1, 1, 0), (1, 1, 0, 1), (2, 1, 1, 1), (1, 0, 2, 1)])
def test_e2_quasimodularity(g):
    assert check_e2_transformation(Q("(1+sqrt(-23))/4"), g, 200).contains_zero()
    assert check_e2_transformation(Tau(rational=(F(1, 3), F(6, 5))), g, 200).contains_zero()


@pytest.mark.parametrize("case", ["1B", "2B", "2C", "3B", "2A", "3A"])
def test_modular_relations(case):
    for tau in (Q("sqrt(-5)/2"), Tau(rational=(F(-2, 9), F(9, 8)))):
        r = check_modular_relation(case, tau, 256)
        assert r.contains_zero() and float(r.radius) < 1e-50


@pytest.mark.parametrize("case", ["2B", "3B"])
def test_fricke_involution(case):
    assert fricke_residual(case, Q("(1+sqrt(-11))/6"), 200).contains_zero()


def test_relation_negative_control():
    tau = Q("sqrt(-5)/2")
    xi = uniformizer("2B", tau, 256)
    from ramanujan_lab.modular_forms import modular_relation_residual
    J = J_invariant(tau, 256)
    assert modular_relation_residual("2B", xi * (1 + F(1, 10**20)), J).excludes_zero()
