from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from ramanujan_lab.hypergeom import (check_transformation, d_dz_F_squared, hyp2f1, hyp3f2,
                                     hyp2f1_derivative, pochhammer, series_coefficients)
from ramanujan_lab.numerics import ApproxComplex, DomainError

PARAMS = [(F(1, 4), F(1, 4), F(1)), (F(1, 8), F(3, 8), F(1)), (F(1, 6), F(1, 3), F(1)),
          (F(1, 12), F(5, 12), F(1)), (F(1, 2), F(1, 2), F(1)), (F(1, 3), F(2, 3), F(3, 2))]


def mp_ball(v, bits=400):
    return ApproxComplex.from_mpmath(v, err=mpmath.mpf(2) ** (-bits + 30), prec=bits)


def mpf(x):
    return mpmath.mpf(x.numerator) / x.denominator


@pytest.mark.parametrize("p", PARAMS)
@pytest.mark.parametrize("z", [F(1, 10), F(-9, 10), F(99, 100), F(-5), (F(1, 3), F(-1, 2)), F(1, 2)])
def test_hyp2f1_against_mpmath(p, z):
    got = hyp2f1(p, z, 200)
    with mpmath.workprec(400):
        zz = mpmath.mpc(mpf(z[0]), mpf(z[1])) if isinstance(z, tuple) else mpf(z)
        ref = mp_ball(mpmath.hyp2f1(*(mpf(x) for x in p), zz))
    assert got.intersects(ref)
    assert float(got.radius) < 1e-50


def test_hyp3f2_against_mpmath():
    got = hyp3f2([F(1, 2), F(1, 2), F(1, 2)], [F(1), F(1)], F(-1, 3), 256)
    with mpmath.workprec(400):
        ref = mp_ball(mpmath.hyp3f2(0.5, 0.5, 0.5, 1, 1, mpmath.mpf(-1) / 3))
    assert got.intersects(ref)


def test_derivatives():
    p = PARAMS[0]
    z = F(1, 5)
    with mpmath.workprec(400):
        a, b, c = (mpf(x) for x in p)
        f = lambda t: mpmath.hyp2f1(a, b, c, t)
        d1 = mpmath.diff(f, mpf(z))
        d2 = mpmath.diff(lambda t: f(t) ** 2, mpf(z))
        # numerical differentiation loses some bits; 300 is comfortably safe
        ref1, ref2 = mp_ball(d1, 300), mp_ball(d2, 300)
    assert hyp2f1_derivative(p, z, 200).intersects(ref1)
    assert d_dz_F_squared(p, z, 200).intersects(ref2)


def test_pochhammer_and_coefficients():
    assert pochhammer(F(1, 2), 3) == F(1, 2) * F(3, 2) * F(5, 2)
    assert pochhammer(5, 0) == 1
    c = series_coefficients((F(1, 2), F(1, 2), 1), 5)
    from math import comb
    assert c == [F(comb(2 * n, n) ** 2, 16 ** n) for n in range(5)]


def test_outside_domain():
    with pytest.raises(DomainError):
        hyp2f1(PARAMS[0], F(3, 2), 128)          # Re z > 1/2 and |z| > 1
    with pytest.raises(DomainError):
        hyp3f2([F(1, 2)] * 3, [1, 1], F(-1), 128)


zs = st.tuples(st.fractions(-F(9, 10), F(9, 10), max_denominator=100),
               st.fractions(-F(3, 10), F(3, 10), max_denominator=100)).filter(
    lambda t: t[0] ** 2 + t[1] ** 2 < F(81, 100))


@given(zs, st.sampled_from(PARAMS))
@settings(max_examples=25, deadline=None)
def test_euler_and_clausen_identities(z, p):
    a, b, c = p
    assert check_transformation("euler", 200, a=a, b=b, c=c, z=z).contains_zero()
    assert check_transformation("clausen", 200, a=a, b=b, z=z).contains_zero()
    if z[0] < F(1, 2):
        assert check_transformation("pfaff", 200, a=a, b=b, c=c, z=z).contains_zero()


def test_perturbed_clausen_fails():
    r = check_transformation("clausen", 200, a=F(1, 4), b=F(1, 4), z=F(1, 3))
    bad = r + F(1, 10**40)
    assert r.contains_zero() and bad.excludes_zero()


def test_relations_2A_3A_at_sample_point():
    from ramanujan_lab.numerics import QuadraticIrrational
    tau = QuadraticIrrational.parse("sqrt(-10)/2")
    for kind in ("relation_2A", "relation_3A"):
        assert float(check_transformation(kind, 256, tau=tau, power=True).radius) < 1e-60
        assert check_transformation(kind, 256, tau=tau, power=True).contains_zero()
