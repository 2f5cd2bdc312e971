from fractions import Fraction as F

import pytest
import sympy as sp

from ramanujan_lab.picard_fuchs import (DISCRIMINANT, J_OF_XI, PULLBACK_PARAMS, NORMAL_FORM_PARAMS, WEIERSTRASS,
                                        DegenerateError, RationalFunction, X, classify_singular_points,
                                        derive_case, discriminant, hypergeometric_ode,
                                        indicial_exponents, log_free, normal_form_check,
                                        normalized_ode_from_J, pqr_from_invariants,
                                        pullback_check, rational_roots, rf,
                                        square_free_factors, true_singular_points)

CASES = ("1B", "2B", "2C", "3B")
xi = sp.Symbol("xi")


def to_sympy(r: RationalFunction):
    return sp.sympify(str(r).replace("^", "**"), locals={"xi": xi})


# -- exact arithmetic ----------------------------------------------------------

def test_rational_function_arithmetic():
    f = (X ** 2 - 1) / (X - 1)
    assert f == X + 1
    assert (1 / X).derivative() == -1 / X ** 2
    assert rf(F(3, 4)) * 4 == rf(3)
    assert rational_roots((-6, 11, -6, 1)) == [1, 2, 3]
    assert len(square_free_factors((0, 0, 1, -1))) >= 1


def test_sympy_agrees_on_rational_function_ops():
    f = (3 * X ** 3 - X + 2) / (X ** 2 + 5)
    g = (X - 7) / (2 * X + 1)
    for mine, ref in [(f * g, to_sympy(f) * to_sympy(g)), (f - g, to_sympy(f) - to_sympy(g)),
                      (f.derivative(), sp.diff(to_sympy(f), xi))]:
        assert sp.simplify(to_sympy(mine) - ref) == 0


# -- derivations -------------------------------------------------------------

@pytest.mark.parametrize("case", CASES)
def test_derivation_report(case):
    r = derive_case(case)
    assert r["discriminant_ok"] and r["J_ok"] and r["routes_agree"] and r["qpr_identity"]
    ok, residual = r["pullback"]
    assert ok and residual.is_zero()


@pytest.mark.parametrize("case", CASES)
def test_discriminant_and_J_with_sympy(case):
    A, B = (to_sympy(x) for x in WEIERSTRASS[case])
    D = sp.expand(A ** 3 - 27 * B ** 2)
    assert sp.simplify(D - to_sympy(DISCRIMINANT[case])) == 0
    assert sp.simplify(A ** 3 / D - to_sympy(J_OF_XI[case])) == 0


@pytest.mark.parametrize("case", CASES)
def test_pullback_with_sympy(case):
    """Gauge-transform the ODE independently and compare with the 2F1 equation."""
    ode = normalized_ode_from_J(J_OF_XI[case])
    alpha, beta, a, b, c = (sp.Rational(x.numerator, x.denominator) for x in PULLBACK_PARAMS[case])
    p, q = to_sympy(ode.p), to_sympy(ode.q)
    y = sp.Function("y")(xi)
    u = xi ** alpha * (1 - xi) ** beta * y
    expr = sp.diff(u, xi, 2) + p * sp.diff(u, xi) + q * u
    expr = sp.expand(sp.simplify(expr / (xi ** alpha * (1 - xi) ** beta)))
    c2 = expr.coeff(sp.Derivative(y, (xi, 2)))
    c1 = expr.coeff(sp.Derivative(y, xi))
    c0 = sp.simplify((expr - c2 * sp.Derivative(y, (xi, 2)) - c1 * sp.Derivative(y, xi)) / y)
    h1 = (c - (a + b + 1) * xi) / (xi * (1 - xi))
    h0 = -a * b / (xi * (1 - xi))
    assert sp.simplify(c1 / c2 - h1) == 0
    assert sp.simplify(c0 / c2 - h0) == 0


@pytest.mark.parametrize("case", CASES)
def test_perturbed_pullback_fails(case):
    alpha, beta, a, b, c = PULLBACK_PARAMS[case]
    ode = normalized_ode_from_J(J_OF_XI[case])
    for params in [(alpha + F(1, 12), beta, a, b, c), (alpha, beta, a + F(1, 7), b, c),
                   (alpha, beta, a, b, c + 1)]:
        ok, residual = pullback_check(ode, *params)
        assert not ok and not residual.is_zero()


@pytest.mark.parametrize("case", ["2A", "3A", "2B", "3B"])
def test_normal_form_rows(case):
    ok, residual = normal_form_check(case)
    assert ok and residual.is_zero()


@pytest.mark.parametrize("case", ["2A", "3A"])
def test_normal_form_negative_controls(case):
    alpha, beta, a, b, c = NORMAL_FORM_PARAMS[case]
    assert not normal_form_check(case, (alpha, beta, a + F(1, 24), b, c))[0]
    lam, mu, nu = F(1, 4), F(1, 2), F(1, 3)
    assert not normal_form_check(case, exponents=(lam, mu, nu))[0]


def test_pqr_system_matches_lemma_ode():
    A, B = WEIERSTRASS["2B"]
    t = pqr_from_invariants(A, B)
    assert (t.Q * t.Q - t.P * t.R) * 16 * discriminant(A, B) == \
        rf(A) * rf(A).derivative() ** 2 - 12 * rf(B).derivative() ** 2


def test_degenerate_inputs():
    with pytest.raises(DegenerateError):
        pqr_from_invariants(rf(0), rf(0))
    with pytest.raises(DegenerateError):
        normalized_ode_from_J(rf(5))


# -- singular points -----------------------------------------------------------

@pytest.mark.parametrize("case,exps", [
    ("1B", {0: (F(1, 12), F(1, 12)), 1: (F(1, 12), F(1, 12)), "inf": (F(0), F(2, 3))}),
    ("2B", {0: (F(1, 6), F(1, 6)), 1: (F(0), F(1, 2)), "inf": (F(1, 12), F(1, 12))}),
    ("2C", {0: (F(1, 6), F(1, 6)), 1: (F(1, 6), F(1, 6)), "inf": (F(1, 6), F(1, 6))}),
    ("3B", {0: (F(1, 4), F(1, 4)), 1: (F(0), F(1, 3)), "inf": (F(1, 12), F(1, 12))}),
])
def test_singular_points_and_exponents(case, exps):
    ode = derive_case(case)["theorem_ode"]
    assert true_singular_points(ode) == [F(0), F(1), "inf"]
    got = {e["point"]: e["exponents"] for e in classify_singular_points(ode)}
    assert got == exps


def test_apparent_point_is_not_singular():
    # the 3B family has an apparent singularity of the coefficients at xi = 9
    ode = derive_case("3B")["theorem_ode"]
    assert log_free(ode, F(9))
    assert F(9) not in true_singular_points(ode)


def test_indicial_exponents_of_hypergeometric_equation():
    ode = hypergeometric_ode(F(1, 4), F(1, 4), F(1))
    assert indicial_exponents(ode, 0) == (F(0), F(0))
    assert indicial_exponents(ode, "inf") == (F(1, 4), F(1, 4))


def test_identity_uniformizer_gives_c_two_thirds():
    # J = xi itself: the period is 2F1(1/12, 1/12; 2/3; xi) with no gauge factor
    ode = normalized_ode_from_J(X)
    assert pullback_check(ode, 0, 0, F(1, 12), F(1, 12), F(2, 3))[0]
    assert not pullback_check(ode, 0, 0, F(1, 12), F(1, 12), F(1))[0]
