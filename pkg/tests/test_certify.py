import json
import math
from fractions import Fraction

import pytest
from mpmath import mp

from ramanujan_lab.certify import (CertificationInput, build_multiplier, certify_s2, exact_model,
                                   guess_and_certify, make_input, recognize_s2, singular_j)
from ramanujan_lab.modular_forms import S2Undefined, s2
from ramanujan_lab.numerics import AlgebraicNumber, DomainError, QuadraticIrrational, parse_algebraic
from ramanujan_lab.tables import SPECIAL_VALUES

TAU_267 = QuadraticIrrational(3, 3, 23)
CAND_267 = parse_algebraic("(4110014282640-66461074000*sqrt(89))/5363953714273")
M6_267 = 2**20 * 3**6 * 5**4 * 11**7 * 17**3 * 47**3 * 71**4 * 167**4 * 251**4 * 263**4

S2_ROWS = [r for r in SPECIAL_VALUES if r.s2 is not None]


def row_id(r):
    return f"{r.case}-{'.'.join(map(str, r.tau.form))}"


def factor_over(n, primes):
    out = {}
    for p in primes:
        while n % p == 0:
            n //= p
            out[p] = out.get(p, 0) + 1
    return out, n


def test_multiplier_for_267():
    inp = make_input(TAU_267, CAND_267)
    m = build_multiplier(inp)
    assert m.N == 69 and m.d == 267
    assert inp.D_scale == 60269142857
    assert m.M6 == M6_267
    exps, rest = factor_over(m.M6, [2, 3, 5, 11, 17, 47, 71, 167, 251, 263])
    assert rest == 1 and exps[11] == 7
    assert inp.tau_conj.form == (1, 1, 67)
    assert inp.candidate_conj == CAND_267.conjugate()


def test_certify_267_both_embeddings():
    cert = certify_s2(make_input(TAU_267, CAND_267))
    assert cert.passed and len(cert.gaps) == 2
    other = certify_s2(make_input(QuadraticIrrational(1, 1, 67), CAND_267.conjugate()))
    assert other.passed and other.multiplier.N == 67


def test_multiplier_is_minimal_in_D():
    _, _, _, D = exact_model(TAU_267)
    for p in (7, 11, 17, 23):
        if D % p == 0:
            with pytest.raises(DomainError):
                exact_model(TAU_267, D_scale=D // p)


def test_model_discriminant():
    J, g2, g3, D = exact_model(TAU_267)
    assert J == singular_j(TAU_267) / 1728
    assert g2 ** 3 - g3 * g3 * 27 != 0
    assert (g2 ** 3 / (g2 ** 3 - g3 * g3 * 27)) == J


@pytest.mark.parametrize("row", S2_ROWS, ids=row_id)
def test_tabulated_s2_certifies(row):
    cert = certify_s2(make_input(row.tau, row.s2))
    assert cert.verdict == "pass", cert.as_dict()


def test_quadratic_entries_present():
    quad = [r for r in S2_ROWS if not r.s2.is_rational()]
    assert len(quad) >= 5
    assert any(r.s2.D == 89 for r in quad)


@pytest.mark.parametrize("shift", [AlgebraicNumber(1), AlgebraicNumber(1, 0) / 10 ** 60])
def test_perturbed_candidate_fails(shift):
    cert = certify_s2(make_input(TAU_267, CAND_267 + shift), escalate=True)
    assert cert.verdict == "fail"


def test_nonintegral_candidate_rejected_early():
    cert = certify_s2(make_input("sqrt(-2)/2", Fraction(5, 14) + Fraction(1, 1000003)))
    assert cert.verdict == "fail" and cert.notes


def test_s2_undefined_at_i():
    with pytest.raises(S2Undefined):
        s2(QuadraticIrrational(1, 0, 1), 128)
    with pytest.raises(DomainError):
        make_input("i", "1/2")


def test_conjugate_mismatch_rejected():
    with pytest.raises(ValueError):
        CertificationInput(TAU_267, CAND_267, QuadraticIrrational(1, 1, 67), CAND_267)


def test_recognition_then_certification():
    assert recognize_s2(QuadraticIrrational(2, 0, 1)) == AlgebraicNumber(5, 0) / 14
    cert = guess_and_certify("(-1+sqrt(-7))/2")
    assert cert.passed


def test_certificate_json():
    cert = certify_s2(make_input(TAU_267, CAND_267))
    data = json.loads(cert.to_json())
    assert {"tau", "candidate", "tau_conj", "candidate_conj", "N", "M1", "M2", "M6", "M_digits",
            "D_scale", "gaps", "verdict", "precision_bits"} <= set(data)
    assert data["verdict"] == "pass" and data["M6"] == M6_267
    assert data["M_digits"] == len(str(7 * 69 ** 3 * 267 * M6_267))
    assert math.isclose(cert.precision_bits, max(128, (7 * 69 ** 3 * 267 * M6_267).bit_length() + 96))


def test_gap_test_rejects_integral_neighbour():
    M = build_multiplier(make_input(TAU_267, CAND_267)).M
    cert = certify_s2(make_input(TAU_267, CAND_267 + AlgebraicNumber(Fraction(2, M))))
    assert cert.verdict == "fail" and not cert.notes
    assert any(float(mp.make_mpf(g.abs_lower())) > 1.5 for g in cert.gaps)
