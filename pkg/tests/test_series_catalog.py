import dataclasses
import json
import math
from fractions import Fraction as F

import mpmath
import pytest

from ramanujan_lab import series_catalog as sc
from ramanujan_lab.numerics import AlgebraicNumber, DomainError
from ramanujan_lab.series_catalog import (WZ_LEMMAS, CoefficientKind, SeriesSpec, catalog,
                                          check_wz_lemma, coefficient, coefficients, digit_gain,
                                          evaluate_named_identity, evaluate_series, get_spec,
                                          named_identities, parse_catalog, partial_sum, pi_digits,
                                          read_catalog_file, verify_catalog, wz_sides)

SPECS = list(catalog().values())


def short_id(spec):
    return f"{spec.kind.family.split('_')[0]}-{spec.case}-{'.'.join(map(str, spec.tau.form))}"


# -- coefficient patterns ----------------------------------------------------

def brute(family, pattern, n):
    C = math.comb
    if family == "clausen_single":
        return {"1A": math.factorial(6 * n) // (math.factorial(3 * n) * math.factorial(n) ** 3),
                "2B": C(2 * n, n) ** 3, "2A": C(4 * n, 2 * n) * C(2 * n, n) ** 2,
                "3A": C(3 * n, n) * C(2 * n, n) ** 2}[pattern]
    base = {"1B": lambda k: C(6 * k, 3 * k) * C(3 * k, k), "2B": lambda k: C(4 * k, 2 * k) * C(2 * k, k),
            "3B": lambda k: C(3 * k, k) * C(2 * k, k), "2C": lambda k: C(2 * k, k) ** 2}
    if family == "conv_double":
        c = base[pattern]
        return sum(c(k) * c(n - k) for k in range(n + 1))
    if family == "euler_double":
        e = {"1B": lambda k: C(6 * k, 3 * k) * C(3 * k, 2 * k) * C(2 * k, k),
             "2B": lambda k: C(4 * k, 2 * k) * C(2 * k, k) ** 2,
             "3B": lambda k: C(3 * k, k) * C(2 * k, k) ** 2}[pattern]
        S = {"1B": -432, "2B": -64, "3B": -27}[pattern]
        return sum(e(k) * C(n + k, n - k) * S ** (n - k) for k in range(n + 1))
    return C(2 * n, n) ** 2


KINDS = [("clausen_single", p) for p in ("1A", "2B", "2A", "3A")] + \
    [("conv_double", p) for p in ("1B", "2B", "3B", "2C")] + \
    [("euler_double", p) for p in ("1B", "2B", "3B")] + [("bare_binomial_square", "2C")]


@pytest.mark.parametrize("family,pattern", KINDS)
def test_coefficients_match_definition(family, pattern):
    kind = CoefficientKind(family, pattern)
    seq = coefficients(kind, 25)
    assert seq == [brute(family, pattern, n) for n in range(25)]
    assert coefficient(kind, 7) == seq[7]
    assert kind.describe()


def test_known_coefficient_values():
    assert coefficient("conv_double:2B", 2) == 984
    assert coefficient("bare_binomial_square:2C", 2) == 36
    assert coefficient(("clausen_single", "2B"), 2) == 216
    assert coefficients({"family": "euler_double", "pattern": "2B"}, 3) == [1, -40, 2008]


@pytest.mark.parametrize("family,pattern", KINDS)
def test_growth_bound(family, pattern):
    kind = CoefficientKind(family, pattern)
    G = kind.growth
    for n, s in enumerate(coefficients(kind, 60)):
        assert abs(s) <= (n + 1) * G ** n


def test_unknown_pattern():
    with pytest.raises(ValueError):
        CoefficientKind("conv_double", "7Z")


# -- catalog -----------------------------------------------------------------

def test_catalog_shape():
    by_source = {}
    for s in SPECS:
        by_source.setdefault(s.source, []).append(s)
    assert sorted(len(v) for v in by_source.values()) == [1, 1, 4, 8, 25]
    assert set(named_identities()) == {"eq_2C_1", "eq_2C_2", "eq_3B_1", "eq_3B_2"}
    assert len({short_id(s) for s in SPECS}) == len(SPECS)


def test_spec_validation():
    s = get_spec("table10-2A-sqrt58")
    assert (s.A, s.B, s.C) == (26390, 1103, 396 ** 4 // 1)
    with pytest.raises(ValueError):
        dataclasses.replace(s, A=2 * 1103, B=1103)
    with pytest.raises(KeyError):
        get_spec("nope")


def test_json_round_trip(tmp_path):
    rows = [s.to_json() for s in SPECS[:3]]
    path = tmp_path / "cat.json"
    path.write_text(json.dumps(rows))
    series, named = parse_catalog(read_catalog_file(path))
    assert list(series) == [s.id for s in SPECS[:3]] and not named
    assert series[SPECS[0].id] == SPECS[0]


def test_duplicate_ids_rejected():
    row = SPECS[0].to_json()
    with pytest.raises(ValueError):
        parse_catalog([row, row])


@pytest.mark.parametrize("spec", SPECS, ids=short_id)
def test_series_row_verifies(spec):
    rep = evaluate_series(spec, 256, 1e-50)
    assert rep.verdict == "pass", rep.as_dict()
    assert rep.difference_bound() < 1e-50


@pytest.mark.parametrize("name", sorted(named_identities()))
def test_named_identity(name):
    assert evaluate_named_identity(name, 256, 1e-50).verdict == "pass"


def test_routes_agree():
    spec = get_spec("table10-2A-sqrt10")
    a = evaluate_series(spec, 256, route="sum")
    b = evaluate_series(spec, 256, route="clausen")
    assert a.partial.intersects(b.partial)
    assert a.details["route"] == "sum" and b.details["route"] == "clausen"


def test_endpoint_row_uses_abel_route():
    rep = evaluate_series("table10-2B-sqrt2")
    assert rep.verdict == "pass" and "continued" in rep.details
    with pytest.raises(DomainError):
        evaluate_series("table10-2B-sqrt2", route="sum")


@pytest.mark.parametrize("field,delta", [("A", 1), ("B", 2), ("C", 1)])
def test_perturbed_row_fails(field, delta):
    spec = get_spec("table10-3A-neg-sqrt267")
    bad = dataclasses.replace(spec, **{field: getattr(spec, field) + delta})
    assert evaluate_series(bad).verdict == "fail"
    worse = dataclasses.replace(spec, D=spec.D * AlgebraicNumber(F(10**40 + 1, 10**40)))
    assert evaluate_series(worse).verdict == "fail"


def test_partial_sum_is_exact():
    spec = get_spec("table10-2A-sqrt58")
    s = coefficients(spec.kind, 3)
    expect = sum(F((spec.A * n + spec.B) * s[n], spec.C ** n) for n in range(3))
    assert partial_sum(spec, 3) == expect


def test_verify_catalog_order_and_jobs():
    ids = ["table11-2B-i", "eq_3B_2", "table10-2A-i"]
    serial = verify_catalog(ids)
    parallel = verify_catalog(ids, jobs=2)
    assert [r.id for r in serial] == ids == [r.id for r in parallel]
    assert all(r.verdict == "pass" for r in serial + parallel)


def test_digit_gain_of_the_58_series():
    gains = digit_gain("table10-2A-sqrt58", terms=8)
    assert min(gains) > 7.9
    assert abs(gains[-1] - math.log10(396 ** 4 / 256)) < 0.05


# -- pi digits ---------------------------------------------------------------

def test_pi_digits_formatting():
    assert pi_digits(digits=50) == "3.14159265358979323846264338327950288419716939937510"
    assert pi_digits(digits=0) == "3"
    assert pi_digits(digits=1) == "3.1"
    with pytest.raises(ValueError):
        pi_digits(digits=-1)


@pytest.mark.parametrize("method", ["chudnovsky_1_1", "table10-2A-sqrt58", "table11-3B-neg-sqrt3"])
def test_pi_digits_against_mpmath(method):
    n = 120
    with mpmath.workdps(n + 20):
        ref = mpmath.nstr(mpmath.floor(mpmath.pi * 10 ** n), n + 5).split(".")[0]
    got = pi_digits(method, n)
    assert got.replace(".", "") == ref


def test_pi_digits_binary_splitting_path():
    with mpmath.workdps(1300):
        ref = mpmath.nstr(mpmath.floor(mpmath.pi * 10 ** 1200), 1210).split(".")[0]
    assert pi_digits(digits=1200).replace(".", "") == ref


# -- WZ lemmas ---------------------------------------------------------------

@pytest.mark.parametrize("lemma_id,initial", [("lemma_1B", (1, -312)), ("lemma_2B", (1, -40)),
                                              ("lemma_3B", (1, -15))])
def test_wz_lemma(lemma_id, initial):
    rep = check_wz_lemma(lemma_id, n_max=80, certificate_grid=25)
    assert rep["verdict"] == "pass"
    assert tuple(rep["initial_values"]) == initial


def test_wz_sides_small_n():
    left, right = wz_sides("lemma_2B", 5)
    assert left == right
    assert right[:3] == [1, -40, 2008]


def test_wz_broken_certificate_fails(monkeypatch):
    L = WZ_LEMMAS["lemma_3B"]
    broken = dataclasses.replace(L, R1=lambda n, k: L.R1(n, k) * 2)
    monkeypatch.setitem(WZ_LEMMAS, "lemma_3B", broken)
    rep = check_wz_lemma("lemma_3B", n_max=10, certificate_grid=8)
    assert rep["verdict"] == "fail"
    assert rep["certificates"]["R1"] == {"columns": False, "grid": False}
    assert rep["certificates"]["R2"] == {"columns": True, "grid": True}


def test_rows_accept_expressions():
    row = {"id": "hand-written", "source": "custom", "case": "2A",
           "kind": {"family": "clausen_single", "pattern": "2A"},
           "tau": "sqrt(-58)/2", "A": 26390, "B": 1103, "C": 396 ** 4, "D": "9801*sqrt(2)/4"}
    spec = sc.parse_row(row)
    ref = get_spec("table10-2A-sqrt58")
    assert (spec.tau, spec.D) == (ref.tau, ref.D)
    assert evaluate_series(spec).verdict == "pass"
