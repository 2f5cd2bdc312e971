from fractions import Fraction

import pytest
from mpmath import libmp as L

from ramanujan_lab import suites
from ramanujan_lab.numerics import ApproxComplex
from ramanujan_lab.suites import (SUITES, AuditCheck, audit_checks, run_suites, soundness_audit,
                                  suite_e2, suite_modular_relations, suite_periods)

CLEAN = [s for s in SUITES if s not in ("periods", "wz")]


@pytest.mark.parametrize("name", CLEAN)
def test_suite_passes(name):
    results = run_suites([name])
    assert results
    bad = [r.as_dict() for r in results if not r.passed]
    assert not bad


def test_suite_sizes():
    by = {}
    for r in run_suites(["clausen", "euler", "pfaff", "e2", "modular-relations"]):
        by[r.suite] = by.get(r.suite, 0) + 1
    assert by == {"clausen": 5, "euler": 5, "pfaff": 5, "e2": 10, "modular-relations": 30}


def test_sampling_is_seeded():
    a = [(r.item, r.verdict) for r in suite_e2(seed=7)]
    b = [(r.item, r.verdict) for r in suite_e2(seed=7)]
    assert a == b
    assert a != [(r.item, r.verdict) for r in suite_e2(seed=8)]


def test_periods_only_2B1_fails():
    results = suite_periods()
    failing = [r for r in results if not r.passed]
    assert [r.item.split(":")[0] for r in failing] == ["2B-1"]
    assert failing[0].verdict == "fail" and abs(failing[0].residual - 2.0) < 1e-30


def test_precursor_rows_not_applicable_have_reason():
    rows = run_suites(["precursors"])
    na = [r for r in rows if r.verdict == "not-applicable"]
    assert len(na) == 7 and all(r.detail["reason"] for r in na)
    assert sum(r.verdict == "pass" for r in rows) > len(na)


def test_parallel_matches_serial():
    names = ["clausen", "pfaff"]
    strip = lambda rs: [r.as_dict() for r in rs]
    assert strip(run_suites(names)) == strip(run_suites(names, jobs=2))


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suites(["nope"])


def test_audit_has_no_violations():
    assert len(audit_checks()) >= 100
    recs = soundness_audit(20)
    assert len(recs) == 20 and len({r.name for r in recs}) == 20
    assert not [r for r in recs if r.violation]


def test_audit_detects_overconfident_enclosure(monkeypatch):
    def overconfident(P):
        # the rounding error of 1/3 is dropped, so the ball is too small
        return ApproxComplex(L.mpf_div(L.from_int(1), L.from_int(3), P, L.round_nearest),
                             L.fzero, L.fzero, P)
    honest = AuditCheck("third", lambda P: ApproxComplex.from_exact(Fraction(1, 3), P))
    monkeypatch.setattr(suites, "audit_checks",
                        lambda: [AuditCheck("third-bad", overconfident), honest])
    recs = {r.name: r for r in soundness_audit(2, precision_bits=64, seed=1)}
    assert recs["third-bad"].violation
    assert not recs["third"].violation
