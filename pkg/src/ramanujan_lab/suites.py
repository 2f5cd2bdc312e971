"""Property suites: batches of identity checks with pass/fail verdicts.

Each suite returns a list of :class:`CheckResult`.  Sample points are fixed
(or drawn from a seeded generator) so reruns are reproducible.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence

from mpmath import mp
from mpmath.libmp import libmpf as L

from .numerics import ApproxComplex, BranchCutError, DomainError, QuadraticIrrational
from .hypergeom import check_transformation, hyp2f1
from .modular_forms import (S2Undefined, Tau, check_e2_transformation, check_modular_relation,
                            eisenstein, s2, uniformizer)
from .precursors import PERIOD_SAMPLES, period_residual, verify_precursor, THEOREMS_BY_CASE
from .tables import SPECIAL_VALUES

F = Fraction

SUITES = ("clausen", "euler", "pfaff", "e2", "modular-relations", "periods", "precursors", "wz")
DEFAULT_SEED = 20240611


@dataclass
class CheckResult:
    suite: str
    item: str
    verdict: str
    residual: Optional[float] = None
    detail: Dict[str, object] = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return self.verdict in ("pass", "not-applicable")

    def as_dict(self) -> dict:
        out = {"suite": self.suite, "item": self.item, "verdict": self.verdict}
        if self.residual is not None:
            out["residual_bound"] = f"{self.residual:.3e}"
        out.update(self.detail)
        return out


def _bound(x: ApproxComplex) -> float:
    return float(mp.make_mpf(x.abs_upper()))


def _small(suite, item, residual: ApproxComplex, tol: float, **detail) -> CheckResult:
    b = _bound(residual)
    if b < tol:
        v = "pass"
    elif residual.excludes_zero() and float(mp.make_mpf(residual.abs_lower())) >= tol:
        v = "fail"
    else:
        v = "inconclusive" if residual.contains_zero() else "fail"
    return CheckResult(suite, item, v, b, dict(detail))


# sample arguments for the classical 2F1 identities
HYPERGEOMETRIC_SAMPLES = (F(1, 10), F(-3, 10), (F(1, 4), F(1, 4)), (F(-1, 2), F(1, 5)), F(2, 5))
CLAUSEN_PARAMS = ((F(1, 4), F(1, 4)), (F(1, 8), F(3, 8)), (F(1, 6), F(1, 3)),
                  (F(1, 12), F(5, 12)), (F(1, 3), F(1, 3)))
EULER_PARAMS = ((F(1, 3), F(2, 5), F(7, 6)), (F(1, 4), F(1, 4), F(1)), (F(1, 8), F(3, 8), F(1)),
                (F(1, 6), F(1, 3), F(1)), (F(1, 2), F(1, 2), F(1)))


def _zstr(z) -> str:
    if isinstance(z, tuple):
        return f"{z[0]}{'+' if z[1] >= 0 else ''}{z[1]}i"
    return str(z)


def suite_clausen(precision_bits: int = 256, tol: float = 1e-60) -> List[CheckResult]:
    out = []
    for (a, b), z in zip(CLAUSEN_PARAMS, HYPERGEOMETRIC_SAMPLES):
        t0 = time.perf_counter()
        r = _small("clausen", f"a={a},b={b},z={_zstr(z)}",
                   check_transformation("clausen", precision_bits, a=a, b=b, z=z), tol)
        r.wall_time = time.perf_counter() - t0
        out.append(r)
    return out


def _two_term(kind: str, precision_bits: int, tol: float) -> List[CheckResult]:
    out = []
    for (a, b, c), z in zip(EULER_PARAMS, HYPERGEOMETRIC_SAMPLES):
        t0 = time.perf_counter()
        r = _small(kind, f"a={a},b={b},c={c},z={_zstr(z)}",
                   check_transformation(kind, precision_bits, a=a, b=b, c=c, z=z), tol)
        r.wall_time = time.perf_counter() - t0
        out.append(r)
    return out


def suite_euler(precision_bits: int = 256, tol: float = 1e-60) -> List[CheckResult]:
    return _two_term("euler", precision_bits, tol)


def suite_pfaff(precision_bits: int = 256, tol: float = 1e-60) -> List[CheckResult]:
    return _two_term("pfaff", precision_bits, tol)


def random_tau(rng: random.Random) -> Tau:
    """A rational point with |Re| <= 1/2 and 0.8 <= Im <= 2."""
    return Tau(rational=(F(rng.randint(-50, 50), 100), F(rng.randint(80, 200), 100)))


def random_sl2z(rng: random.Random):
    while True:
        c = rng.randint(0, 4)
        d = rng.randint(-4, 4)
        if c == 0:
            if d in (1, -1):
                return (d, rng.randint(-3, 3), 0, d)
            continue
        g, x, y = _egcd(d, c)
        if g != 1:
            continue
        # a d - b c = 1 with a = x, b = -y  (x d + y c = 1)
        return (x, -y, c, d)


def _egcd(a, b):
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, x, y = _egcd(b, a % b)
    return (g, y, x - (a // b) * y)


def _im_image(tau: Tau, g) -> Fraction:
    x, y = tau.rational
    _, _, c, d = g
    return y / ((c * x + d) ** 2 + (c * y) ** 2)


def _tau_str(tau: Tau) -> str:
    if tau.rational is not None:
        x, y = tau.rational
        return f"{x}+{y}i"
    return str(tau.source)


def suite_e2(precision_bits: int = 256, tol: float = 1e-50, count: int = 10,
             seed: int = DEFAULT_SEED) -> List[CheckResult]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        tau, g = random_tau(rng), random_sl2z(rng)
        # keep g.tau where the q-expansions are admissible
        while _im_image(tau, g) < F(1, 5):
            g = random_sl2z(rng)
        t0 = time.perf_counter()
        res = check_e2_transformation(tau, g, precision_bits)
        r = _small("e2", f"tau={_tau_str(tau)},g={g}", res, tol)
        # the claim is that the enclosure holds 0; tol only guards against wide balls
        if r.verdict == "pass" and not res.contains_zero():
            r.verdict = "fail"
        r.wall_time = time.perf_counter() - t0
        out.append(r)
    return out


RELATION_CASES = ("1B", "2B", "2C", "3B", "2A", "3A")


def suite_modular_relations(precision_bits: int = 256, tol: float = 1e-40, per_case: int = 5,
                            seed: int = DEFAULT_SEED) -> List[CheckResult]:
    rng = random.Random(seed + 1)
    out = []
    for case in RELATION_CASES:
        for _ in range(per_case):
            tau = random_tau(rng)
            t0 = time.perf_counter()
            res = check_modular_relation(case, tau, precision_bits)
            r = _small("modular-relations", f"{case}:tau={_tau_str(tau)}", res, tol)
            if r.verdict == "pass" and not res.contains_zero():
                r.verdict = "fail"
            r.wall_time = time.perf_counter() - t0
            out.append(r)
    return out


def suite_periods(precision_bits: int = 256, tol: float = 1e-40) -> List[CheckResult]:
    out = []
    for name, tau in PERIOD_SAMPLES.items():
        t0 = time.perf_counter()
        q = QuadraticIrrational.parse(tau)
        r = _small("periods", f"{name}:tau={tau}", period_residual(name, q, precision_bits), tol)
        r.wall_time = time.perf_counter() - t0
        out.append(r)
    return out


def suite_precursors(precision_bits: int = 256, tol: float = 1e-50) -> List[CheckResult]:
    out = []
    for row in SPECIAL_VALUES:
        if row.case not in THEOREMS_BY_CASE:
            continue
        t0 = time.perf_counter()
        item = f"{row.case}:tau={row.tau_text}"
        try:
            rep = verify_precursor(row.case, row.tau, precision_bits, tol)
        except (DomainError, BranchCutError) as exc:
            out.append(CheckResult("precursors", item, "not-applicable",
                                   detail={"reason": str(exc).split(":")[0]},
                                   wall_time=time.perf_counter() - t0))
            continue
        out.append(CheckResult("precursors", item, rep.verdict, rep.difference_bound(),
                               {"theorem": rep.details["theorem"], "mode": rep.details["mode"],
                                "continued": rep.details["continued"]},
                               time.perf_counter() - t0))
    return out


def suite_wz(n_max: int = 200, certificate_grid: int = 60) -> List[CheckResult]:
    from .series_catalog import WZ_LEMMAS, check_wz_lemma
    out = []
    for lemma_id in WZ_LEMMAS:
        rep = check_wz_lemma(lemma_id, n_max, certificate_grid)
        out.append(CheckResult("wz", lemma_id, rep["verdict"],
                               detail={"initial_values": list(rep["initial_values"]),
                                       "n_max": n_max, "grid": certificate_grid},
                               wall_time=rep["wall_time"]))
    return out


_RUNNERS: Dict[str, Callable[..., List[CheckResult]]] = {
    "clausen": suite_clausen, "euler": suite_euler, "pfaff": suite_pfaff, "e2": suite_e2,
    "modular-relations": suite_modular_relations, "periods": suite_periods,
    "precursors": suite_precursors, "wz": suite_wz,
}


def _run_suite(name: str, precision_bits: Optional[int] = None) -> List[CheckResult]:
    fn = _RUNNERS[name]
    if name == "wz" or precision_bits is None:
        return fn()
    return fn(precision_bits=precision_bits)


def run_suites(names: Optional[Sequence[str]] = None, precision_bits: Optional[int] = None,
               jobs: int = 1) -> List[CheckResult]:
    """Run the named suites (all by default); results keep the suite order."""
    names = list(names or SUITES)
    for n in names:
        if n not in _RUNNERS:
            raise ValueError(f"unknown suite {n!r}")
    if jobs > 1 and len(names) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_run_suite, names, [precision_bits] * len(names)))
    else:
        parts = [_run_suite(n, precision_bits) for n in names]
    return [r for part in parts for r in part]


# ---------------------------------------------------------------------------
# enclosure soundness audit

@dataclass(frozen=True)
class AuditCheck:
    name: str
    compute: Callable[[int], ApproxComplex]


def _hyp_sample(params, z):
    return lambda P: hyp2f1(params, z, P)


def _s2_sample(tau):
    return lambda P: s2(tau, P)


def _unif_sample(case, tau):
    return lambda P: uniformizer(case, tau, P)


def _e2_sample(tau):
    return lambda P: eisenstein(tau, P).e2


def _series_sample(spec_id):
    from .series_catalog import get_spec, _series_enclosure
    return lambda P: _series_enclosure(get_spec(spec_id), P)[0]


def audit_checks() -> List[AuditCheck]:
    """Value-producing checks whose enclosures are audited at doubled precision."""
    out: List[AuditCheck] = []
    for row in SPECIAL_VALUES:
        if row.s2 is not None:
            out.append(AuditCheck(f"s2:{row.case}:{row.tau_text}", _s2_sample(row.tau)))
        out.append(AuditCheck(f"uniformizer:{row.case}:{row.tau_text}",
                              _unif_sample(row.case, row.tau)))
    for (a, b, c) in EULER_PARAMS:
        for z in HYPERGEOMETRIC_SAMPLES:
            out.append(AuditCheck(f"2F1({a},{b};{c};{_zstr(z)})", _hyp_sample((a, b, c), z)))
    for t in ("i", "sqrt(-2)/2", "(1+sqrt(-7))/8", "(-3+sqrt(-267))/6"):
        out.append(AuditCheck(f"E2:{t}", _e2_sample(QuadraticIrrational.parse(t))))
    for sid in ("table10-2A-sqrt58", "table10-3A-neg-sqrt267", "table8-3B-sqrt3",
                "table11-2B-i", "chudnovsky_1_1"):
        out.append(AuditCheck(f"series:{sid}", _series_sample(sid)))
    return out


@dataclass
class AuditRecord:
    name: str
    precision_bits: int
    violation: bool
    shift: float
    radius: float


def soundness_audit(count: int = 20, precision_bits: int = 256,
                    seed: int = DEFAULT_SEED) -> List[AuditRecord]:
    """Rerun ``count`` random checks at 2P; the new midpoint must lie in the old ball."""
    rng = random.Random(seed)
    chosen = rng.sample(audit_checks(), count)
    out = []
    for chk in chosen:
        lo = chk.compute(precision_bits)
        hi = chk.compute(2 * precision_bits)
        mid = ApproxComplex(hi.re, hi.im, L.fzero, hi.prec)
        shift = float(mp.make_mpf(ApproxComplex._sub_raw(lo, mid)[2]))
        out.append(AuditRecord(chk.name, precision_bits, not lo.contains(mid), shift,
                               float(mp.make_mpf(lo.err))))
    return out


__all__ = ["CheckResult", "SUITES", "run_suites", "suite_clausen", "suite_euler", "suite_pfaff",
           "suite_e2", "suite_modular_relations", "suite_periods", "suite_precursors",
           "suite_wz", "audit_checks", "soundness_audit", "AuditRecord", "S2Undefined"]
