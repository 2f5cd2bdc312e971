"""Ramanujan-type series for 1/pi: catalog, rigorous evaluation, pi digits, WZ checks.

Every catalog row has the normal form

    sum_{n >= 0} (A n + B) s(n) C^(-n) = D / pi

with integer A, B, C and D in Q(sqrt d).  Partial sums are exact rationals;
the tail is bounded through |s(n)| <= (n + 1) G^n where G is the growth rate
of the coefficient pattern.
"""
from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from mpmath import mp

from . import kernels
from .constants import machin_pi_fixed, pi_fixed
from .hypergeom import d_dz_F_squared, hyp2f1, pochhammer
from .numerics import (AlgebraicNumber, ApproxComplex, DomainError, InsufficientPrecision,
                       QuadraticIrrational, _r, _rmul, _rpow2, parse_algebraic)
from .precursors import VerificationReport, verdict_for, verify_precursor  # noqa: F401  (re-export)

_GUARD = 16

# ---------------------------------------------------------------------------
# coefficient patterns

FAMILIES = ("clausen_single", "conv_double", "euler_double", "bare_binomial_square")


@dataclass(frozen=True)
class _Clausen:
    growth: int
    ratio: Callable[[int], Tuple[int, int]]      # s(n+1)/s(n) as (num, den)
    params: Tuple[Fraction, Fraction]            # s(n) x^n summed = 2F1(a, b; a+b+1/2; G x)^2


_CLAUSEN: Dict[str, _Clausen] = {
    # (6n)!/((3n)! n!^3)
    "1A": _Clausen(1728, lambda n: (8 * (6 * n + 1) * (6 * n + 3) * (6 * n + 5), (n + 1) ** 3),
                   (Fraction(1, 12), Fraction(5, 12))),
    # C(2n,n)^3
    "2B": _Clausen(64, lambda n: (8 * (2 * n + 1) ** 3, (n + 1) ** 3),
                   (Fraction(1, 4), Fraction(1, 4))),
    # C(4n,2n) C(2n,n)^2
    "2A": _Clausen(256, lambda n: (8 * (4 * n + 1) * (4 * n + 3) * (2 * n + 1), (n + 1) ** 3),
                   (Fraction(1, 8), Fraction(3, 8))),
    # C(3n,n) C(2n,n)^2
    "3A": _Clausen(108, lambda n: (6 * (3 * n + 1) * (3 * n + 2) * (2 * n + 1), (n + 1) ** 3),
                   (Fraction(1, 6), Fraction(1, 3))),
}


def _c1B(k):
    return math.comb(6 * k, 3 * k) * math.comb(3 * k, k)


def _c2B(k):
    return math.comb(4 * k, 2 * k) * math.comb(2 * k, k)


def _c3B(k):
    return math.comb(3 * k, k) * math.comb(2 * k, k)


def _c2C(k):
    return math.comb(2 * k, k) ** 2


# convolution patterns: sum_k c(k) c(n-k), with c(k) <= G^k
_CONV: Dict[str, Tuple[Callable[[int], int], int]] = {
    "1B": (_c1B, 432), "2B": (_c2B, 64), "3B": (_c3B, 27), "2C": (_c2C, 16),
}

# Euler patterns: sum_k e(k) C(n+k, n-k) S^(n-k), with S the alternating scale.
# Each equals S^n sum_k ((p)_k (q)_(n-k) / (k! (n-k)!))^2 (the WZ lemmas), so
# |s(n)| <= (n + 1) |S|^n.
_EULER: Dict[str, Tuple[Callable[[int], int], int]] = {
    "1B": (lambda k: math.comb(6 * k, 3 * k) * math.comb(3 * k, 2 * k) * math.comb(2 * k, k), -432),
    "2B": (lambda k: math.comb(4 * k, 2 * k) * math.comb(2 * k, k) ** 2, -64),
    "3B": (lambda k: math.comb(3 * k, k) * math.comb(2 * k, k) ** 2, -27),
}

_BARE = {"2C": 16}    # C(2n,n)^2


@dataclass(frozen=True)
class CoefficientKind:
    family: str
    pattern: str

    def __post_init__(self):
        table = {"clausen_single": _CLAUSEN, "conv_double": _CONV,
                 "euler_double": _EULER, "bare_binomial_square": _BARE}.get(self.family)
        if table is None or self.pattern not in table:
            raise ValueError(f"unknown coefficient pattern {self.family}/{self.pattern}")

    @property
    def growth(self) -> int:
        if self.family == "clausen_single":
            return _CLAUSEN[self.pattern].growth
        if self.family == "conv_double":
            return _CONV[self.pattern][1]
        if self.family == "euler_double":
            return abs(_EULER[self.pattern][1])
        return _BARE[self.pattern]

    def describe(self) -> str:
        return {
            ("clausen_single", "1A"): "(6n)!/((3n)! n!^3)",
            ("clausen_single", "2B"): "C(2n,n)^3",
            ("clausen_single", "2A"): "C(4n,2n) C(2n,n)^2",
            ("clausen_single", "3A"): "C(3n,n) C(2n,n)^2",
            ("conv_double", "1B"): "sum_k C(6k,3k)C(3k,k)C(6n-6k,3n-3k)C(3n-3k,n-k)",
            ("conv_double", "2B"): "sum_k C(4k,2k)C(2k,k)C(4n-4k,2n-2k)C(2n-2k,n-k)",
            ("conv_double", "3B"): "sum_k C(3k,k)C(2k,k)C(3n-3k,n-k)C(2n-2k,n-k)",
            ("conv_double", "2C"): "sum_k C(2k,k)^2 C(2n-2k,n-k)^2",
            ("euler_double", "1B"): "sum_k C(6k,3k)C(3k,2k)C(2k,k)C(n+k,n-k)(-432)^(n-k)",
            ("euler_double", "2B"): "sum_k C(4k,2k)C(2k,k)^2 C(n+k,n-k)(-64)^(n-k)",
            ("euler_double", "3B"): "sum_k C(3k,k)C(2k,k)^2 C(n+k,n-k)(-27)^(n-k)",
            ("bare_binomial_square", "2C"): "C(2n,n)^2",
        }[(self.family, self.pattern)]


def _kind(kind) -> CoefficientKind:
    if isinstance(kind, CoefficientKind):
        return kind
    if isinstance(kind, dict):
        return CoefficientKind(kind["family"], kind["pattern"])
    if isinstance(kind, (tuple, list)):
        return CoefficientKind(*kind)
    fam, _, pat = str(kind).partition(":")
    return CoefficientKind(fam, pat)


def coefficient(kind, n: int) -> int:
    """Exact s(n) for a coefficient pattern."""
    kind = _kind(kind)
    if n < 0:
        raise ValueError("n must be non-negative")
    fam, pat = kind.family, kind.pattern
    if fam == "clausen_single":
        return coefficients(kind, n + 1)[n]
    if fam == "conv_double":
        c = _CONV[pat][0]
        return sum(c(k) * c(n - k) for k in range(n + 1))
    if fam == "euler_double":
        e, S = _EULER[pat]
        return sum(e(k) * math.comb(n + k, n - k) * S ** (n - k) for k in range(n + 1))
    return math.comb(2 * n, n) ** 2


def coefficients(kind, N: int) -> List[int]:
    """[s(0), ..., s(N-1)]."""
    kind = _kind(kind)
    fam, pat = kind.family, kind.pattern
    if N <= 0:
        return []
    if fam == "clausen_single":
        ratio = _CLAUSEN[pat].ratio
        out = [1]
        c = 1
        for n in range(N - 1):
            num, den = ratio(n)
            c = c * num // den
            out.append(c)
        return out
    if fam == "conv_double":
        c = _CONV[pat][0]
        return list(kernels.self_convolution([c(k) for k in range(N)]))
    if fam == "euler_double":
        e, S = _EULER[pat]
        ek = [e(k) for k in range(N)]
        out = []
        for n in range(N):
            acc = 0
            b = 1                      # C(n+k, n-k) at k = 0
            for k in range(n + 1):
                acc += ek[k] * b * S ** (n - k)
                # C(n+k+1, n-k-1) = C(n+k, n-k) (n+k+1)(n-k) / ((2k+1)(2k+2))
                b = b * (n + k + 1) * (n - k) // ((2 * k + 1) * (2 * k + 2))
            out.append(acc)
        return out
    return [math.comb(2 * n, n) ** 2 for n in range(N)]


# ---------------------------------------------------------------------------
# catalog

@dataclass(frozen=True)
class SeriesSpec:
    id: str
    case: str
    tau: QuadraticIrrational
    A: int
    B: int
    C: int
    D: AlgebraicNumber
    kind: CoefficientKind
    source: str = ""
    note: str = ""

    def __post_init__(self):
        if math.gcd(self.A, self.B) != 1:
            raise ValueError(f"{self.id}: gcd(A, B) must be 1")
        if self.C == 0:
            raise ValueError(f"{self.id}: C must be nonzero")

    @property
    def ratio(self) -> Fraction:
        """G/|C|; the series converges absolutely iff this is < 1."""
        return Fraction(self.kind.growth, abs(self.C))

    def to_json(self) -> dict:
        a, b, c = self.tau.form
        out = {"id": self.id, "case": self.case, "tau": {"a": a, "b": b, "c": c},
               "A": self.A, "B": self.B, "C": self.C, "D": self.D.as_parts(),
               "kind": {"family": self.kind.family, "pattern": self.kind.pattern},
               "source": self.source}
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class NamedIdentity:
    id: str
    case: str
    tau: QuadraticIrrational
    rhs: str
    source: str = ""


def _load_rows():
    with resources.files("ramanujan_lab").joinpath("data/catalog.json").open() as fh:
        return json.load(fh)


def parse_row(row: dict):
    """One catalog JSON row to a SeriesSpec or NamedIdentity."""
    # tau and D may also be written as expressions, e.g. "sqrt(-58)/2", "9801*sqrt(2)/4"
    t = row["tau"]
    if isinstance(t, str):
        tau = QuadraticIrrational.parse(t)
    else:
        tau = QuadraticIrrational(t["a"], t["b"], t["c"])
    if row["kind"]["family"] == "named_identity":
        return NamedIdentity(row["id"], row["case"], tau, row["rhs"], row.get("source", ""))
    d = row["D"]
    if isinstance(d, str):
        D = parse_algebraic(d)
    else:
        D = AlgebraicNumber.from_parts(d["p"], d["q"], d["radicand"], d["den"])
    return SeriesSpec(
        row["id"], row["case"], tau, int(row["A"]), int(row["B"]), int(row["C"]),
        D, _kind(row["kind"]), row.get("source", ""), row.get("note", ""))


def parse_catalog(rows) -> Tuple[Dict[str, SeriesSpec], Dict[str, NamedIdentity]]:
    series: Dict[str, SeriesSpec] = {}
    named: Dict[str, NamedIdentity] = {}
    for row in rows:
        item = parse_row(row)
        target = named if isinstance(item, NamedIdentity) else series
        if item.id in series or item.id in named:
            raise ValueError(f"duplicate catalog id {item.id!r}")
        target[item.id] = item
    return series, named


def read_catalog_file(path) -> list:
    """Rows of a catalog JSON file (a list of row objects)."""
    with open(path) as fh:
        rows = json.load(fh)
    if not isinstance(rows, list):
        raise ValueError("catalog file must hold a JSON list of rows")
    parse_catalog(rows)     # validate eagerly
    return rows


@lru_cache(maxsize=1)
def load_catalog() -> Tuple[Dict[str, SeriesSpec], Dict[str, NamedIdentity]]:
    return parse_catalog(_load_rows())


def catalog() -> Dict[str, SeriesSpec]:
    return load_catalog()[0]


def named_identities() -> Dict[str, NamedIdentity]:
    return load_catalog()[1]


def get_spec(spec_id: str) -> SeriesSpec:
    try:
        return catalog()[spec_id]
    except KeyError:
        raise KeyError(f"unknown series id {spec_id!r}") from None


# ---------------------------------------------------------------------------
# trusted pi

_CHECKED: Dict[int, bool] = {}


def trusted_pi(prec: int) -> ApproxComplex:
    """pi from the Chudnovsky route, cross-checked once per precision against Machin."""
    W = prec + _GUARD
    P, e = pi_fixed(W)
    if not _CHECKED.get(W):
        M, em = machin_pi_fixed(W)
        if abs(P - M) > e + em:
            raise ArithmeticError("pi oracles disagree")
        _CHECKED[W] = True
    v = ApproxComplex.from_exact(Fraction(P, 1 << W), prec)
    return v.with_err(_rmul(_r(e), _rpow2(-W)))


# ---------------------------------------------------------------------------
# evaluation

def _tail_terms(A: int, B: int, x: Fraction, bits: int) -> Tuple[int, Fraction]:
    """N and a bound for sum_{n >= N} (|A| n + |B|)(n + 1) x^n below 2^-bits."""
    A, B = abs(A), abs(B)
    lx = math.log2(x.numerator) - math.log2(x.denominator)
    N = max(4, int(bits / -lx) + 2)
    target = Fraction(1, 1 << bits)
    while True:
        # majorant f(n) = (A n + B)(n + 1) x^n; its term ratio decreases in n
        f = (A * N + B) * (N + 1) * x ** N
        rho = x * Fraction((A * (N + 1) + B) * (N + 2), max(1, (A * N + B) * (N + 1)))
        if rho < 1:
            tail = f / (1 - rho)
            if tail <= target:
                return N, tail
        N += max(1, N // 16)


def partial_sum(spec: SeriesSpec, N: int) -> Fraction:
    """Exact sum_{n < N} (A n + B) s(n) C^(-n)."""
    s = coefficients(spec.kind, N)
    num = kernels.linear_series_exact(spec.A, spec.B, spec.C, s)
    return Fraction(num, spec.C ** (N - 1))


def _series_enclosure(spec: SeriesSpec, P: int) -> Tuple[ApproxComplex, int, Fraction]:
    x = spec.ratio
    if x >= 1:
        raise DomainError(f"{spec.id}: |C| does not exceed the coefficient growth rate")
    N, tail = _tail_terms(spec.A, spec.B, x, P + 8)
    S = partial_sum(spec, N)
    return ApproxComplex.from_exact(S, P + _GUARD).with_err(tail), N, tail


def clausen_enclosure(spec: SeriesSpec, P: int) -> ApproxComplex:
    """B F^2 + A x (F^2)' with F = 2F1(a, b; a+b+1/2; x), x = G/C.

    Valid for |x| < 1 and, by Abel's theorem, on the circle wherever the
    series converges (x = -1 for the alternating endpoint rows).
    """
    if spec.kind.family != "clausen_single":
        raise DomainError("the Clausen route needs a single-summation pattern")
    cl = _CLAUSEN[spec.kind.pattern]
    a, b = cl.params
    x = Fraction(cl.growth, spec.C)
    if abs(x) > 1 or x == 1:
        raise DomainError(f"{spec.id}: Clausen argument {x} outside the convergent range")
    p = (a, b, a + b + Fraction(1, 2))
    W = P + _GUARD
    F = hyp2f1(p, x, W)
    dF2 = d_dz_F_squared(p, x, W)
    return F * F * spec.B + dF2 * (x * spec.A)


def evaluate_series(spec, precision_bits: int = 256, tol: float = 1e-50,
                    route: str = "auto") -> VerificationReport:
    """Enclose the series and D/pi and compare them.

    ``route`` is "sum" (exact partial sum plus tail bound), "clausen" (the
    squared 2F1 closed form) or "auto" (sum when |C| exceeds the growth rate,
    else the Clausen/Abel route for documented endpoint rows).
    """
    if isinstance(spec, str):
        spec = get_spec(spec)
    P = int(precision_bits)
    t0 = time.perf_counter()
    if route == "auto":
        route = "sum" if spec.ratio < 1 else "clausen"
    details = {"route": route, "source": spec.source}
    N = None
    if route == "sum":
        S, N, tail = _series_enclosure(spec, P)
        details["tail_bound_log2"] = round(math.log2(tail) if tail else float("-inf"), 2)
    elif route == "clausen":
        S = clausen_enclosure(spec, P)
        if spec.ratio >= 1:
            details["continued"] = "Abel summation at the boundary"
    else:
        raise ValueError(f"unknown route {route!r}")
    W = P + _GUARD
    target = spec.D.to_ball(W) / trusted_pi(W)
    verdict = verdict_for(S, target, tol)
    return VerificationReport(spec.id, verdict, S, target, N, time.perf_counter() - t0, details)


def digit_gain(spec, terms: int = 10, precision_bits: int = 1024) -> List[float]:
    """Decimal digits gained by each added term, measured against D/pi.

    Entry k is log10 |S_k - D/pi| - log10 |S_(k+1) - D/pi| for k = 1 .. terms,
    with S_k the exact partial sum of k terms.
    """
    if isinstance(spec, str):
        spec = get_spec(spec)
    W = int(precision_bits)
    target = spec.D.to_ball(W) / trusted_pi(W)
    errs = []
    for k in range(1, terms + 2):
        d = ApproxComplex.from_exact(partial_sum(spec, k), W) - target
        if not d.excludes_zero():
            raise InsufficientPrecision("raise precision_bits to resolve the error of S_k")
        errs.append(float(mp.log10(abs(d.mid))))
    return [errs[i] - errs[i + 1] for i in range(terms)]


def _run_one(args):
    item, P, tol = args
    if isinstance(item, dict):          # a row from a user catalog file
        item = parse_row(item)
        if isinstance(item, NamedIdentity):
            return evaluate_named_identity(item.id, P, tol)
        return evaluate_series(item, P, tol)
    if item in named_identities():
        return evaluate_named_identity(item, P, tol)
    return evaluate_series(item, P, tol)


def verify_catalog(ids: Optional[Sequence] = None, precision_bits: int = 256,
                   tol: float = 1e-50, jobs: int = 1) -> List[VerificationReport]:
    """Verify series (and named identities); reports come back in input order.

    ``ids`` holds catalog ids or raw row dicts (from :func:`read_catalog_file`).
    """
    if ids is None:
        ids = list(catalog()) + list(named_identities())
    work = [(i, precision_bits, tol) for i in ids]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_one, work))
    return [_run_one(w) for w in work]


# ---------------------------------------------------------------------------
# named 2F1 identities

def _root(x: int, e: Fraction, P: int) -> ApproxComplex:
    return (ApproxComplex.from_exact(x, P).log() * e).exp()


def evaluate_named_identity(identity_id: str, precision_bits: int = 256,
                            tol: float = 1e-50) -> VerificationReport:
    """Products of 2F1 values against their closed forms; z = -1 goes through Pfaff."""
    P = int(precision_bits)
    W = P + _GUARD
    t0 = time.perf_counter()
    h, t, q = Fraction(1, 2), Fraction(1, 3), Fraction(4, 3)
    pi = trusted_pi(W)
    if identity_id == "eq_2C_1":
        z = h
        lhs = hyp2f1((h, h, 1), z, W) * hyp2f1((3 * h, 3 * h, 2), z, W)
        rhs = 8 / pi
    elif identity_id == "eq_2C_2":
        F = hyp2f1((h, h, 1), -1, W)
        lhs = F * F - F * hyp2f1((3 * h, 3 * h, 2), -1, W)
        rhs = 1 / pi
    elif identity_id == "eq_3B_1":
        F = hyp2f1((t, t, 1), -1, W)
        lhs = F * F * Fraction(2, 3) - F * hyp2f1((q, q, 2), -1, W) * Fraction(4, 9)
        rhs = _root(3, h, W) / (_root(2, Fraction(2, 3), W) * pi)
    elif identity_id == "eq_3B_2":
        z = Fraction(1, 9)
        F = hyp2f1((t, t, 1), z, W)
        lhs = F * F * Fraction(4, 3) + F * hyp2f1((q, q, 2), z, W) * Fraction(16, 81)
        rhs = _root(3, Fraction(5, 6), W) * 2 / pi
    else:
        raise KeyError(f"unknown identity {identity_id!r}")
    verdict = verdict_for(lhs, rhs, tol)
    return VerificationReport(identity_id, verdict, lhs, rhs, None, time.perf_counter() - t0,
                              {"route": "hypergeometric"})


# ---------------------------------------------------------------------------
# digits of pi

def _floor_digits(lo: Fraction, hi: Fraction, digits: int) -> Optional[int]:
    scale = 10 ** digits
    a = (lo * scale).__floor__()
    b = (hi * scale).__floor__()
    return a if a == b else None


def _format(v: int, digits: int) -> str:
    s = str(v)
    return s[0] + ("." + s[1:] if digits > 0 else "")


def pi_digits(method: str = "chudnovsky_1_1", digits: int = 50) -> str:
    """Decimal expansion of pi truncated after ``digits`` places.

    ``method`` is "chudnovsky_1_1" (binary splitting above 1000 digits, plain
    exact summation below) or the id of any convergent catalog series, in
    which case pi = D / S with S the rigorously enclosed series value.
    Precision is raised until the last digit is certain.
    """
    digits = int(digits)
    if digits < 0:
        raise ValueError("digits must be non-negative")
    W = int(digits * 3.3219280948873626) + 32
    while True:
        if method == "chudnovsky_1_1":
            P, e = pi_fixed(W, "split" if digits > 1000 else "plain")
            lo = Fraction(P - e, 1 << W)
            hi = Fraction(P + e, 1 << W)
        else:
            spec = get_spec(method)
            S, _, _ = _series_enclosure(spec, W)
            s_lo, s_hi = _real_bounds(S)
            d_lo, d_hi = _real_bounds(spec.D.to_ball(W + _GUARD))
            if s_lo <= 0:
                raise DomainError("series enclosure does not exclude zero")
            lo, hi = d_lo / s_hi, d_hi / s_lo
        v = _floor_digits(lo, hi, digits)
        if v is not None:
            return _format(v, digits)
        W += 32


def _real_bounds(x: ApproxComplex) -> Tuple[Fraction, Fraction]:
    from mpmath import libmp as L
    mid = Fraction(*L.to_rational(x.re))
    r = Fraction(*L.to_rational(x.err))
    return mid - r, mid + r


# ---------------------------------------------------------------------------
# WZ lemmas

@dataclass(frozen=True)
class WZLemma:
    id: str
    p: Fraction
    q: Fraction
    C: int
    e: Callable[[int], int]
    m: int
    quad: Tuple[int, int, int]
    c0: int
    R1: Callable
    R2: Callable
    initial: Tuple[int, int]


def _div(a, b):
    # certificates are evaluated at integers and on rational functions of n
    if isinstance(a, int) and isinstance(b, int):
        return Fraction(a, b)
    return a / b


def _R1_1B(n, k):
    return -_div(144 * k ** 2 * (6 * n - 6 * k + 5) ** 2
                 * (12 * n ** 2 - 36 * k * n + 51 * n + 24 * k ** 2 - 74 * k + 54),
                 (n - k + 1) ** 2 * (n - k + 2) ** 2)


def _R2_1B(n, k):
    return -_div(373248 * k ** 4 * (2 * n + 3), (n - k + 1) * (n - k + 2))


def _R1_2B(n, k):
    return _div(16 * k ** 2 * (4 * n - 4 * k + 3) ** 2
                * (8 * k * n - 3 * n - 8 * k ** 2 + 18 * k - 6),
                (n - k + 1) ** 2 * (n - k + 2) ** 2)


def _R2_2B(n, k):
    return -_div(8192 * k ** 4 * (2 * n + 3), (n - k + 1) * (n - k + 2))


def _R1_3B(n, k):
    return _div(9 * k ** 2 * (3 * n - 3 * k + 2) ** 2
                * (3 * n ** 2 + 9 * n - 3 * k ** 2 + 2 * k + 6),
                (n - k + 1) ** 2 * (n - k + 2) ** 2)


def _R2_3B(n, k):
    return -_div(1458 * k ** 4 * (2 * n + 3), (n - k + 1) * (n - k + 2))


WZ_LEMMAS: Dict[str, WZLemma] = {
    "lemma_1B": WZLemma("lemma_1B", Fraction(1, 6), Fraction(5, 6), -432, _EULER["1B"][0],
                        24, (18, 54, 49), 186624, _R1_1B, _R2_1B, (1, -312)),
    "lemma_2B": WZLemma("lemma_2B", Fraction(1, 4), Fraction(3, 4), -64, _EULER["2B"][0],
                        8, (8, 24, 21), 4096, _R1_2B, _R2_2B, (1, -40)),
    "lemma_3B": WZLemma("lemma_3B", Fraction(1, 3), Fraction(2, 3), -27, _EULER["3B"][0],
                        3, (9, 27, 23), 729, _R1_3B, _R2_3B, (1, -15)),
}


def wz_sides(lemma_id: str, n_max: int) -> Tuple[List[Fraction], List[int]]:
    """(C^n sum_k ((p)_k (q)_(n-k)/(k!(n-k)!))^2, sum_k e(k) C(n+k,n-k) C^(n-k)) for n <= n_max."""
    L = WZ_LEMMAS[lemma_id]
    u = [pochhammer(L.p, k) / math.factorial(k) for k in range(n_max + 1)]
    v = [pochhammer(L.q, k) / math.factorial(k) for k in range(n_max + 1)]
    u2 = [x * x for x in u]
    v2 = [x * x for x in v]
    left = [sum(u2[k] * v2[n - k] for k in range(n + 1)) * Fraction(L.C) ** n
            for n in range(n_max + 1)]
    right = coefficients(CoefficientKind("euler_double", lemma_id[-2:]), n_max + 1)
    return left, right


def recurrence_residuals(lemma_id: str, seq: Sequence) -> List:
    """(n+2)^3 a(n+2) + m(2n+3)(x n^2 + y n + z) a(n+1) + c0 (n+1)^3 a(n)."""
    L = WZ_LEMMAS[lemma_id]
    x, y, z = L.quad
    return [(n + 2) ** 3 * seq[n + 2] + L.m * (2 * n + 3) * (x * n * n + y * n + z) * seq[n + 1]
            + L.c0 * (n + 1) ** 3 * seq[n] for n in range(len(seq) - 2)]


def _column_identity(L: WZLemma, which: int, k: int):
    """Certificate identity divided by F(n, k), as an exact rational function of n."""
    from .picard_fuchs import X, RationalFunction
    n = X
    x, y, z = L.quad
    if which == 1:
        r1 = lambda m: ((m - k + L.q) / (m - k + 1)) ** 2 * L.C    # noqa: E731
        s = ((n - k) * (k + L.p) / ((k + 1) * (n - k - 1 + L.q))) ** 2
        R = L.R1
    else:
        r1 = lambda m: (m + k + 1) / (m - k + 1) * L.C             # noqa: E731
        s = (n - k) * (n + k + 1) * Fraction(L.e(k + 1), L.e(k) * (2 * k + 1) * (2 * k + 2) * L.C)
        R = L.R2
    lhs = ((n + 2) ** 3) * r1(n) * r1(n + 1) + L.m * (2 * n + 3) * (x * n * n + y * n + z) * r1(n) \
        + L.c0 * (n + 1) ** 3
    rhs = R(n, k + 1) * s - R(n, k)
    return RationalFunction.coerce(lhs - rhs)


def _F(L: WZLemma, which: int, n: int, k: int) -> Fraction:
    if k < 0 or k > n:
        return Fraction(0)
    if which == 1:
        t = pochhammer(L.p, k) * pochhammer(L.q, n - k) / (math.factorial(k) * math.factorial(n - k))
        return t * t * Fraction(L.C) ** n
    return Fraction(L.e(k) * math.comb(n + k, n - k) * L.C ** (n - k))


def check_wz_lemma(lemma_id: str, n_max: int = 200, certificate_grid: int = 60) -> dict:
    """Exact checks of a WZ lemma: sides agree, both satisfy the recurrence, certificates telescope.

    Certificates are checked two ways: for each fixed k the identity divided
    by F(n, k) must vanish as a rational function of n (this also covers the
    k = n boundary, where R(n, k+1) F(n, k+1) is a removable 0 * infinity), and
    the undivided identity is evaluated directly at every grid point with k < n.
    """
    if lemma_id not in WZ_LEMMAS:
        raise KeyError(f"unknown lemma {lemma_id!r}")
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    L = WZ_LEMMAS[lemma_id]
    t0 = time.perf_counter()
    left, right = wz_sides(lemma_id, n_max)
    sides_equal = all(Fraction(a) == b for a, b in zip(left, right))
    initial_ok = (left[0], left[1]) == L.initial and (right[0], right[1]) == L.initial
    rec_left = all(r == 0 for r in recurrence_residuals(lemma_id, left))
    rec_right = all(r == 0 for r in recurrence_residuals(lemma_id, right))
    x, y, z = L.quad

    cert = {}
    for which, R in ((1, L.R1), (2, L.R2)):
        columns = all(_column_identity(L, which, k).is_zero() for k in range(certificate_grid + 1))
        grid_ok = True
        for n in range(certificate_grid + 1):
            for k in range(n):
                F = lambda a, b: _F(L, which, a, b)    # noqa: E731
                lhs = ((n + 2) ** 3 * F(n + 2, k) + L.m * (2 * n + 3) * (x * n * n + y * n + z) * F(n + 1, k)
                       + L.c0 * (n + 1) ** 3 * F(n, k))
                rhs = R(n, k + 1) * F(n, k + 1) - R(n, k) * F(n, k)
                if lhs != rhs:
                    grid_ok = False
                    break
            if not grid_ok:
                break
        cert[f"R{which}"] = {"columns": columns, "grid": grid_ok}
    ok = sides_equal and initial_ok and rec_left and rec_right and all(
        c["columns"] and c["grid"] for c in cert.values())
    return {"id": lemma_id, "verdict": "pass" if ok else "fail", "n_max": n_max,
            "certificate_grid": certificate_grid, "sides_equal": sides_equal,
            "initial_values": [int(right[0]), int(right[1])], "initial_ok": initial_ok,
            "recurrence_left": rec_left, "recurrence_right": rec_right, "certificates": cert,
            "wall_time": round(time.perf_counter() - t0, 3)}
