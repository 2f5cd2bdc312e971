"""Rigorous certification of singular values s2(tau) = x.

For tau a root of a tau^2 + b tau + c (primitive, discriminant -d) there is an
explicit integer M with M s2(tau) an algebraic integer of L = Q(j(tau)):

    N  = a c                (norm of omega = a tau)
    M1 = N^2                (leading coefficient of the N-division polynomial)
    M2 = M1 N d
    M6 = |Norm_{L/Q}(e6)|   for a model y^2 = 4x^3 - g2 x - g3 with e4 = g2/60,
                            e6 = g3/140 algebraic integers
    M  = 7 M2 M6

If M x is also integral and every embedding satisfies |M s2(tau_i) - M x_i| < 1
then M s2(tau) = M x, since a nonzero algebraic integer of a degree-n field has
Minkowski norm at least sqrt(n).  Class numbers 1 and 2 only.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

from mpmath import libmp as L
from mpmath import mp

from .modular_forms import S2Undefined, Tau, eisenstein, s2 as s2_value
from .numerics import (AlgebraicNumber, ApproxComplex, DomainError, InsufficientPrecision,
                       QuadraticIrrational, _radd, recognize_quadratic, reduced_forms)

MAX_PREC = 8192


@dataclass(frozen=True)
class CertificationInput:
    tau: QuadraticIrrational
    candidate: AlgebraicNumber
    tau_conj: Optional[QuadraticIrrational] = None
    candidate_conj: Optional[AlgebraicNumber] = None
    g2: Optional[AlgebraicNumber] = None
    g3: Optional[AlgebraicNumber] = None
    D_scale: int = 1
    J: Optional[AlgebraicNumber] = None

    def __post_init__(self):
        if self.tau_conj is not None and self.candidate_conj is None:
            object.__setattr__(self, "candidate_conj", self.candidate.conjugate())
        if self.candidate_conj is not None and self.candidate_conj != self.candidate.conjugate():
            raise ValueError("candidate and its conjugate are not field conjugates")
        if self.g2 is not None and self.g3 is not None:
            if self.g2 ** 3 - self.g3 * self.g3 * 27 == 0:
                raise ValueError("singular model: g2^3 - 27 g3^2 = 0")


@dataclass(frozen=True)
class Multiplier:
    N: int
    d: int
    M1: int
    M2: int
    M6: int

    @property
    def M(self) -> int:
        return 7 * self.M2 * self.M6

    def as_dict(self) -> dict:
        return {"N": self.N, "M1": self.M1, "M2": self.M2, "M6": self.M6,
                "M_digits": len(str(self.M))}


@dataclass
class Certificate:
    input: CertificationInput
    multiplier: Multiplier
    gaps: List[ApproxComplex]
    verdict: str
    precision_bits: int
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def as_dict(self) -> dict:
        t = self.input.tau
        a, b, c = t.form
        out = {"tau": {"a": a, "b": b, "c": c, "d": t.d},
               "candidate": str(self.input.candidate)}
        if self.input.tau_conj is not None:
            a2, b2, c2 = self.input.tau_conj.form
            out["tau_conj"] = {"a": a2, "b": b2, "c": c2, "d": t.d}
            out["candidate_conj"] = str(self.input.candidate_conj)
        out.update(self.multiplier.as_dict())
        out["D_scale"] = self.input.D_scale
        out["gaps"] = [_gap_str(g) for g in self.gaps]
        out["verdict"] = self.verdict
        out["precision_bits"] = self.precision_bits
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)


def _gap_str(g: ApproxComplex) -> dict:
    return {"upper": mp.nstr(mp.make_mpf(g.abs_upper()), 12),
            "radius": mp.nstr(mp.make_mpf(g.err), 5)}


# ---------------------------------------------------------------------------
# exact model

def _is_integral(x: AlgebraicNumber) -> bool:
    if x.is_rational():
        return x.p.denominator == 1
    return x.trace().denominator == 1 and x.norm().denominator == 1


def _nearest_integer(x: ApproxComplex) -> int:
    """The unique integer in a real enclosure of radius < 1/2 (known to be an integer)."""
    if L.mpf_ge(x.err, L.from_rational(1, 2, 53)) or not L.mpf_lt(L.mpf_abs(x.im), L.from_rational(1, 2, 53)):
        raise InsufficientPrecision("enclosure too wide to pin an integer")
    num, den = L.to_rational(x.re)
    k = round(Fraction(int(num), int(den)))
    if not x.contains(k):
        raise ArithmeticError("enclosure contains no integer")
    return k


def _squarefree_divisors(d: int):
    ps = []
    m = d
    p = 2
    while p * p <= m:
        if m % p == 0:
            ps.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        ps.append(m)
    out = [1]
    for p in ps:
        out += [x * p for x in out]
    return sorted(set(out))


def singular_j(tau: QuadraticIrrational, precision_bits: int = 256) -> AlgebraicNumber:
    """Exact j(tau) for class number <= 2, from the Hilbert class polynomial.

    j values are algebraic integers, so the trace and norm over Q are integers
    and are read off enclosures of radius < 1/2.
    """
    forms = reduced_forms(tau.d)
    if len(forms) > 2:
        raise DomainError(f"class number {len(forms)} > 2 for discriminant -{tau.d}")
    red = tau.reduce()[0]
    P = int(precision_bits)
    while True:
        try:
            js = [eisenstein(Tau(f), P).j for f in forms]
            if len(forms) == 1:
                return AlgebraicNumber(_nearest_integer(js[0]))
            t = _nearest_integer(js[0] + js[1])
            n = _nearest_integer(js[0] * js[1])
            break
        except InsufficientPrecision:
            P *= 2
            if P > MAX_PREC:
                raise
    disc = t * t - 4 * n
    for m in _squarefree_divisors(abs(tau.d)) + [None]:
        if m is None:
            roots = (AlgebraicNumber(Fraction(t, 2), Fraction(1, 2), disc),)
            break
        if m > 1 and disc % m == 0 and math.isqrt(disc // m) ** 2 == disc // m:
            k = math.isqrt(disc // m)
            roots = (AlgebraicNumber(Fraction(t, 2), Fraction(k, 2), m),)
            break
    r = roots[0]
    jt = eisenstein(Tau(red), P).j
    return r if jt.intersects(r.embed(P + 16)) else r.conjugate()


def _denominator_primes(values) -> List[int]:
    """Prime factors (trial division; any large cofactor is kept whole) of denominators."""
    out = set()
    for v in values:
        m = v.denominator
        p = 2
        while p * p <= m and p < 10 ** 6:
            if m % p == 0:
                out.add(p)
                while m % p == 0:
                    m //= p
            p += 1 if p == 2 else 2
        if m > 1:
            out.add(m)
    return sorted(out)


def _val(x: Fraction, p: int) -> int:
    """Negative part of the p-adic valuation (0 when p does not divide the denominator)."""
    v = 0
    den = x.denominator
    while den % p == 0:
        den //= p
        v -= 1
    return v


def exact_model(tau: QuadraticIrrational, precision_bits: int = 256,
                D_scale: Optional[int] = None) -> Tuple[AlgebraicNumber, AlgebraicNumber, AlgebraicNumber, int]:
    """(J, g2, g3, D) with g2 = 27J/(J-1) D^2, g3 = 27J/(J-1) D^3.

    D is the least positive integer making e4 = g2/60 and e6 = g3/140
    algebraic integers, unless given.  J = 0 uses the model g2 = 0, g3 = 140.
    """
    j = singular_j(tau, precision_bits)
    J = j / 1728
    if j == 0:
        return J, AlgebraicNumber(0), AlgebraicNumber(140), 1
    if j == 1728:
        raise DomainError("J = 1: e6 = 0 and s2 is undefined")
    gamma = j * 27 / (j - 1728)
    if D_scale is None:
        a4 = gamma / 60
        a6 = gamma / 140
        parts = [(a4.trace(), 2), (a4.norm(), 4), (a6.trace(), 3), (a6.norm(), 6)]
        if gamma.is_rational():
            parts = [(a4.p, 2), (a6.p, 3)]
        D = 1
        for p in _denominator_primes([x for x, _ in parts]):
            e = max(-(_val(x, p)) // w + (1 if (-_val(x, p)) % w else 0) for x, w in parts)
            D *= p ** e
    else:
        D = int(D_scale)
    g2 = gamma * D ** 2
    g3 = gamma * D ** 3
    if not (_is_integral(g2 / 60) and _is_integral(g3 / 140)):
        raise DomainError(f"D_scale = {D} too small: e4 or e6 is not integral")
    return J, g2, g3, D


def build_multiplier(inp: CertificationInput) -> Multiplier:
    a, b, c = inp.tau.form
    d = inp.tau.d
    N = a * c
    M1 = N * N
    M2 = M1 * N * d
    if inp.g3 is None:
        raise ValueError("the model (g2, g3) is required for M6")
    e6 = inp.g3 / 140
    if not _is_integral(e6):
        raise DomainError("e6 = g3/140 is not an algebraic integer; enlarge D_scale")
    M6 = abs(e6.p) if e6.is_rational() else abs(e6.norm())
    if M6 == 0:
        raise DomainError("e6 = 0: s2 undefined")
    return Multiplier(N, d, M1, M2, int(M6))


def make_input(tau, candidate, precision_bits: int = 256, D_scale: Optional[int] = None) -> CertificationInput:
    """Assemble a CertificationInput, locating the conjugate form when h = 2."""
    tau = tau if isinstance(tau, QuadraticIrrational) else QuadraticIrrational.parse(str(tau))
    candidate = AlgebraicNumber.coerce(candidate)
    J, g2, g3, D = exact_model(tau, precision_bits, D_scale)
    forms = reduced_forms(tau.d)
    red = tau.reduce()[0]
    conj = None
    if len(forms) == 2:
        conj = forms[1] if forms[0] == red else forms[0]
    return CertificationInput(tau, candidate, conj, candidate.conjugate() if conj else None,
                              g2, g3, D, J)


# ---------------------------------------------------------------------------
# certification

def _gaps(inp: CertificationInput, M: int, P: int) -> List[ApproxComplex]:
    pts = [(inp.tau, inp.candidate)]
    if inp.tau_conj is not None:
        pts.append((inp.tau_conj, inp.candidate_conj))
    out = []
    for t, x in pts:
        s = s2_value(t, P)
        out.append((s - x.embed(P + 16)) * M)
    return out


def _classify(gaps: List[ApproxComplex]) -> str:
    one = L.fone
    if all(L.mpf_lt(g.abs_upper(), one) for g in gaps):
        return "pass"
    if any(L.mpf_ge(g.abs_lower(), one) for g in gaps):
        return "fail"
    return "inconclusive"


def certify_s2(inp: CertificationInput, precision_bits: Optional[int] = None,
               escalate: bool = True) -> Certificate:
    """Gap test |M s2(tau_i) - M x_i| < 1 in every embedding.

    Precision is doubled while the verdict is inconclusive (up to MAX_PREC)
    when ``escalate`` is set.
    """
    mult = build_multiplier(inp)
    M = mult.M
    notes = []
    if not _is_integral(inp.candidate * M):
        notes.append("M x is not an algebraic integer, so x cannot equal s2(tau)")
        return Certificate(inp, mult, [], "fail", 0, notes)
    P = int(precision_bits) if precision_bits else max(128, M.bit_length() + 96)
    while True:
        try:
            gaps = _gaps(inp, M, P)
            verdict = _classify(gaps)
        except S2Undefined:
            raise DomainError("s2 undefined at tau (E6 = 0)") from None
        if verdict != "inconclusive" or not escalate:
            return Certificate(inp, mult, gaps, verdict, P, notes)
        P *= 2
        if P > MAX_PREC:
            raise InsufficientPrecision("precision exhausted before the gap test resolved")


_HEIGHTS = (10 ** 4, 10 ** 9, 10 ** 16, 10 ** 28, 10 ** 40)


def recognize_s2(tau: QuadraticIrrational, conj: Optional[QuadraticIrrational] = None,
                 precision_bits: Optional[int] = None) -> AlgebraicNumber:
    """Guess s2(tau) as an element of degree <= 2, consistent with s2 at the conjugate form."""
    for H in _HEIGHTS:
        P = max(precision_bits or 0, int(4 * math.log2(H)) + 96)
        x = s2_value(tau, P).real
        try:
            cand = recognize_quadratic(x, H, confirm=s2_value(tau, 2 * P).real)
        except InsufficientPrecision:
            continue
        if cand is None:
            continue
        if conj is None:
            if cand.is_rational():
                return cand
            continue
        other = recognize_quadratic(s2_value(conj, P).real, H, confirm=s2_value(conj, 2 * P).real)
        if other is not None and other == cand.conjugate():
            return cand
    raise ArithmeticError(f"could not recognize s2 at {tau} as a degree <= 2 number")


def guess_and_certify(tau, precision_bits: Optional[int] = None) -> Certificate:
    tau = tau if isinstance(tau, QuadraticIrrational) else QuadraticIrrational.parse(str(tau))
    forms = reduced_forms(tau.d)
    if len(forms) > 2:
        raise DomainError(f"class number {len(forms)} > 2")
    red = tau.reduce()[0]
    conj = None
    if len(forms) == 2:
        conj = forms[1] if forms[0] == red else forms[0]
    cand = recognize_s2(tau, conj, precision_bits)
    return certify_s2(make_input(tau, cand), precision_bits)
