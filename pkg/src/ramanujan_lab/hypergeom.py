"""Hypergeometric series with rigorous enclosures.

pFq (p = q + 1) is summed in fixed point by ``kernels.hyp_fixed``; the tail is
closed by a geometric majorant built from an exact rational bound on the term
ratio.  A radius on z is propagated with the derivative of the positive
majorant series, which is itself a hypergeometric series evaluated at |z|.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from mpmath import libmp as L
from mpmath import mp

from . import kernels
from .numerics import (ApproxComplex, DomainError, _r, _radd, _rdiv, _rmul, _rpow2,
                       RAD_PREC)

_GUARD = 24


def pochhammer(alpha, n: int) -> Fraction:
    """Rising factorial (alpha)_n, exact."""
    alpha = Fraction(alpha)
    out = Fraction(1)
    for i in range(int(n)):
        out *= alpha + i
    return out


@dataclass(frozen=True)
class HGParams:
    a: Fraction
    b: Fraction
    c: Fraction

    def __post_init__(self):
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.c.denominator == 1 and self.c <= 0:
            raise ValueError("c must not be a non-positive integer")

    def shifted(self) -> "HGParams":
        return HGParams(self.a + 1, self.b + 1, self.c + 1)

    def coefficient(self, n: int) -> Fraction:
        return pochhammer(self.a, n) * pochhammer(self.b, n) / (pochhammer(self.c, n) * pochhammer(1, n))


def _pairs(xs: Iterable[Fraction]):
    return [(x.numerator, x.denominator) for x in map(Fraction, xs)]


MAX_TERMS = 400_000


def _extra_bits(gap: float) -> int:
    # per-term rounding error settles near 4/(1-|z|) ulps and the geometric
    # tail bound multiplies it by another 1/(1-|z|); widen tol and W to match
    return 6 + 2 * max(0, math.ceil(-math.log2(max(gap, 1e-300))))


def _term_budget(W: int, gap: float) -> int:
    """Terms needed for |z|^n n^k < 2^-W, or DomainError if beyond MAX_TERMS."""
    need = 50 * W + 1000 + int(2 * W / max(gap, 1e-300))
    if need > MAX_TERMS:
        raise DomainError(f"|z| = 1 - {gap:.3g} is too close to the unit circle "
                          f"(would need about {need} terms)")
    return need


def _series_fixed(num: Sequence[Fraction], den: Sequence[Fraction], z: ApproxComplex, prec: int):
    """Midpoint sum of the pFq at z (exact fixed-point input), no radius handling."""
    gap = 1.0 - float(mp.make_mpf(z.abs_upper()))
    extra = _extra_bits(gap)
    W = prec + _GUARD + extra
    zr = int(L.to_int(L.mpf_shift(z.re, W), "n"))
    zi = int(L.to_int(L.mpf_shift(z.im, W), "n"))
    n_ = _pairs(num)
    d_ = _pairs(list(den) + [1])
    if len(n_) != len(d_):
        raise ValueError("need p = q + 1 parameters")
    Sr, Si, E, tail, terms = kernels.hyp_fixed(zr, zi, W, n_, d_, 1 << extra, _term_budget(W, gap))
    re_ = L.from_man_exp(Sr, -W, prec + 8, "n")
    im_ = L.from_man_exp(Si, -W, prec + 8, "n")
    mag = L.mpc_abs((re_, im_), RAD_PREC, "u")
    err = _radd(_rmul(_r(E + tail), _rpow2(-W)), _rmul(mag, _rpow2(-prec - 6)))
    return ApproxComplex(re_, im_, err, prec + 8), (zr, zi, W), terms


def _majorant_derivative(num, den, R) -> tuple:
    """Upper bound on sup_{|w| <= R} |d/dw pFq(w)| via the positive majorant.

    d/dw sum (|a|)_n/(b)_n w^n/n! = prod|a|/prod b * pFq(|a|+1; b+1; R).
    Requires every lower parameter to be positive.
    """
    if any(Fraction(b) <= 0 for b in den):
        raise DomainError("radius propagation needs positive lower parameters")
    an = [abs(Fraction(a)) for a in num]
    lead = Fraction(1)
    for a in an:
        lead *= a
    for b in den:
        lead /= Fraction(b)
    if lead == 0:
        return L.fzero
    gap = 1.0 - float(mp.make_mpf(R))
    if gap <= 0:
        raise DomainError("|z| too close to 1")
    extra = _extra_bits(gap)
    W = 64 + extra
    # R rounded up to W bits, all terms positive: the fixed-point sum plus its
    # error count is an upper bound
    Rw = int(L.to_int(L.mpf_shift(R, W), "c")) + 1
    if Rw >= 1 << W:
        raise DomainError("|z| too close to 1")
    Sr, _, E, tail, _ = kernels.hyp_fixed(Rw, 0, W, _pairs([a + 1 for a in an]),
                                          _pairs([Fraction(b) + 1 for b in den] + [1]),
                                          1 << extra, _term_budget(W, gap))
    val = _rmul(_r(Sr + E + tail + 1), _rpow2(-W))
    return _rmul(val, _r(lead))


def hyp_pfq(num: Sequence, den: Sequence, z, precision_bits: int) -> ApproxComplex:
    """Enclosure of pFq(num; den; z) for p = q + 1 and |z| + rad(z) < 1."""
    P = int(precision_bits)
    num = [Fraction(a) for a in num]
    den = [Fraction(b) for b in den]
    for b in den:
        if b.denominator == 1 and b <= 0:
            raise ValueError("lower parameter is a non-positive integer")
    if not isinstance(z, ApproxComplex):
        z = ApproxComplex.from_exact(z, P + _GUARD)
    R = z.abs_upper()
    if not L.mpf_lt(R, L.fone):
        raise DomainError("|z| + err must be < 1; transform the argument first")
    mid, (zr, zi, W), _ = _series_fixed(num, den, z, P + 8)
    # distance from z to the fixed-point argument actually summed
    zq = ApproxComplex(L.from_man_exp(zr, -W), L.from_man_exp(zi, -W), L.fzero, W + 8)
    d = ApproxComplex._sub_raw(z, zq)[2]
    shift = _radd(d, z.err)
    if L.mpf_sign(shift) > 0:
        R2 = _radd(R, _rpow2(-W))
        lip = _majorant_derivative(num, den, R2)
        mid = mid.with_err(_rmul(lip, shift))
    return mid


def hyp3f2(numerators: Sequence, denominators: Sequence, z, precision_bits: int) -> ApproxComplex:
    if len(numerators) != 3 or len(denominators) != 2:
        raise ValueError("3F2 needs three upper and two lower parameters")
    return hyp_pfq(numerators, denominators, z, precision_bits)


def _as_params(p) -> HGParams:
    if isinstance(p, HGParams):
        return p
    return HGParams(*p)


def _ball(z, P):
    return z if isinstance(z, ApproxComplex) else ApproxComplex.from_exact(z, P + _GUARD)


def pfaff_preferred(z: ApproxComplex) -> bool:
    """True when z/(z-1) is strictly smaller than z, i.e. |z - 1| > 1."""
    w = z - 1
    return L.mpf_gt(w.abs_lower(), L.fone)


def hyp2f1(p, z, precision_bits: int, transform: str = "auto") -> ApproxComplex:
    """2F1(a, b; c; z).

    ``transform`` = "auto" applies Pfaff, (1-z)^(-a) 2F1(a, c-b; c; z/(z-1)),
    when that shrinks the argument; this also continues 2F1 to |z| >= 1 with
    Re z < 1/2 (principal branch).  "none" forces direct summation.
    """
    p = _as_params(p)
    P = int(precision_bits)
    z = _ball(z, P)
    if transform == "pfaff" or (transform == "auto" and pfaff_preferred(z)):
        w = z / (z - 1)
        if not L.mpf_lt(w.abs_upper(), L.fone):
            raise DomainError("argument outside the region reachable by Pfaff")
        G = hyp_pfq([p.a, p.c - p.b], [p.c], w, P + 8)
        return ((1 - z).log() * (-p.a)).exp() * G
    return hyp_pfq([p.a, p.b], [p.c], z, P)


def hyp2f1_derivative(p, z, precision_bits: int) -> ApproxComplex:
    p = _as_params(p)
    return hyp2f1(p.shifted(), z, precision_bits) * (p.a * p.b / p.c)


def d_dz_F_squared(p, z, precision_bits: int) -> ApproxComplex:
    """d/dz [2F1(a,b;c;z)^2] = 2 F (ab/c) 2F1(a+1, b+1; c+1; z)."""
    p = _as_params(p)
    P = int(precision_bits)
    z = _ball(z, P)
    F = hyp2f1(p, z, P + 8)
    return F * hyp2f1_derivative(p, z, P + 8) * 2


def series_coefficients(p, N: int):
    """Exact coefficients of 2F1(a,b;c;z) for n < N."""
    p = _as_params(p)
    out = []
    c = Fraction(1)
    for n in range(N):
        out.append(c)
        c = c * (p.a + n) * (p.b + n) / ((p.c + n) * (n + 1))
    return out


# ---------------------------------------------------------------------------
# transformation identities

def _power(x: ApproxComplex, e: Fraction) -> ApproxComplex:
    return (x.log() * e).exp()


def check_transformation(kind: str, precision_bits: int = 256, **inputs) -> ApproxComplex:
    """Residual of a classical identity; the enclosure must contain 0.

    euler:  a, b, c, z        2F1(a,b;c;z) - (1-z)^(c-a-b) 2F1(c-a,c-b;c;z)
    pfaff:  a, b, c, z        2F1(a,b;c;z) - (1-z)^(-a) 2F1(a,c-b;c;z/(z-1))
    clausen: a, b, z          2F1(a,b;a+b+1/2;z)^2 - 3F2(2a,2b,a+b;2a+2b,a+b+1/2;z)
    relation_2A: tau (or v, t)  (t/(t-1))^(1/4) 2F1(1/8,3/8;1;1/v) - 2F1(1/4,1/4;1;1/t)
    relation_3A: tau (or w, u)  (u/(u-1))^(1/3) 2F1(1/6,1/3;1;1/w) - 2F1(1/3,1/3;1;1/u)

    For the two relations ``power=True`` returns the root-of-unity free residual
    (t/(t-1)) F^4 - G^4 (resp. (u/(u-1)) F^3 - G^3).
    """
    P = int(precision_bits)
    W = P + _GUARD
    if kind in ("euler", "pfaff"):
        a, b, c = (Fraction(inputs[k]) for k in ("a", "b", "c"))
        z = _ball(inputs["z"], W)
        lhs = hyp2f1((a, b, c), z, W, transform="none")
        if kind == "euler":
            rhs = _power(1 - z, c - a - b) * hyp2f1((c - a, c - b, c), z, W, transform="none")
        else:
            rhs = _power(1 - z, -a) * hyp2f1((a, c - b, c), z / (z - 1), W, transform="none")
        return lhs - rhs
    if kind == "clausen":
        a, b = Fraction(inputs["a"]), Fraction(inputs["b"])
        z = _ball(inputs["z"], W)
        c = a + b + Fraction(1, 2)
        F = hyp2f1((a, b, c), z, W, transform="none")
        G = hyp3f2([2 * a, 2 * b, a + b], [2 * a + 2 * b, c], z, W)
        return F * F - G
    if kind in ("relation_2A", "relation_3A"):
        from .modular_forms import uniformizer
        two = kind == "relation_2A"
        if "tau" in inputs:
            tau = inputs["tau"]
            x = uniformizer("2A" if two else "3A", tau, W)
            y = uniformizer("2B" if two else "3B", tau, W)
        else:
            x = _ball(inputs["v" if two else "w"], W)
            y = _ball(inputs["t" if two else "u"], W)
        if two:
            pf, pg, root = (Fraction(1, 8), Fraction(3, 8), 1), (Fraction(1, 4), Fraction(1, 4), 1), 4
        else:
            pf, pg, root = (Fraction(1, 6), Fraction(1, 3), 1), (Fraction(1, 3), Fraction(1, 3), 1), 3
        F = hyp2f1(pf, x.reciprocal(), W)
        G = hyp2f1(pg, y.reciprocal(), W)
        ratio = y / (y - 1)
        if inputs.get("power"):
            return ratio * F ** root - G ** root
        return _power(ratio, Fraction(1, root)) * F - G
    raise ValueError(f"unknown transformation {kind!r}")
