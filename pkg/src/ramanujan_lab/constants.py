"""Rigorous fixed-point pi.

pi is computed from the Chudnovsky series

    426880 sqrt(10005) / pi = sum_n (6n)!/((3n)! n!^3) (545140134 n + 13591409) (-640320)^(-3n)

with an explicit tail bound, either by binary splitting or by plain exact
summation.  A Machin arctangent formula provides an independent oracle.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Tuple

from . import kernels
from .numerics import ApproxComplex, _r, _radd, _rmul, _rpow2

C3 = 640320 ** 3
LIN_A, LIN_B = 545140134, 13591409
CHUD_K = 426880
# lower bound for the partial sums (the first term dominates, the rest is tiny)
_S_LOW = 13591409 - 1


def _chud_terms(W: int) -> Tuple[int, Fraction]:
    """Number of terms N and a rational tail bound (absolute) for precision W."""
    target = Fraction(1, 1 << (W + 2))
    N = max(2, W // 47 + 2)
    while True:
        # |t_N| <= (An+B) (1728/C3)^N and the term ratio is at most rho
        tN = Fraction(LIN_A * N + LIN_B) * Fraction(1728, C3) ** N
        rho = Fraction(1728, C3) * (1 + Fraction(LIN_A, LIN_B + LIN_A * N))
        tail = tN / (1 - rho)
        if tail <= target:
            return N, tail
        N += 1


def chudnovsky_coeffs(N: int):
    """(6n)!/((3n)! n!^3) for n < N via the exact term ratio."""
    out = [1]
    c = 1
    for n in range(N - 1):
        c = c * 8 * (6 * n + 1) * (6 * n + 3) * (6 * n + 5) // ((n + 1) ** 3)
        out.append(c)
    return out


def pi_fixed(W: int, method: str = "split") -> Tuple[int, int]:
    """Return (P, e) with |pi - P/2^W| <= e/2^W.

    ``method`` is "split" (binary splitting) or "plain" (exact Horner summation
    of the partial sum); both give a rigorous bound.
    """
    N, tail = _chud_terms(W)
    if method == "split":
        _, Q, T = kernels.bs_chudnovsky(0, N)
        num, den = T, Q                   # partial sum S_N = num/den
    elif method == "plain":
        coeffs = chudnovsky_coeffs(N)
        num = kernels.linear_series_exact(LIN_A, LIN_B, -C3, coeffs)
        den = (-C3) ** (N - 1)
        if den < 0:
            num, den = -num, -den
    else:
        raise ValueError(f"unknown method {method!r}")
    root = math.isqrt(10005 << (2 * W))    # floor(sqrt(10005) 2^W), error < 1 ulp
    P = (CHUD_K * root * den) // num
    # rounding: sqrt floor scaled by K/S < 1, final floor < 1
    # truncation: |K/S - K/S_N| <= K sqrt(10005) tail / (S S_N) <= 4 tail / S_N
    trunc = (4 * tail / _S_LOW) * (1 << W)
    e = 2 + math.ceil(trunc) + 1
    return P, e


@lru_cache(maxsize=64)
def pi_ball(prec: int) -> ApproxComplex:
    """Enclosure of pi at ``prec`` bits."""
    W = prec + 16
    P, e = pi_fixed(W)
    v = ApproxComplex.from_exact(Fraction(P, 1 << W), prec)
    return v.with_err(_rmul(_r(e), _rpow2(-W)))


def machin_pi_fixed(W: int) -> Tuple[int, int]:
    """Independent oracle: pi = 16 atan(1/5) - 4 atan(1/239), fixed point.

    Returns (P, e) with |pi - P/2^W| <= e/2^W.
    """
    G = 16
    Wg = W + G

    def atan_inv(x):
        one = 1 << Wg
        total = 0
        term = one // x
        x2 = x * x
        k = 0
        n_terms = 0
        while term:
            t = term // (2 * k + 1)
            total += -t if k & 1 else t
            term //= x2
            k += 1
            n_terms += 1
        # each floor loses < 1 ulp; the omitted tail is below the last term
        return total, 2 * n_terms + 2

    a, ea = atan_inv(5)
    b, eb = atan_inv(239)
    val = 16 * a - 4 * b
    err = 16 * ea + 4 * eb
    P = val >> G
    e = (err >> G) + 2
    return P, e


def pi_mpmath(prec: int):
    """Convenience: mpmath value of pi from the rigorous fixed-point route."""
    return pi_ball(prec).mid.real
