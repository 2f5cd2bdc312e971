"""Pure-Python reference versions of the integer kernels.

The compiled module ``_kernels`` implements the same functions with the same
integer semantics; results must agree bit for bit.  Fixed-point numbers are
integers scaled by 2**W, complex values are (re, im) pairs, and every error
bound is an integer count of units in the last place (ulps).
"""
from math import isqrt



def bs_chudnovsky(a, b):
    """Binary splitting for the Chudnovsky series over terms [a, b).

    Returns (P, Q, T) with sum_{a<=n<b} t_n = T/Q relative to the leading
    product, following the usual P/Q/T recursion.
    """
    if b - a == 1:
        if a == 0:
            P = Q = 1
        else:
            P = (6 * a - 5) * (2 * a - 1) * (6 * a - 1)
            Q = a * a * a * 10939058860032000   # 640320**3 // 24
        T = P * (13591409 + 545140134 * a)
        if a & 1:
            T = -T
        return P, Q, T
    m = (a + b) // 2
    P1, Q1, T1 = bs_chudnovsky(a, m)
    P2, Q2, T2 = bs_chudnovsky(m, b)
    return P1 * P2, Q1 * Q2, Q2 * T1 + P1 * T2


def linear_series_exact(A, B, C, coeffs):
    """Numerator of sum_{n<N} (A n + B) s(n) C^(-n) over the denominator C^(N-1)."""
    acc = 0
    n = 0
    for s in coeffs:
        acc = acc * C + (A * n + B) * s
        n += 1
    return acc


def self_convolution(c):
    """s(n) = sum_k c(k) c(n-k) for n < len(c)."""
    N = len(c)
    out = [0] * N
    for n in range(N):
        acc = 0
        half = (n + 1) // 2
        for k in range(half):
            acc += c[k] * c[n - k]
        acc *= 2
        if n % 2 == 0:
            acc += c[n // 2] * c[n // 2]
        out[n] = acc
    return out


def horner_fixed(qr, qi, W, coeffs):
    """Evaluate sum_n coeffs[n] q^n at q = (qr + i qi)/2^W in fixed point.

    Returns (Sr, Si, err_ulps).  Each step costs one complex floor-product, so
    the error obeys e -> ceil(e |q|) + 2.
    """
    one = 1 << W
    qabs = abs(qr) + abs(qi)
    N = len(coeffs)
    if N == 0:
        return 0, 0, 0
    ar = coeffs[N - 1] << W
    ai = 0
    e = 0
    for n in range(N - 2, -1, -1):
        tr = (ar * qr - ai * qi) >> W
        ti = (ar * qi + ai * qr) >> W
        ar = tr + (coeffs[n] << W)
        ai = ti
        e = ((e * qabs + one - 1) >> W) + 2
    return ar, ai, e


def lambert_fixed(qr, qi, W, k):
    """Sums sum_{1<=n<k} n^m q^n/(1-q^n) for m = 1, 3, 5 in fixed point.

    Requires |q| < 1/2.  Returns a list of three (Sr, Si, err_ulps) triples.
    """
    one = 1 << W
    qabs = abs(qr) + abs(qi)
    Pr, Pi, pe = qr, qi, 0
    S1r = S1i = S3r = S3i = S5r = S5i = 0
    E1 = E3 = E5 = 0
    one2 = one * one
    for n in range(1, k):
        Dr = one - Pr
        Di = -Pi
        den2 = Dr * Dr + Di * Di
        Nr = Pr * Dr + Pi * Di
        Ni = Pi * Dr - Pr * Di
        Ur = (Nr << W) // den2
        Ui = (Ni << W) // den2
        ylow = one - abs(Pr) - abs(Pi) - pe
        if ylow <= 0:
            raise ValueError("|q| too close to 1 for the Lambert kernel")
        ue = (pe * one2 + ylow * ylow - 1) // (ylow * ylow) + 2
        n2 = n * n
        n3 = n2 * n
        n5 = n3 * n2
        S1r += n * Ur
        S1i += n * Ui
        E1 += n * ue
        S3r += n3 * Ur
        S3i += n3 * Ui
        E3 += n3 * ue
        S5r += n5 * Ur
        S5i += n5 * Ui
        E5 += n5 * ue
        tr = (Pr * qr - Pi * qi) >> W
        ti = (Pr * qi + Pi * qr) >> W
        Pr, Pi = tr, ti
        pe = ((pe * qabs + one - 1) >> W) + 2
    return [(S1r, S1i, E1), (S3r, S3i, E3), (S5r, S5i, E5)]


def _ratio_bound(n, num, den):
    """Rational upper bound (rn, rd) of prod |(m+a_i)/(m+b_i)| over m >= n."""
    rn = 1
    rd = 1
    for i in range(len(num)):
        p, q = num[i]
        s, t = den[i]
        # (m + p/q)/(m + s/t) is decreasing in m when p/q > s/t, else bounded by 1
        if p * t > s * q:
            rn *= (n * q + p) * t
            rd *= (n * t + s) * q
    return rn, rd


def hyp_fixed(zr, zi, W, num, den, tol, max_terms):
    """Sum a hypergeometric series at z = (zr + i zi)/2^W in fixed point.

    ``num`` and ``den`` are equally long lists of (p, q) pairs, parameter p/q;
    the n! of the series must be included in ``den`` as (1, 1).  Summation
    stops once the tail, bounded by a geometric majorant, is at most ``tol``
    ulps.  Returns (Sr, Si, err_ulps, tail_ulps, terms).
    """
    one = 1 << W
    zabs = isqrt(zr * zr + zi * zi) + 1     # upper bound on |z| in ulps
    Tr = one
    Ti = 0
    e = 0
    Sr = 0
    Si = 0
    E = 0
    big = 0
    for (p, q) in num + den:
        v = abs(p) // q + 1
        if v > big:
            big = v
    n = 0
    while n < max_terms:
        Sr += Tr
        Si += Ti
        E += e
        N = 1
        D = 1
        for (p, q) in num:
            N *= n * q + p
            D *= q
        for (p, q) in den:
            D *= n * q + p
            N *= q
        if D < 0:
            N = -N
            D = -D
        xr = (Tr * zr - Ti * zi) >> W
        xi = (Tr * zi + Ti * zr) >> W
        e1 = ((e * zabs + one - 1) >> W) + 2
        Tr = (xr * N) // D
        Ti = (xi * N) // D
        aN = N if N >= 0 else -N
        e = (e1 * aN + D - 1) // D + 2
        n += 1
        mag = abs(Tr) + abs(Ti) + e
        if n > big and mag <= tol:
            rn, rd = _ratio_bound(n, num, den)
            rn *= zabs
            rd <<= W
            if rn < rd:
                tail = (mag * rd + (rd - rn) - 1) // (rd - rn)
                if tail <= tol:
                    return Sr, Si, E, tail, n
        if N == 0:
            return Sr, Si, E, 0, n
    raise ArithmeticError("hypergeometric series did not close within max_terms")
