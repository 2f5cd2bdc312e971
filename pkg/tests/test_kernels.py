"""The compiled kernels and the pure-Python fallback must agree bit for bit."""
import math
import os
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from ramanujan_lab import _kernels_py as pure
from ramanujan_lab import kernels

compiled = pytest.importorskip("ramanujan_lab._kernels") if kernels.COMPILED else None
needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled kernels not built")

W = 256


def test_backend_flag_matches_import():
    assert kernels.BACKEND == ("cython" if kernels.COMPILED else "python")


def test_pure_env_forces_fallback():
    code = "from ramanujan_lab import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, RAMANUJAN_LAB_PURE="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "python"


@needs_compiled
@given(st.integers(0, 300), st.integers(1, 60))
@settings(max_examples=40, deadline=None)
def test_bs_chudnovsky_agrees(a, n):
    assert compiled.bs_chudnovsky(a, a + n) == pure.bs_chudnovsky(a, a + n)


@needs_compiled
@given(st.lists(st.integers(-10**30, 10**30), min_size=1, max_size=60),
       st.integers(-10**6, 10**6), st.integers(-10**6, 10**6),
       st.integers(2, 10**12))
@settings(max_examples=60, deadline=None)
def test_linear_series_and_convolution_agree(c, A, B, C):
    assert compiled.linear_series_exact(A, B, C, c) == pure.linear_series_exact(A, B, C, c)
    assert compiled.self_convolution(c) == pure.self_convolution(c)


@needs_compiled
@given(st.integers(-(1 << (W - 2)), 1 << (W - 2)), st.integers(-(1 << (W - 2)), 1 << (W - 2)),
       st.lists(st.integers(-1000, 1000), max_size=40))
@settings(max_examples=60, deadline=None)
def test_fixed_point_kernels_agree(qr, qi, coeffs):
    assert compiled.horner_fixed(qr, qi, W, coeffs) == pure.horner_fixed(qr, qi, W, coeffs)
    qr, qi = qr >> 2, qi >> 2           # Lambert needs |q| < 1/2
    assert compiled.lambert_fixed(qr, qi, W, 20) == pure.lambert_fixed(qr, qi, W, 20)


@needs_compiled
def test_hyp_kernel_agrees():
    z = (-(3 << W) // 10, (1 << W) // 5)
    args = (z[0], z[1], W, [(1, 4), (1, 4)], [(1, 1), (1, 1)], 1 << 20, 10**5)
    assert compiled.hyp_fixed(*args) == pure.hyp_fixed(*args)


def test_self_convolution_definition():
    c = [math.comb(2 * n, n) for n in range(12)]
    # sum_k C(2k,k) C(2n-2k,n-k) = 4^n
    assert kernels.self_convolution(c) == [4 ** n for n in range(12)]


def test_linear_series_exact_is_horner():
    s = [1, 2, 6, 20]
    A, B, C = 3, 1, 7
    expect = sum((A * n + B) * s[n] * C ** (3 - n) for n in range(4))
    assert kernels.linear_series_exact(A, B, C, s) == expect
