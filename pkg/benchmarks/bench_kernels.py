"""Compare the compiled kernels with the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--repeat N] [--json]

Every workload is run on both backends; outputs must agree exactly before a
timing is reported.
"""
import argparse
import json
import math
import sys
import timeit
from fractions import Fraction

from ramanujan_lab import _kernels_py as pure

try:
    from ramanujan_lab import _kernels as compiled
except ImportError:
    compiled = None

W = 1024


def _fixed(x: Fraction) -> int:
    return (x.numerator << W) // x.denominator


def workloads():
    binom = [math.comb(2 * n, n) for n in range(400)]
    q = _fixed(Fraction(1, 535))              # |q| at tau = i, roughly e^(-2 pi)
    eis = [n ** 3 for n in range(120)]
    z = _fixed(Fraction(-3, 10)), _fixed(Fraction(1, 5))
    hyp_num = [(1, 4), (1, 4)]
    hyp_den = [(1, 1), (1, 1)]
    return {
        "bs_chudnovsky(0, 2000)": lambda k: k.bs_chudnovsky(0, 2000),
        "linear_series_exact(n=400)": lambda k: k.linear_series_exact(26390, 1103, 396 ** 4, binom),
        "self_convolution(n=400)": lambda k: k.self_convolution(binom),
        "horner_fixed(n=120)": lambda k: k.horner_fixed(q, 0, W, eis),
        "lambert_fixed(k=80)": lambda k: k.lambert_fixed(q, 0, W, 80),
        "hyp_fixed(2F1, z=-0.3+0.2i)": lambda k: k.hyp_fixed(z[0], z[1], W, hyp_num, hyp_den,
                                                              1 << 24, 100000),
    }


def run(repeat: int):
    rows = []
    for name, fn in workloads().items():
        ref = fn(pure)
        t_py = min(timeit.repeat(lambda: fn(pure), number=1, repeat=repeat))
        row = {"kernel": name, "python_s": t_py}
        if compiled is not None:
            if fn(compiled) != ref:
                raise SystemExit(f"{name}: backends disagree")
            t_c = min(timeit.repeat(lambda: fn(compiled), number=1, repeat=repeat))
            row.update(cython_s=t_c, speedup=t_py / t_c)
        rows.append(row)
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    rows = run(args.repeat)
    if args.json:
        print(json.dumps(rows, indent=2))
        return
    if compiled is None:
        print("compiled kernels not built; timing the pure-Python backend only", file=sys.stderr)
    print(f"{'kernel':<30} {'python (ms)':>12} {'cython (ms)':>12} {'speedup':>8}")
    for r in rows:
        c = f"{r['cython_s'] * 1e3:12.3f} {r['speedup']:7.2f}x" if "cython_s" in r else ""
        print(f"{r['kernel']:<30} {r['python_s'] * 1e3:12.3f} {c}")


if __name__ == "__main__":
    main()
