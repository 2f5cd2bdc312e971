"""Command-line entry point: ``ramanujan-lab <subcommand> ...``.

Exit status is 0 when every requested verdict passes, 1 when any check fails
or is inconclusive (or the input lies outside a routine's domain) and 2 on
usage errors.  Reports contain no timings so reruns are byte-identical.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional, Sequence

from . import __version__

PREC_ENV = "RAMANUJAN_LAB_PREC"
DEFAULT_PREC = 256
DEFAULT_TOL_DIGITS = 50


class UsageError(Exception):
    pass


def default_precision() -> int:
    raw = os.environ.get(PREC_ENV)
    if not raw:
        return DEFAULT_PREC
    try:
        v = int(raw)
    except ValueError:
        raise UsageError(f"{PREC_ENV} must be an integer number of bits, got {raw!r}") from None
    if v < 32:
        raise UsageError(f"{PREC_ENV} must be at least 32")
    return v


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return v


def _nonnegative_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("expected a non-negative integer")
    return v


def _tau(text: str):
    from .numerics import QuadraticIrrational
    try:
        return QuadraticIrrational.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad tau {text!r}: {exc}") from None


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    # accepted before or after the subcommand; the subcommand copy must not
    # overwrite a value given up front, hence SUPPRESS defaults there
    g = argparse.ArgumentParser(add_help=False)
    g.add_argument("--json", action="store_true", help="machine-readable output",
                   **({"default": argparse.SUPPRESS} if suppress else {}))
    g.add_argument("--jobs", type=_positive_int, help="worker processes",
                   default=argparse.SUPPRESS if suppress else 1)
    return g


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags(True)
    p = argparse.ArgumentParser(prog="ramanujan-lab", parents=[_global_flags(False)],
                                description="Rigorous checks of Ramanujan-type series for 1/pi.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    v = sub.add_parser("verify-series", parents=[common], help="verify catalog series")
    v.add_argument("--catalog", metavar="FILE", help="catalog JSON (default: built-in)")
    v.add_argument("--id", action="append", dest="ids", metavar="ID",
                   help="series or identity id (repeatable; default: all)")
    v.add_argument("--tol", type=_positive_int, default=DEFAULT_TOL_DIGITS,
                   metavar="DIGITS", help="tolerance in decimal digits (default 50)")
    v.add_argument("--prec", type=_positive_int, metavar="BITS")

    s = sub.add_parser("s2", parents=[common], help="enclose s2(tau)")
    s.add_argument("--tau", type=_tau, required=True, metavar="a,b,c")
    s.add_argument("--prec", type=_positive_int, metavar="BITS")

    c = sub.add_parser("certify", parents=[common], help="certify an exact value of s2(tau)")
    c.add_argument("--tau", type=_tau, required=True, metavar="a,b,c")
    c.add_argument("--prec", type=_positive_int, metavar="BITS")
    c.add_argument("--candidate", metavar="EXPR",
                   help='e.g. "5/14" or "(21-5*sqrt(2))/46"; guessed when omitted')

    d = sub.add_parser("pi", parents=[common], help="digits of pi")
    d.add_argument("--digits", type=_nonnegative_int, required=True, metavar="N")
    d.add_argument("--series", metavar="ID", default="chudnovsky_1_1")

    f = sub.add_parser("derive-pf", parents=[common], help="Picard-Fuchs derivation report")
    f.add_argument("--case", required=True, choices=("1B", "2B", "2C", "3B"))

    from .suites import SUITES
    k = sub.add_parser("check-identities", parents=[common], help="run property suites")
    k.add_argument("--suite", action="append", choices=SUITES,
                   help="suite to run (repeatable; default: all)")
    k.add_argument("--prec", type=_positive_int, metavar="BITS")
    return p


# ---------------------------------------------------------------------------
# output helpers

def _emit(out, text: str):
    out.write(text)
    if not text.endswith("\n"):
        out.write("\n")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


def _strip_timing(d: dict) -> dict:
    return {k: v for k, v in d.items() if k != "wall_time"}


# ---------------------------------------------------------------------------
# subcommands

def cmd_verify_series(args, out) -> int:
    from .series_catalog import catalog, named_identities, read_catalog_file, verify_catalog
    P = args.prec or default_precision()
    tol = 10.0 ** (-args.tol)
    if args.catalog:
        try:
            rows = read_catalog_file(args.catalog)
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"cannot read catalog {args.catalog}: {exc}") from None
        by_id = {r["id"]: r for r in rows}
        if args.ids:
            missing = [i for i in args.ids if i not in by_id]
            if missing:
                raise UsageError(f"unknown id(s) in {args.catalog}: {', '.join(missing)}")
            items = [by_id[i] for i in args.ids]
        else:
            items = rows
    else:
        known = set(catalog()) | set(named_identities())
        if args.ids:
            missing = [i for i in args.ids if i not in known]
            if missing:
                raise UsageError(f"unknown id(s): {', '.join(missing)}")
            items = list(args.ids)
        else:
            items = None
    reports = verify_catalog(items, P, tol, args.jobs)
    ok = all(r.passed for r in reports)
    if args.json:
        _emit(out, _dump({"precision_bits": P, "tol_digits": args.tol,
                          "reports": [_strip_timing(r.as_dict()) for r in reports],
                          "all_pass": ok}))
    else:
        width = max(len(r.id) for r in reports)
        for r in reports:
            line = f"{r.id:<{width}}  {r.verdict:<12}"
            diff = r.difference_bound()
            if diff is not None:
                line += f"  |S - D/pi| <= {diff:.2e}"
            if r.truncation_index is not None:
                line += f"  terms={r.truncation_index}"
            route = r.details.get("route")
            if route and route != "sum":
                line += f"  route={route}"
            _emit(out, line)
        npass = sum(r.passed for r in reports)
        _emit(out, f"{npass}/{len(reports)} pass at {P} bits, tolerance 1e-{args.tol}")
    return 0 if ok else 1


def cmd_s2(args, out) -> int:
    from .modular_forms import S2Undefined, s2
    P = args.prec or default_precision()
    tau = args.tau
    try:
        v = s2(tau, P)
    except S2Undefined as exc:
        _emit(sys.stderr, f"error: {exc}")
        return 1
    digits = max(5, int(P * 0.30103) - 4)
    if args.json:
        _emit(out, _dump({"tau": {"a": tau.a, "b": tau.b, "c": tau.c, "expr": str(tau)},
                          "precision_bits": P, "s2": v.to_string(digits)}))
    else:
        _emit(out, f"s2({tau}) = {v.to_string(digits)}")
    return 0


def cmd_certify(args, out) -> int:
    from .certify import certify_s2, guess_and_certify, make_input
    from .modular_forms import S2Undefined
    from .numerics import DomainError, parse_algebraic
    P = args.prec or default_precision()
    try:
        if args.candidate is not None:
            try:
                cand = parse_algebraic(args.candidate)
            except (ValueError, ZeroDivisionError) as exc:
                raise UsageError(f"bad candidate {args.candidate!r}: {exc}") from None
            cert = certify_s2(make_input(args.tau, cand, P), args.prec)
        else:
            cert = guess_and_certify(args.tau, args.prec)
    except (S2Undefined, DomainError) as exc:
        _emit(sys.stderr, f"error: {exc}")
        return 1
    _emit(out, cert.to_json())
    return 0 if cert.passed else 1


def cmd_pi(args, out) -> int:
    from .series_catalog import catalog, pi_digits
    if args.series != "chudnovsky_1_1" and args.series not in catalog():
        raise UsageError(f"unknown series {args.series!r}")
    text = pi_digits(args.series, args.digits)
    if args.json:
        _emit(out, _dump({"series": args.series, "digits": args.digits, "pi": text}))
    else:
        _emit(out, text)
    return 0


def _pf_report(case: str) -> dict:
    from .picard_fuchs import derive_case
    r = derive_case(case)
    ok4, res4 = r["pullback"]
    alpha, beta, a, b, c = r["params"]
    checks = {"discriminant": r["discriminant_ok"], "J": r["J_ok"],
              "routes_agree": r["routes_agree"], "qpr_identity": r["qpr_identity"],
              "pullback": ok4}
    return {
        "case": case,
        "A": str(r["A"]), "B": str(r["B"]),
        "P": str(r["pqr"].P), "Q": str(r["pqr"].Q), "R": str(r["pqr"].R),
        "ode_p": str(r["theorem_ode"].p), "ode_q": str(r["theorem_ode"].q),
        "pullback": {"alpha": str(alpha), "beta": str(beta),
                     "a": str(a), "b": str(b), "c": str(c), "residual": str(res4)},
        "checks": checks,
        "verdict": "pass" if all(checks.values()) else "fail",
    }


def cmd_derive_pf(args, out) -> int:
    rep = _pf_report(args.case)
    if args.json:
        _emit(out, _dump(rep))
    else:
        pb = rep["pullback"]
        lines = [
            f"case {rep['case']}",
            f"  curve        y^2 = 4x^3 - g2 x - g3,  g2 ~ {rep['A']},  g3 ~ {rep['B']}",
            f"  P, Q, R      {rep['P']} ; {rep['Q']} ; {rep['R']}",
            f"  ODE          y'' + ({rep['ode_p']}) y' + ({rep['ode_q']}) y = 0",
            f"  pullback     xi^{pb['alpha']} (1-xi)^{pb['beta']} 2F1({pb['a']},{pb['b']};{pb['c']};xi)"
            f"  residual {pb['residual']}",
            "  checks       " + ", ".join(f"{k}={'ok' if v else 'FAIL'}"
                                          for k, v in rep["checks"].items()),
            f"  verdict      {rep['verdict']}",
        ]
        _emit(out, "\n".join(lines))
    return 0 if rep["verdict"] == "pass" else 1


def cmd_check_identities(args, out) -> int:
    from .suites import run_suites
    P = args.prec or default_precision()
    results = run_suites(args.suite, P, args.jobs)
    ok = all(r.passed for r in results)
    if args.json:
        _emit(out, _dump({"precision_bits": P, "results": [r.as_dict() for r in results],
                          "all_pass": ok}))
    else:
        for r in results:
            line = f"{r.suite:<18} {r.item:<48} {r.verdict}"
            if r.residual is not None:
                line += f"  |res| <= {r.residual:.2e}"
            _emit(out, line)
        npass = sum(r.passed for r in results)
        _emit(out, f"{npass}/{len(results)} pass (not-applicable rows count as pass)")
    return 0 if ok else 1


COMMANDS = {
    "verify-series": cmd_verify_series, "s2": cmd_s2, "certify": cmd_certify, "pi": cmd_pi,
    "derive-pf": cmd_derive_pf, "check-identities": cmd_check_identities,
}


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except SystemExit as exc:       # argparse already printed usage
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        _emit(sys.stderr, f"ramanujan-lab: error: {exc}")
        return 2


def main(argv: Optional[List[str]] = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
