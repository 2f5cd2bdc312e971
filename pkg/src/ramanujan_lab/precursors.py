"""Period expressions and the precursor formulae for 1/pi at singular tau.

Each precursor theorem has the shape

    F^2/6 (c0 + c1 s2(tau)) + c2 dF^2/dxi = RHS

with F a 2F1 evaluated at an argument z(xi) of the uniformizer xi.  When s2 is
undefined (E6 = 0) or c1 has a pole, s2 is replaced by

    s2 = (2 pi^2 / 9) (A/B) E2*(tau) / omega_1^2

where A, B are the Weierstrass invariants of the base family; c1 * A/B is
tabulated in simplified form (``K``) so the pole cancels symbolically.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from mpmath import libmp as L

from .constants import pi_ball
from .hypergeom import d_dz_F_squared, hyp2f1
from .modular_forms import S2Undefined, Tau, eisenstein, s2 as s2_value, uniformizer
from .numerics import ApproxComplex, BranchCutError, DomainError, _radd

F_ = Fraction


def power_upper(x: ApproxComplex, e: Fraction) -> ApproxComplex:
    """Principal x^e, with negative reals taken as limits from the upper side."""
    e = Fraction(e)
    if e.denominator == 1:
        return x ** int(e)
    straddles = L.mpf_sign(x.re) < 0 and L.mpf_le(L.mpf_abs(x.im), x.err)
    if not straddles:
        return (x.log() * e).exp()
    P = x.prec
    mag = (-x).real
    if not mag.excludes_zero():
        raise BranchCutError("power of a ball containing 0")
    # |x|^e e^{i pi e}; the imaginary radius of x moves the argument by at most |im|/|x|
    base = (mag.log() * e).exp()
    pi = pi_ball(P)
    phase = (ApproxComplex.i(P) * pi * e).exp()
    out = base * phase
    # distance of x from the negative axis point -mag: |x - (-mag)| <= |im| + err
    shift = x + mag
    lip = L.mpf_mul(base.abs_upper(), L.mpf_div(L.from_rational(abs(e.numerator), e.denominator, 64, "u"),
                                                mag.abs_lower(), 64, "u"), 64, "u")
    return out.with_err(L.mpf_mul(lip, _radd(shift.abs_upper(), x.err), 64, "u"))


@dataclass
class _Ctx:
    tau: Tau
    P: int
    xi: ApproxComplex
    aux: Optional[ApproxComplex]
    a: int
    d: int

    def ball(self, x):
        return ApproxComplex.from_exact(x, self.P)

    @property
    def pi(self):
        return pi_ball(self.P)

    def a_over_pi_sqrt_d(self):
        return self.ball(self.a) / (self.pi * self.ball(self.d).sqrt())


@dataclass(frozen=True)
class PrecursorTheorem:
    name: str
    case: str
    period: str                       # which period expression the proof uses
    params: Tuple[Fraction, Fraction, Fraction]
    arg: Callable                     # xi -> z
    darg: Callable                    # xi -> dz/dxi
    c0: Callable                      # (xi, aux) -> ball
    c1: Callable
    c1_poles: Callable                # (xi, aux) -> ball that vanishes at c1's poles
    K: Callable                       # (xi, aux) -> c1 * A/B, simplified
    c2: Callable
    rhs: Callable                     # ctx -> ball


def _tau_rhs(ctx: _Ctx):
    t = ctx.tau.ball(ctx.P)
    i = ApproxComplex.i(ctx.P)
    return ctx.a_over_pi_sqrt_d() * t * t - t * i / ctx.pi


PRECURSORS: Dict[str, PrecursorTheorem] = {}


def _reg(t: PrecursorTheorem):
    PRECURSORS[t.name] = t


_one = lambda x, a: x * 0 + 1  # noqa: E731

_reg(PrecursorTheorem(
    "1B", "1B", "1B", (F_(1, 6), F_(5, 6), F_(1)),
    arg=lambda s: s, darg=lambda s: s * 0 + 1,
    c0=lambda s, _: 1 - 2 * s, c1=lambda s, _: 2 * s - 1, c1_poles=_one,
    K=_one, c2=lambda s, _: s * (1 - s),
    rhs=_tau_rhs))
_reg(PrecursorTheorem(
    "1B-1", "1B", "1B-1", (F_(1, 6), F_(1, 6), F_(1)),
    arg=lambda s: s / (s - 1), darg=lambda s: -1 / ((s - 1) * (s - 1)),
    c0=lambda s, _: s * 0 + 1, c1=lambda s, _: 2 * s - 1, c1_poles=_one,
    K=_one, c2=lambda s, _: s * (1 - s),
    rhs=lambda ctx: _tau_rhs(ctx) * power_upper(1 - ctx.xi, F_(1, 3))))
_reg(PrecursorTheorem(
    "2B", "2B", "2B", (F_(1, 4), F_(1, 4), F_(1)),
    arg=lambda t: 1 / t, darg=lambda t: -1 / (t * t),
    c0=lambda t, _: t * 0 + 1, c1=lambda t, _: -(t + 8) / (t - 4), c1_poles=lambda t, _: t - 4,
    K=lambda t, _: -1 / (t - 1), c2=lambda t, _: -t,
    rhs=lambda ctx: ctx.a_over_pi_sqrt_d() * power_upper(ctx.xi / (ctx.xi - 1), F_(1, 2))))
_reg(PrecursorTheorem(
    "2B-1", "2B", "2B-1", (F_(1, 4), F_(3, 4), F_(1)),
    arg=lambda t: 1 / (1 - t), darg=lambda t: 1 / ((1 - t) * (1 - t)),
    c0=lambda t, _: t + 2, c1=lambda t, _: -(t - 1) * (t + 8) / (t - 4), c1_poles=lambda t, _: t - 4,
    K=lambda t, _: t * 0 - 1, c2=lambda t, _: -t * (t - 1),
    rhs=lambda ctx: ctx.a_over_pi_sqrt_d() * (ctx.xi - 1)))
_reg(PrecursorTheorem(
    "2C", "2C", "2C", (F_(1, 2), F_(1, 2), F_(1)),
    arg=lambda l: l, darg=lambda l: l * 0 + 1,
    c0=lambda l, _: (1 - 2 * l) * 2,
    c1=lambda l, _: (1 - 2 * l) * (l + 1) * (l - 2) / (l * l - l + 1),
    c1_poles=lambda l, _: l * l - l + 1,
    K=lambda l, _: l * 0 - 9, c2=lambda l, _: l * (1 - l),
    rhs=lambda ctx: ctx.a_over_pi_sqrt_d() * 2))
_reg(PrecursorTheorem(
    "3B", "3B", "3B", (F_(1, 3), F_(1, 3), F_(1)),
    arg=lambda u: 1 / u, darg=lambda u: -1 / (u * u),
    c0=lambda u, _: u - 1, c1=lambda u, _: -(u * u + 18 * u - 27) / (u - 9), c1_poles=lambda u, _: u - 9,
    K=lambda u, _: u * 0 - 1, c2=lambda u, _: -u * (u - 1),
    rhs=lambda ctx: ctx.a_over_pi_sqrt_d() * power_upper(ctx.xi, F_(2, 3))
    * power_upper(ctx.xi - 1, F_(1, 3))))
_reg(PrecursorTheorem(
    "3B-1", "3B", "3B-1", (F_(1, 3), F_(2, 3), F_(1)),
    arg=lambda u: 1 / (1 - u), darg=lambda u: 1 / ((1 - u) * (1 - u)),
    c0=lambda u, _: u + 3, c1=lambda u, _: -(u * u + 18 * u - 27) / (u - 9), c1_poles=lambda u, _: u - 9,
    K=lambda u, _: u * 0 - 1, c2=lambda u, _: -u * (u - 1),
    rhs=lambda ctx: ctx.a_over_pi_sqrt_d() * (ctx.xi - 1)))
_reg(PrecursorTheorem(
    "2A", "2A", "2B", (F_(1, 8), F_(3, 8), F_(1)),
    arg=lambda v: 1 / v, darg=lambda v: -1 / (v * v),
    c0=lambda v, t: (t + 2) / (t + 1), c1=lambda v, t: -(t - 1) * (t + 8) / ((t - 4) * (t + 1)),
    c1_poles=lambda v, t: t - 4,
    K=lambda v, t: -1 / (t + 1), c2=lambda v, t: -v,
    rhs=lambda ctx: ctx.a_over_pi_sqrt_d() * (ctx.aux - 1) / (ctx.aux + 1)))
_reg(PrecursorTheorem(
    "3A", "3A", "3B", (F_(1, 6), F_(1, 3), F_(1)),
    arg=lambda w: 1 / w, darg=lambda w: -1 / (w * w),
    c0=lambda w, u: (u + 3) / (u + 1), c1=lambda w, u: -(u * u + 18 * u - 27) / ((u - 9) * (u + 1)),
    c1_poles=lambda w, u: u - 9,
    K=lambda w, u: -1 / (u + 1), c2=lambda w, u: -w,
    rhs=lambda ctx: ctx.a_over_pi_sqrt_d() * (ctx.aux - 1) / (ctx.aux + 1)))

THEOREMS_BY_CASE = {
    "1B": ("1B", "1B-1"), "2B": ("2B", "2B-1"), "2C": ("2C",),
    "3B": ("3B", "3B-1"), "2A": ("2A",), "3A": ("3A",),
}


# ---------------------------------------------------------------------------
# periods

@dataclass(frozen=True)
class PeriodExpression:
    name: str
    case: str
    params: Tuple[Fraction, Fraction, Fraction]
    arg: Callable
    prefactor: Callable           # (xi, tau_ball, P) -> ball


def _sqrt2_pi_over_3(P):
    return ApproxComplex.from_exact(2, P).sqrt() * pi_ball(P) / 3


PERIODS: Dict[str, PeriodExpression] = {
    "1B": PeriodExpression("1B", "1B", (F_(1, 6), F_(5, 6), F_(1)), lambda s: s,
                           lambda s, t, P: _sqrt2_pi_over_3(P) * ApproxComplex.i(P) / t),
    "1B-1": PeriodExpression("1B-1", "1B", (F_(1, 6), F_(1, 6), F_(1)), lambda s: s / (s - 1),
                             lambda s, t, P: _sqrt2_pi_over_3(P) * ApproxComplex.i(P) / t
                             * power_upper(1 - s, F_(-1, 6))),
    "2B": PeriodExpression("2B", "2B", (F_(1, 4), F_(1, 4), F_(1)), lambda t: 1 / t,
                           lambda x, t, P: _sqrt2_pi_over_3(P) * power_upper(x, F_(-1, 4))
                           * power_upper(x - 1, F_(-1, 4))),
    "2B-1": PeriodExpression("2B-1", "2B", (F_(1, 4), F_(3, 4), F_(1)), lambda t: 1 / (1 - t),
                             lambda x, t, P: _sqrt2_pi_over_3(P)
                             * (ApproxComplex.i(P) * pi_ball(P) / 4).exp()
                             * power_upper(x - 1, F_(-1, 2))),
    "2C": PeriodExpression("2C", "2C", (F_(1, 2), F_(1, 2), F_(1)), lambda l: l,
                           lambda x, t, P: pi_ball(P) + x * 0),
    "3B": PeriodExpression("3B", "3B", (F_(1, 3), F_(1, 3), F_(1)), lambda u: 1 / u,
                           lambda x, t, P: _sqrt2_pi_over_3(P) * power_upper(x, F_(-1, 3))
                           * power_upper(x - 1, F_(-1, 6))),
    "3B-1": PeriodExpression("3B-1", "3B", (F_(1, 3), F_(2, 3), F_(1)), lambda u: 1 / (1 - u),
                             lambda x, t, P: _sqrt2_pi_over_3(P) * power_upper(x - 1, F_(-1, 2))),
}

# Delta(E_xi) = A^3 - 27 B^2 and A/B for the four base families
_DELTA = {
    "1B": lambda s: s * (1 - s) * (4 * 3 ** 9),
    "2B": lambda t: -(t * t) * (t - 1) ** 3 * 3 ** 12,
    "2C": lambda l: l * l * (1 - l) ** 2 * 16,
    "3B": lambda u: -(u ** 3) * (u - 1) ** 2 * (2 ** 6 * 3 ** 9),
}
_A_OVER_B = {
    "1B": lambda s: 1 / (2 * s - 1),
    "2B": lambda t: (t - 4) / ((t - 1) * (t + 8)),
    "2C": lambda l: (l * l - l + 1) * 9 / ((l + 1) * (2 * l - 1) * (l - 2)),
    "3B": lambda u: (u - 9) / (u * u + 18 * u - 27),
}


def period(name: str, tau, precision_bits: int, xi: Optional[ApproxComplex] = None) -> ApproxComplex:
    """omega_1 of E_xi from the named period expression (up to a 12th root of unity)."""
    pe = PERIODS[name]
    tau = Tau.of(tau)
    P = int(precision_bits) + 16
    if xi is None:
        xi = uniformizer(pe.case, tau, P)
    F = hyp2f1(pe.params, pe.arg(xi), P)
    return pe.prefactor(xi, tau.ball(P), P) * F


def check_period(name: str, tau, precision_bits: int = 256) -> ApproxComplex:
    """omega_1^12 Delta(E_xi) / Delta(tau) - 1, which must enclose 0."""
    pe = PERIODS[name]
    tau = Tau.of(tau)
    P = int(precision_bits) + 16
    xi = uniformizer(pe.case, tau, P)
    w = period(name, tau, P, xi)
    dtau = eisenstein(tau, P).delta
    return w ** 12 * _DELTA[pe.case](xi) / dtau - 1


# ---------------------------------------------------------------------------
# precursor evaluation

@dataclass
class TheoremResult:
    theorem: str
    applicable: bool
    verdict: str                       # pass / fail / inconclusive / not-applicable
    residual: Optional[ApproxComplex] = None
    lhs: Optional[ApproxComplex] = None
    rhs: Optional[ApproxComplex] = None
    mode: str = "direct"               # direct or alternate (E2* form)
    continued: bool = False            # Pfaff continuation was needed (|z| >= 1)
    note: str = ""


@dataclass
class VerificationReport:
    id: str
    verdict: str
    partial: Optional[ApproxComplex] = None
    target: Optional[ApproxComplex] = None
    truncation_index: Optional[int] = None
    wall_time: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def difference_bound(self) -> Optional[float]:
        if self.partial is None or self.target is None:
            return None
        from mpmath import mp
        d = ApproxComplex._sub_raw(self.partial, self.target)[2]
        return float(mp.make_mpf(_radd(d, self.partial.err, self.target.err)))

    def as_dict(self) -> dict:
        out = {"id": self.id, "verdict": self.verdict, "wall_time": round(self.wall_time, 4)}
        if self.partial is not None:
            out["partial"] = self.partial.to_string(40)
        if self.target is not None:
            out["target"] = self.target.to_string(40)
        if self.truncation_index is not None:
            out["truncation_index"] = self.truncation_index
        out.update(self.details)
        return out


def verdict_for(lhs: ApproxComplex, rhs: ApproxComplex, tol: float) -> str:
    """pass iff the enclosures intersect and both radii are below tol."""
    from mpmath import mp
    widths_ok = (float(mp.make_mpf(lhs.err)) <= tol and float(mp.make_mpf(rhs.err)) <= tol)
    if not lhs.intersects(rhs):
        return "fail"
    return "pass" if widths_ok else "inconclusive"


def _form_data(tau: Tau) -> Tuple[int, int]:
    if tau.source is None:
        raise DomainError("precursor formulae need an exact quadratic irrational tau")
    a, b, c = tau.source.form
    return a, 4 * a * c - b * b


def _uniformizer_pair(case: str, tau: Tau, P: int):
    xi = uniformizer(case, tau, P)
    aux = None
    if case == "2A":
        aux = uniformizer("2B", tau, P)
    elif case == "3A":
        aux = uniformizer("3B", tau, P)
    return xi, aux


def evaluate_theorem(name: str, tau, precision_bits: int = 256, tol: float = 1e-50,
                     s2_ball: Optional[ApproxComplex] = None, _cache=None) -> TheoremResult:
    th = PRECURSORS[name]
    tau = Tau.of(tau)
    P = int(precision_bits) + 32
    a, d = _form_data(tau)
    if _cache is not None and th.case in _cache:
        xi, aux = _cache[th.case]
    else:
        xi, aux = _uniformizer_pair(th.case, tau, P)
    ctx = _Ctx(tau, P, xi, aux, a, d)
    try:
        z = th.arg(xi)
    except ZeroDivisionError:
        return TheoremResult(name, False, "not-applicable", note="argument has a pole")
    direct = L.mpf_lt(z.abs_upper(), L.fone)
    if not direct:
        w = z / (z - 1) if (z - 1).excludes_zero() else None
        if w is None or not L.mpf_lt(w.abs_upper(), L.fone):
            return TheoremResult(name, False, "not-applicable",
                                 note="hypergeometric argument outside |z|<1 and Re z<1/2")
    try:
        c0 = th.c0(xi, aux)
        c2 = th.c2(xi, aux)
    except ZeroDivisionError:
        return TheoremResult(name, False, "not-applicable", note="coefficient has a pole")
    F = hyp2f1(th.params, z, P)
    dF2 = d_dz_F_squared(th.params, z, P) * th.darg(xi)
    s2v = s2_ball
    mode = "direct"
    pole = th.c1_poles(xi, aux)
    if s2v is None and pole.excludes_zero():
        try:
            s2v = s2_value(tau, P)
        except S2Undefined:
            s2v = None
    if s2v is not None and pole.excludes_zero():
        inner = c0 + th.c1(xi, aux) * s2v
    else:
        mode = "alternate"
        e2s = eisenstein(tau, P).e2_star
        omega = period(th.period, tau, P,
                       xi if th.period.split("-")[0] == th.case else aux)
        inner = c0 + th.K(xi, aux) * e2s * pi_ball(P) ** 2 * F_(2, 9) / (omega * omega)
    lhs = F * F * inner / 6 + c2 * dF2
    try:
        rhs = th.rhs(ctx)
    except (ZeroDivisionError, BranchCutError) as exc:
        return TheoremResult(name, False, "not-applicable", note=f"right-hand side: {exc}")
    v = verdict_for(lhs, rhs, tol)
    return TheoremResult(name, True, v, residual=lhs - rhs, lhs=lhs, rhs=rhs, mode=mode,
                         continued=not direct)


def verify_precursor(case: str, tau, precision_bits: int = 256, tol: float = 1e-50,
                     s2_ball: Optional[ApproxComplex] = None) -> VerificationReport:
    """Check every precursor theorem of a case at tau; pass if one of them passes.

    Raises DomainError when no theorem of the case applies at tau.
    """
    t0 = time.perf_counter()
    tau = Tau.of(tau)
    P = int(precision_bits)
    try:
        cache = {case: _uniformizer_pair(case, tau, P + 32)}
    except BranchCutError as exc:
        raise DomainError(f"uniformizer of {case} is not defined at {tau!r}: {exc}") from exc
    results: List[TheoremResult] = []
    for name in THEOREMS_BY_CASE[case]:
        try:
            results.append(evaluate_theorem(name, tau, P, tol, s2_ball, cache))
        except (DomainError, BranchCutError) as exc:
            results.append(TheoremResult(name, False, "not-applicable", note=str(exc)))
    applicable = [r for r in results if r.applicable]
    if not applicable:
        raise DomainError(f"no {case} precursor theorem applies at {tau!r}: "
                          + "; ".join(f"{r.theorem}: {r.note}" for r in results))
    best = next((r for r in applicable if r.verdict == "pass"), None)
    if best is None:
        best = next((r for r in applicable if r.verdict == "inconclusive"), applicable[0])
    return VerificationReport(
        id=f"precursor:{case}:{tau.source}", verdict=best.verdict,
        partial=best.lhs, target=best.rhs, wall_time=time.perf_counter() - t0,
        details={"theorem": best.theorem, "mode": best.mode, "continued": best.continued,
                 "theorems": {r.theorem: r.verdict for r in results}})


def check_relation_period(case: str, tau, precision_bits: int = 256) -> ApproxComplex:
    """((x/(x-1))^(1/k) F / G)^12 - 1 for the 2A (k = 4) and 3A (k = 3) relations."""
    from .hypergeom import check_transformation
    tau = Tau.of(tau)
    P = int(precision_bits) + 16
    kind = {"2A": "relation_2A", "3A": "relation_3A"}[case]
    k = 4 if case == "2A" else 3
    # power=True gives ratio F^k - G^k; divide by G^k to get (LHS/RHS)^k - 1
    y = uniformizer("2B" if case == "2A" else "3B", tau, P)
    G = hyp2f1((F_(1, 4), F_(1, 4), 1) if case == "2A" else (F_(1, 3), F_(1, 3), 1), 1 / y, P)
    r = check_transformation(kind, P, tau=tau, power=True) / G ** k + 1
    return r ** (12 // k) - 1


# sample points for the period-expression checks, one per theorem
PERIOD_SAMPLES = {
    "1B": "sqrt(-2)/2", "1B-1": "sqrt(-2)/2", "2B": "sqrt(-2)/2", "2B-1": "sqrt(-2)/2",
    "2C": "sqrt(-2)/2", "3B": "sqrt(-2)/2", "3B-1": "sqrt(-2)/2",
    "2A": "sqrt(-10)/2", "3A": "sqrt(-10)/2",
}


def period_residual(name: str, tau, precision_bits: int = 256) -> ApproxComplex:
    if name in ("2A", "3A"):
        return check_relation_period(name, tau, precision_bits)
    return check_period(name, tau, precision_bits)
