"""Exact and approximate arithmetic used by every other module.

Three layers live here:

* ``Fraction`` (re-exported as ``BigRational``) and ``AlgebraicNumber`` for
  exact elements p + q*sqrt(D) of a rational or quadratic field,
* ``ApproxComplex``, a complex midpoint with one absolute error radius,
* recognition helpers (``recognize_quadratic``) and class-group helpers
  (``QuadraticIrrational``, ``reduced_forms``).

Midpoints are mpmath raw tuples rounded to nearest at the value's precision.
Radii are 64-bit mpf values and every radius operation rounds upward, so the
stored radius always dominates the accumulated error.
"""
from __future__ import annotations

import ast
import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Tuple, Union

from mpmath import libmp as L
from mpmath import mp

BigRational = Fraction

RAD_PREC = 64          # working precision for error radii
_UP = "u"
_DOWN = "d"
_NEAR = "n"


class InsufficientPrecision(ArithmeticError):
    """Raised when an enclosure is too wide to decide the requested question."""


class BranchCutError(ArithmeticError):
    """A principal-branch function was applied to a ball that meets its cut."""


# ---------------------------------------------------------------------------
# integer helpers

def squarefree_part(n: int, hint: Optional[int] = None, bound: int = 100_000) -> Tuple[int, int]:
    """Return (k, m) with n = k**2 * m and m square-free (up to the trial bound).

    Primes up to ``bound`` are removed by trial division.  A leftover cofactor
    that is a perfect square is absorbed; anything else is assumed square-free.
    ``hint`` (a known square-free radicand) short-circuits the search.
    """
    if n == 0:
        return 0, 0
    sign = -1 if n < 0 else 1
    n = abs(n)
    if hint is not None and hint != 0:
        h = abs(hint)
        if n % h == 0:
            k2 = n // h
            k = math.isqrt(k2)
            if k * k == k2:
                return k, sign * h
    k, m = 1, 1
    p = 2
    while p * p <= n and p <= bound:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            k *= p ** (e // 2)
            if e % 2:
                m *= p
        p += 1 if p == 2 else 2
    r = math.isqrt(n)
    if r * r == n:
        k *= r
    else:
        m *= n
    return k, sign * m


def is_squarefree(n: int) -> bool:
    return squarefree_part(n)[0] == 1


# ---------------------------------------------------------------------------
# exact quadratic field elements

def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


class AlgebraicNumber:
    """Exact element p + q*sqrt(D) with D square-free (D = 0 means rational).

    Negative D is allowed so that imaginary quadratic uniformizer values can be
    stored, but numbers with different nonzero radicands never mix.
    """

    __slots__ = ("p", "q", "D")

    def __init__(self, p=0, q=0, D: int = 0, *, hint: Optional[int] = None):
        p, q = _frac(p), _frac(q)
        D = int(D)
        if q == 0 or D == 0:
            q, D = Fraction(0), 0
        else:
            k, m = squarefree_part(D, hint)
            q *= k
            if m == 1:
                p, q, D = p + q, Fraction(0), 0
            else:
                D = m
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "D", D)

    def __reduce__(self):
        return (type(self), (self.p, self.q, self.D))

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraicNumber is immutable")

    # construction helpers
    @classmethod
    def from_parts(cls, p: int, q: int, radicand: int, den: int = 1) -> "AlgebraicNumber":
        return cls(Fraction(p, den), Fraction(q, den), radicand)

    @classmethod
    def coerce(cls, x) -> "AlgebraicNumber":
        if isinstance(x, AlgebraicNumber):
            return x
        return cls(_frac(x))

    # field structure
    @property
    def radicand(self) -> int:
        return self.D

    @property
    def rational_part(self) -> Fraction:
        return self.p

    @property
    def surd_part(self) -> Fraction:
        return self.q

    def is_rational(self) -> bool:
        return self.D == 0

    def conjugate(self) -> "AlgebraicNumber":
        return AlgebraicNumber(self.p, -self.q, self.D)

    def norm(self) -> Fraction:
        return self.p * self.p - self.D * self.q * self.q

    def trace(self) -> Fraction:
        return 2 * self.p

    def is_algebraic_integer(self) -> bool:
        # x is a root of X^2 - tr X + nm, monic integral iff both are integers
        return self.trace().denominator == 1 and self.norm().denominator == 1

    def minimal_polynomial(self) -> Tuple[int, ...]:
        """Primitive integer coefficients, highest degree first."""
        if self.D == 0:
            f = self.p
            return (f.denominator, -f.numerator)
        coeffs = [Fraction(1), -self.trace(), self.norm()]
        den = 1
        for c in coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        ints = [int(c * den) for c in coeffs]
        g = 0
        for c in ints:
            g = math.gcd(g, c)
        return tuple(c // g for c in ints)

    def height(self) -> int:
        return max(abs(c) for c in self.minimal_polynomial())

    def _check(self, other: "AlgebraicNumber") -> int:
        if self.D and other.D and self.D != other.D:
            raise ValueError(
                f"radicands {self.D} and {other.D} differ; embed numerically first")
        return self.D or other.D

    def __add__(self, other):
        try:
            o = AlgebraicNumber.coerce(other)
        except TypeError:
            return NotImplemented
        D = self._check(o)
        return AlgebraicNumber(self.p + o.p, self.q + o.q, D)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicNumber(-self.p, -self.q, self.D)

    def __sub__(self, other):
        try:
            o = AlgebraicNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = AlgebraicNumber.coerce(other)
        except TypeError:
            return NotImplemented
        D = self._check(o)
        return AlgebraicNumber(self.p * o.p + D * self.q * o.q,
                               self.p * o.q + self.q * o.p, D)

    __rmul__ = __mul__

    def inverse(self) -> "AlgebraicNumber":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("element of zero norm")
        return AlgebraicNumber(self.p / n, -self.q / n, self.D)

    def __truediv__(self, other):
        try:
            o = AlgebraicNumber.coerce(other)
        except TypeError:
            return NotImplemented
        self._check(o)
        return self * o.inverse()

    def __rtruediv__(self, other):
        return AlgebraicNumber.coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        out, base = AlgebraicNumber(1), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        try:
            o = AlgebraicNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return (self.p, self.q, self.D) == (o.p, o.q, o.D)

    def __hash__(self):
        if self.D == 0:
            return hash(self.p)
        return hash((self.p, self.q, self.D))

    def __bool__(self):
        return bool(self.p) or bool(self.q)

    def common_denominator(self) -> int:
        a, b = self.p.denominator, self.q.denominator
        return a * b // math.gcd(a, b)

    def as_parts(self) -> dict:
        den = self.common_denominator()
        return {"p": int(self.p * den), "q": int(self.q * den),
                "radicand": self.D, "den": den}

    def __repr__(self):
        return f"AlgebraicNumber({self})"

    def __str__(self):
        if self.D == 0:
            return str(self.p)
        parts = self.as_parts()
        p, q, den = parts["p"], parts["q"], parts["den"]
        rad = f"sqrt({self.D})"
        if abs(q) == 1:
            surd = rad
        else:
            surd = f"{abs(q)}*{rad}"
        if p == 0:
            body = ("-" if q < 0 else "") + surd
        else:
            body = f"{p} {'-' if q < 0 else '+'} {surd}"
        if den == 1:
            return body
        return f"({body})/{den}"

    def embed(self, precision_bits: int, conjugate_sign: int = 1) -> "ApproxComplex":
        return embed(self, precision_bits, conjugate_sign)

    def to_ball(self, precision_bits: int) -> "ApproxComplex":
        """Ball for the number itself; sqrt of a negative radicand is i*sqrt(|D|)."""
        if self.D >= 0:
            return embed(self, precision_bits, 1)
        s = ApproxComplex.from_exact(-self.D, precision_bits).sqrt()
        s = s * ApproxComplex.i(precision_bits)
        return ApproxComplex.from_exact(self.p, precision_bits) + s * self.q


_EXPR_OK = (ast.Expression, ast.BinOp, ast.UnaryOp, ast.Constant, ast.Call, ast.Name,
            ast.Add, ast.Sub, ast.Mult, ast.Div, ast.USub, ast.UAdd, ast.Pow, ast.Load)


def parse_algebraic(text: str) -> AlgebraicNumber:
    """Parse expressions such as ``(139 - 45*sqrt(5))/418`` or ``5/14``."""
    text = text.strip().replace("√", "sqrt").replace("^", "**")
    text = re.sub(r"sqrt\s*(\d+)", r"sqrt(\1)", text)
    tree = ast.parse(text, mode="eval")
    for node in ast.walk(tree):
        if not isinstance(node, _EXPR_OK):
            raise ValueError(f"unsupported syntax in {text!r}")

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant):
            if not isinstance(node.value, int):
                raise ValueError("only integer literals are allowed")
            return AlgebraicNumber(node.value)
        if isinstance(node, ast.UnaryOp):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.Call):
            if not (isinstance(node.func, ast.Name) and node.func.id == "sqrt"
                    and len(node.args) == 1):
                raise ValueError("only sqrt(<integer>) calls are allowed")
            arg = ev(node.args[0])
            if not arg.is_rational() or arg.p.denominator != 1:
                raise ValueError("sqrt argument must be an integer")
            return AlgebraicNumber(0, 1, int(arg.p))
        if isinstance(node, ast.BinOp):
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                return a / b
            if isinstance(node.op, ast.Pow):
                if not b.is_rational() or b.p.denominator != 1:
                    raise ValueError("exponent must be an integer")
                return a ** int(b.p)
        raise ValueError(f"cannot evaluate {ast.dump(node)}")

    return ev(tree)


# ---------------------------------------------------------------------------
# radius arithmetic (upward rounded, RAD_PREC bits)

def _r(x) -> tuple:
    """Convert a non-negative int/Fraction/raw mpf to an upward-rounded radius."""
    if isinstance(x, tuple):
        return L.mpf_pos(x, RAD_PREC, _UP)
    if isinstance(x, int):
        return L.from_int(x, RAD_PREC, _UP)
    if isinstance(x, Fraction):
        return L.from_rational(x.numerator, x.denominator, RAD_PREC, _UP)
    if hasattr(x, "__index__"):
        return L.from_int(int(x), RAD_PREC, _UP)
    raise TypeError(type(x))


def _radd(*xs):
    out = L.fzero
    for x in xs:
        out = L.mpf_add(out, x, RAD_PREC, _UP)
    return out


def _rmul(*xs):
    out = L.fone
    for x in xs:
        out = L.mpf_mul(out, x, RAD_PREC, _UP)
    return out


def _rdiv(a, b):
    return L.mpf_div(a, b, RAD_PREC, _UP)


def _rpow2(e: int):
    return L.mpf_shift(L.fone, e)


def _mag_up(re_, im_):
    return L.mpc_abs((re_, im_), RAD_PREC, _UP)


def _mag_down(re_, im_):
    return L.mpc_abs((re_, im_), RAD_PREC, _DOWN)


def _rsub_down(a, b):
    """a - b rounded down (used for lower bounds)."""
    return L.mpf_sub(a, b, RAD_PREC, _DOWN)


def _rsqrt_up(a):
    return L.mpf_sqrt(a, RAD_PREC, _UP)


def _rsqrt_down(a):
    return L.mpf_sqrt(a, RAD_PREC, _DOWN)


def _rexp_up(a):
    # mpmath's exp is accurate to well under one ulp; one extra ulp of slack
    e = L.mpf_exp(a, RAD_PREC, _UP)
    return L.mpf_mul(e, _ONE_PLUS, RAD_PREC, _UP)


_ONE_PLUS = L.mpf_add(L.fone, L.mpf_shift(L.fone, -RAD_PREC + 4), RAD_PREC, _UP)


def _positive(x) -> bool:
    return L.mpf_sign(x) > 0


# ---------------------------------------------------------------------------
# balls

class ApproxComplex:
    """Complex midpoint at ``prec`` bits plus a joint absolute error radius.

    The represented set is the closed disc of radius ``err`` around
    ``re + i*im``.  Every operation returns a disc that contains all results
    of the exact operation on members of the input discs.
    """

    __slots__ = ("re", "im", "err", "prec")

    def __init__(self, re_, im_, err, prec: int):
        object.__setattr__(self, "re", re_)
        object.__setattr__(self, "im", im_)
        object.__setattr__(self, "err", err)
        object.__setattr__(self, "prec", int(prec))

    def __reduce__(self):
        return (type(self), (self.re, self.im, self.err, self.prec))

    def __setattr__(self, name, value):
        raise AttributeError("ApproxComplex is immutable")

    # -- construction -----------------------------------------------------
    @classmethod
    def from_exact(cls, x, prec: int) -> "ApproxComplex":
        """Enclose an int, Fraction, AlgebraicNumber or complex pair of Fractions."""
        if isinstance(x, ApproxComplex):
            return x
        if isinstance(x, AlgebraicNumber):
            return x.to_ball(prec)
        if isinstance(x, tuple) and len(x) == 2:
            a = cls.from_exact(x[0], prec)
            b = cls.from_exact(x[1], prec)
            return cls(a.re, b.re, _radd(a.err, b.err), prec)
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, int):
            x = Fraction(x)
        if isinstance(x, Fraction):
            n, d = x.numerator, x.denominator
            v = L.from_rational(n, d, prec, _NEAR)
            exact = L.from_rational(n, d, prec, _UP) == L.from_rational(n, d, prec, _DOWN)
            err = L.fzero if exact else _rmul(_r(abs(x)), _rpow2(1 - prec))
            return cls(v, L.fzero, err, prec)
        if isinstance(x, float):
            f = Fraction(x)
            return cls.from_exact(f, prec)
        raise TypeError(f"cannot enclose {type(x).__name__}")

    @classmethod
    def from_mpmath(cls, value, err=0, prec: Optional[int] = None) -> "ApproxComplex":
        """Wrap an mpmath number (taken as exact) with an explicit radius."""
        prec = prec or mp.prec
        z = mp.mpc(value)
        re_ = L.mpf_pos(z._mpc_[0], prec, _NEAR)
        im_ = L.mpf_pos(z._mpc_[1], prec, _NEAR)
        r = _r(mp.mpf(err)._mpf_) if err else L.fzero
        rnd = _rmul(_mag_up(*z._mpc_), _rpow2(1 - prec))
        return cls(re_, im_, _radd(r, rnd), prec)

    @classmethod
    def zero(cls, prec: int) -> "ApproxComplex":
        return cls(L.fzero, L.fzero, L.fzero, prec)

    @classmethod
    def i(cls, prec: int) -> "ApproxComplex":
        return cls(L.fzero, L.fone, L.fzero, prec)

    def with_err(self, extra) -> "ApproxComplex":
        """Return a copy with ``extra`` (non-negative radius) added to the error."""
        if not isinstance(extra, tuple):
            extra = _r(extra if not isinstance(extra, float) else Fraction(extra))
        return ApproxComplex(self.re, self.im, _radd(self.err, extra), self.prec)

    def with_prec(self, prec: int) -> "ApproxComplex":
        if prec >= self.prec:
            return ApproxComplex(self.re, self.im, self.err, prec)
        re_ = L.mpf_pos(self.re, prec, _NEAR)
        im_ = L.mpf_pos(self.im, prec, _NEAR)
        extra = _rmul(self.mag_up(), _rpow2(1 - prec))
        return ApproxComplex(re_, im_, _radd(self.err, extra), prec)

    # -- inspection -------------------------------------------------------
    @property
    def mid(self):
        return mp.make_mpc((self.re, self.im))

    @property
    def radius(self):
        return mp.make_mpf(self.err)

    @property
    def real(self) -> "ApproxComplex":
        return ApproxComplex(self.re, L.fzero, self.err, self.prec)

    @property
    def imag(self) -> "ApproxComplex":
        return ApproxComplex(self.im, L.fzero, self.err, self.prec)

    def mag_up(self):
        return _mag_up(self.re, self.im)

    def mag_down(self):
        return _mag_down(self.re, self.im)

    def abs_upper(self):
        """Upper bound for |z| over the ball (raw mpf)."""
        return _radd(self.mag_up(), self.err)

    def abs_lower(self):
        """Lower bound for |z| over the ball, clamped at zero (raw mpf)."""
        v = _rsub_down(self.mag_down(), self.err)
        return v if L.mpf_sign(v) > 0 else L.fzero

    def excludes_zero(self) -> bool:
        return L.mpf_gt(self.mag_down(), self.err)

    def contains_zero(self) -> bool:
        return L.mpf_le(self.mag_up(), self.err)

    def contains(self, x) -> bool:
        """Sound containment test for an exact value (or a smaller ball)."""
        if not isinstance(x, ApproxComplex):
            x = ApproxComplex.from_exact(x, 2 * self.prec + 64)
        d = ApproxComplex._sub_raw(self, x)
        return L.mpf_le(_radd(d[2], x.err), self.err)

    def intersects(self, other: "ApproxComplex") -> bool:
        d = ApproxComplex._sub_raw(self, other)
        return L.mpf_le(d[2], _radd(self.err, other.err))

    @staticmethod
    def _sub_raw(a, b):
        p = max(a.prec, b.prec) + 64
        re_ = L.mpf_sub(a.re, b.re, p, _NEAR)
        im_ = L.mpf_sub(a.im, b.im, p, _NEAR)
        return re_, im_, _mag_up(re_, im_)

    def rel_err_bits(self) -> float:
        """Roughly how many bits of the value are certain."""
        if self.err == L.fzero:
            return float(self.prec)
        m = self.mag_up()
        if m == L.fzero:
            return 0.0
        return float(mp.log(mp.make_mpf(m) / mp.make_mpf(self.err), 2))

    def is_real(self) -> bool:
        """True when the ball meets the real axis (imaginary part could be 0)."""
        return L.mpf_le(L.mpf_abs(self.im), self.err)

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "ApproxComplex":
        if isinstance(other, ApproxComplex):
            return other
        return ApproxComplex.from_exact(other, self.prec)

    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        p = max(self.prec, o.prec)
        re_ = L.mpf_add(self.re, o.re, p, _NEAR)
        im_ = L.mpf_add(self.im, o.im, p, _NEAR)
        rnd = _rmul(_radd(self.mag_up(), o.mag_up()), _rpow2(2 - p))
        return ApproxComplex(re_, im_, _radd(self.err, o.err, rnd), p)

    __radd__ = __add__

    def __neg__(self):
        return ApproxComplex(L.mpf_neg(self.re), L.mpf_neg(self.im), self.err, self.prec)

    def __sub__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def conj(self):
        return ApproxComplex(self.re, L.mpf_neg(self.im), self.err, self.prec)

    def __mul__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        p = max(self.prec, o.prec)
        re_, im_ = L.mpc_mul((self.re, self.im), (o.re, o.im), p, _NEAR)
        ma, mb = self.mag_up(), o.mag_up()
        prop = _radd(_rmul(self.err, mb), _rmul(o.err, ma), _rmul(self.err, o.err))
        rnd = _rmul(ma, mb, _rpow2(3 - p))
        return ApproxComplex(re_, im_, _radd(prop, rnd), p)

    __rmul__ = __mul__

    def reciprocal(self) -> "ApproxComplex":
        if not self.excludes_zero():
            raise ZeroDivisionError("ball may contain zero")
        p = self.prec
        re_, im_ = L.mpc_reciprocal((self.re, self.im), p, _NEAR)
        m_lo = self.mag_down()
        low = _rsub_down(m_lo, self.err)
        # |1/z - 1/m| <= r / (|m| (|m| - r))
        prop = _rdiv(self.err, L.mpf_mul(m_lo, low, RAD_PREC, _DOWN))
        rnd = _rmul(_rdiv(L.fone, m_lo), _rpow2(4 - p))
        return ApproxComplex(re_, im_, _radd(prop, rnd), p)

    def __truediv__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            # exact divisor: divide the midpoint directly
            if other == 0:
                raise ZeroDivisionError
            f = Fraction(other)
            return self * Fraction(f.denominator, f.numerator)
        return self * o.reciprocal()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.reciprocal()

    def __pow__(self, e):
        if isinstance(e, int):
            if e < 0:
                return self.reciprocal() ** (-e)
            out = ApproxComplex.from_exact(1, self.prec)
            base = self
            while e:
                if e & 1:
                    out = out * base
                e >>= 1
                if e:
                    base = base * base
            return out
        if isinstance(e, Fraction):
            if e.denominator == 1:
                return self ** int(e)
            if e.denominator == 2:
                return self.sqrt() ** e.numerator
            return (self.log() * e).exp()
        return NotImplemented

    def square(self):
        return self * self

    # -- elementary functions ----------------------------------------------
    def exp(self) -> "ApproxComplex":
        p = self.prec
        g = p + 20
        re_, im_ = L.mpc_exp((self.re, self.im), g, _NEAR)
        m = _mag_up(re_, im_)
        # |e^z - e^m| <= |e^m| (e^r - 1) <= |e^m| r e^r
        prop = _rmul(m, self.err, _rexp_up(self.err))
        rnd = _rmul(m, _rpow2(2 - g))
        re_ = L.mpf_pos(re_, p, _NEAR)
        im_ = L.mpf_pos(im_, p, _NEAR)
        rnd = _radd(rnd, _rmul(m, _rpow2(2 - p)))
        return ApproxComplex(re_, im_, _radd(prop, rnd), p)

    def _check_cut(self):
        # ball must not meet the closed negative real axis
        if L.mpf_sign(self.re) < 0 or L.mpf_le(L.mpf_abs(self.re), self.err):
            if L.mpf_le(L.mpf_abs(self.im), self.err):
                raise BranchCutError("ball meets the principal branch cut")

    def log(self) -> "ApproxComplex":
        if not self.excludes_zero():
            raise BranchCutError("log of a ball containing zero")
        self._check_cut()
        p = self.prec
        g = p + 20
        re_, im_ = L.mpc_log((self.re, self.im), g, _NEAR)
        low = _rsub_down(self.mag_down(), self.err)
        prop = _rdiv(self.err, low)
        m = _mag_up(re_, im_)
        rnd = _rmul(_radd(m, _r(1)), _rpow2(2 - p))
        re_ = L.mpf_pos(re_, p, _NEAR)
        im_ = L.mpf_pos(im_, p, _NEAR)
        return ApproxComplex(re_, im_, _radd(prop, rnd), p)

    def sqrt(self) -> "ApproxComplex":
        p = self.prec
        if not self.excludes_zero():
            return ApproxComplex(L.fzero, L.fzero, _rsqrt_up(self.abs_upper()), p)
        self._check_cut()
        re_, im_ = L.mpc_sqrt((self.re, self.im), p + 20, _NEAR)
        low = _rsub_down(self.mag_down(), self.err)
        prop = _rdiv(self.err, L.mpf_mul(_r(2), _rsqrt_down(low), RAD_PREC, _DOWN))
        m = _mag_up(re_, im_)
        rnd = _rmul(m, _rpow2(2 - p))
        re_ = L.mpf_pos(re_, p, _NEAR)
        im_ = L.mpf_pos(im_, p, _NEAR)
        return ApproxComplex(re_, im_, _radd(prop, rnd), p)

    def root(self, n: int) -> "ApproxComplex":
        """Principal n-th root."""
        if n == 2:
            return self.sqrt()
        return (self.log() * Fraction(1, n)).exp()

    # -- output -------------------------------------------------------------
    def to_string(self, digits: Optional[int] = None) -> str:
        if digits is None:
            digits = max(5, int(self.prec * 0.30103) - 2)
        z = self.mid
        with mp.workprec(self.prec + 10):
            if self.is_real() and L.mpf_le(L.mpf_abs(self.im), self.err):
                mid = mp.nstr(z.real, digits)
            else:
                mid = mp.nstr(z, digits)
        return f"{mid} +/- {mp.nstr(self.radius, 3)}"

    def __repr__(self):
        return f"ApproxComplex({self.to_string(20)}, prec={self.prec})"


def as_ball(x, prec: int) -> ApproxComplex:
    return ApproxComplex.from_exact(x, prec)


def embed(x: AlgebraicNumber, precision_bits: int, conjugate_sign: int = 1) -> ApproxComplex:
    """Real embedding p + sign*q*sqrt(D) of a rational or real-quadratic element."""
    x = AlgebraicNumber.coerce(x)
    if conjugate_sign not in (1, -1):
        raise ValueError("conjugate_sign must be +1 or -1")
    P = precision_bits
    if x.D == 0:
        return ApproxComplex.from_exact(x.p, P)
    if x.D < 0:
        raise ValueError("negative radicand has no real embedding")
    s = ApproxComplex.from_exact(x.D, P + 8).sqrt()
    out = ApproxComplex.from_exact(x.p, P + 8) + s * (conjugate_sign * x.q)
    return out.with_prec(P) if out.prec > P else out


# ---------------------------------------------------------------------------
# lattice reduction and recognition

def lll_reduce(basis, delta: Fraction = Fraction(3, 4)):
    """Textbook LLL on integer row vectors using exact rational Gram-Schmidt."""
    b = [list(map(int, v)) for v in basis]
    n = len(b)

    def dot(u, v):
        return sum(x * y for x, y in zip(u, v))

    def gso():
        bs, mu, bb = [], [[Fraction(0)] * n for _ in range(n)], []
        for i in range(n):
            v = [Fraction(x) for x in b[i]]
            for j in range(i):
                mu[i][j] = dot(b[i], bs[j]) / bb[j] if bb[j] else Fraction(0)
                v = [x - mu[i][j] * y for x, y in zip(v, bs[j])]
            bs.append(v)
            bb.append(dot(v, v))
        return mu, bb

    mu, bb = gso()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                mu, bb = gso()
        if bb[k] >= (delta - mu[k][k - 1] ** 2) * bb[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            mu, bb = gso()
            k = max(k - 1, 1)
    return b


def _eff_bits(x: ApproxComplex) -> int:
    if x.err == L.fzero:
        return x.prec
    e = mp.make_mpf(x.err)
    return max(0, min(x.prec, int(-mp.log(e, 2))))


def recognize_quadratic(x: ApproxComplex, max_height: int, *,
                        confirm: Optional[ApproxComplex] = None,
                        radicand_hint: Optional[int] = None) -> Optional[AlgebraicNumber]:
    """Guess an algebraic number of degree <= 2 and height <= max_height near x.

    Returns None when no candidate passes.  Raises InsufficientPrecision when
    the enclosure is too wide for the requested height.  ``confirm`` is an
    optional tighter enclosure of the same number used as a second check.
    """
    if not x.is_real():
        raise ValueError("recognize_quadratic expects a real enclosure")
    H = int(max_height)
    bits = _eff_bits(x)
    if x.err != L.fzero and mp.make_mpf(x.err) > mp.mpf(2) ** -10 / mp.mpf(H) ** 3:
        raise InsufficientPrecision(f"radius {mp.nstr(x.radius, 3)} too large for height {H}")
    S = 1 << (bits // 2)
    xm = mp.make_mpf(x.re)
    with mp.workprec(x.prec + 20):
        rows = [[1, 0, 0, int(mp.nint(S * xm * xm))],
                [0, 1, 0, int(mp.nint(S * xm))],
                [0, 0, 1, S]]
    red = lll_reduce(rows)
    red.sort(key=lambda v: sum(c * c for c in v))
    threshold = mp.mpf(2) ** (-(bits // 4))
    for v in red:
        p, q, r = v[:3]
        if (p, q, r) == (0, 0, 0) or max(abs(p), abs(q), abs(r)) > H:
            continue
        g = math.gcd(math.gcd(p, q), r)
        p, q, r = p // g, q // g, r // g
        cand = _root_near(p, q, r, x, radicand_hint)
        if cand is None:
            continue
        val = p * x * x + q * x + r
        if mp.make_mpf(val.mag_up()) >= threshold:
            continue
        if confirm is not None:
            c = embed_candidate(cand, confirm.prec)
            if not confirm.intersects(c):
                continue
        return cand
    return None


def embed_candidate(c: AlgebraicNumber, prec: int) -> ApproxComplex:
    return embed(c, prec, 1)


def _root_near(p, q, r, x: ApproxComplex, hint=None) -> Optional[AlgebraicNumber]:
    if p == 0:
        if q == 0:
            return None
        return AlgebraicNumber(Fraction(-r, q))
    disc = q * q - 4 * p * r
    if disc < 0:
        return None
    k, m = squarefree_part(disc, hint)
    if m in (0, 1):
        s = k if m == 1 else 0
        roots = [AlgebraicNumber(Fraction(-q + s, 2 * p)), AlgebraicNumber(Fraction(-q - s, 2 * p))]
    else:
        roots = [AlgebraicNumber(Fraction(-q, 2 * p), Fraction(k, 2 * p), m),
                 AlgebraicNumber(Fraction(-q, 2 * p), Fraction(-k, 2 * p), m)]
    xm = mp.make_mpf(x.re)
    best = min(roots, key=lambda c: abs(mp.make_mpf(embed(c, x.prec + 10).re) - xm))
    return best


# ---------------------------------------------------------------------------
# imaginary quadratic points

class QuadraticIrrational:
    """tau = (-b + sqrt(-d)) / (2a) for a primitive positive definite form (a, b, c)."""

    __slots__ = ("a", "b", "c")

    def __init__(self, a: int, b: int, c: int):
        a, b, c = int(a), int(b), int(c)
        if a <= 0:
            raise ValueError("a must be positive")
        if math.gcd(math.gcd(a, b), c) != 1:
            raise ValueError(f"form ({a},{b},{c}) is not primitive")
        if 4 * a * c - b * b <= 0:
            raise ValueError(f"form ({a},{b},{c}) is not positive definite")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    def __reduce__(self):
        return (type(self), (self.a, self.b, self.c))

    def __setattr__(self, name, value):
        raise AttributeError("QuadraticIrrational is immutable")

    @property
    def d(self) -> int:
        return 4 * self.a * self.c - self.b * self.b

    @property
    def disc(self) -> int:
        return -self.d

    @property
    def norm_a_tau(self) -> int:
        """|a*tau|^2 = a*c, the integer N of the integrality multiplier."""
        return self.a * self.c

    def __eq__(self, other):
        return isinstance(other, QuadraticIrrational) and self.form == other.form

    def __hash__(self):
        return hash(self.form)

    @property
    def form(self) -> Tuple[int, int, int]:
        return (self.a, self.b, self.c)

    @classmethod
    def parse(cls, text: str) -> "QuadraticIrrational":
        """From "a,b,c" or an expression like "(-1 + sqrt(-7))/2" or "i"."""
        t = text.strip()
        if re.fullmatch(r"-?\d+\s*,\s*-?\d+\s*,\s*-?\d+", t):
            return cls(*(int(x) for x in t.split(",")))
        t = re.sub(r"(?<![A-Za-z_])i(?![A-Za-z_])", "sqrt(-1)", t)
        x = parse_algebraic(t)
        if x.D >= 0 or x.q <= 0:
            raise ValueError(f"{text!r} is not in the upper half plane")
        # (tau - p)^2 = q^2 D
        p, q2D = x.p, x.q * x.q * x.D
        B_, C_ = -2 * p, p * p - q2D
        den = math.lcm(B_.denominator, C_.denominator)
        A, B, C = den, int(B_ * den), int(C_ * den)
        g = math.gcd(math.gcd(A, B), C)
        return cls(A // g, B // g, C // g)

    def __repr__(self):
        return f"QuadraticIrrational{self.form}"

    def __str__(self):
        num = f"{-self.b} + sqrt(-{self.d})" if self.b else f"sqrt(-{self.d})"
        return f"({num})/{2 * self.a}"

    def real_part(self) -> Fraction:
        return Fraction(-self.b, 2 * self.a)

    def ball(self, prec: int) -> ApproxComplex:
        im = ApproxComplex.from_exact(self.d, prec + 8).sqrt() / (2 * self.a)
        re_ = ApproxComplex.from_exact(self.real_part(), prec + 8)
        out = re_ + im * ApproxComplex.i(prec + 8)
        return out.with_prec(prec)

    def imag_squared(self) -> Fraction:
        return Fraction(self.d, 4 * self.a * self.a)

    def is_reduced(self) -> bool:
        a, b, c = self.form
        if not (abs(b) <= a <= c):
            return False
        if (abs(b) == a or a == c) and b < 0:
            return False
        return True

    def reduce(self) -> Tuple["QuadraticIrrational", Tuple[int, int, int, int]]:
        """Equivalent reduced point and the matrix g with reduced = g . tau."""
        a, b, c = self.form
        g = (1, 0, 0, 1)

        def mul(m, n):
            return (m[0] * n[0] + m[1] * n[2], m[0] * n[1] + m[1] * n[3],
                    m[2] * n[0] + m[3] * n[2], m[2] * n[1] + m[3] * n[3])

        while True:
            # translate tau -> tau + k so that -a < b <= a
            if not (-a < b <= a):
                k = -((a - b) // (2 * a))
                # tau + k has form (a, b - 2ak, ...)
                b2 = b - 2 * a * k
                c = (b2 * b2 + self.d) // (4 * a)
                b = b2
                g = mul((1, k, 0, 1), g)
            if a > c:
                # tau -> -1/tau swaps a and c
                a, b, c = c, -b, a
                g = mul((0, -1, 1, 0), g)
                continue
            if a == c and b < 0:
                b = -b
                g = mul((0, -1, 1, 0), g)
            break
        return QuadraticIrrational(a, b, c), g

    def apply(self, g) -> "QuadraticIrrational":
        """Image of tau under g = (p, q, r, s) in SL2(Z), as a primitive form."""
        p, q, r, s = g
        if p * s - q * r != 1:
            raise ValueError("matrix must have determinant 1")
        # tau = g^{-1} tau', substitute into a t^2 + b t + c
        a, b, c = self.form
        # g^{-1} = (s, -q, -r, p): tau = (s t' - q)/(-r t' + p)
        A = a * s * s - b * s * r + c * r * r
        B = -2 * a * s * q + b * (s * p + q * r) - 2 * c * r * p
        C = a * q * q - b * q * p + c * p * p
        if A < 0:
            A, B, C = -A, -B, -C
        return QuadraticIrrational(A, B, C)


def reduced_forms(d: int):
    """Reduced primitive forms of discriminant -d (class group representatives)."""
    d = int(d)
    if d <= 0 or (-d) % 4 not in (0, 1):
        raise ValueError(f"-{d} is not a negative discriminant")
    out = []
    a = 1
    while 3 * a * a <= d:
        for b in range(-a + 1, a + 1):
            if (b * b + d) % (4 * a):
                continue
            c = (b * b + d) // (4 * a)
            if c < a:
                continue
            if b < 0 and a == c:
                continue
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            out.append(QuadraticIrrational(a, b, c))
        a += 1
    return out


def class_number(d: int) -> int:
    return len(reduced_forms(d))


class DomainError(ValueError):
    """Input lies outside the region where an evaluation or identity is valid."""
