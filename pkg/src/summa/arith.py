"""Scalar arithmetic: exact rationals, p-adic values, interval-style reals.

Coefficients are plain :class:`fractions.Fraction` objects; they are always
reduced and arithmetic on them never rounds.  :class:`PAdicValue` tracks a
p-adic number to finite precision and :class:`ApproxReal` carries a binary
float together with a rigorous absolute error bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import mpmath
from mpmath import libmp

from .errors import DivisionByZero, NotPrime

Coefficient = Fraction
INF = math.inf
DEFAULT_BITS = 128
_TRIAL_LIMIT = 10**6


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact coefficient")


# -- rational_ops -----------------------------------------------------------

def add(a, b) -> Fraction:
    return as_fraction(a) + as_fraction(b)


def sub(a, b) -> Fraction:
    return as_fraction(a) - as_fraction(b)


def mul(a, b) -> Fraction:
    return as_fraction(a) * as_fraction(b)


def neg(a) -> Fraction:
    return -as_fraction(a)


def div(a, b) -> Fraction:
    b = as_fraction(b)
    if b == 0:
        raise DivisionByZero("division of a rational by zero")
    return as_fraction(a) / b


def power(a, k: int) -> Fraction:
    a = as_fraction(a)
    if k < 0 and a == 0:
        raise DivisionByZero("zero raised to a negative power")
    return a**k


# -- primes and valuations --------------------------------------------------

def is_prime(p: int) -> bool:
    """Deterministic trial division, exact for ``p <= 10**12``."""
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    limit = math.isqrt(p)
    if limit > _TRIAL_LIMIT:
        raise NotPrime(f"cannot certify primality of {p} by trial division")
    d = 3
    while d <= limit:
        if p % d == 0:
            return False
        d += 2
    return True


def require_prime(p: int) -> None:
    if not isinstance(p, int) or not is_prime(p):
        raise NotPrime(f"{p!r} is not prime")


def int_valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation(r, p: int):
    """p-adic valuation of a rational; ``INF`` for zero."""
    r = as_fraction(r)
    if r == 0:
        return INF
    return int_valuation(r.numerator, p) - int_valuation(r.denominator, p)


# -- p-adic values ----------------------------------------------------------

@dataclass(frozen=True)
class PAdicValue:
    """``p**valuation * unit`` known modulo ``p**(valuation + precision)``.

    The zero sentinel has ``valuation == INF`` and ``unit == 0``; for it,
    ``precision`` is the absolute precision (value known to be 0 mod
    ``p**precision``), which may be negative after products of values with
    negative valuation.
    """

    prime: int
    valuation: Union[int, float]
    unit: int
    precision: int

    def __post_init__(self):
        if self.precision < 0 and self.valuation != INF:
            raise ValueError("precision must be nonnegative")
        if self.valuation == INF:
            if self.unit != 0:
                raise ValueError("zero sentinel carries unit 0")
        elif self.unit % self.prime == 0:
            raise ValueError("unit residue must be coprime to p")

    @property
    def is_zero(self) -> bool:
        return self.valuation == INF

    @property
    def absolute_precision(self) -> int:
        if self.is_zero:
            return self.precision
        return self.valuation + self.precision

    @property
    def modulus(self) -> int:
        return self.prime**self.precision

    def norm(self) -> Fraction:
        return padic_norm(self)

    def residue(self) -> int:
        """Representative modulo ``p**absolute_precision`` (needs v >= 0)."""
        if self.is_zero:
            return 0
        if self.valuation < 0:
            raise ValueError("negative valuation has no integral residue")
        m = self.prime**self.absolute_precision
        return (self.prime**self.valuation * self.unit) % m

    def congruent(self, r) -> bool:
        """True when the rational ``r`` agrees with this value to its precision."""
        other = padic_embed(r, self.prime, max(self.precision, 1) + 4)
        diff = self - other
        return diff.is_zero

    def _from_parts(self, v, unit, abs_prec) -> "PAdicValue":
        p = self.prime
        if unit == 0 or v >= abs_prec:
            return PAdicValue(p, INF, 0, abs_prec)
        extra = 0
        while unit % p == 0:
            unit //= p
            extra += 1
        v += extra
        if v >= abs_prec:
            return PAdicValue(p, INF, 0, abs_prec)
        k = abs_prec - v
        return PAdicValue(p, v, unit % p**k, k)

    def _check(self, other):
        if not isinstance(other, PAdicValue):
            other = padic_embed(other, self.prime, self.precision or 1)
            return other
        if other.prime != self.prime:
            raise ValueError("p-adic values over different primes")
        return other

    def __add__(self, other):
        other = self._check(other)
        abs_prec = min(self.absolute_precision, other.absolute_precision)
        if self.is_zero:
            return other._truncate(abs_prec)
        if other.is_zero:
            return self._truncate(abs_prec)
        v = min(self.valuation, other.valuation)
        p = self.prime
        total = self.unit * p ** (self.valuation - v) + other.unit * p ** (other.valuation - v)
        if abs_prec <= v:
            return PAdicValue(p, INF, 0, abs_prec)
        return self._from_parts(v, total % p ** (abs_prec - v), abs_prec)

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero:
            return self
        return PAdicValue(self.prime, self.valuation, (-self.unit) % self.modulus, self.precision)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        p = self.prime
        if self.is_zero or other.is_zero:
            a = self.absolute_precision + (0 if other.is_zero else other.valuation)
            b = other.absolute_precision + (0 if self.is_zero else self.valuation)
            if self.is_zero and other.is_zero:
                a = b = self.absolute_precision + other.absolute_precision
            return PAdicValue(p, INF, 0, min(a, b))
        k = min(self.precision, other.precision)
        return PAdicValue(p, self.valuation + other.valuation,
                          (self.unit * other.unit) % p**k, k)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._check(other)
        if other.is_zero:
            raise DivisionByZero("p-adic division by zero")
        p = self.prime
        if self.is_zero:
            return PAdicValue(p, INF, 0, self.absolute_precision - other.valuation)
        k = min(self.precision, other.precision)
        inv = pow(other.unit, -1, p**k)
        return PAdicValue(p, self.valuation - other.valuation, (self.unit * inv) % p**k, k)

    def _truncate(self, abs_prec):
        if self.is_zero:
            return PAdicValue(self.prime, INF, 0, min(self.precision, abs_prec))
        if abs_prec <= self.valuation:
            return PAdicValue(self.prime, INF, 0, abs_prec)
        k = min(self.precision, abs_prec - self.valuation)
        return PAdicValue(self.prime, self.valuation, self.unit % self.prime**k, k)

    def rational_guess(self):
        """Smallest-height rational matching the value (lattice reduction), or None."""
        if self.is_zero:
            return Fraction(0)
        m = self.prime**self.precision
        r = _rational_reconstruction(self.unit, m)
        if r is None:
            return None
        return r * Fraction(self.prime) ** self.valuation

    def __str__(self):
        if self.is_zero:
            return f"O({self.prime}^{self.precision})"
        guess = self.rational_guess()
        shown = str(guess) if guess is not None else f"{self.prime}^{self.valuation}*{self.unit}"
        return f"{shown} + O({self.prime}^{self.absolute_precision})"


def _rational_reconstruction(a: int, m: int):
    """Find n/d with n ≡ a·d (mod m), |n|, d <= sqrt(m/2)."""
    bound = math.isqrt(m // 2)
    r0, r1 = m, a % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if math.gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1, s1)


def padic_embed(r, p: int, k: int) -> PAdicValue:
    """Embed a rational into Q_p with relative precision ``k``."""
    require_prime(p)
    if k <= 0:
        raise ValueError("precision must be positive")
    r = as_fraction(r)
    if r == 0:
        return PAdicValue(p, INF, 0, k)
    v = valuation(r, p)
    num = r.numerator
    den = r.denominator
    if v > 0:
        num //= p**v
    elif v < 0:
        den //= p ** (-v)
    m = p**k
    return PAdicValue(p, v, (num * pow(den, -1, m)) % m, k)


def padic_norm(x: PAdicValue) -> Fraction:
    if x.is_zero:
        return Fraction(0)
    return Fraction(x.prime) ** (-x.valuation)


# -- interval-style reals ---------------------------------------------------

_ERR_PREC = 53
_mpf = mpmath.mp.make_mpf


def _eadd(a, b):
    return libmp.mpf_add(a, b, _ERR_PREC, libmp.round_ceiling)


def _emul(a, b):
    return libmp.mpf_mul(a, b, _ERR_PREC, libmp.round_ceiling)


def _ulp_bound(t, bits):
    """Upper bound on the rounding error of a nearest-rounded ``t``."""
    if t == libmp.fzero:
        return libmp.fzero
    # |t| * 2^(1-bits), rounded up
    return libmp.mpf_shift(libmp.mpf_abs(libmp.mpf_pos(t, _ERR_PREC, libmp.round_ceiling)), 1 - bits)


def _to_raw(x, bits):
    """Return (nearest raw mpf at ``bits``, error bound raw)."""
    if isinstance(x, ApproxReal):
        return x._v, x._e
    if isinstance(x, int) and not isinstance(x, bool):
        v = libmp.from_int(x, bits, libmp.round_nearest)
        exact = libmp.from_int(x)
        err = libmp.mpf_abs(libmp.mpf_sub(exact, v, _ERR_PREC, libmp.round_ceiling))
        return v, err
    if isinstance(x, Fraction):
        v = libmp.from_rational(x.numerator, x.denominator, bits, libmp.round_nearest)
        return v, _ulp_bound(v, bits)
    if hasattr(x, "_mpf_"):
        v = libmp.mpf_pos(x._mpf_, bits, libmp.round_nearest)
        err = libmp.mpf_abs(libmp.mpf_sub(x._mpf_, v, _ERR_PREC, libmp.round_ceiling))
        return v, err
    if isinstance(x, float):
        return _to_raw(mpmath.mpf(x), bits)
    raise TypeError(f"cannot convert {type(x).__name__} to ApproxReal")


class ApproxReal:
    """A binary float at ``bits`` of mantissa plus an absolute error bound.

    Every operation rounds the centre to nearest and adds a conservative
    rounding term to the bound, so ``|true - value| <= error`` is preserved.
    Instances are immutable.
    """

    __slots__ = ("_v", "_e", "bits")

    def __init__(self, value=0, error=0, bits: int = DEFAULT_BITS):
        v, e = _to_raw(value, bits)
        if error:
            err_raw = _to_raw(error, _ERR_PREC)
            e = _eadd(e, _eadd(libmp.mpf_abs(err_raw[0]), err_raw[1]))
        object.__setattr__(self, "_v", v)
        object.__setattr__(self, "_e", e)
        object.__setattr__(self, "bits", bits)

    def __setattr__(self, name, value):
        raise AttributeError("ApproxReal is immutable")

    @classmethod
    def _raw(cls, v, e, bits):
        obj = object.__new__(cls)
        object.__setattr__(obj, "_v", v)
        object.__setattr__(obj, "_e", e)
        object.__setattr__(obj, "bits", bits)
        return obj

    @classmethod
    def from_mpf(cls, value, error, bits=DEFAULT_BITS):
        return cls(value, error, bits)

    @property
    def value(self) -> mpmath.mpf:
        return _mpf(self._v)

    @property
    def error(self) -> mpmath.mpf:
        return _mpf(self._e)

    @property
    def lower(self) -> mpmath.mpf:
        return _mpf(libmp.mpf_sub(self._v, self._e, self.bits + 8, libmp.round_floor))

    @property
    def upper(self) -> mpmath.mpf:
        return _mpf(libmp.mpf_add(self._v, self._e, self.bits + 8, libmp.round_ceiling))

    def __float__(self):
        return libmp.to_float(self._v)

    def _coerce(self, other):
        if isinstance(other, ApproxReal):
            return other
        return ApproxReal(other, bits=self.bits)

    def _finish(self, exact_or_rounded, err, bits):
        v = libmp.mpf_pos(exact_or_rounded, bits, libmp.round_nearest)
        return ApproxReal._raw(v, _eadd(err, _ulp_bound(v, bits)), bits)

    def __add__(self, other):
        other = self._coerce(other)
        bits = min(self.bits, other.bits)
        t = libmp.mpf_add(self._v, other._v)
        return self._finish(t, _eadd(self._e, other._e), bits)

    __radd__ = __add__

    def __neg__(self):
        return ApproxReal._raw(libmp.mpf_neg(self._v), self._e, self.bits)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        bits = min(self.bits, other.bits)
        t = libmp.mpf_mul(self._v, other._v)
        a = libmp.mpf_abs(self._v)
        b = libmp.mpf_abs(other._v)
        err = _eadd(_eadd(_emul(a, other._e), _emul(b, self._e)), _emul(self._e, other._e))
        return self._finish(t, err, bits)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        bits = min(self.bits, other.bits)
        b = libmp.mpf_abs(other._v)
        margin = libmp.mpf_sub(b, other._e, _ERR_PREC, libmp.round_floor)
        if libmp.mpf_le(margin, libmp.fzero):
            raise DivisionByZero("divisor interval contains zero")
        q = libmp.mpf_div(self._v, other._v, bits + 4, libmp.round_nearest)
        # |a/b - a'/b'| <= (|a| eb + |b| ea) / (|b| (|b| - eb))
        a = libmp.mpf_abs(self._v)
        num = _eadd(_emul(a, other._e), _emul(b, self._e))
        den = libmp.mpf_mul(b, margin, _ERR_PREC, libmp.round_floor)
        err = libmp.mpf_div(num, den, _ERR_PREC, libmp.round_ceiling)
        err = _eadd(err, _ulp_bound(q, bits + 3))
        return self._finish(q, err, bits)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return ApproxReal(1, bits=self.bits) / (self ** (-k))
        result = ApproxReal(1, bits=self.bits)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def sqrt(self):
        lo = libmp.mpf_sub(self._v, self._e, self.bits + 8, libmp.round_floor)
        if libmp.mpf_lt(lo, libmp.fzero):
            raise ValueError("sqrt of an interval reaching below zero")
        r = libmp.mpf_sqrt(self._v, self.bits + 4, libmp.round_nearest)
        # |sqrt(x) - sqrt(x')| <= e / (sqrt(lo) + sqrt(x'))
        s = libmp.mpf_add(libmp.mpf_sqrt(lo, _ERR_PREC, libmp.round_floor),
                          libmp.mpf_sqrt(self._v, _ERR_PREC, libmp.round_floor),
                          _ERR_PREC, libmp.round_floor)
        if s == libmp.fzero:
            err = libmp.mpf_sqrt(self._e, _ERR_PREC, libmp.round_ceiling)
        else:
            err = libmp.mpf_div(self._e, s, _ERR_PREC, libmp.round_ceiling)
        return self._finish(r, _eadd(err, _ulp_bound(r, self.bits + 3)), self.bits)

    def exp(self):
        r = libmp.mpf_exp(self._v, self.bits + 8, libmp.round_nearest)
        # |exp(x+d) - exp(x)| <= exp(x) (exp(e) - 1) <= exp(x) e exp(e)
        ee = libmp.mpf_exp(self._e, _ERR_PREC, libmp.round_ceiling)
        err = _emul(_emul(libmp.mpf_abs(libmp.mpf_pos(r, _ERR_PREC, libmp.round_ceiling)), self._e), ee)
        err = _eadd(err, _ulp_bound(r, self.bits + 6))
        return self._finish(r, err, self.bits)

    def contains(self, x) -> bool:
        """Whether the exact value ``x`` lies inside [value - error, value + error]."""
        if isinstance(x, Fraction):
            x = libmp.from_rational(x.numerator, x.denominator, self.bits + 64, libmp.round_nearest)
            slack = _ulp_bound(x, self.bits + 63)
        else:
            x, slack = _to_raw(x, self.bits + 64)
        d = libmp.mpf_abs(libmp.mpf_sub(x, self._v, self.bits + 64, libmp.round_nearest))
        bound = _eadd(self._e, _eadd(slack, _ulp_bound(d, self.bits + 63)))
        return libmp.mpf_le(d, bound)

    def is_zero_free(self) -> bool:
        return libmp.mpf_gt(libmp.mpf_abs(self._v), self._e)

    def to_fraction(self) -> Fraction:
        man, exp = libmp.to_man_exp(self._v) if self._v != libmp.fzero else (0, 0)
        return Fraction(man) * Fraction(2) ** exp

    def __repr__(self):
        return f"ApproxReal({mpmath.nstr(self.value, 20)} ± {mpmath.nstr(self.error, 3)}, bits={self.bits})"

    def __str__(self):
        digits = max(6, min(30, int(self.bits * 0.30103)))
        return f"{mpmath.nstr(self.value, digits)} ± {mpmath.nstr(self.error, 3)}"


# -- codomains and regularity ----------------------------------------------

@dataclass(frozen=True)
class Codomain:
    """Where sums land: ``Q``, ``Z`` (Q plus an integrality check), ``R`` or ``padic``."""

    kind: str
    prime: int = 0

    @classmethod
    def parse(cls, text: str) -> "Codomain":
        t = text.strip()
        if t in ("Q", "Z", "R"):
            return cls(t)
        if t.startswith("padic:"):
            p = int(t.split(":", 1)[1].removeprefix("p="))
            require_prime(p)
            return cls("padic", p)
        raise ValueError(f"unknown codomain {text!r}")

    def __str__(self):
        return f"padic:{self.prime}" if self.kind == "padic" else self.kind


Q = Codomain("Q")
Z = Codomain("Z")
R = Codomain("R")


def is_regular(x, codomain: Codomain = Q) -> bool:
    """Non-zerodivisor test; every supported codomain is a domain so this is x != 0.

    For ApproxReal the value must be separated from zero by its error bound;
    for Z divisibility is left to the caller.
    """
    if isinstance(x, ApproxReal):
        return x.is_zero_free()
    if isinstance(x, PAdicValue):
        return not x.is_zero
    return as_fraction(x) != 0
