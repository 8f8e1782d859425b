"""Formal power series over Q as lazy, memoized coefficient streams.

A :class:`Series` wraps a coefficient source and an optional closed-form
tag.  Sequential sources compute coefficient ``n`` from the memo of earlier
coefficients (recurrences, inverses, convolutions); direct sources are pure
functions of the index and are cached in a dictionary, which keeps sparse
series cheap at very large indices.
"""

from __future__ import annotations

import bisect
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from . import kernels
from .arith import as_fraction
from .errors import (
    BudgetExceeded,
    ConstantTermNotOne,
    DenominatorVanishesAtZero,
    NonMonotoneExponents,
    RecurrenceSingular,
)
from .poly import Polynomial, RationalFunction

DEFAULT_CAP = 2**20
ZERO = Fraction(0)
ONE = Fraction(1)


# -- closed-form tags -------------------------------------------------------

@dataclass(frozen=True, eq=False)
class BinomialPower:
    base: "Series"
    exponent: Fraction


@dataclass(frozen=True, eq=False)
class GapSeries:
    exponents: Callable[[int], int]
    terms: Callable[[int], Fraction]
    start: int = 0
    note: str = ""


@dataclass(frozen=True, eq=False)
class ProductNode:
    factors: tuple


@dataclass(frozen=True, eq=False)
class Holonomic:
    recurrence: tuple
    initial: tuple


@dataclass(frozen=True, eq=False)
class Inverse:
    """The formal inverse of ``of``."""

    of: "Series"


@dataclass(frozen=True, eq=False)
class Ratio:
    """``num * inverse(den)`` for non-rational operands."""

    num: "Series"
    den: "Series"


class Series:
    """A formal power series ``sum x_n s^n`` with exact rational coefficients.

    ``source`` is ``f(n)`` for direct series and ``f(n, memo)`` for
    sequential ones, where ``memo`` already holds coefficients ``0..n-1``.
    ``support(limit)`` (sparse series only) returns the sorted indices
    ``<= limit`` where a coefficient may be nonzero.
    """

    def __init__(self, source, *, closed_form=None, sequential=False,
                 support=None, name=None, cap=DEFAULT_CAP):
        self._source = source
        self.closed_form = closed_form
        self.sequential = sequential
        self.support = support
        self.name = name
        self.cap = cap
        self._lock = threading.RLock()
        self._memo: list = []
        self._cache: dict = {}

    # -- access --
    @property
    def sparse(self) -> bool:
        return self.support is not None

    @property
    def rational(self) -> Optional[RationalFunction]:
        cf = self.closed_form
        return cf if isinstance(cf, RationalFunction) else None

    def coefficient(self, n: int) -> Fraction:
        if n < 0:
            raise ValueError("coefficient index must be nonnegative")
        if n > self.cap:
            raise BudgetExceeded(f"coefficient {n} exceeds the cap {self.cap}")
        if self.sequential:
            memo = self._memo
            if n < len(memo):
                return memo[n]
            with self._lock:
                while len(memo) <= n:
                    memo.append(as_fraction(self._source(len(memo), memo)))
                return memo[n]
        cache = self._cache
        try:
            return cache[n]
        except KeyError:
            pass
        value = as_fraction(self._source(n))
        with self._lock:
            cache.setdefault(n, value)
        return cache[n]

    def prefix(self, m: int) -> list:
        """Coefficients ``0..m-1``; the returned list must not be mutated."""
        if m <= 0:
            return []
        if self.sequential:
            self.coefficient(m - 1)
            memo = self._memo
            return memo if len(memo) == m else memo[:m]
        if self.sparse:
            out = [ZERO] * m
            for k in self.support(m - 1):
                out[k] = self.coefficient(k)
            return out
        return [self.coefficient(k) for k in range(m)]

    def coeffs(self, m: int) -> list:
        return list(self.prefix(m))

    def __getitem__(self, key):
        if isinstance(key, slice):
            start, stop, step = key.indices(key.stop if key.stop is not None else 0)
            return [self.coefficient(k) for k in range(start, stop, step)]
        return self.coefficient(key)

    def nonzero_terms(self, limit: int):
        """(index, coefficient) pairs with nonzero coefficient up to ``limit``."""
        idx = self.support(limit) if self.sparse else range(limit + 1)
        out = []
        for k in idx:
            c = self.coefficient(k)
            if c:
                out.append((k, c))
        return out

    def dump(self, m: int) -> str:
        return "".join(f"{k}: {c}\n" for k, c in enumerate(self.prefix(m)))

    def __repr__(self):
        label = self.name or (str(self.closed_form) if self.rational else "series")
        return f"Series({label})"

    # -- operator sugar --
    def __add__(self, other):
        return linear_combine(ONE, self, ONE, as_series(other))

    __radd__ = __add__

    def __sub__(self, other):
        return linear_combine(ONE, self, -ONE, as_series(other))

    def __rsub__(self, other):
        return linear_combine(ONE, as_series(other), -ONE, self)

    def __neg__(self):
        return scale(-ONE, self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return scale(other, self)
        return cauchy_product(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return scale(other, self)
        return cauchy_product(as_series(other), self)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return scale(1 / as_fraction(other), self)
        return divide(self, other)

    def __pow__(self, k: int):
        return power(self, k)


# -- constructors -----------------------------------------------------------

def as_series(x) -> Series:
    if isinstance(x, Series):
        return x
    if isinstance(x, RationalFunction):
        return expand_rational(x)
    if isinstance(x, Polynomial):
        return expand_rational(RationalFunction(x))
    return constant(x)


def constant(c) -> Series:
    return from_polynomial(Polynomial([c]))


def zero() -> Series:
    return from_polynomial(Polynomial())


def sigma_var() -> Series:
    return from_polynomial(Polynomial([0, 1]), name="s")


def from_polynomial(p: Polynomial, name=None) -> Series:
    cs = p.coeffs
    d = len(cs)

    def src(n):
        return cs[n] if n < d else ZERO

    return Series(src, closed_form=RationalFunction(p), support=lambda lim: [k for k in range(min(d, lim + 1)) if cs[k]],
                  name=name)


def from_coefficients(values: Sequence, name=None) -> Series:
    """Finitely supported series with the given leading coefficients."""
    return from_polynomial(Polynomial(values), name=name)


def from_function(f: Callable[[int], object], name=None, closed_form=None) -> Series:
    """Dense series from a pure index function."""
    return Series(f, closed_form=closed_form, name=name)


def expand_rational(r: RationalFunction, name=None) -> Series:
    """Power series of ``P/Q`` through the recurrence ``Q X = P``."""
    if not isinstance(r, RationalFunction):
        raise TypeError("expand_rational needs a RationalFunction")
    if r.den[0] == 0:
        raise DenominatorVanishesAtZero("denominator vanishes at zero")
    if r.is_polynomial:
        return from_polynomial(r.num.scale(1 / r.den[0]), name=name)
    p = r.num.coeffs
    q = r.den.coeffs
    q0 = q[0]
    taps = [(k, c) for k, c in enumerate(q) if k > 0 and c != 0]

    def src(n, memo):
        acc = p[n] if n < len(p) else ZERO
        for k, c in taps:
            if k > n:
                break
            acc -= c * memo[n - k]
        return acc / q0

    return Series(src, closed_form=r, sequential=True, name=name)


def geometric(ratio) -> Series:
    ratio = as_fraction(ratio)
    return expand_rational(RationalFunction(Polynomial([1]), Polynomial([1, -ratio])), name=f"geom({ratio})")


# -- structural operators ---------------------------------------------------

def shift(x: Series, k: int = 1) -> Series:
    """Multiply by ``s**k`` (prepend ``k`` zeros)."""
    if k == 0:
        return x
    cf = x.rational.shift(k) if x.rational else None
    if cf is not None and cf.is_polynomial:
        return from_polynomial(cf.num)
    support = None
    if x.sparse:
        support = lambda lim: [i + k for i in x.support(lim - k)] if lim >= k else []
    return Series(lambda n: x.coefficient(n - k) if n >= k else ZERO, closed_form=cf, support=support)


def left_shift(x: Series, k: int = 1) -> Series:
    """Drop the first ``k`` coefficients."""
    cf = None
    r = x.rational
    if r is not None:
        head = Polynomial(x.prefix(k))
        num = r.num - head * r.den
        cf = RationalFunction(Polynomial(num.coeffs[k:]), r.den)
    support = None
    if x.sparse:
        support = lambda lim: [i - k for i in x.support(lim + k) if i >= k]
    if cf is not None and cf.is_polynomial:
        return from_polynomial(cf.num)
    if x.sequential or not x.sparse:
        return Series(lambda n, memo: x.coefficient(n + k), closed_form=cf, sequential=True)
    return Series(lambda n: x.coefficient(n + k), closed_form=cf, support=support)


def linear_combine(a, x: Series, b, y: Series) -> Series:
    """Coefficientwise ``a*x + b*y``."""
    a, b = as_fraction(a), as_fraction(b)
    if x.rational is not None and y.rational is not None:
        r = x.rational * RationalFunction(Polynomial([a])) + y.rational * RationalFunction(Polynomial([b]))
        return expand_rational(r)
    if x.sparse and y.sparse:
        def support(lim):
            return sorted(set(x.support(lim)) | set(y.support(lim)))

        return Series(lambda n: a * x.coefficient(n) + b * y.coefficient(n), support=support)
    return Series(lambda n, memo: a * x.coefficient(n) + b * y.coefficient(n), sequential=True)


def scale(a, x: Series) -> Series:
    a = as_fraction(a)
    if x.rational is not None:
        return expand_rational(x.rational * RationalFunction(Polynomial([a])))
    if x.sparse:
        return Series(lambda n: a * x.coefficient(n), support=x.support)
    return Series(lambda n, memo: a * x.coefficient(n), sequential=True)


def _factors(x: Series):
    cf = x.closed_form
    if isinstance(cf, ProductNode):
        return cf.factors
    return (x,)


def _raw_product(x: Series, y: Series, closed_form) -> Series:
    if x.sparse and y.sparse:
        def coeff(n):
            ys = set(y.support(n))
            total = []
            for i in x.support(n):
                if n - i in ys:
                    total.append((x.coefficient(i), y.coefficient(n - i)))
            if not total:
                return ZERO
            return kernels.dot([p for p, _ in total], [q for _, q in total])

        def support(lim):
            xs = x.support(lim)
            ys = y.support(lim)
            out = set()
            for i in xs:
                for j in ys:
                    if i + j > lim:
                        break
                    out.add(i + j)
            return sorted(out)

        return Series(coeff, closed_form=closed_form, support=support)
    if x.sparse or y.sparse:
        sp, de = (x, y) if x.sparse else (y, x)

        def coeff_sparse(n):
            idx = sp.support(n)
            if not idx:
                return ZERO
            return kernels.dot([sp.coefficient(i) for i in idx], [de.coefficient(n - i) for i in idx])

        if de.sequential:
            return Series(lambda n, memo: coeff_sparse(n), closed_form=closed_form, sequential=True)
        return Series(coeff_sparse, closed_form=closed_form)

    def coeff_dense(n, memo):
        return kernels.convolve_at(x.prefix(n + 1), y.prefix(n + 1), n)

    return Series(coeff_dense, closed_form=closed_form, sequential=True)


def cauchy_product(x: Series, y: Series) -> Series:
    """Exact Cauchy product; rational operands stay rational."""
    x, y = as_series(x), as_series(y)
    if x.rational is not None and y.rational is not None:
        return expand_rational(x.rational * y.rational)
    return _raw_product(x, y, ProductNode(_factors(x) + _factors(y)))


def power(x: Series, k: int) -> Series:
    """``x**k`` for integer ``k``; negative powers go through the inverse."""
    if k < 0:
        return power(inverse(x), -k)
    if x.rational is not None:
        return expand_rational(x.rational**k)
    if k == 0:
        return constant(1)
    if k == 1:
        return x
    half = power(x, k // 2)
    sq = _raw_product(half, half, None)
    out = sq if k % 2 == 0 else _raw_product(sq, x, None)
    out.closed_form = ProductNode(_factors(x) * k)
    return out


def partial_sums(x: Series) -> Series:
    """``Sigma x``: coefficient n is ``x_0 + ... + x_n``."""
    if x.rational is not None:
        return expand_rational(x.rational / RationalFunction(Polynomial([1, -1])))

    def src(n, memo):
        return (memo[n - 1] if n else ZERO) + x.coefficient(n)

    return Series(src, sequential=True)


def difference(x: Series) -> Series:
    """``(1 - s) x``."""
    if x.rational is not None:
        return expand_rational(x.rational * RationalFunction(Polynomial([1, -1])))
    return Series(lambda n, memo: x.coefficient(n) - (x.coefficient(n - 1) if n else ZERO), sequential=True)


def inverse(x: Series) -> Series:
    """Formal inverse; exists iff the constant term is nonzero."""
    x = as_series(x)
    x0 = x.coefficient(0)
    if x0 == 0:
        raise DenominatorVanishesAtZero("series with zero constant term has no formal inverse")
    if x.rational is not None:
        return expand_rational(RationalFunction(x.rational.den, x.rational.num))
    inv0 = 1 / x0

    if x.sparse:
        def src_sparse(n, memo):
            if n == 0:
                return inv0
            idx = [i for i in x.support(n) if i > 0]
            if not idx:
                return ZERO
            return -inv0 * kernels.dot([x.coefficient(i) for i in idx], [memo[n - i] for i in idx])

        return Series(src_sparse, closed_form=Inverse(x), sequential=True)

    def src(n, memo):
        if n == 0:
            return inv0
        xs = x.prefix(n + 1)
        return -inv0 * kernels.dot(xs[1:n + 1], memo[n - 1::-1])

    return Series(src, closed_form=Inverse(x), sequential=True)


def divide(x: Series, y: Series) -> Series:
    x, y = as_series(x), as_series(y)
    if x.rational is not None and y.rational is not None:
        if y.coefficient(0) == 0 and y.rational.num[0] == 0:
            raise DenominatorVanishesAtZero("denominator vanishes at zero")
        return expand_rational(x.rational / y.rational)
    out = cauchy_product(x, inverse(y))
    out.closed_form = Ratio(x, y)
    return out


def binomial_power(base: Series, exponent) -> Series:
    """``base**exponent`` for rational ``exponent`` and ``base(0) = 1``.

    Coefficients come from logarithmic differentiation,
    ``n y_n = sum_{k=1..n} (a k - (n - k)) b_k y_{n-k}``.
    """
    base = as_series(base)
    a = as_fraction(exponent)
    if base.coefficient(0) != 1:
        raise ConstantTermNotOne(f"base has constant term {base.coefficient(0)}, not 1")
    if a == 0:
        return constant(1)
    if a.denominator == 1 and base.rational is not None:
        return expand_rational(base.rational ** int(a))
    r = base.rational
    if base.sparse:
        taps_of = lambda n: [k for k in base.support(n) if k > 0]
    else:
        taps_of = lambda n: range(1, n + 1)
    fixed = None
    if r is not None and r.is_polynomial:
        fixed = [(k, c) for k, c in enumerate(r.num.coeffs) if k > 0 and c != 0]

    def src(n, memo):
        if n == 0:
            return ONE
        if fixed is not None:
            acc = ZERO
            for k, c in fixed:
                if k > n:
                    break
                acc += (a * k - (n - k)) * c * memo[n - k]
            return acc / n
        ks = list(taps_of(n))
        if not ks:
            return ZERO
        weights = [(a * k - (n - k)) * base.coefficient(k) for k in ks]
        return kernels.dot(weights, [memo[n - k] for k in ks]) / n

    out = Series(src, closed_form=BinomialPower(base, a), sequential=True)
    if fixed is not None and len(fixed) == 1:
        # base 1 + c s^m: only multiples of m are nonzero
        m = fixed[0][0]
        if m > 1:
            out.support = lambda lim: list(range(0, lim + 1, m))
    return out


def gap_series(exponents: Callable[[int], int], terms: Callable[[int], object], start: int = 0,
               name=None, note: str = "") -> Series:
    """Sparse series with ``terms(n)`` at index ``exponents(n)`` for ``n >= start``."""
    exps: list = []
    lock = threading.Lock()

    def extend_to(limit):
        with lock:
            while not exps or exps[-1] < limit:
                n = start + len(exps)
                e = exponents(n)
                if exps and e <= exps[-1]:
                    raise NonMonotoneExponents(f"exponent {e} at n={n} does not exceed {exps[-1]}")
                if not exps and e < 0:
                    raise NonMonotoneExponents("exponents must be nonnegative")
                exps.append(e)

    def support(limit):
        if limit < 0:
            return []
        extend_to(limit)
        return exps[: bisect.bisect_right(exps, limit)]

    def coeff(k):
        extend_to(k)
        i = bisect.bisect_left(exps, k)
        if i < len(exps) and exps[i] == k:
            return as_fraction(terms(start + i))
        return ZERO

    return Series(coeff, closed_form=GapSeries(exponents, terms, start, note), support=support, name=name)


def holonomic_series(recurrence: Sequence, initial: Sequence, name=None) -> Series:
    """P-finite series from ``sum_j c_j(n) t_{n-j} = 0`` for ``n >= len(initial)``.

    ``recurrence`` lists the polynomials ``c_0, ..., c_r`` in ``n`` (as
    :class:`Polynomial` or coefficient lists).  Terms are produced
    fraction-free: ``t_n = u_n / d_n`` with ``d_n = d_{n-1} c_0(n)``.
    """
    polys = [c if isinstance(c, Polynomial) else Polynomial(c) for c in recurrence]
    scale_den = 1
    for p in polys:
        for c in p.coeffs:
            scale_den = scale_den * c.denominator // math.gcd(scale_den, c.denominator)
    ipolys = [[int(c * scale_den) for c in p.coeffs] for p in polys]
    r = len(polys) - 1
    init = [as_fraction(v) for v in initial]
    r0 = len(init)
    if r0 < r:
        raise ValueError("need at least as many initial values as the recurrence order")
    d0 = 1
    for v in init:
        d0 = d0 * v.denominator // math.gcd(d0, v.denominator)
    us = [int(v * d0) for v in init]
    ds = [d0] * r0
    lock = threading.Lock()

    def ev(cs, n):
        acc = 0
        for c in reversed(cs):
            acc = acc * n + c
        return acc

    def extend(n):
        with lock:
            while len(us) <= n:
                m = len(us)
                c0 = ev(ipolys[0], m)
                if c0 == 0:
                    raise RecurrenceSingular(f"leading recurrence coefficient vanishes at n={m}")
                acc = 0
                mult = 1
                for j in range(1, r + 1):
                    # mult = d_{m-1} / d_{m-j}
                    if j > 1 and m - j + 1 >= r0:
                        mult *= ev(ipolys[0], m - j + 1)
                    if m - j < 0:
                        break
                    cj = ev(ipolys[j], m)
                    if cj:
                        acc += cj * us[m - j] * mult
                us.append(-acc)
                ds.append(ds[m - 1] * c0 if m >= 1 else c0 * d0)

    def src(n, memo):
        if n < r0:
            return init[n]
        extend(n)
        return Fraction(us[n], ds[n])

    return Series(src, closed_form=Holonomic(tuple(polys), tuple(init)), sequential=True, name=name)


def truncate(x: Series, m: int) -> Series:
    """Polynomial part of degree < m."""
    return from_polynomial(Polynomial(x.prefix(m)))
