"""Univariate polynomials and rational functions over Q."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

from .arith import as_fraction
from .errors import DenominatorVanishesAtZero, DivisionByZero

NEG_INF = -math.inf


class Polynomial:
    """Immutable polynomial ``c[0] + c[1] s + ...`` with exact coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def monomial(cls, k: int, c=1) -> "Polynomial":
        return cls([0] * k + [c])

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls([c])

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial([other])
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Polynomial({[str(c) for c in self.coeffs]})"

    def __str__(self):
        return self.format("s")

    def format(self, var: str = "s") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = abs(c)
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            if k == 0:
                body = str(mag)
            elif mag == 1:
                body = mono
            elif mag.denominator == 1:
                body = f"{mag}*{mono}"
            else:
                body = f"({mag})*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        head_sign, head = parts[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        return Polynomial([other])

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self[k] + other[k] for k in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if self.is_zero or other.is_zero:
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative polynomial power")
        result = Polynomial([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> "Polynomial":
        c = as_fraction(c)
        return Polynomial(c * x for x in self.coeffs)

    def shift(self, k: int = 1) -> "Polynomial":
        """Multiply by ``s**k``."""
        if self.is_zero:
            return self
        return Polynomial([0] * k + list(self.coeffs))

    def divmod(self, other: "Polynomial"):
        if other.is_zero:
            raise DivisionByZero("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.leading
        if len(rem) - 1 < dq:
            return Polynomial(), self
        quot = [Fraction(0)] * (len(rem) - dq)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] / lead
            if c == 0:
                continue
            quot[k - dq] = c
            for j, b in enumerate(other.coeffs):
                rem[k - dq + j] -= c * b
        return Polynomial(quot), Polynomial(rem[:dq])

    def __floordiv__(self, other):
        return self.divmod(self._coerce(other))[0]

    def __mod__(self, other):
        return self.divmod(self._coerce(other))[1]

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        q, r = self.divmod(other)
        if not r.is_zero:
            raise ValueError("polynomial division is not exact")
        return q

    def __call__(self, x):
        """Horner evaluation; exact for rational ``x``."""
        if isinstance(x, (int, Fraction)):
            x = as_fraction(x)
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + (c if isinstance(x, Fraction) else _to_num(c, x))
        return acc

    def derivative(self) -> "Polynomial":
        return Polynomial(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def monic(self) -> "Polynomial":
        if self.is_zero:
            return self
        return self.scale(1 / self.leading)

    def reverse(self, n: int | None = None) -> "Polynomial":
        """``s**n * p(1/s)`` with ``n = degree`` by default."""
        if self.is_zero:
            return self
        n = self.degree if n is None else n
        cs = list(self.coeffs) + [Fraction(0)] * (n + 1 - len(self.coeffs))
        return Polynomial(reversed(cs[: n + 1]))

    def normalized_at_zero(self) -> "Polynomial":
        """Scale so the constant term is 1 (requires it nonzero)."""
        if self[0] == 0:
            raise DenominatorVanishesAtZero("constant term is zero")
        return self.scale(1 / self[0])

    def gcd(self, other: "Polynomial") -> "Polynomial":
        return poly_gcd(self, other)

    def squarefree(self) -> "Polynomial":
        if self.degree <= 0:
            return self
        g = poly_gcd(self, self.derivative())
        return self.exact_div(g)

    def sturm_sequence(self):
        return sturm_sequence(self)

    def count_roots(self, a, b) -> int:
        """Number of distinct real roots in ``[a, b]``."""
        return count_real_roots(self, a, b)

    def to_int_coeffs(self):
        """Primitive integer coefficient list proportional to this polynomial."""
        if self.is_zero:
            return []
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        return [v // g for v in ints]


def _to_num(c: Fraction, like):
    if isinstance(like, mpmath.mpf) or isinstance(like, mpmath.mpc):
        return mpmath.mpf(c.numerator) / c.denominator
    return c.numerator / c.denominator if isinstance(like, (float, complex)) else like.__class__(c)


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd by the Euclidean algorithm over Q."""
    a, b = a.monic(), b.monic()
    while not b.is_zero:
        a, b = b, (a % b).monic()
    return a.monic()


def sturm_sequence(p: Polynomial):
    seq = [p, p.derivative()]
    while not seq[-1].is_zero:
        r = -(seq[-2] % seq[-1])
        if r.is_zero:
            break
        seq.append(r)
    return [q for q in seq if not q.is_zero]


def _variations(seq, x) -> int:
    signs = []
    for q in seq:
        v = q(x)
        if v != 0:
            signs.append(v > 0)
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def count_real_roots(p: Polynomial, a, b) -> int:
    """Distinct real roots of ``p`` in the closed interval ``[a, b]``."""
    if p.is_zero:
        raise ValueError("zero polynomial has infinitely many roots")
    if p.degree <= 0:
        return 0
    a, b = as_fraction(a), as_fraction(b)
    q = p.squarefree()
    seq = sturm_sequence(q)
    # V(a) - V(b) counts roots in (a, b]
    return _variations(seq, a) - _variations(seq, b) + (1 if q(a) == 0 else 0)


# -- location of roots relative to the unit circle --------------------------

@dataclass(frozen=True)
class UnitDiskReport:
    """Where the roots of a polynomial lie relative to |z| = 1."""

    inside: bool
    on_circle: bool
    root_at_one: bool
    method: str

    @property
    def closed_disk(self) -> bool:
        return self.inside or self.on_circle


def _chebyshev_like(m: int):
    """``D_k`` with ``z**k + z**-k = D_k(z + 1/z)`` for k = 0..m."""
    x = Polynomial([0, 1])
    ds = [Polynomial([2]), x]
    for _ in range(2, m + 1):
        ds.append(x * ds[-1] - ds[-2])
    return ds[: m + 1]


def _circle_roots_of_palindrome(g: Polynomial):
    """For palindromic ``g`` without roots ±1, return (#roots on circle, degree)."""
    n = g.degree
    m = n // 2
    ds = _chebyshev_like(m)
    h = Polynomial([g[m]])
    for k in range(1, m + 1):
        h = h + ds[k].scale(g[m + k])
    on = count_real_roots(h, -2, 2) if h.degree > 0 else 0
    # each x in (-2, 2) gives a conjugate pair on the circle
    return 2 * on, n


def _schur_cohn_inside(p: Polynomial):
    """Count roots strictly inside the unit disk; None when the recursion is singular."""
    n = p.degree
    if n <= 0:
        return 0
    a0 = p[0]
    an = p.leading
    delta = a0 * a0 - an * an
    if delta == 0:
        return None
    t = p.scale(a0) - p.reverse().scale(an)
    sub = _schur_cohn_inside(t)
    if sub is None:
        return None
    return sub if delta > 0 else n - sub


def _numeric_report(q: Polynomial) -> UnitDiskReport:
    with mpmath.workdps(60):
        roots = approx_roots(q, 60)
        eps = mpmath.mpf(10) ** -40
        mods = [abs(r) for r in roots]
        inside = any(m < 1 - eps for m in mods)
        on = any(abs(m - 1) <= eps for m in mods)
    return UnitDiskReport(inside, on, q(1) == 0, "numeric")


def unit_disk_report(q: Polynomial) -> UnitDiskReport:
    """Exact test for roots with |z| < 1 and |z| = 1.

    Circle roots are common to ``q`` and its reverse, so they are located
    through the substitution ``x = z + 1/z`` and a Sturm count; the rest is
    decided by the Schur-Cohn recursion on the cofactor.
    """
    if q.degree <= 0:
        return UnitDiskReport(False, False, False, "trivial")
    q = q.squarefree().monic()
    at_one = q(1) == 0
    at_minus_one = q(-1) == 0
    on = at_one or at_minus_one
    core = q
    for r in ((1 if at_one else None), (-1 if at_minus_one else None)):
        if r is not None:
            core = core.exact_div(Polynomial([-r, 1]))
    if core.degree <= 0:
        return UnitDiskReport(False, on, at_one, "exact")
    if core[0] == 0:
        return UnitDiskReport(True, on, at_one, "exact")
    g = poly_gcd(core, core.reverse())
    inside_from_pairs = False
    if g.degree > 0:
        circle, deg_g = _circle_roots_of_palindrome(g)
        if circle:
            on = True
        if circle < deg_g:
            inside_from_pairs = True
        core = core.exact_div(g)
    if inside_from_pairs:
        return UnitDiskReport(True, on, at_one, "exact")
    count = _schur_cohn_inside(core)
    if count is None:
        rep = _numeric_report(core)
        return UnitDiskReport(rep.inside, on or rep.on_circle, at_one, "numeric")
    return UnitDiskReport(count > 0, on, at_one, "exact")


def approx_roots(p: Polynomial, dps: int = 40):
    """Distinct complex roots of ``p`` to about ``dps`` digits."""
    if p.degree <= 0:
        return []
    p = p.squarefree()
    with mpmath.workdps(dps):
        coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(p.coeffs)]
        return mpmath.polyroots(coeffs, maxsteps=2000, extraprec=4 * dps)


# -- rational functions -----------------------------------------------------

class RationalFunction:
    """Reduced ``P/Q`` with ``Q(0) = 1``; expandable as a power series."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = num if isinstance(num, Polynomial) else Polynomial(_as_coeff_list(num))
        den = Polynomial([1]) if den is None else (den if isinstance(den, Polynomial) else Polynomial(_as_coeff_list(den)))
        if den.is_zero:
            raise DivisionByZero("zero denominator")
        if num.is_zero:
            num, den = Polynomial(), Polynomial([1])
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num.exact_div(g), den.exact_div(g)
        if den[0] == 0:
            raise DenominatorVanishesAtZero(f"denominator {den} vanishes at s = 0")
        c = den[0]
        object.__setattr__(self, "num", num.scale(1 / c))
        object.__setattr__(self, "den", den.scale(1 / c))

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    def __eq__(self, other):
        return isinstance(other, RationalFunction) and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RationalFunction({self.num}, {self.den})"

    def __str__(self):
        if self.den == Polynomial([1]):
            return f"{self.num}"
        return f"({self.num})/({self.den})"

    @property
    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __add__(self, other):
        other = _as_rf(other)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_as_rf(other))

    def __mul__(self, other):
        other = _as_rf(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_rf(other)
        if other.num.is_zero:
            raise DivisionByZero("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __pow__(self, k: int):
        if k >= 0:
            return RationalFunction(self.num**k, self.den**k)
        return RationalFunction(self.den ** (-k), self.num ** (-k))

    def shift(self, k: int = 1) -> "RationalFunction":
        return RationalFunction(self.num.shift(k), self.den)

    def __call__(self, x):
        d = self.den(x)
        if d == 0:
            raise DivisionByZero(f"pole at {x}")
        return self.num(x) / d


def _as_coeff_list(x):
    if isinstance(x, (int, Fraction, str)):
        return [x]
    return list(x)


def _as_rf(x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, Polynomial):
        return RationalFunction(x)
    return RationalFunction(Polynomial([x]))


def poly_from_sequence(seq: Sequence) -> Polynomial:
    return Polynomial(seq)
