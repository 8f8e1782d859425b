"""Exact search for polynomial annihilators and rational closed forms.

Given coefficients x_0..x_N, find the least-degree F = f_0 + ... + f_e s^e
with (F X)_n = sum_i f_i x_{n-i} = 0 for every n in (d, N].  The rows of that
condition form a Hankel-like integer matrix; its nullspace is computed by
fraction-free elimination, so no rounding enters a certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import kernels
from . import series as S
from .poly import Polynomial, RationalFunction

GUARD = 8


@dataclass(frozen=True)
class RecurrenceFit:
    """F with (F X)_n = 0 on (support_bound, verified_to]."""

    annihilator: Polynomial
    support_bound: int
    verified_to: int
    product: Polynomial  # F X truncated to degree support_bound

    @property
    def degree(self) -> int:
        return self.annihilator.degree


def _integer_row(values):
    den = 1
    for v in values:
        den = den * v.denominator // math.gcd(den, v.denominator)
    return [v.numerator * (den // v.denominator) for v in values]


def _nullspace_vector(echelon, pivots, ncols):
    """One nonzero kernel vector from a row echelon form, or None if full column rank."""
    free = [c for c in range(ncols) if c not in pivots]
    if not free:
        return None
    sol = [Fraction(0)] * ncols
    sol[free[0]] = Fraction(1)
    for row, pc in reversed(list(zip(echelon, pivots))):
        acc = sum((row[c] * sol[c] for c in range(pc + 1, ncols)), Fraction(0))
        sol[pc] = -acc / row[pc]
    return sol


def _normalize(coeffs) -> Polynomial:
    F = Polynomial(coeffs)
    if F[0] != 0:
        return F.scale(1 / F[0])
    return F.monic()


def annihilates(F: Polynomial, xs, lo: int, hi: int) -> bool:
    """Direct check (F X)_n = 0 for lo < n <= hi, independent of the solver."""
    cs = F.coeffs
    for n in range(lo + 1, hi + 1):
        if kernels.dot(cs[: n + 1], [xs[n - i] for i in range(min(len(cs), n + 1))]) != 0:
            return False
    return True


def fit_linear_recurrence(x: S.Series, max_degree: int = 8, scan: Optional[int] = None,
                          guard: int = GUARD) -> Optional[RecurrenceFit]:
    """Least-degree annihilator of the tail of X beyond index max_degree, or None."""
    d = max_degree
    N = scan if scan is not None else 2 * d + guard
    if d < 0:
        raise ValueError("max_degree must be nonnegative")
    if N < 2 * d + guard:
        raise ValueError(f"scan {N} is shorter than 2*max_degree + guard = {2 * d + guard}")
    xs = x.prefix(N + 1)
    for e in range(d + 1):
        rows = [_integer_row([xs[n - i] for i in range(e + 1)]) for n in range(d + 1, N + 1)]
        rank, echelon, pivots = kernels.bareiss(rows)
        if rank == e + 1:
            continue
        vec = _nullspace_vector(echelon, pivots, e + 1)
        F = _normalize(vec)
        if not annihilates(F, xs, d, N):
            continue
        cs = F.coeffs
        prod = Polynomial([kernels.dot(cs[: n + 1], [xs[n - i] for i in range(min(len(cs), n + 1))])
                           for n in range(d + 1)])
        return RecurrenceFit(F, d, N, prod)
    return None


def rational_reconstruct(x: S.Series, max_degree: int = 8, scan: Optional[int] = None,
                         guard: int = GUARD) -> Optional[RationalFunction]:
    """Reduced P/Q with deg P, deg Q <= max_degree and Q X = P on 0..scan, or None."""
    fit = fit_linear_recurrence(x, max_degree, scan, guard)
    if fit is None:
        return None
    F, P = fit.annihilator, fit.product
    # strip a common power of s (F may vanish at 0)
    while F.degree > 0 and F[0] == 0:
        if not P.is_zero and P[0] != 0:
            return None
        F = Polynomial(F.coeffs[1:])
        P = Polynomial(P.coeffs[1:])
    if F[0] == 0:
        return None
    r = RationalFunction(P, F)
    if r.num.degree > max_degree or r.den.degree > max_degree:
        return None
    xs = x.prefix(fit.verified_to + 1)
    ys = S.expand_rational(r).prefix(fit.verified_to + 1)
    if xs != ys:
        return None
    return r
