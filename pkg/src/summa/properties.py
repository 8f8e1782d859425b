"""Randomized algebraic-law checks used by the acceptance suite.

Each suite draws its cases from a seeded ``random.Random`` and returns True
when every case holds.  The hypothesis-based tests in tests/ cover the same
laws with shrinking; these exist so ``summa fixtures run-all`` can run them
without test dependencies.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

import mpmath

from . import series as S
from . import summers as M
from .extensions import rational_extension_sum, telescope_sum, values_agree
from .fixtures import fixture
from .poly import Polynomial, RationalFunction
from .recurrence import annihilates, fit_linear_recurrence


def rand_fraction(rng, num=9, den=6):
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def rand_poly(rng, max_deg=4, nonzero_const=False):
    cs = [rand_fraction(rng) for _ in range(rng.randint(0, max_deg) + 1)]
    if nonzero_const and cs[0] == 0:
        cs[0] = Fraction(1)
    return Polynomial(cs)


def rand_outside_denominator(rng, max_deg=3):
    """A product of factors (1 - c s) with |c| <= 1/2: all roots outside the closed disk."""
    q = Polynomial([1])
    for _ in range(rng.randint(1, max_deg)):
        c = Fraction(rng.randint(-4, 4), 8)
        q = q * Polynomial([1, -c])
    return q


EXACT_SUMMERS = ("classical", "abel", "euler-rational", "borel")


def suite_linearity(cases, rng):
    cfg = M.DEFAULT
    for i in range(cases):
        r1 = RationalFunction(rand_poly(rng, 3), rand_outside_denominator(rng))
        r2 = RationalFunction(rand_poly(rng, 3), rand_outside_denominator(rng))
        a, b = rand_fraction(rng), rand_fraction(rng)
        x, y = S.expand_rational(r1), S.expand_rational(r2)
        method = EXACT_SUMMERS[i % 3]
        ox, oy = M.run_summer(method, x, cfg), M.run_summer(method, y, cfg)
        oz = M.run_summer(method, S.linear_combine(a, x, b, y), cfg)
        if not (ox.summed and oy.summed and oz.summed):
            return False
        if oz.value != a * ox.value + b * oy.value:
            return False
        if i % 50 == 0:
            # numeric path on untagged geometric combinations
            ra, rb = Fraction(rng.randint(-3, 3), 8), Fraction(rng.randint(-3, 3), 8)
            gx = S.from_function(lambda n, ra=ra: ra**n)
            gy = S.from_function(lambda n, rb=rb: rb**n)
            oz = M.sum_classical(S.linear_combine(a, gx, b, gy), cfg)
            target = a / (1 - ra) + b / (1 - rb)
            if not _close(oz, target, 1e-8):
                return False
    return True


def _close(out, target, tol):
    return out.summed and abs(out.approx() - mpmath.mpf(target.numerator) / target.denominator) <= tol


def suite_shift_invariance(cases, rng):
    cfg = M.DEFAULT
    for i in range(cases):
        r = RationalFunction(rand_poly(rng, 3), rand_outside_denominator(rng))
        x = S.expand_rational(r)
        k = rng.randint(1, 3)
        method = ("add", "classical", "abel", "euler-rational")[i % 4]
        if method == "add":
            x = S.from_polynomial(rand_poly(rng, 5))
        o1, o2 = M.run_summer(method, x, cfg), M.run_summer(method, S.shift(x, k), cfg)
        if o1.summed != o2.summed or (o1.summed and o1.value != o2.value):
            return False
        if i % 25 == 0:
            # p-adic on a geometric series in p
            p = (3, 5, 7)[i % 3]
            g = S.geometric(Fraction(p * rng.randint(1, 4), rng.choice([1, 2, 4])))
            c = cfg.replace(padic_precision=8)
            a, b = M.sum_padic(g, p, c), M.sum_padic(S.shift(g, k), p, c)
            if not (a.summed and b.summed and values_agree(a.value, b.value, 0)):
                return False
    return True


ALL_SUMMERS = ("add", "classical", "absolute", "cesaro", "abel", "borel", "borel-exp", "borel-int",
               "euler-rational")


def suite_polynomial_agreement(cases, rng):
    cfg = M.DEFAULT
    for i in range(cases):
        P = rand_poly(rng, 6)
        x = S.from_polynomial(P)
        method = ALL_SUMMERS[i % len(ALL_SUMMERS)]
        out = M.run_summer(method, x, cfg)
        if not (out.summed and out.value == P(1)):
            return False
        if i % 9 == 0:
            p = (3, 5, 7)[i % 3]
            out = M.sum_padic(x, p, cfg.replace(padic_precision=6))
            if not (out.summed and out.value.congruent(P(1))):
                return False
    return True


def suite_sigma_never_summed(cases, rng):
    cfg = M.DEFAULT.replace(n_max=2000, cesaro_max_log2=8, n_shift=2, borel_t_max=64)
    sigma = fixture("sigma")
    methods = ALL_SUMMERS + ("padic",)
    for i in range(cases):
        a = rand_fraction(rng)
        if a == 0:
            a = Fraction(1)
        k = rng.randint(0, 3)
        x = S.linear_combine(a, S.shift(sigma, k), 1, S.from_polynomial(rand_poly(rng, 3)))
        method = methods[i % len(methods)]
        if method == "padic":
            out = M.sum_padic(x, (3, 5, 7)[i % 3], cfg)
        else:
            out = M.run_summer(method, x, cfg)
        if out.summed:
            return False
    # untagged copy through the numeric paths
    raw = S.from_function(lambda n: Fraction(1))
    for method in ("classical", "abel", "cesaro"):
        if M.run_summer(method, raw, cfg).summed:
            return False
    return True


def suite_cauchy_associativity(cases, rng, N=12):
    for _ in range(cases):
        xs = [S.from_coefficients([rand_fraction(rng) for _ in range(N)]) for _ in range(3)]
        a, b, c = xs
        left = S.cauchy_product(S.cauchy_product(a, b), c).prefix(N)
        right = S.cauchy_product(a, S.cauchy_product(b, c)).prefix(N)
        comm = S.cauchy_product(a, b).prefix(N) == S.cauchy_product(b, a).prefix(N)
        if left != right or not comm:
            return False
    return True


def suite_binomial_roundtrip(cases, rng, N=10):
    for _ in range(cases):
        q = rng.randint(1, 4)
        p = rng.choice([i for i in range(-3, 4) if i != 0])
        base = rand_poly(rng, 2)
        base = Polynomial([1, *base.coeffs[1:]]) if base.degree >= 1 else Polynomial([1, 1])
        x = S.from_polynomial(base)
        y = S.binomial_power(x, Fraction(p, q))
        lhs = S.power(y, q).prefix(N)
        rhs = (S.power(x, p) if p > 0 else S.inverse(S.power(x, -p))).prefix(N)
        if lhs != rhs:
            return False
    return True


def suite_recurrence_fit(cases, rng):
    for _ in range(cases):
        den = Polynomial([1])
        for _ in range(rng.randint(1, 4)):
            den = den * Polynomial([1, Fraction(rng.randint(-5, 5), rng.randint(1, 3))])
        num = rand_poly(rng, 3, nonzero_const=True)
        r = RationalFunction(num, den)
        x = S.expand_rational(r)
        fit = fit_linear_recurrence(x, 4, 24)
        if fit is None:
            return False
        if not annihilates(fit.annihilator, x.prefix(25), 4, 24):
            return False
        if fit.degree != r.den.degree:
            return False
    return True


def suite_t_within_q(cases, rng):
    for i in range(cases):
        den = rand_outside_denominator(rng, 2) if i % 2 else Polynomial([1, 1])
        num = rand_poly(rng, 3, nonzero_const=True)
        r = RationalFunction(num, den)
        if r.den(1) == 0:
            continue
        x = S.expand_rational(r)
        t = telescope_sum(x, "add")
        if not t.summed:
            return False
        F = r.den
        q = rational_extension_sum(x, "add", A=S.cauchy_product(S.from_polynomial(F), x),
                                   B=S.from_polynomial(F), check_telescope=False)
        if not (q.summed and q.value == t.value):
            return False
    return True


def suite_padic_multiplicativity(cases, rng):
    cfg = M.DEFAULT.replace(padic_precision=8)
    for i in range(cases):
        p = (3, 5, 7)[i % 3]
        a = Fraction(p * rng.randint(1, 6), rng.choice([1, 2, 4]) if p != 2 else 1)
        b = Fraction(p * rng.randint(1, 6), rng.choice([1, 2, 4]))
        x = S.geometric(a) if i % 2 else S.from_polynomial(Polynomial([1, a, a * a]))
        y = S.binomial_power(S.from_polynomial(Polynomial([1, p * p * b])), Fraction(1, 2))
        ox, oy = M.sum_padic(x, p, cfg), M.sum_padic(y, p, cfg)
        oxy = M.sum_padic(S.cauchy_product(x, y), p, cfg)
        if not (ox.summed and oy.summed and oxy.summed):
            return False
        if not values_agree(ox.value * oy.value, oxy.value, 0):
            return False
    return True


def central_binomial_c(n: int, dps: int = 40):
    """c_n from 4^-n binom(2n, n) = (1 - c_n / n) / sqrt(pi n)."""
    with mpmath.workdps(dps):
        ratio = mpmath.mpf(math.comb(2 * n, n)) / mpmath.mpf(4) ** n * mpmath.sqrt(mpmath.pi * n)
        return n * (1 - ratio)


def suite_central_binomial(cases, rng):
    x = fixture("inv-sqrt").prefix(201)
    lo, hi = mpmath.mpf(1) / 9, mpmath.mpf(1) / 8
    for n in range(1, 201):
        # |x_n| of (1+s)^(-1/2) is 4^-n binom(2n, n)
        if abs(x[n]) != Fraction(math.comb(2 * n, n), 4**n):
            return False
        c = central_binomial_c(n)
        if not (lo < c < hi):
            return False
    return True


SUITES = {
    "summer linearity": suite_linearity,
    "shift invariance": suite_shift_invariance,
    "polynomial agreement": suite_polynomial_agreement,
    "no summer sums sigma": suite_sigma_never_summed,
    "Cauchy product associativity": suite_cauchy_associativity,
    "binomial power roundtrip": suite_binomial_roundtrip,
    "recurrence fit soundness and minimality": suite_recurrence_fit,
    "T within Q": suite_t_within_q,
    "p-adic multiplicativity": suite_padic_multiplicativity,
    "central binomial c_n": suite_central_binomial,
}


def run_property_suites(cases: int = 1000, seed: int = 12) -> dict:
    return {name: fn(cases, random.Random(f"{seed}:{name}")) for name, fn in SUITES.items()}
