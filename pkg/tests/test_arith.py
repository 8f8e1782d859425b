from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from summa.arith import (INF, ApproxReal, Codomain, PAdicValue, Q, R, Z, add, div, is_prime, is_regular, mul,
                         neg, padic_embed, padic_norm, power, sub, valuation)
from summa.errors import DivisionByZero, NotPrime

from conftest import nonzero_fractions, primes, small_fractions


def test_rational_ops_examples():
    assert add(Fraction(7, 18), Fraction(-49, 648)) == Fraction(203, 648)
    assert mul(Fraction(1, 2), 0) == 0
    assert power(Fraction(4, 3), -1) == Fraction(3, 4)


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        div(1, 0)
    with pytest.raises(DivisionByZero):
        power(Fraction(0), -1)


def test_embed_seven_ninths():
    x = padic_embed(Fraction(7, 9), 7, 4)
    assert x.valuation == 1
    assert x.unit == pow(9, -1, 7**4)


def test_embed_zero_is_sentinel():
    z = padic_embed(0, 5, 8)
    assert z.is_zero and z.valuation == INF and z.unit == 0


def test_embed_minus_four_thirds():
    x = padic_embed(Fraction(-4, 3), 7, 3)
    assert x.valuation == 0
    # independent modular-inverse oracle
    assert x.unit == (-4 * pow(3, -1, 343)) % 343 == 113


def test_norms():
    assert padic_norm(padic_embed(Fraction(7, 9), 7, 6)) == Fraction(1, 7)
    assert padic_norm(padic_embed(0, 7, 6)) == 0
    assert padic_norm(padic_embed(120, 3, 6)) == Fraction(1, 3)


def test_is_regular_examples():
    assert is_regular(Fraction(-1), Q)
    assert not is_regular(padic_embed(0, 7, 5), Codomain("padic", 7))
    assert is_regular(Fraction(2), Z)
    assert not is_regular(ApproxReal(0, Fraction(1, 10**6)), R)
    assert is_regular(ApproxReal(1, Fraction(1, 10**6)), R)


def test_primality():
    assert [p for p in range(30) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    with pytest.raises(NotPrime):
        padic_embed(1, 9, 3)


def test_codomain_parse():
    assert Codomain.parse("padic:7") == Codomain("padic", 7)
    assert Codomain.parse("padic:p=5").prime == 5
    assert str(Codomain.parse("Z")) == "Z"
    with pytest.raises(ValueError):
        Codomain.parse("C")


@given(small_fractions, small_fractions, small_fractions)
@settings(max_examples=1000)
def test_field_axioms(a, b, c):
    assert add(add(a, b), c) == add(a, add(b, c))
    assert mul(mul(a, b), c) == mul(a, mul(b, c))
    assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))
    assert add(a, neg(a)) == 0
    assert sub(a, b) == add(a, neg(b))
    if a != 0:
        assert mul(a, div(1, a)) == 1


@given(small_fractions, small_fractions, primes)
@settings(max_examples=1000)
def test_ultrametric(a, b, p):
    x, y = padic_embed(a, p, 10), padic_embed(b, p, 10)
    s = x + y
    nx, ny, ns = padic_norm(x), padic_norm(y), padic_norm(s)
    assert ns <= max(nx, ny)
    if nx != ny and not s.is_zero:
        assert ns == max(nx, ny)


@given(nonzero_fractions, nonzero_fractions, primes, st.integers(2, 10))
@settings(max_examples=1000)
def test_embed_is_ring_homomorphism(a, b, p, k):
    ea, eb = padic_embed(a, p, k), padic_embed(b, p, k)
    prod = ea * eb
    assert prod.congruent(a * b)
    total = ea + eb
    assert total.congruent(a + b)


@given(nonzero_fractions, primes)
@settings(max_examples=500)
def test_valuation_oracle(a, p):
    # count factors directly
    def v(n):
        n, k = abs(n), 0
        while n % p == 0:
            n //= p
            k += 1
        return k

    assert valuation(a, p) == v(a.numerator) - v(a.denominator)


exprs = st.lists(st.tuples(st.sampled_from("+-*/"), st.fractions(min_value=Fraction(1, 8), max_value=8,
                                                                   max_denominator=9)),
                 min_size=1, max_size=12)


def _evaluate(start, steps, lift):
    acc = lift(start)
    for op, q in steps:
        v = lift(q)
        acc = {"+": acc + v, "-": acc - v, "*": acc * v, "/": acc / v}[op]
    return acc


@given(st.fractions(min_value=Fraction(1, 8), max_value=8, max_denominator=9), exprs)
@settings(max_examples=500)
def test_approx_bound_sound_against_double_precision(start, steps):
    coarse = _evaluate(start, steps, lambda q: ApproxReal(q, bits=64))
    fine = _evaluate(start, steps, lambda q: ApproxReal(q, bits=128))
    exact = _evaluate(start, steps, lambda q: q)
    ctx = mpmath.MPContext()
    ctx.prec = 256
    diff = abs(ctx.make_mpf(coarse.value._mpf_) - ctx.make_mpf(fine.value._mpf_))
    assert diff <= ctx.make_mpf(coarse.error._mpf_) + ctx.make_mpf(fine.error._mpf_)
    assert coarse.contains(exact)


def test_approx_sqrt_exp():
    r, e = ApproxReal(2).sqrt(), ApproxReal(1).exp()
    with mpmath.workprec(300):
        assert abs(r.value - mpmath.sqrt(2)) <= r.error
        assert abs(e.value - mpmath.e) <= e.error


def test_padic_value_rational_guess():
    x = padic_embed(Fraction(-4, 3), 7, 12)
    assert x.rational_guess() == Fraction(-4, 3)
    assert isinstance(x, PAdicValue) and x.absolute_precision == 12
