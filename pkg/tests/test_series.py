import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from summa import series as S
from summa.errors import ConstantTermNotOne, DenominatorVanishesAtZero, NonMonotoneExponents
from summa.fixtures import fixture
from summa.lang import evaluate
from summa.poly import Polynomial, RationalFunction

from conftest import fractions_list, small_fractions

N = 512


def test_coefficient_examples():
    assert evaluate("1/(1+2*s)").coefficient(3) == -8
    x = fixture("sqrt79")
    assert S.shift(x).coefficient(0) == 0
    assert x.coefficient(2) == Fraction(-49, 648)


def test_shift_and_left_shift():
    ones = fixture("sigma")
    assert S.shift(ones).prefix(4) == [0, 1, 1, 1]
    x = S.from_coefficients([5, 6, 7, 8])
    assert S.left_shift(x).prefix(4) == [6, 7, 8, 0]
    y = fixture("sqrt79")
    assert S.left_shift(S.shift(y)).prefix(40) == y.prefix(40)


def test_linear_combine():
    x = fixture("inv-sqrt")
    assert S.linear_combine(1, x, -1, x).prefix(20) == [0] * 20
    e0, e1 = S.from_coefficients([1]), S.from_coefficients([0, 1])
    assert S.linear_combine(2, e0, 3, e1).prefix(4) == [2, 3, 0, 0]


def test_cauchy_product_examples():
    x = fixture("inv-sqrt")
    assert S.cauchy_product(x, x).prefix(N) == [Fraction((-1) ** n) for n in range(N)]
    assert S.cauchy_product(x, S.constant(1)).prefix(50) == x.prefix(50)
    one_minus = S.from_polynomial(Polynomial([1, -1]))
    assert S.cauchy_product(one_minus, fixture("sigma")).prefix(10) == [1] + [0] * 9


def test_partial_sums_and_difference():
    alt = fixture("one-one")
    assert S.partial_sums(alt).prefix(6) == [1, 0, 1, 0, 1, 0]
    assert S.partial_sums(fixture("sigma")).prefix(5) == [1, 2, 3, 4, 5]
    y = fixture("sqrt79")
    assert S.difference(S.partial_sums(y)).prefix(30) == y.prefix(30)


def test_expand_rational_examples():
    z = evaluate("1/(1+16*s^4)").prefix(9)
    assert z == [1, 0, 0, 0, -16, 0, 0, 0, 256]
    assert evaluate("(1-s)/(1-s)").prefix(5) == [1, 0, 0, 0, 0]
    assert evaluate("1/(1-2*s)").prefix(5) == [1, 2, 4, 8, 16]
    with pytest.raises(DenominatorVanishesAtZero):
        S.expand_rational(RationalFunction(Polynomial([1]), Polynomial([0, 1])))


def test_binomial_power_examples():
    b = S.from_polynomial(Polynomial([1, 1]))
    assert S.binomial_power(b, Fraction(-1, 2)).prefix(5) == [1, Fraction(-1, 2), Fraction(3, 8), Fraction(-5, 16),
                                                             Fraction(35, 128)]
    assert S.binomial_power(fixture("sqrt79"), 0).prefix(4) == [1, 0, 0, 0]
    sq = S.binomial_power(S.from_polynomial(Polynomial([1, Fraction(7, 9)])), Fraction(1, 2))
    assert sq.prefix(4) == [1, Fraction(7, 18), Fraction(-49, 648), Fraction(343, 11664)]
    with pytest.raises(ConstantTermNotOne):
        S.binomial_power(S.from_polynomial(Polynomial([2, 1])), Fraction(1, 2))


def test_gap_series_examples():
    c = fixture("conv-not-tel")
    assert c.coefficient(9) == Fraction(-1, 3)
    assert c.coefficient(5) == 0
    from summa.fixtures import _LSequence

    ell = _LSequence()
    assert [ell(i) for i in range(8)] == [0, 2, 4, 8, 12, 16, 32, 48]
    with pytest.raises(NonMonotoneExponents):
        S.gap_series(lambda n: 5 - n, lambda n: 1).coefficient(10)


def test_holonomic_examples():
    t = fixture("ratnottel-T")
    assert t.prefix(9) == [1, -2, Fraction(1, 2), Fraction(1, 3), Fraction(5, 24), Fraction(7, 60),
                           Fraction(37, 720), Fraction(17, 2520), Fraction(-887, 40320)]
    assert fixture("ratnottel-S").prefix(4) == [2, 3, Fraction(1, 2), Fraction(-1, 3)]


def test_t_series_against_taylor_oracle():
    # T(z) = (1 - z) exp(-z/(1-z)); exp(-u) with u = z/(1-z) expanded by plain truncated lists
    M = 30
    u = [Fraction(0)] + [Fraction(1)] * (M - 1)

    def mul(a, b):
        return [sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(M)]

    term, e = [Fraction(1)] + [Fraction(0)] * (M - 1), [Fraction(0)] * M
    for k in range(M):
        e = [a + b for a, b in zip(e, term)]
        term = [-c / (k + 1) for c in mul(term, u)]
    expected = mul([Fraction(1), Fraction(-1)] + [Fraction(0)] * (M - 2), e)
    assert fixture("ratnottel-T").prefix(M) == expected


def test_sparse_product_of_gap_series():
    x = fixture("multnottel-X")
    sq = S.cauchy_product(x, x)
    dense = x.prefix(300)
    for n in (0, 4, 16, 24, 32, 100, 256, 288):
        assert sq.coefficient(n) == sum(dense[i] * dense[n - i] for i in range(n + 1))


@given(small_fractions, fractions_list(), st.integers(0, 20))
@settings(max_examples=1000)
def test_scalars_commute_with_shift(a, cs, n):
    x = S.from_coefficients(cs)
    assert S.shift(S.scale(a, x)).coefficient(n) == a * S.shift(x).coefficient(n)


@given(fractions_list(), fractions_list(), fractions_list())
@settings(max_examples=1000)
def test_cauchy_commutative_associative(a, b, c):
    x, y, z = (S.from_coefficients(v) for v in (a, b, c))
    n = 12
    assert S.cauchy_product(x, y).prefix(n) == S.cauchy_product(y, x).prefix(n)
    assert S.cauchy_product(S.cauchy_product(x, y), z).prefix(n) == \
        S.cauchy_product(x, S.cauchy_product(y, z)).prefix(n)


@given(fractions_list(1, 5), fractions_list(1, 4), st.integers(0, 12))
@settings(max_examples=1000)
def test_expand_rational_roundtrip(num, den, extra):
    if den[0] == 0:
        den = [Fraction(1)] + den[1:]
    P, Q = Polynomial(num), Polynomial(den)
    x = S.expand_rational(RationalFunction(P, Q))
    m = max(P.degree, 0) + max(Q.degree, 0) + extra + 1
    xs = x.prefix(m)
    prod = [sum(Q[i] * xs[n - i] for i in range(min(n, Q.degree) + 1)) for n in range(m)]
    assert prod == [P[n] for n in range(m)]


@given(st.integers(1, 4), st.integers(-3, 3).filter(bool), fractions_list(1, 2))
@settings(max_examples=1000)
def test_binomial_power_qth_power(q, p, tail):
    base = S.from_polynomial(Polynomial([1, *tail]))
    y = S.binomial_power(base, Fraction(p, q))
    target = S.power(base, p)
    assert S.power(y, q).prefix(10) == target.prefix(10)


def test_central_binomial_bounds():
    x = fixture("inv-sqrt").prefix(201)
    with mpmath.workdps(50):
        for n in range(1, 201):
            assert abs(x[n]) == Fraction(math.comb(2 * n, n), 4**n)
            c = n * (1 - mpmath.mpf(math.comb(2 * n, n)) / 4**n * mpmath.sqrt(mpmath.pi * n))
            assert mpmath.mpf(1) / 9 < c < mpmath.mpf(1) / 8


def test_memo_is_append_only_and_lowest_first():
    calls = []

    def src(n, memo):
        calls.append(n)
        assert len(memo) == n
        return Fraction(n)

    x = S.Series(src, sequential=True)
    assert x.coefficient(5) == 5
    assert calls == [0, 1, 2, 3, 4, 5]
    x.coefficient(3)
    assert calls == [0, 1, 2, 3, 4, 5]
