import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from summa import series as S
from summa import summers as M
from summa.errors import NoClosedForm, UnknownBase
from summa.fixtures import fixture
from summa.lang import evaluate
from summa.outcome import Verdict
from summa.poly import Polynomial, RationalFunction

from conftest import small_fractions

LOOSE = M.DEFAULT.replace(tolerance=1e-3)


def close(out, target, tol):
    return out.summed and out.close_to(Fraction(target) if not isinstance(target, float) else target, tol)


# -- Add ---------------------------------------------------------------------

def test_add_examples():
    assert M.sum_add(S.from_coefficients([1, 2, 3])).value == 6
    assert M.sum_add(evaluate("(1-s)/(1-s)")).value == 1
    out = M.sum_add(fixture("one-one"))
    assert out.verdict is Verdict.NOT_IN_DOMAIN and "InfiniteSupport" in out.reason


# -- classical and absolute ----------------------------------------------------

def test_classical_examples():
    out = M.sum_classical(fixture("sqrt79"))
    assert close(out, Fraction(4, 3), 1e-9)
    assert out.witness["last_index"] <= 200
    assert M.sum_classical(S.geometric(Fraction(1, 2))).value == 2
    one = M.sum_classical(fixture("one-one"))
    assert one.verdict is Verdict.INCONCLUSIVE


def test_classical_numeric_geometric_untagged():
    x = S.from_function(lambda n: Fraction(1, 2) ** n)
    assert close(M.sum_classical(x), 2, 1e-9)


def test_classical_oscillation_untagged_is_inconclusive():
    x = S.from_function(lambda n: Fraction((-1) ** n))
    assert M.sum_classical(x, M.DEFAULT.replace(n_max=4000)).verdict is Verdict.INCONCLUSIVE


def test_classical_pole_inside_disk_is_not_in_domain():
    out = M.sum_classical(fixture("G-2"))
    assert out.verdict is Verdict.NOT_IN_DOMAIN
    assert M.sum_classical(fixture("sigma")).verdict is Verdict.NOT_IN_DOMAIN


def test_detect_geometric_and_absolute():
    r, C = M.detect_geometric(S.geometric(Fraction(1, 2)))
    assert r <= Fraction(1, 2) + Fraction(1, 16) and C >= 1
    assert M.detect_geometric(fixture("inv-sqrt")) is None
    z = M.detect_absolute(fixture("Z16"))
    assert not z.detected
    assert M.detect_absolute(S.geometric(Fraction(-2, 3))).detected


def test_inv_sqrt_coefficients_not_geometric_oracle():
    # |x_n| = binom(2n, n) / 4^n; ratios tend to 1, so no rate r < 1 bounds them
    xs = fixture("inv-sqrt").prefix(257)
    ratios = [abs(xs[n + 1] / xs[n]) for n in range(200, 256)]
    assert all(r == Fraction(2 * n + 1, 2 * n + 2) for r, n in zip(ratios, range(200, 256)))
    assert min(ratios) > Fraction(15, 16)


def test_absolute_sum_on_holonomic_s():
    out = M.sum_absolute(fixture("ratnottel-S"), LOOSE)
    closed = 2 * (1 + math.exp(0.5))
    assert out.summed and abs(float(out.approx()) - closed) < 1e-3


# -- Cesàro ------------------------------------------------------------------

def cesaro_oracle(xs, N, k):
    """Direct formula with Fractions, no shared code."""
    total = sum(Fraction(math.comb(N - n + k, k)) * xs[n] for n in range(N + 1))
    return Fraction(math.factorial(k), N**k) * total


def test_cesaro_value_matches_oracle():
    xs = evaluate("1/(1+s)^2").prefix(129)
    for N in (1, 2, 7, 64, 128):
        for k in (0, 1, 2, 3):
            assert M.cesaro_value(xs, N, k) == cesaro_oracle(xs, N, k)


def test_cesaro_examples():
    assert close(M.sum_cesaro_holder(fixture("one-one"), 1, LOOSE), Fraction(1, 2), 1e-3)
    c = M.sum_cesaro_holder(evaluate("1/(1+s)^2"), 2, LOOSE)
    assert close(c, Fraction(1, 4), 1e-3)
    # brute-force ladder oracle converges to 1/4 as well
    xs = evaluate("1/(1+s)^2").prefix(4097)
    assert abs(float(cesaro_oracle(xs, 4096, 2)) - 0.25) < 1e-3


def test_cesaro_regular_on_convergent():
    assert close(M.sum_cesaro_holder(fixture("sqrt79"), 1, LOOSE), Fraction(4, 3), 1e-3)


def test_cesaro_not_in_domain_for_pole_inside():
    assert M.sum_cesaro_holder(fixture("G-2"), 1).verdict is Verdict.NOT_IN_DOMAIN


def test_cesaro_scan_finds_order():
    # sum (-1)^n (n+1): C1 means alternate near 0 and 1/2, so the least order is 2
    out = M.sum_cesaro_scan(evaluate("1/(1+s)^2"), 3, LOOSE)
    assert out.summed and out.params["k"] == 2 and close(out, Fraction(1, 4), 1e-3)
    assert M.sum_cesaro_holder(evaluate("1/(1+s)^2"), 1, LOOSE).verdict is Verdict.INCONCLUSIVE


# -- Abel ----------------------------------------------------------------------

def test_abel_examples():
    assert close(M.sum_abel(fixture("one-one")), Fraction(1, 2), 1e-6)
    numeric = M.sum_abel(fixture("one-one"), M.DEFAULT.replace(use_closed_form=False))
    # oracle: f(rho) = 1/(1 + rho) evaluated as rho -> 1
    assert close(numeric, Fraction(1, 2), 1e-6)
    g = M.sum_abel(fixture("G-2"))
    assert g.verdict in (Verdict.INCONCLUSIVE, Verdict.NOT_IN_DOMAIN)
    g_num = M.sum_abel(fixture("G-2"), M.DEFAULT.replace(use_closed_form=False))
    assert g_num.verdict is Verdict.INCONCLUSIVE
    assert close(M.sum_abel(fixture("sqrt79")), Fraction(4, 3), 1e-6)


def test_abel_on_inv_sqrt():
    out = M.sum_abel(fixture("inv-sqrt"))
    assert out.summed and abs(out.approx() - 1 / mpmath.sqrt(2)) < 1e-6


# -- Borel -----------------------------------------------------------------------

def test_borel_examples():
    g = fixture("G-2")
    assert close(M.sum_borel_integral(g), Fraction(1, 3), 1e-6)
    assert close(M.sum_borel(g), Fraction(1, 3), 1e-6)
    assert close(M.sum_borel(fixture("sqrt79")), Fraction(4, 3), 1e-6)
    z = M.sum_borel(fixture("Z16"))
    assert z.verdict is Verdict.INCONCLUSIVE


def test_borel_shift_relation_on_g_minus_2():
    g = fixture("G-2")
    a = M.sum_borel_integral(g)
    b = M.sum_borel_exponential(S.shift(g))
    assert a.summed and b.summed and abs(a.approx() - b.approx()) < 1e-6


def test_borel_integral_oracle_on_g_minus_2():
    # B(t) = e^{-2t}; the integral of e^{-3t} over [0, inf) is 1/3
    with mpmath.workdps(30):
        ref = mpmath.quad(lambda t: mpmath.exp(-3 * t), [0, mpmath.inf])
    assert abs(M.sum_borel_integral(fixture("G-2")).approx() - ref) < 1e-9


# -- Euler on rational forms ---------------------------------------------------------

def test_euler_examples():
    assert M.sum_euler_rational(fixture("Z16")).value == Fraction(1, 17)
    assert M.sum_euler_rational(fixture("G-2")).value == Fraction(1, 3)
    assert M.sum_euler_rational(fixture("sigma")).verdict is Verdict.NOT_IN_DOMAIN
    with pytest.raises(NoClosedForm):
        M.sum_euler_rational(fixture("inv-sqrt"))


# -- p-adic ----------------------------------------------------------------------------

def test_padic_examples():
    out = M.sum_padic(fixture("sqrt79"), 7, M.DEFAULT.replace(padic_precision=12))
    assert out.summed and out.value.congruent(Fraction(-4, 3)) and out.value.absolute_precision >= 12
    xa = M.sum_padic(fixture("Xa", 4), 3, M.DEFAULT.replace(padic_precision=10))
    assert xa.summed and xa.value.congruent(Fraction(-5, 4))
    assert M.sum_padic(fixture("one-one"), 5).verdict is Verdict.NOT_IN_DOMAIN


def test_padic_partial_sum_oracle():
    # the 7-adic partial sums of sqrt79 agree with -4/3 to growing precision
    xs = fixture("sqrt79").prefix(80)
    total = sum(xs)
    mod = 7**12
    lhs = (total.numerator * pow(total.denominator, -1, mod)) % mod
    rhs = (-4 * pow(3, -1, mod)) % mod
    assert lhs == rhs


# -- dispatch --------------------------------------------------------------------------

def test_parse_method():
    assert M.parse_method("padic:p=7,k=12") == ("padic", {"p": 7, "k": 12})
    with pytest.raises(UnknownBase):
        M.parse_method("nope")
    assert M.run_summer("euler-rational", fixture("inv-sqrt")).verdict is Verdict.INCONCLUSIVE


# -- invariants ------------------------------------------------------------------------

CONVERGENT = {
    "sqrt79": (lambda: fixture("sqrt79"), Fraction(4, 3)),
    "Xa(4)": (lambda: fixture("Xa", 4), Fraction(5, 4)),
    "geom(1/2)": (lambda: S.geometric(Fraction(1, 2)), Fraction(2)),
    "geom(-2/3)": (lambda: S.geometric(Fraction(-2, 3)), Fraction(3, 5)),
}


@pytest.mark.parametrize("name", list(CONVERGENT))
def test_regularity_chain(name):
    build, value = CONVERGENT[name]
    c = M.sum_classical(build())
    assert close(c, value, 1e-9)
    assert close(M.sum_cesaro_holder(build(), 1, LOOSE), value, 2e-3)
    assert close(M.sum_abel(build()), value, 1e-6)
    assert close(M.sum_borel(build()), value, 1e-6)


def _rational_in_disk(num, den_roots):
    den = Polynomial([1])
    for c in den_roots:
        den = den * Polynomial([1, -c])
    return RationalFunction(Polynomial(num), den)


roots = st.fractions(min_value=-Fraction(1, 2), max_value=Fraction(1, 2), max_denominator=8)
nums = st.lists(small_fractions, min_size=1, max_size=4)


@given(nums, st.lists(roots, min_size=1, max_size=3), st.integers(1, 3),
       st.sampled_from(["add", "classical", "abel", "euler-rational", "borel"]))
@settings(max_examples=200)
def test_shift_invariance(num, rts, k, method):
    x = S.expand_rational(_rational_in_disk(num, rts))
    if method == "add":
        x = S.from_polynomial(Polynomial(num))
    a, b = M.run_summer(method, x), M.run_summer(method, S.shift(x, k))
    assert a.verdict == b.verdict
    if a.summed and isinstance(a.value, Fraction):
        assert a.value == b.value
    elif a.summed:
        assert abs(a.approx() - b.approx()) <= a.error_bound() + b.error_bound()


@pytest.mark.parametrize("name", ["one-one", "sqrt79", "geom(1/2)"])
@pytest.mark.parametrize("k", [1, 3])
def test_shift_invariance_cesaro(name, k):
    # a shift by k moves the C1 means by about k/N, so larger shifts may exhaust the ladder
    x = fixture(name) if name != "geom(1/2)" else S.geometric(Fraction(1, 2))
    a = M.sum_cesaro_holder(x, 1, LOOSE)
    b = M.sum_cesaro_holder(S.shift(x, k), 1, LOOSE)
    assert a.summed and (b.summed or k > 1)
    assert b.verdict is not Verdict.NOT_IN_DOMAIN
    if b.summed:
        assert abs(a.approx() - b.approx()) <= a.error_bound() + b.error_bound()


@given(nums, st.lists(roots, min_size=1, max_size=2), nums, st.lists(roots, min_size=1, max_size=2),
       small_fractions, small_fractions, st.sampled_from(["classical", "abel", "euler-rational"]))
@settings(max_examples=200)
def test_linearity(n1, r1, n2, r2, a, b, method):
    x = S.expand_rational(_rational_in_disk(n1, r1))
    y = S.expand_rational(_rational_in_disk(n2, r2))
    ox, oy = M.run_summer(method, x), M.run_summer(method, y)
    oz = M.run_summer(method, S.linear_combine(a, x, b, y))
    assert ox.summed and oy.summed and oz.summed
    assert oz.value == a * ox.value + b * oy.value


@given(st.fractions(min_value=-Fraction(3, 4), max_value=Fraction(3, 4), max_denominator=8),
       st.fractions(min_value=-Fraction(3, 4), max_value=Fraction(3, 4), max_denominator=8),
       small_fractions, small_fractions)
@settings(max_examples=50)
def test_linearity_numeric_path(ra, rb, a, b):
    gx = S.from_function(lambda n: ra**n)
    gy = S.from_function(lambda n: rb**n)
    out = M.sum_classical(S.linear_combine(a, gx, b, gy))
    target = a / (1 - ra) + b / (1 - rb)
    assert close(out, target, 1e-8)


@given(st.lists(small_fractions, min_size=1, max_size=7), st.sampled_from(M.METHODS))
@settings(max_examples=200)
def test_polynomial_agreement(cs, method):
    P = Polynomial(cs)
    x = S.from_polynomial(P)
    if method == "padic":
        out = M.run_summer("padic:p=5,k=6", x)
        assert out.summed and out.value.congruent(P(1))
    else:
        out = M.run_summer(method, x)
        assert out.summed and out.value == P(1)


NUMERIC = M.DEFAULT.replace(n_max=2000, cesaro_max_log2=8, n_shift=2, borel_t_max=64)


@given(st.integers(0, 3), small_fractions.filter(bool), st.lists(small_fractions, max_size=4),
       st.sampled_from(M.METHODS))
@settings(max_examples=300)
def test_no_summer_sums_sigma(k, a, poly, method):
    x = S.linear_combine(a, S.shift(fixture("sigma"), k), 1, S.from_polynomial(Polynomial(poly or [0])))
    m = "padic:p=3" if method == "padic" else method
    assert not M.run_summer(m, x, NUMERIC).summed


@pytest.mark.parametrize("method", ["classical", "abel", "cesaro", "borel-exp", "absolute"])
def test_untagged_sigma_never_summed(method):
    raw = S.from_function(lambda n: Fraction(1))
    assert not M.run_summer(method, raw, NUMERIC).summed


@given(st.fractions(min_value=-Fraction(1, 2), max_value=Fraction(1, 2), max_denominator=6),
       st.integers(0, 2))
@settings(max_examples=30)
def test_borel_shift_relation(r, extra):
    x = S.shift(S.geometric(r), extra)
    a = M.sum_borel_integral(x)
    b = M.sum_borel_exponential(S.shift(x))
    if a.summed and b.summed:
        assert abs(a.approx() - b.approx()) <= a.error_bound() + b.error_bound() + 2e-9


padic_pairs = st.tuples(st.sampled_from([3, 5, 7]), st.integers(1, 6), st.sampled_from([1, 2, 4]),
                        st.integers(1, 6), st.sampled_from([1, 2, 4]))


@given(padic_pairs)
@settings(max_examples=300)
def test_padic_multiplicativity(case):
    p, a1, d1, a2, d2 = case
    cfg = M.DEFAULT.replace(padic_precision=8)
    x = S.geometric(Fraction(p * a1, d1))
    y = S.binomial_power(S.from_polynomial(Polynomial([1, Fraction(p * p * a2, d2)])), Fraction(1, 2))
    ox, oy, oxy = M.sum_padic(x, p, cfg), M.sum_padic(y, p, cfg), M.sum_padic(S.cauchy_product(x, y), p, cfg)
    assert ox.summed and oy.summed and oxy.summed
    prod = ox.value * oy.value
    diff = prod - oxy.value
    assert diff.is_zero
