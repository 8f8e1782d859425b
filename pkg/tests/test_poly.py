from fractions import Fraction

import mpmath
from hypothesis import given, settings
from hypothesis import strategies as st

from summa.poly import Polynomial, RationalFunction, count_real_roots, unit_disk_report

from conftest import small_fractions

polys = st.lists(small_fractions, min_size=1, max_size=6).map(Polynomial)


def test_basic_arithmetic():
    p = Polynomial([1, 2, 3])
    assert p.degree == 2 and p(2) == 17
    assert list((p * Polynomial([1, -1])).coeffs) == [1, 1, 1, -3]
    q, r = p.divmod(Polynomial([1, 1]))
    assert q * Polynomial([1, 1]) + r == p
    assert Polynomial([0, 0]).is_zero and Polynomial([0]).degree < 0


@given(polys, polys.filter(lambda p: not p.is_zero))
def test_divmod(a, b):
    q, r = a.divmod(b)
    assert q * b + r == a
    assert r.is_zero or r.degree < b.degree


@given(polys, polys)
def test_gcd_divides(a, b):
    if a.is_zero and b.is_zero:
        return
    g = a.gcd(b)
    assert (a % g).is_zero and (b % g).is_zero


def test_rational_function_is_reduced():
    r = RationalFunction(Polynomial([1, 1]), Polynomial([1, 0, -1]))
    assert r == RationalFunction(Polynomial([1]), Polynomial([1, -1]))


def test_sturm_counts():
    p = Polynomial([-2, 0, 1])  # roots ±sqrt 2
    assert count_real_roots(p, -2, 2) == 2
    assert count_real_roots(p, 0, 2) == 1
    assert count_real_roots(Polynomial([1, 0, 1]), -10, 10) == 0


def test_unit_disk_examples():
    assert unit_disk_report(Polynomial([1, -1])).root_at_one
    assert unit_disk_report(Polynomial([1, 1])).on_circle
    assert not unit_disk_report(Polynomial([1, 1])).inside
    assert unit_disk_report(Polynomial([1, 2])).inside  # root -1/2
    assert unit_disk_report(Polynomial([1, 0, 0, 0, 16])).inside  # |root| = 1/2
    assert not unit_disk_report(Polynomial([16, 0, 0, 0, 1])).closed_disk
    assert unit_disk_report(Polynomial([1, 0, 1])).on_circle  # ±i


def _oracle(p: Polynomial):
    with mpmath.workdps(50):
        roots = mpmath.polyroots([mpmath.mpf(c.numerator) / c.denominator for c in reversed(p.coeffs)],
                                 maxsteps=200, extraprec=200)
        mods = [abs(r) for r in roots]
        eps = mpmath.mpf(10) ** -30
        return any(m < 1 - eps for m in mods), any(abs(m - 1) <= eps for m in mods)


root_choices = st.sampled_from([Fraction(1, 2), Fraction(-1, 3), Fraction(2), Fraction(-3, 2), Fraction(1),
                                Fraction(-1), Fraction(5, 4)])


# distinct roots: the numeric oracle cannot resolve multiple roots to the needed accuracy
@given(st.lists(root_choices, min_size=1, max_size=4, unique=True), st.booleans())
@settings(max_examples=200)
def test_unit_disk_against_numeric_roots(real_roots, with_circle_pair):
    p = Polynomial([1])
    for r in real_roots:
        p = p * Polynomial([-r, 1])
    if with_circle_pair:
        p = p * Polynomial([1, Fraction(-6, 5), 1])  # a conjugate pair on |z| = 1
    rep = unit_disk_report(p)
    inside, on = _oracle(p)
    assert rep.inside == inside
    assert rep.on_circle == on
    assert rep.root_at_one == (p(1) == 0)
