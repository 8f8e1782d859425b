import importlib
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from summa import _pykernels as py
from summa import kernels

from conftest import small_fractions

try:
    from summa import _ckernels as ck
except ImportError:  # pure install
    ck = None

needs_c = pytest.mark.skipif(ck is None, reason="compiled kernels not built")
backends = [py] + ([ck] if ck else [])

fracs = st.lists(small_fractions, min_size=0, max_size=20)
big = st.fractions(max_denominator=10**30).filter(lambda q: abs(q) < 10**40)


@pytest.mark.parametrize("impl", backends)
def test_examples(impl):
    xs = [Fraction(1, 2), Fraction(1, 3), Fraction(-1, 6)]
    assert impl.dot(xs, [1, 1, 1]) == Fraction(2, 3)
    assert impl.convolve_at(xs, xs, 1) == Fraction(1, 3)
    assert impl.weighted_sum([1, 2, 3], xs) == Fraction(1, 2) + Fraction(2, 3) - Fraction(1, 2)
    assert impl.horner(xs, 1, 2) == Fraction(1, 2) + Fraction(1, 6) - Fraction(1, 24)
    rank, ech, piv = impl.bareiss([[1, 2], [2, 4], [0, 1]])
    assert rank == 2 and piv == [0, 1]


@given(fracs, fracs)
def test_dot_against_sum(xs, ys):
    n = min(len(xs), len(ys))
    expected = sum((a * b for a, b in zip(xs[:n], ys[:n])), Fraction(0))
    for impl in backends:
        assert impl.dot(xs[:n], ys[:n]) == expected


@given(st.lists(big, min_size=1, max_size=12), st.lists(big, min_size=1, max_size=12), st.integers(0, 20))
def test_convolve_at(xs, ys, n):
    # callers pass prefixes holding at least n + 1 terms
    xs = xs + [Fraction(0)] * (n + 1 - len(xs))
    ys = ys + [Fraction(0)] * (n + 1 - len(ys))
    expected = sum((xs[i] * ys[n - i] for i in range(n + 1) if i < len(xs) and n - i < len(ys)), Fraction(0))
    for impl in backends:
        assert impl.convolve_at(xs, ys, n) == expected


@given(fracs, st.integers(-5, 5), st.integers(1, 5))
def test_horner(xs, num, den):
    z = Fraction(num, den)
    expected = sum((c * z**i for i, c in enumerate(xs)), Fraction(0))
    for impl in backends:
        assert impl.horner(xs, num, den) == expected


@given(st.lists(st.lists(st.integers(-9, 9), min_size=4, max_size=4), min_size=1, max_size=6))
def test_bareiss_backends_agree(rows):
    results = [impl.bareiss(rows) for impl in backends]
    assert all(r == results[0] for r in results)


@needs_c
def test_selected_backend(monkeypatch):
    assert kernels.BACKEND == "cython"
    monkeypatch.setenv("SUMMA_PURE", "1")
    forced = importlib.reload(kernels)
    try:
        assert forced.BACKEND == "python" and forced.dot is py.dot
    finally:
        monkeypatch.delenv("SUMMA_PURE")
        importlib.reload(kernels)
