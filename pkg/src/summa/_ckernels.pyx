# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled exact kernels; bigint arithmetic stays on Python ints, loops are typed."""

from fractions import Fraction
from math import gcd


def dot(xs, ys):
    """Exact sum of xs[i] * ys[i] over the shorter length, one final reduction."""
    cdef object x, y, p, q, g, U, V
    U = 0
    V = 1
    for x, y in zip(xs, ys):
        p = x.numerator * y.numerator
        if p == 0:
            continue
        q = x.denominator * y.denominator
        if q == V:
            U += p
        elif V % q == 0:
            U += p * (V // q)
        else:
            g = gcd(V, q)
            U = U * (q // g) + p * (V // g)
            V = V * (q // g)
    return Fraction(U, V)


def convolve_at(list xs, list ys, Py_ssize_t n):
    """Coefficient n of the Cauchy product of two dense prefixes."""
    cdef Py_ssize_t k
    cdef object x, y, p, q, g, U, V
    U = 0
    V = 1
    for k in range(n + 1):
        x = xs[k]
        y = ys[n - k]
        p = x.numerator * y.numerator
        if p == 0:
            continue
        q = x.denominator * y.denominator
        if q == V:
            U += p
        elif V % q == 0:
            U += p * (V // q)
        else:
            g = gcd(V, q)
            U = U * (q // g) + p * (V // g)
            V = V * (q // g)
    return Fraction(U, V)


def weighted_sum(weights, xs):
    """Exact sum of integer weights times Fractions."""
    U = 0
    V = 1
    for w, x in zip(weights, xs):
        p = w * x.numerator
        if p == 0:
            continue
        q = x.denominator
        if q == V:
            U += p
        elif V % q == 0:
            U += p * (V // q)
        else:
            g = gcd(V, q)
            U = U * (q // g) + p * (V // g)
            V = V * (q // g)
    return Fraction(U, V)


def horner(list xs, num, den):
    """Exact value of sum xs[i] * (num/den)**i."""
    cdef Py_ssize_t i
    cdef object L, q, acc, dpow, a, x
    L = 1
    for x in xs:
        q = x.denominator
        if L % q:
            L = L * (q // gcd(L, q))
    acc = 0
    dpow = 1
    for i in range(len(xs) - 1, -1, -1):
        x = xs[i]
        a = x.numerator * (L // x.denominator)
        acc = acc * num + a * dpow
        dpow *= den
    # dpow = den**len(xs); value = acc / (L * den**(len-1))
    if not xs:
        return Fraction(0)
    return Fraction(acc, L * (dpow // den))


def bareiss(rows):
    """Fraction-free row echelon form of an integer matrix.

    Returns ``(rank, echelon, pivots)``; ``echelon`` holds the nonzero rows
    and ``pivots`` their pivot columns.
    """
    cdef Py_ssize_t nrows, ncols, r, c, i, j, piv
    cdef list m, pr, row
    cdef object a, b, prev
    m = [list(r_) for r_ in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        piv = -1
        for i in range(r, nrows):
            if m[i][c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        pr = m[r]
        a = pr[c]
        for i in range(r + 1, nrows):
            row = m[i]
            b = row[c]
            for j in range(c + 1, ncols):
                row[j] = (a * row[j] - b * pr[j]) // prev
            row[c] = 0
        prev = a
        pivots.append(c)
        r += 1
    return r, m[:r], pivots
