"""Catalog of named series used throughout the tests and the CLI.

Each entry is data: an expression in the series language, or a builder for
series the language cannot spell (gap series, P-finite series).  The note
says what the series is there to illustrate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from . import series as S
from .arith import require_prime
from .errors import UnknownFixture
from .poly import Polynomial


@dataclass(frozen=True)
class FixtureSpec:
    name: str
    note: str
    expr: Optional[str] = None
    builder: Optional[Callable] = None
    arity: int = 0
    variadic: bool = False

    def build(self, *args) -> S.Series:
        if self.variadic:
            if len(args) < 1:
                raise UnknownFixture(f"fixture {self.name} needs at least one argument")
        elif len(args) != self.arity:
            raise UnknownFixture(f"fixture {self.name} takes {self.arity} argument(s), got {len(args)}")
        if self.expr is not None:
            from .lang import evaluate

            x = evaluate(self.expr.format(*args))
        else:
            x = self.builder(*args)
        x.name = self.label(*args)
        return x

    def label(self, *args) -> str:
        return f"{self.name}({','.join(map(str, args))})" if args else self.name


# -- builders ---------------------------------------------------------------

def _xa(a: int) -> S.Series:
    from .lang import evaluate

    c = Fraction(2 * a + 1, a * a)
    return evaluate(f"sqrt(1+({c})*s)")


def crt_residues(primes) -> list:
    """Least positive r_i with r_i ≡ -1 (mod p_i) and r_i ≡ 1 (mod p_j), j != i."""
    for p in primes:
        require_prime(p)
        if p == 2:
            raise ValueError("the construction needs odd primes")
    if len(set(primes)) != len(primes):
        raise ValueError("primes must be distinct")
    modulus = math.prod(primes)
    out = []
    for i, p in enumerate(primes):
        r = 0
        for j, q in enumerate(primes):
            target = -1 if i == j else 1
            m = modulus // q
            r += target * m * pow(m, -1, q)
        out.append(r % modulus)
    return out


def _crt_y(*primes) -> S.Series:
    from .lang import evaluate

    rs = crt_residues(list(primes))
    parts = [evaluate(f"sqrt(1+{r * r - 1}*s)") for r in rs]
    total = parts[0]
    for x in parts[1:]:
        total = S.linear_combine(1, total, 1, x)
    return total


def _conv_not_tel() -> S.Series:
    return S.gap_series(lambda n: n * n, lambda n: Fraction((-1) ** n, n), start=1,
                        note="coefficient (-1)^n/n at index n^2")


class _LSequence:
    """Sorted elements of {0, 2} ∪ {m g(k) : 2 <= m <= g(k)}, g(k) = 2^(2^k)."""

    def __init__(self):
        self.items = [0, 2]
        self.level = 0

    def __call__(self, n: int) -> int:
        while n >= len(self.items):
            g = 2 ** (2**self.level)
            self.items.extend(m * g for m in range(2, g + 1))
            self.level += 1
        return self.items[n]


def ceil_log2(n: int) -> int:
    """Exact ``ceil(log2(n))`` for n >= 1."""
    return (n - 1).bit_length()


def _multnottel_x() -> S.Series:
    ell = _LSequence()
    return S.gap_series(ell, lambda n: Fraction((-1) ** n, ceil_log2(n + 2)), start=1,
                        note="1/log(n+2) replaced by 1/ceil(log2(n+2)) to stay in Q")


def _t_series() -> S.Series:
    # m t_m - (2m - 4) t_{m-1} + (m - 3) t_{m-2} = 0
    return S.holonomic_series([Polynomial([0, 1]), Polynomial([4, -2]), Polynomial([-3, 1])], [1, -2])


def _s_series() -> S.Series:
    t = _t_series()

    def src(n, memo):
        v = t.coefficient(n)
        v = -v if n % 2 else v
        return v + 1 if n <= 1 else v

    return S.Series(src, sequential=True)


def _ratnottel_x() -> S.Series:
    return S.inverse(fixture("ratnottel-S"))


CATALOG = {
    spec.name: spec
    for spec in [
        FixtureSpec("one-one", "1 - 1 + 1 - ...: telescopes to 1/2 over Q, escapes Z", expr="1/(1+s)"),
        FixtureSpec("G-1", "1/(1+s), the alternating unit series", expr="1/(1+s)"),
        FixtureSpec("G-2", "1 - 2 + 4 - 8 + ...: Borel and Euler sum 1/3, Abel fails", expr="1/(1+2*s)"),
        FixtureSpec("G2", "1 + 2 + 4 + 8 + ...: telescopes to -1", expr="1/(1-2*s)"),
        FixtureSpec("Z16", "1/(1+16 s^4): Euler-rational sum 1/17, Borel integral diverges",
                    expr="1/(1+16*s^4)"),
        FixtureSpec("sqrt79", "sqrt(1 + 7/9 s): classical sum 4/3, 7-adic sum -4/3",
                    expr="sqrt(1+(7/9)*s)"),
        FixtureSpec("Xa", "sqrt(1 + (2a+1)/a^2 s): real sum (a+1)/a, p-adic sum -(a+1)/a for p | 2a+1",
                    builder=_xa, arity=1),
        FixtureSpec("crt-Y", "sum of sqrt(1 + (r_i^2 - 1) s) over CRT residues: distinct p_j-adic sums",
                    builder=_crt_y, variadic=True),
        FixtureSpec("sigma", "1/(1-s) = 1 + 1 + 1 + ...: outside every summation domain", expr="1/(1-s)"),
        FixtureSpec("inv-sqrt", "(1+s)^(-1/2): convergent, its square is 1 - 1 + 1 - ...",
                    expr="pow(1+s,-1/2)"),
        FixtureSpec("conv-not-tel", "sum (-1)^n/n s^(n^2): convergent but not telescopable",
                    builder=_conv_not_tel),
        FixtureSpec("multnottel-X", "gap series on L whose square is a product of convergent series "
                    "but not telescopable", builder=_multnottel_x),
        FixtureSpec("ratnottel-T", "T(z) = (1-z) exp(-z/(1-z)) from its P-finite recurrence",
                    builder=_t_series),
        FixtureSpec("ratnottel-S", "S(z) = 1 + z + T(-z), absolutely convergent on the closed disk",
                    builder=_s_series),
        FixtureSpec("ratnottel-X", "1/S: rationally but not telescopically summable",
                    builder=_ratnottel_x),
    ]
}


def names():
    return list(CATALOG)


def fixture(name: str, *args) -> S.Series:
    key = name.replace("_", "-")
    spec = CATALOG.get(key)
    if spec is None:
        raise UnknownFixture(f"unknown fixture {name!r}")
    return spec.build(*args)


def default_args(name: str) -> tuple:
    """Arguments used when the whole catalog is enumerated."""
    return {"Xa": (4,), "crt-Y": (3, 5)}.get(name, ())


def corpus():
    """Every catalog entry built with its default arguments."""
    return {CATALOG[n].label(*default_args(n)): fixture(n, *default_args(n)) for n in CATALOG}


def catalog_expression(name: str, *args) -> str:
    """Source text that reproduces the fixture in the expression language."""
    if name not in CATALOG:
        raise UnknownFixture(f"unknown fixture {name!r}")
    arg_text = f"({','.join(map(str, args))})" if args else ""
    return f"fixture({name}{arg_text})"
