"""The acceptance suite: one check per criterion, each with its tolerance and time budget.

Each check returns a CriterionResult; ``run_all`` runs them in order.  The
same functions back ``summa fixtures run-all`` and tests/test_acceptance.py.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from . import series as S
from . import summers as M
from .arith import Z
from .extensions import (ProductExpression, grade_lower_bound, mult_extension_sum, rational_extension_sum,
                         telescope_sum)
from .fixtures import ceil_log2, crt_residues, fixture
from .lang import evaluate
from .outcome import Verdict
from .poly import Polynomial


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0
    budget: float = 0.0
    data: dict = field(default_factory=dict)

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number:2d}. {self.title} ({self.seconds:.2f}s / {self.budget:g}s): {self.detail}"

    def to_json(self) -> dict:
        return {"criterion": self.number, "title": self.title, "passed": self.passed, "detail": self.detail,
                "seconds": round(self.seconds, 3), "budget": self.budget}


def _close(out, target, tol) -> bool:
    return out.summed and out.close_to(target, tol)


def criterion_1():
    x = fixture("sqrt79")
    c = M.sum_classical(x)
    p = M.sum_padic(x, 7, M.DEFAULT.replace(padic_precision=12))
    ok_c = _close(c, Fraction(4, 3), 1e-9) and c.witness.get("last_index", 0) <= 200
    ok_p = p.summed and p.value.congruent(Fraction(-4, 3)) and p.value.absolute_precision >= 12
    return ok_c and ok_p, f"classical {c.render()} (N={c.witness.get('last_index')}); 7-adic {p.render()}"


def criterion_2():
    x = fixture("Xa", 4)
    c = M.sum_classical(x)
    p = M.sum_padic(x, 3, M.DEFAULT.replace(padic_precision=10))
    ok = _close(c, Fraction(5, 4), 1e-9) and p.summed and p.value.congruent(Fraction(-5, 4)) \
        and p.value.absolute_precision >= 10
    return ok, f"classical {c.render()}; 3-adic {p.render()}"


def criterion_3():
    x = fixture("G-2")
    integral = M.sum_borel_integral(x)
    exp_shift = M.sum_borel_exponential(S.shift(x))
    ok_value = _close(integral, Fraction(1, 3), 1e-6)
    ok_rel = integral.summed and exp_shift.summed and abs(integral.approx() - exp_shift.approx()) <= 1e-6
    return ok_value and ok_rel, f"integral {integral.render()}; exponential(shift) {exp_shift.render()}"


def criterion_4():
    z = M.sum_euler_rational(fixture("Z16"))
    s = M.sum_euler_rational(fixture("sigma"))
    ok = z.summed and z.value == Fraction(1, 17) and s.verdict is Verdict.NOT_IN_DOMAIN
    return ok, f"Z16 {z.render()}; sigma {s.render()}"


def shuffle_values(trials: int = 100, seed: int = 0):
    """Telescope one-one over add with extra multipliers in random candidate orders."""
    x = fixture("one-one")
    base = Polynomial([1, 1])
    extra = [base * Polynomial([1, 2]), base * Polynomial([3, -1]), base.shift(1), base * base,
             base * Polynomial([0, 0, 5])]
    rng = random.Random(seed)
    values = set()
    for _ in range(trials):
        out = telescope_sum(x, "add", candidates=extra, shuffle_seed=rng.randrange(2**32), cross_check=True)
        values.add(out.value if out.summed else None)
    return values


def criterion_5():
    one = fixture("one-one")
    q = telescope_sum(one, "add")
    z = telescope_sum(one, "add", codomain=Z)
    g2 = telescope_sum(fixture("G2"), "add")
    values = shuffle_values()
    ok = (q.summed and q.value == Fraction(1, 2) and z.verdict is Verdict.NOT_IN_DOMAIN
          and g2.summed and g2.value == -1 and values == {Fraction(1, 2)})
    return ok, (f"one-one/Q {q.render()}; one-one/Z {z.render()}; G2 {g2.render()}; "
                f"shuffled values {sorted(map(str, values))}")


def criterion_6():
    one = fixture("one-one")
    loose = M.DEFAULT.replace(tolerance=1e-3)
    ces = M.sum_cesaro_holder(one, 1, loose)
    abel = M.sum_abel(one)
    abel_num = M.sum_abel(one, M.DEFAULT.replace(use_closed_form=False))
    ces2 = M.sum_cesaro_holder(evaluate("1/(1+s)^2"), 2, loose)
    ok = (_close(ces, Fraction(1, 2), 1e-3) and _close(abel, Fraction(1, 2), 1e-6)
          and _close(abel_num, Fraction(1, 2), 1e-6) and _close(ces2, Fraction(1, 4), 1e-3))
    return ok, (f"C1 {ces.render()}; Abel {abel.render()}; Abel numeric {abel_num.render()}; "
                f"C2 on sum (-1)^n (n+1) {ces2.render()}")


T_LIST = [Fraction(1), Fraction(-2), Fraction(1, 2), Fraction(1, 3), Fraction(5, 24), Fraction(7, 60),
          Fraction(37, 720), Fraction(17, 2520), Fraction(-887, 40320)]


def t_tail_bounds(n_max: int = 2000):
    """max |t_n| n^(5/4) over [1, n_max/2] and (n_max/2, n_max]."""
    t = fixture("ratnottel-T")
    xs = t.prefix(n_max + 1)
    half = n_max // 2
    vals = [abs(float(xs[n])) * n**1.25 for n in range(1, n_max + 1)]
    return max(vals[:half]), max(vals[half:])


def criterion_7():
    t = fixture("ratnottel-T")
    head = t.prefix(9)
    b1, b2 = t_tail_bounds(2000)
    ok = head == T_LIST and b2 <= b1
    return ok, f"first 9 exact: {head == T_LIST}; max |t_n| n^1.25 on [1,1000] = {b1:.4f}, on (1000,2000] = {b2:.4f}"


def inverse_s_oracle(n_terms: int = 400_000) -> float:
    """1/S(1) by a float recurrence for t_n and an arithmetic mean of the last half of the partial sums."""
    t1, t2 = -2.0, 1.0
    s = 5.0  # s_0 + s_1 = 2 + 3
    acc, count = 0.0, 0
    for m in range(2, n_terms + 1):
        tm = ((2 * m - 4) * t1 - (m - 3) * t2) / m
        t2, t1 = t1, tm
        s += tm if m % 2 == 0 else -tm
        if m > n_terms // 2:
            acc += s
            count += 1
    return 1 / (acc / count)


def criterion_8():
    x = fixture("ratnottel-X")
    cfg = M.DEFAULT.replace(tolerance=1e-3)
    q = rational_extension_sum(x, "absolute", cfg)
    oracle = inverse_s_oracle()
    closed = 1 / (2 * (1 + math.exp(0.5)))
    tel = telescope_sum(x, "absolute", M.DEFAULT.replace(max_degree=8))
    ok = (_close(q, oracle, 1e-5) and abs(oracle - closed) < 1e-9
          and tel.verdict is Verdict.INCONCLUSIVE)
    return ok, f"Q {q.render()} vs oracle {oracle:.10f}; T {tel.render()}"


def criterion_9():
    x = fixture("inv-sqrt")
    sq = S.cauchy_product(x, x).prefix(513)
    ok_sq = sq == [Fraction((-1) ** n) for n in range(513)]
    cfg = M.DEFAULT.replace(tolerance=2e-2)
    m = mult_extension_sum(ProductExpression.power(x, 2), "classical", cfg)
    ok_m = _close(m, Fraction(1, 2), 1e-6)
    details = []
    ok_pow = True
    for k in range(4):
        y = S.power(x, 2 * k + 2)
        exact = y.prefix(257) == [Fraction((-1) ** n * math.comb(k + n, k)) for n in range(257)]
        g = grade_lower_bound(y)
        ok_pow = ok_pow and exact and g >= k + 1
        details.append(f"k={k}: exact {exact}, grade >= {g}")
    return ok_sq and ok_m and ok_pow, f"X^2 = (-1)^n: {ok_sq}; M {m.render()}; " + "; ".join(details)


def multnottel_square_values(levels=(2, 3, 4)):
    x = fixture("multnottel-X")
    sq = S.cauchy_product(x, x)
    return {n: sq.coefficient(2 ** (2**n)) for n in levels}


def surrogate_bound_check(levels=(2, 3, 4)):
    """Whether ceil(log2(i+2)) <= 2^(n-1) for every index i of X below g(n)."""
    from .fixtures import _LSequence

    ell = _LSequence()
    out = {}
    for n in levels:
        g = 2 ** (2**n)
        i = 0
        while ell(i + 1) < g:
            i += 1
        out[n] = ceil_log2(i + 2) <= 2 ** (n - 1)
    return out


def criterion_10():
    vals = multnottel_square_values()
    bounds = surrogate_bound_check()
    ok = all(v >= 2 for v in vals.values())
    shown = ", ".join(f"n={n}: {float(v):.4f}" for n, v in vals.items())
    return ok, f"square coefficients at 2^(2^n): {shown}; surrogate bound holds: {bounds}"


def criterion_11():
    rs = crt_residues([3, 5])
    y = fixture("crt-Y", 3, 5)
    outs = {p: M.sum_padic(y, p) for p in (3, 5)}
    total = sum(rs)
    found = {}
    for j, p in enumerate((3, 5)):
        o = outs[p]
        if not o.summed:
            return False, f"{p}-adic: {o.render()}"
        for cand in (Fraction(rs[0] - rs[1]), Fraction(rs[1] - rs[0])):
            if o.value.congruent(cand):
                found[p] = cand
        found.setdefault(p, None)
    distinct = found[3] is not None and found[5] is not None and found[3] != found[5]
    formula = {p: 2 * rs[j] - total for j, p in enumerate((3, 5))}
    sign = "2 r_j - sum r" if all(found[p] == formula[p] for p in found) else \
        "sum r - 2 r_j" if all(found[p] == -formula[p] for p in found) else "neither"
    return distinct, (f"r = {rs}; 3-adic {outs[3].render()}; 5-adic {outs[5].render()}; "
                      f"data supports {sign}")


def criterion_12(cases: int = 1000, seed: int = 12):
    from .properties import run_property_suites

    results = run_property_suites(cases, seed)
    failed = [name for name, ok in results.items() if not ok]
    return not failed, f"{len(results)} suites x {cases} cases; failed: {failed or 'none'}"


CRITERIA = [
    (1, "two-valued sum of sqrt(1 + 7/9 s)", criterion_1, 1),
    (2, "family X_a at a = 4", criterion_2, 1),
    (3, "Borel sum of G_-2 and the shift relation", criterion_3, 5),
    (4, "Euler on rational forms", criterion_4, 1),
    (5, "telescoping over Q and Z, shuffled certificates", criterion_5, 5),
    (6, "Cesaro and Abel on 1 - 1 + 1 - ...", criterion_6, 10),
    (7, "holonomic T series and its tail", criterion_7, 5),
    (8, "rational but not telescopic: 1/S", criterion_8, 10),
    (9, "multiplicative grading of powers of 1/sqrt(1+s)", criterion_9, 10),
    (10, "MultNotTel square at 2^(2^n)", criterion_10, 20),
    (11, "CRT family over (3, 5)", criterion_11, 2),
    (12, "randomized property suites", criterion_12, 60),
]


def run_criterion(number: int) -> CriterionResult:
    for n, title, fn, budget in CRITERIA:
        if n == number:
            t0 = time.perf_counter()
            try:
                ok, detail = fn()
            except Exception as e:  # a crash is a failed criterion, not a crashed suite
                ok, detail = False, f"error: {type(e).__name__}: {e}"
            return CriterionResult(n, title, bool(ok), detail, time.perf_counter() - t0, budget)
    raise KeyError(number)


def run_all(numbers=None):
    return [run_criterion(n) for n, *_ in CRITERIA if numbers is None or n in numbers]
