"""Extension operators over a base summer.

* telescope_sum: find a polynomial F with F(1)-sum regular and F X summable,
  value = base(F X) / base(F).
* norlund_mean: weighted means (P . Sigma X)_n / (Sigma P)_n under a limit.
* mult_extension_sum: sums of products valued factorwise.
* rational_extension_sum: like telescoping with an arbitrary summable B.
* consistency_report: pairwise agreement and multiplicativity over a corpus.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import series as S
from .arith import ApproxReal, Codomain, PAdicValue, Q, Z, is_regular
from .errors import (DecompositionUnverified, NorlundDenominatorZero, NotRegular, SummaError,
                     UnknownBase)
from .outcome import SummationOutcome, Verdict, inconclusive, not_in_domain, summed
from .poly import Polynomial
from .recurrence import fit_linear_recurrence, rational_reconstruct
from .summers import DEFAULT, SummerConfig, parse_method, run_summer

TELESCOPE_BASES = ("add", "classical", "absolute", "padic", "borel", "abel", "cesaro")
RULES = ("identity", "closed-form denominator", "fitted recurrence", "tail reconstruction")
EXACT_BASES = ("add", "padic")


def _check_base(base: str):
    name, params = parse_method(base)
    if name not in TELESCOPE_BASES:
        raise UnknownBase(f"{base!r} is not a telescoping base")
    return name, params


def _safe_run(method, x, cfg):
    try:
        return run_summer(method, x, cfg)
    except SummaError as e:
        return inconclusive(method, f"{type(e).__name__}: {e}")


def _divide(a, b):
    if isinstance(a, ApproxReal) or isinstance(b, ApproxReal):
        if not isinstance(a, ApproxReal):
            a = ApproxReal(a, bits=b.bits)
        return a / b
    return a / b


def _mul(a, b):
    if isinstance(b, ApproxReal) and not isinstance(a, (ApproxReal, PAdicValue)):
        return b * a
    return a * b


def _add(a, b):
    if isinstance(b, ApproxReal) and not isinstance(a, (ApproxReal, PAdicValue)):
        return b + a
    return a + b


def values_agree(a, b, tol: float) -> Optional[bool]:
    """Agreement of two codomain values; None when they are not comparable."""
    if isinstance(a, PAdicValue) or isinstance(b, PAdicValue):
        if not (isinstance(a, PAdicValue) and isinstance(b, PAdicValue)) or a.prime != b.prime:
            return None
        return (a - b).is_zero
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    ea = a.error if isinstance(a, ApproxReal) else 0
    eb = b.error if isinstance(b, ApproxReal) else 0
    va = a.value if isinstance(a, ApproxReal) else ApproxReal(a).value
    vb = b.value if isinstance(b, ApproxReal) else ApproxReal(b).value
    return abs(va - vb) <= ea + eb + tol


# -- telescopic extension -----------------------------------------------------

@dataclass
class TelescopeCertificate:
    F: Polynomial
    FX: S.Series
    f: object
    fx: object
    value: object
    base: str
    rule: str
    verified_to: Optional[int] = None

    def recheck(self, cfg: SummerConfig = DEFAULT) -> bool:
        """Recompute F X and both base sums; confirm value * f = fx."""
        out_fx = _safe_run(self.base, self.FX, cfg)
        if not out_fx.summed:
            return False
        lhs = _mul(self.value, self.f) if not isinstance(self.value, ApproxReal) else self.value * self.f
        return bool(values_agree(lhs, out_fx.value, cfg.tolerance))

    def to_json(self) -> dict:
        return {"F": self.F, "f": self.f, "fx": self.fx, "value": self.value, "base": self.base,
                "rule": self.rule, "verified_to": self.verified_to}


def telescope_candidates(x: S.Series, base: str, cfg: SummerConfig = DEFAULT):
    """Candidate multipliers in the documented order, as (rule, F, verified_to)."""
    name, _ = _check_base(base)
    yield "identity", Polynomial([1]), None
    r = x.rational
    if r is not None and r.den.degree > 0:
        yield "closed-form denominator", r.den, None
    d = cfg.max_degree
    scan = max(cfg.verify_range, 2 * d + 8)
    fit = fit_linear_recurrence(x, d, scan)
    if fit is not None and fit.annihilator.degree > 0:
        yield "fitted recurrence", fit.annihilator, fit.verified_to
    if name not in EXACT_BASES:
        seen = set()
        for m in (cfg.window, 4 * cfg.window):
            rr = rational_reconstruct(S.left_shift(x, m), d, scan)
            if rr is not None and rr.den.degree > 0 and rr.den not in seen:
                seen.add(rr.den)
                yield "tail reconstruction", rr.den, scan + m


def _polynomial_sum(base, F, cfg):
    return _safe_run(base, S.from_polynomial(F), cfg)


def telescope_sum(x: S.Series, base: str = "add", cfg: SummerConfig = DEFAULT, codomain: Codomain = Q,
                  candidates: Optional[Sequence] = None, shuffle_seed: Optional[int] = None,
                  cross_check: bool = False) -> SummationOutcome:
    """Telescopic extension of ``base`` at X.

    ``candidates`` appends extra multipliers (rule "supplied"); ``shuffle_seed``
    permutes the full candidate list; ``cross_check`` evaluates every candidate
    and confirms that all certificates give the same value.
    """
    name, bparams = _check_base(base)
    method = f"T[{base}]"
    params = {"base": base, "codomain": str(codomain),
              "max_degree": cfg.max_degree}
    supplied = [("supplied", F if isinstance(F, Polynomial) else Polynomial(F), None) for F in candidates or ()]
    cands = itertools.chain(telescope_candidates(x, base, cfg), supplied)
    if shuffle_seed is not None:
        cands = list(cands)
        random.Random(shuffle_seed).shuffle(cands)
    tried = []
    certificates = []
    zero_f = []
    for rule, F, verified in cands:
        FX = S.cauchy_product(S.from_polynomial(F), x)
        out_fx = _safe_run(base, FX, cfg)
        entry = {"rule": rule, "F": F, "FX": out_fx.verdict.value}
        tried.append(entry)
        if not out_fx.summed:
            continue
        out_f = _polynomial_sum(base, F, cfg)
        if not out_f.summed:
            entry["f"] = out_f.verdict.value
            continue
        f, fx = out_f.value, out_fx.value
        if not is_regular(f, codomain):
            zero_f.append(F)
            entry["f"] = "not regular"
            continue
        value = _divide(fx, f)
        cert = TelescopeCertificate(F, FX, f, fx, value, base, rule, verified)
        certificates.append(cert)
        if not cross_check:
            break
    if certificates:
        cert = certificates[0]
        agreement = _certificate_agreement(certificates, cfg)
        if agreement is False:
            return inconclusive(method, "certificates disagree; well-definedness check failed", params,
                                certificates=[c.to_json() for c in certificates])
        if codomain.kind == "Z":
            if not isinstance(cert.value, Fraction):
                return inconclusive(method, "integrality cannot be decided for an approximate value", params,
                                    certificate=cert.to_json())
            if cert.value.denominator != 1:
                return not_in_domain(method, f"ValueEscapesCodomain: {cert.value} is not an integer", params,
                                     certificate=cert.to_json())
        return summed(method, cert.value, params, certificate=cert.to_json(), rule=cert.rule,
                      certificates_checked=len(certificates), tried=tried)
    if zero_f:
        return not_in_domain(method, "NotRegular: every multiplier making F X summable has base sum 0",
                             params, multipliers=zero_f, tried=tried)
    return inconclusive(method, "no candidate multiplier made F X summable with a regular sum", params,
                        tried=tried)


def _certificate_agreement(certs, cfg):
    """Pairwise f' fx = f fx' over all found certificates; None when fewer than two."""
    if len(certs) < 2:
        return None
    for a, b in itertools.combinations(certs, 2):
        if isinstance(a.fx, Fraction) and isinstance(b.fx, Fraction) and isinstance(a.f, Fraction) \
                and isinstance(b.f, Fraction):
            if b.f * a.fx != a.f * b.fx:
                return False
        elif values_agree(a.value, b.value, cfg.tolerance) is False:
            return False
    return True


# -- Nørlund means ------------------------------------------------------------

def _limit_sequence(seq_source, name):
    """Series whose partial sums are the given sequence t_n."""

    def src(n, memo):
        t = seq_source(n)
        return t - seq_source(n - 1) if n else t

    return S.Series(src, sequential=True, name=name)


def norlund_mean(x: S.Series, P: S.Series, limit: str = "classical",
                 cfg: SummerConfig = DEFAULT) -> SummationOutcome:
    """Limit of (P . Sigma X)_n / (Sigma P)_n under ``limit``, with the T_P companion check."""
    method = f"N[{limit}]"
    params = {"limit": limit, "P": P.name or "P"}
    psum_out = _safe_run(limit, P, cfg)
    if psum_out.summed and not is_regular(psum_out.value):
        raise NorlundDenominatorZero(f"the {limit} sum of P is zero")
    sp = S.partial_sums(P)
    num = S.cauchy_product(P, S.partial_sums(x))

    def t(n):
        d = sp.coefficient(n)
        if d == 0:
            raise NorlundDenominatorZero(f"(Sigma P)_{n} = 0")
        return num.coefficient(n) / d

    seq = _limit_sequence(t, "Norlund means")
    try:
        out = run_summer(limit, seq, cfg)
    except NorlundDenominatorZero:
        raise
    companion = None
    if psum_out.summed:
        tp = S.scale(1 / psum_out.value if isinstance(psum_out.value, Fraction) else 1,
                     S.cauchy_product(P, x))
        if isinstance(psum_out.value, Fraction):
            companion = _safe_run(limit, tp, cfg)
    witness = {"P_sum": psum_out.value if psum_out.summed else psum_out.verdict.value,
               "means": [t(n) for n in range(min(8, cfg.verify_range))]}
    if companion is not None:
        witness["companion"] = {"verdict": companion.verdict.value,
                                "value": companion.value if companion.summed else None}
        if out.summed and companion.summed:
            agree = values_agree(out.value, companion.value, cfg.tolerance)
            witness["companion"]["agrees"] = agree
            if agree is False:
                return inconclusive(method, "Norlund mean and T_P companion disagree", params, **witness)
    if out.summed:
        return summed(method, out.value, params, **witness)
    if out.verdict is Verdict.NOT_IN_DOMAIN:
        return not_in_domain(method, out.reason, params, **witness)
    return inconclusive(method, out.reason, params, **witness)


# -- multiplicative extension -------------------------------------------------

@dataclass
class ProductExpression:
    """Formal sum over i of the product over j of X_{i,j}."""

    terms: list

    def __post_init__(self):
        if not self.terms or any(not t for t in self.terms):
            raise ValueError("a product expression needs at least one nonempty product")
        self.terms = [list(t) for t in self.terms]

    @classmethod
    def power(cls, x: S.Series, k: int) -> "ProductExpression":
        return cls([[x] * k])

    @property
    def grade(self) -> int:
        return max(len(t) for t in self.terms)

    def expand(self) -> S.Series:
        total = None
        for factors in self.terms:
            prod = factors[0]
            for f in factors[1:]:
                prod = S.cauchy_product(prod, f)
            total = prod if total is None else S.linear_combine(1, total, 1, prod)
        return total

    def __mul__(self, other: "ProductExpression") -> "ProductExpression":
        return ProductExpression([a + b for a in self.terms for b in other.terms])

    def __add__(self, other: "ProductExpression") -> "ProductExpression":
        return ProductExpression(self.terms + other.terms)


def mult_extension_sum(expr: ProductExpression, base: str = "classical", cfg: SummerConfig = DEFAULT,
                       alternatives: Sequence[ProductExpression] = ()) -> SummationOutcome:
    """Sum of the products of factorwise base sums."""
    method = f"M[{base}]"
    params = {"base": base, "grade": expr.grade}
    cache = {}
    reports = []
    for e in [expr, *alternatives]:
        factor_sums = []
        verdicts = set()
        for factors in e.terms:
            row = []
            for f in factors:
                key = id(f)
                if key not in cache:
                    cache[key] = _safe_run(base, f, cfg)
                row.append(cache[key])
                verdicts.add(cache[key].verdict)
            factor_sums.append(row)
        report = {"grade": e.grade,
                  "factors": [[{"series": f.name, "verdict": o.verdict.value,
                                "value": o.value if o.summed else None}
                               for f, o in zip(factors, row)] for factors, row in zip(e.terms, factor_sums)]}
        reports.append(report)
        if verdicts == {Verdict.SUMMED}:
            total = None
            for row in factor_sums:
                prod = row[0].value
                for o in row[1:]:
                    prod = _mul(prod, o.value)
                total = prod if total is None else _add(total, prod)
            params["grade"] = e.grade
            return summed(method, total, params, decompositions=reports)
    inconclusive_any = any(o.verdict is Verdict.INCONCLUSIVE for o in cache.values())
    if not inconclusive_any and not alternatives:
        return not_in_domain(method, "a factor is not in the base domain and no other decomposition was given",
                             params, decompositions=reports)
    return inconclusive(method, "some factor was not summed by the base", params, decompositions=reports)


def grade_lower_bound(x: S.Series, k_max: int = 8, cfg: SummerConfig = DEFAULT, blocks: int = 4,
                      top: int = 9) -> int:
    """Least k <= k_max not excluded by the growth condition x_n = o(n^(k-1)).

    A product of k convergent series has coefficients o(n^(k-1)).  Grade k is
    excluded when the dyadic-block maxima of |x_n| / (n+1)^(k-1) over the
    last ``blocks`` blocks below 2^top do not decay (the last is at least 3/4
    of the first); the fitted c is the least of those maxima.  This is a
    lower bound only.
    """
    N = 2**top
    if x.sparse:
        terms = [(n, abs(x.coefficient(n))) for n in x.support(N - 1)]
    else:
        terms = [(n, abs(c)) for n, c in enumerate(x.prefix(N))]
    for k in range(1, k_max + 1):
        ratios = []
        for j in range(top - blocks, top):
            vals = [c / Fraction(n + 1) ** (k - 1) for n, c in terms if 2**j <= n < 2 ** (j + 1) and c]
            ratios.append(max(vals) if vals else Fraction(0))
        c = min(ratios)
        if not (c > 0 and ratios[-1] >= Fraction(3, 4) * ratios[0]):
            return k
    return k_max


# -- rational extension -------------------------------------------------------

@dataclass
class RationalWitness:
    A: S.Series
    B: S.Series
    a: object
    b: object
    value: object
    verified_to: int
    source: str

    def to_json(self) -> dict:
        return {"A": _label(self.A), "B": _label(self.B), "a": self.a, "b": self.b, "value": self.value,
                "verified_to": self.verified_to, "source": self.source}


def _label(x: S.Series) -> str:
    return x.name or (str(x.closed_form) if x.closed_form is not None else "series")


def decomposition_of(x: S.Series):
    """(A, B, source) with A = B X from the closed-form tag, or None."""
    r = x.rational
    if r is not None:
        return S.from_polynomial(r.num), S.from_polynomial(r.den), "rational closed form"
    cf = x.closed_form
    if isinstance(cf, S.Inverse):
        return S.constant(1), cf.of, "inverse"
    if isinstance(cf, S.Ratio):
        return cf.num, cf.den, "ratio"
    return None


def verify_decomposition(A: S.Series, B: S.Series, x: S.Series, N: int) -> bool:
    """A = B X on 0..N by exact convolution (sparse-aware)."""
    BX = S.cauchy_product(B, x)
    if A.sparse and BX.sparse:
        idx = set(A.support(N)) | set(BX.support(N))
        return all(A.coefficient(n) == BX.coefficient(n) for n in idx)
    return A.prefix(N + 1) == BX.prefix(N + 1)


def rational_extension_sum(x: S.Series, base: str = "absolute", cfg: SummerConfig = DEFAULT,
                           A: Optional[S.Series] = None, B: Optional[S.Series] = None,
                           check_telescope: Optional[bool] = None) -> SummationOutcome:
    """base(A) / base(B) for a verified decomposition A = B X."""
    method = f"Q[{base}]"
    params = {"base": base, "verify_range": cfg.verify_range}
    if (A is None) != (B is None):
        raise ValueError("give both A and B or neither")
    if A is None:
        dec = decomposition_of(x)
        if dec is None:
            return inconclusive(method, "no decomposition A = B X available", params)
        A, B, source = dec
    else:
        source = "supplied"
    N = cfg.verify_range
    if not verify_decomposition(A, B, x, N):
        raise DecompositionUnverified(f"A != B X on 0..{N}")
    out_b = _safe_run(base, B, cfg)
    if not out_b.summed:
        return SummationOutcome(method, out_b.verdict, None, f"B: {out_b.reason}", params,
                                {"B": out_b.to_json()})
    if not is_regular(out_b.value):
        raise NotRegular(f"base sum of B is {out_b.value}, not regular")
    out_a = _safe_run(base, A, cfg)
    if not out_a.summed:
        return SummationOutcome(method, out_a.verdict, None, f"A: {out_a.reason}", params,
                                {"A": out_a.to_json()})
    value = _divide(out_a.value, out_b.value)
    wit = RationalWitness(A, B, out_a.value, out_b.value, value, N, source)
    witness = {"certificate": wit.to_json()}
    if check_telescope is None:
        check_telescope = x.rational is not None
    if check_telescope and parse_method(base)[0] in TELESCOPE_BASES:
        tel = telescope_sum(x, base, cfg)
        witness["telescope"] = {"verdict": tel.verdict.value, "value": tel.value if tel.summed else None}
        if tel.summed:
            agree = values_agree(tel.value, value, cfg.tolerance)
            witness["telescope"]["agrees"] = agree
            if agree is False:
                return inconclusive(method, "rational and telescopic values disagree", params, **witness)
    return summed(method, value, params, **witness)


# -- consistency --------------------------------------------------------------

@dataclass
class ConsistencyReport:
    methods: list
    names: list
    outcomes: dict  # (method, name) -> SummationOutcome
    pairs: dict = field(default_factory=dict)  # (m1, m2) -> list of (name, agrees)
    multiplicative: list = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return all(a is not False for rows in self.pairs.values() for _, a in rows) and \
            all(m["agrees"] is not False for m in self.multiplicative)

    def to_json(self) -> dict:
        return {
            "methods": self.methods,
            "corpus": self.names,
            "outcomes": {f"{m}|{n}": o.to_json() for (m, n), o in self.outcomes.items()},
            "pairs": {f"{a}|{b}": [{"series": n, "agrees": g} for n, g in rows]
                      for (a, b), rows in self.pairs.items()},
            "multiplicative": self.multiplicative,
            "consistent": self.consistent,
        }

    def render(self) -> str:
        width = max([len(m) for m in self.methods] + [8])
        lines = [" " * width + "  " + "  ".join(m.ljust(width) for m in self.methods)]
        for a in self.methods:
            cells = []
            for b in self.methods:
                rows = self.pairs.get((a, b)) or self.pairs.get((b, a)) or []
                if a == b:
                    cell = "-"
                elif not rows:
                    cell = "vacuous"
                elif all(g for _, g in rows):
                    cell = f"agree({len(rows)})"
                else:
                    cell = "DISAGREE"
                cells.append(cell.ljust(width))
            lines.append(a.ljust(width) + "  " + "  ".join(cells))
        for m in self.multiplicative:
            lines.append(f"mult {m['method']}: {m['x']} * {m['y']} -> {'ok' if m['agrees'] else 'FAIL'}")
        return "\n".join(lines)


def consistency_report(methods: Sequence[str], corpus: dict, cfg: SummerConfig = DEFAULT,
                       product_pairs: Optional[Sequence] = None) -> ConsistencyReport:
    """Agreement matrix over method pairs, plus multiplicativity on the given corpus pairs.

    ``product_pairs`` lists (name, name) pairs to test; by default none.
    """
    names = list(corpus)
    outcomes = {}
    for m in methods:
        for n in names:
            outcomes[(m, n)] = _safe_run(m, corpus[n], cfg)
    pairs = {}
    for a, b in itertools.combinations(methods, 2):
        rows = []
        for n in names:
            oa, ob = outcomes[(a, n)], outcomes[(b, n)]
            if oa.summed and ob.summed:
                g = values_agree(oa.value, ob.value, cfg.tolerance)
                if g is not None:
                    rows.append((n, g))
        pairs[(a, b)] = rows
    mult = []
    for xn, yn in product_pairs or ():
        xy = S.cauchy_product(corpus[xn], corpus[yn])
        for m in methods:
            ox, oy = outcomes[(m, xn)], outcomes[(m, yn)]
            if not (ox.summed and oy.summed):
                continue
            oxy = _safe_run(m, xy, cfg)
            if not oxy.summed:
                continue
            g = values_agree(_mul(ox.value, oy.value), oxy.value, cfg.tolerance)
            mult.append({"method": m, "x": xn, "y": yn, "agrees": g})
    return ConsistencyReport(list(methods), names, outcomes, pairs, mult)
