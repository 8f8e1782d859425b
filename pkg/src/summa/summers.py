"""Base summation methods, each returning a three-way verdict.

NotInDomain is only reported when membership is decidably false: pole
locations of a rational closed form (exact root location), bounded p-adic
valuations, and similar.  Every numeric procedure that merely fails to
stabilize reports Inconclusive together with what it tried.
"""

from __future__ import annotations

import dataclasses
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath
from mpmath import libmp

from . import kernels
from . import series as S
from .arith import ApproxReal, PAdicValue, padic_embed, require_prime, valuation, INF
from .errors import NoClosedForm, QuadratureFailure, UnknownBase, SummaError
from .outcome import SummationOutcome, inconclusive, not_in_domain, summed
from .poly import count_real_roots, unit_disk_report


@dataclass(frozen=True)
class SummerConfig:
    tolerance: float = 1e-9
    window: int = 16
    n_max: int = 100_000
    bits: int = 128
    abel_depth: int = 40
    padic_precision: int = 12
    ladder_window: int = 4
    n_shift: int = 8
    cesaro_max_log2: int = 14
    borel_t_max: int = 256
    borel_max_terms: int = 1024
    guard: int = 8
    verify_range: int = 256
    max_degree: int = 8
    absolute_scan: int = 2048
    coefficient_bit_budget: int = 2**28
    use_closed_form: bool = True

    def __post_init__(self):
        for name in ("tolerance", "window", "n_max", "bits", "abel_depth", "padic_precision",
                     "ladder_window", "cesaro_max_log2", "borel_t_max", "borel_max_terms", "verify_range"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    def replace(self, **kw) -> "SummerConfig":
        return dataclasses.replace(self, **kw)


DEFAULT = SummerConfig()
GEOMETRIC_GRID = (Fraction(1, 2), Fraction(2, 3), Fraction(3, 4), Fraction(7, 8), Fraction(15, 16))


# -- small numeric helpers --------------------------------------------------

def _ilog2(n: int) -> float:
    b = n.bit_length()
    if b <= 53:
        return math.log2(n)
    return (b - 53) + math.log2(n >> (b - 53))


def log2abs(q: Fraction) -> float:
    """log2 |q| as a float; -inf for zero."""
    if q == 0:
        return -math.inf
    return _ilog2(abs(q.numerator)) - _ilog2(q.denominator)


_local = threading.local()


def _context(prec: int):
    """Per-thread mpmath context at a fixed precision (the global one is shared state)."""
    cache = getattr(_local, "contexts", None)
    if cache is None:
        cache = _local.contexts = {}
    ctx = cache.get(prec)
    if ctx is None:
        ctx = cache[prec] = mpmath.MPContext()
        ctx.prec = prec
    return ctx


def _working(cfg):
    return _context(cfg.bits + 32)


def _to_mpf(q: Fraction, ctx):
    return ctx.make_mpf(libmp.from_rational(q.numerator, q.denominator, ctx.prec, libmp.round_nearest))


def _approx(value, error, bits) -> ApproxReal:
    return ApproxReal(value, abs(error), bits)


def _tol(cfg, ctx):
    return ctx.mpf(cfg.tolerance)


def _polynomial_shortcut(x, method, params):
    r = x.rational
    if r is not None and r.is_polynomial:
        return summed(method, r.num(1), params, rule="polynomial", polynomial=r.num)
    return None


def _coefficient_bits(c: Fraction) -> int:
    return c.numerator.bit_length() + c.denominator.bit_length()


class _ExactSum:
    """Running exact sum with lcm accumulation and a single reduction on read."""

    __slots__ = ("U", "V")

    def __init__(self):
        self.U = 0
        self.V = 1

    def add(self, c: Fraction):
        p, q = c.numerator, c.denominator
        V = self.V
        if q == V:
            self.U += p
        elif V % q == 0:
            self.U += p * (V // q)
        else:
            g = math.gcd(V, q)
            self.U = self.U * (q // g) + p * (V // g)
            self.V = V * (q // g)

    def value(self) -> Fraction:
        return Fraction(self.U, self.V)

    def mpf(self, ctx):
        return ctx.make_mpf(libmp.from_rational(self.U, self.V, ctx.prec, libmp.round_nearest))


def _spread(values, ctx):
    mean = ctx.fsum(values) / len(values)
    return mean, max(abs(v - mean) for v in values)


# -- Add ----------------------------------------------------------------------

def sum_add(x: S.Series, cfg: SummerConfig = DEFAULT) -> SummationOutcome:
    """Finite addition: defined exactly on finitely supported series."""
    method = "add"
    params = {"scan": cfg.verify_range}
    r = x.rational
    if r is not None:
        if r.is_polynomial:
            return summed(method, r.num(1), params, rule="polynomial", polynomial=r.num)
        return not_in_domain(method, "InfiniteSupport: reduced closed form has a nonconstant denominator",
                             params, closed_form=r)
    scan = cfg.verify_range + cfg.window
    terms = x.nonzero_terms(scan)
    last = terms[-1][0] if terms else -1
    if last <= cfg.verify_range:
        total = sum((c for _, c in terms), Fraction(0))
        return summed(method, total, params, rule="support scan", support_bound=last, scanned_to=scan)
    return inconclusive(method, f"nonzero coefficients up to index {last}; support not shown finite",
                        params, scanned_to=scan)


# -- classical ----------------------------------------------------------------

def _binomial_divergence(x):
    """Exact divergence proof for (1 + c s^m)^a with |c| > 1 and a not a natural number."""
    cf = x.closed_form
    if not isinstance(cf, S.BinomialPower):
        return None
    r = cf.base.rational
    if r is None or not r.is_polynomial:
        return None
    nz = [(k, c) for k, c in enumerate(r.num.coeffs) if k > 0 and c != 0]
    a = cf.exponent
    if len(nz) != 1 or (a.denominator == 1 and a >= 0):
        return None
    c = nz[0][1]
    if abs(c) > 1:
        return f"TermsUnbounded: binomial coefficients of exponent {a} times {c}^n grow geometrically"
    return None


def sum_classical(x: S.Series, cfg: SummerConfig = DEFAULT, method: str = "classical") -> SummationOutcome:
    """Limit of partial sums; exact on rational closed forms, stabilization test otherwise."""
    params = {"tolerance": cfg.tolerance, "window": cfg.window, "n_max": cfg.n_max}
    short = _polynomial_shortcut(x, method, params)
    if short:
        return short
    if cfg.use_closed_form:
        r = x.rational
        if r is not None:
            rep = unit_disk_report(r.den)
            if rep.inside or rep.root_at_one:
                where = "inside the unit disk" if rep.inside else "at z = 1"
                return not_in_domain(method, f"PoleInClosedDisk: denominator has a root {where}",
                                     params, denominator=r.den, root_test=rep.method)
            if rep.on_circle:
                # terms stay bounded but do not tend to zero; reported as oscillation
                return inconclusive(method, "bounded oscillation: closed form has a pole on |z| = 1",
                                    params, denominator=r.den, root_test=rep.method)
            return summed(method, r(1), params, rule="closed form with all poles outside the closed unit disk",
                          closed_form=r, root_test=rep.method)
        why = _binomial_divergence(x)
        if why:
            return not_in_domain(method, why, params)
    return scan_partial_sums(x, cfg, method, params)


def scan_partial_sums(x: S.Series, cfg: SummerConfig, method: str, params: dict) -> SummationOutcome:
    """Stabilization test on the partial sums taken after each nonzero term.

    The value reported is the mean of the last ``window`` window-means
    (a triangular average of ``2 window - 1`` partial sums); the error bound
    is the spread of the last window.
    """
    ctx = _working(cfg)
    tol = _tol(cfg, ctx)
    w = cfg.window
    acc = _ExactSum()
    events: list = []
    last_event = -1
    bits_used = 0
    growth_run = 0
    prev = None
    blocks = {}  # dyadic block index -> max log2 |x_n|
    indices = x.support(cfg.n_max) if x.sparse else range(cfg.n_max + 1)
    for n in indices:
        c = x.coefficient(n)
        if c == 0:
            if (not x.sparse and n >= 4 * w and n - last_event >= w and n - last_event > 3 * n // 4):
                return summed(method, acc.value(), params, rule="support appears finite",
                              last_nonzero=last_event, scanned_to=n)
            continue
        bits_used += _coefficient_bits(c)
        if bits_used > cfg.coefficient_bit_budget:
            return inconclusive(method, f"budget: coefficient storage exceeded at n={n}", params,
                                scanned_to=n)
        acc.add(c)
        last_event = n
        events.append(acc.mpf(ctx))
        if len(events) > 2 * w:
            del events[0]
        la = log2abs(c)
        if prev is not None and la > 10 and (la - prev[1]) >= 0.17 * (n - prev[0]):
            growth_run += 1
            if growth_run >= w:
                return inconclusive(method, "coefficients show sustained geometric growth (ratio > 1)",
                                    params, scanned_to=n, log2_coefficient=la)
        else:
            growth_run = 0
        prev = (n, la)
        j = n.bit_length()
        if la > blocks.get(j, -math.inf):
            blocks[j] = la
        if n >= 64 and n & (n - 1) == 0:
            # n closes block j - 1; compare the two most recent complete blocks
            m1, m2 = blocks.get(j - 2), blocks.get(j - 1)
            if m1 is not None and m2 is not None and m2 > 10 and (m2 - m1) >= 0.05 * (n // 4):
                return inconclusive(method, "coefficients show sustained geometric growth (ratio > 1)",
                                    params, scanned_to=n, block_log2_maxima=[m1, m2])
        if len(events) >= w:
            mean, spread = _spread(events[-w:], ctx)
            if spread <= tol:
                value, level = _smoothed_limit(events[-w:])
                err = max(spread, abs(value - mean)) if level else spread
                return summed(method, _approx(value, err, cfg.bits), params, rule="window stabilization",
                              last_index=n, spread=spread, averaging_level=level)
    if x.sparse and last_event >= 0 and last_event < cfg.n_max // 4:
        return summed(method, acc.value(), params, rule="support appears finite",
                      last_nonzero=last_event, scanned_to=cfg.n_max)
    if x.sparse and last_event < 0:
        return summed(method, Fraction(0), params, rule="no nonzero coefficient", scanned_to=cfg.n_max)
    return inconclusive(method, f"partial sums did not stabilize by n={cfg.n_max}", params)


def _smoothed_limit(values):
    """Estimate the limit from the last window of partial sums.

    Builds repeated pairwise averages A_0 = values, A_(L+1) = (A_L[i] + A_L[i+1])/2
    and returns the last entry of the level whose final step is smallest,
    with that level.  Monotone tails keep level 0; oscillating tails are
    smoothed by the deeper levels.
    """
    level_vals = list(values)
    best = (abs(level_vals[-1] - level_vals[-2]), level_vals[-1], 0)
    level = 0
    while len(level_vals) > 2:
        level_vals = [(a + b) / 2 for a, b in zip(level_vals, level_vals[1:])]
        level += 1
        step = abs(level_vals[-1] - level_vals[-2])
        if step < best[0]:
            best = (step, level_vals[-1], level)
    return best[1], best[2]


def detect_geometric(x: S.Series, cfg: SummerConfig = DEFAULT):
    """Least r in the grid with |x_n| <= C r^n on 0..N, C fitted on the first window; else None."""
    N = cfg.verify_range
    terms = x.nonzero_terms(N)
    if not terms:
        return GEOMETRIC_GRID[0], Fraction(0)
    for r in GEOMETRIC_GRID:
        head = [abs(c) / r**n for n, c in terms if n <= cfg.window]
        C = max(head) if head else Fraction(0)
        if all(abs(c) <= C * r**n for n, c in terms):
            return r, C
    return None


@dataclass
class AbsoluteWitness:
    detected: bool
    kind: str
    details: dict

    def __bool__(self):
        return self.detected


def _power_law_decay(x, cfg):
    """Dyadic-block maxima decaying faster than 2^(-1-1/16) per doubling over the last blocks."""
    N = cfg.absolute_scan
    top = N.bit_length() - 1
    if top < 6:
        return None
    maxima = []
    for j in range(2, top):
        lo, hi = 2**j, 2 ** (j + 1)
        if x.sparse:
            vals = [abs(x.coefficient(k)) for k in x.support(hi - 1) if k >= lo]
        else:
            vals = [abs(c) for c in x.prefix(hi)[lo:hi]]
        m = max(vals) if vals else Fraction(0)
        maxima.append(log2abs(m) if m else -math.inf)
        if len(maxima) >= 2 and maxima[-1] > maxima[-2] + 1:
            return None  # growing: no decay witness, and no need to expand further
    drops = [maxima[i - 1] - maxima[i] for i in range(1, len(maxima))]
    last = drops[-3:]
    if len(last) == 3 and all(d >= 1 + 1 / 16 for d in last):
        return {"block_log2_maxima": [m if m != -math.inf else None for m in maxima],
                "decay_exponents": last}
    return None


def detect_absolute(x: S.Series, cfg: SummerConfig = DEFAULT) -> AbsoluteWitness:
    """Semi-decision for absolute convergence; a negative answer proves nothing."""
    r = x.rational
    if r is not None:
        if r.is_polynomial:
            return AbsoluteWitness(True, "polynomial", {})
        rep = unit_disk_report(r.den)
        if not rep.closed_disk:
            return AbsoluteWitness(True, "closed form, poles outside the closed disk", {"root_test": rep.method})
        return AbsoluteWitness(False, "pole in the closed disk", {"root_test": rep.method})
    geo = detect_geometric(x, cfg)
    if geo is not None:
        return AbsoluteWitness(True, "geometric", {"rate": geo[0], "constant": geo[1]})
    law = _power_law_decay(x, cfg)
    if law is not None:
        return AbsoluteWitness(True, "power law", law)
    if x.sparse:
        absx = S.Series(lambda n: abs(x.coefficient(n)), support=x.support)
    else:
        absx = S.Series(lambda n, memo: abs(x.coefficient(n)), sequential=True)
    out = scan_partial_sums(absx, cfg.replace(n_max=min(cfg.n_max, cfg.absolute_scan * 4)), "abs-scan", {})
    if out.summed:
        return AbsoluteWitness(True, "absolute partial sums stabilize", {"value": out.value})
    return AbsoluteWitness(False, "not detected", {})


def sum_absolute(x: S.Series, cfg: SummerConfig = DEFAULT) -> SummationOutcome:
    """Classical summation restricted to series detected as absolutely convergent."""
    method = "absolute"
    params = {"tolerance": cfg.tolerance, "window": cfg.window, "n_max": cfg.n_max}
    short = _polynomial_shortcut(x, method, params)
    if short:
        return short
    det = detect_absolute(x, cfg)
    if not det:
        base = sum_classical(x, cfg) if x.rational is not None else None
        if base is not None and base.verdict.value == "NotInDomain":
            return not_in_domain(method, base.reason, params)
        return inconclusive(method, "absolute convergence not detected", params, detector=det.kind)
    out = sum_classical(x, cfg, method=method)
    out.witness["absolute"] = {"kind": det.kind, **det.details}
    return out


# -- Cesàro–Hölder ------------------------------------------------------------

def cesaro_value(xs, N: int, k: int) -> Fraction:
    """(k!/N^k) sum_{n<=N} binom(N-n+k, k) x_n, exactly."""
    ws = [0] * (N + 1)
    c = 1
    for m in range(N + 1):
        if m:
            c = c * (m + k) // m
        ws[N - m] = c
    total = kernels.weighted_sum(ws, xs[: N + 1])
    return Fraction(math.factorial(k), N**k) * total


def _rational_growth_obstruction(x):
    r = x.rational
    if r is None:
        return None
    rep = unit_disk_report(r.den)
    if rep.inside:
        return "PoleInsideDisk: coefficients grow geometrically"
    if rep.root_at_one:
        return "PoleAtOne: generating function is unbounded as z -> 1"
    return None


def sum_cesaro_holder(x: S.Series, k: int = 1, cfg: SummerConfig = DEFAULT) -> SummationOutcome:
    """The single-limit Cesàro–Hölder formula on the ladder N = 2^j and its odd neighbours 2^j - 1."""
    method = "cesaro"
    if k < 0:
        raise ValueError("order k must be nonnegative")
    params = {"k": k, "tolerance": cfg.tolerance, "ladder_window": cfg.ladder_window,
              "max_N": 2**cfg.cesaro_max_log2}
    short = _polynomial_shortcut(x, method, params)
    if short:
        return short
    if cfg.use_closed_form:
        why = _rational_growth_obstruction(x)
        if why:
            return not_in_domain(method, why, params)
    fit = fit_growth(x, min(cfg.n_max, 256))
    if fit.r > 1.0:
        return inconclusive(method, f"coefficients grow like {fit.r:.4g}^n; the means diverge", params,
                            growth_rate=fit.r)
    ctx = _working(cfg)
    tol = _tol(cfg, ctx)
    ladder = []
    values = []
    neighbours = []
    rounding = []
    floats = []  # x_n rounded once to working precision
    used_bits = 0
    for j in range(1, cfg.cesaro_max_log2 + 1):
        N = 2**j
        if floats:
            # project the rung from the newest coefficient before paying for it
            last = _coefficient_bits(x.coefficient(len(floats) - 1))
            if used_bits + last * (N + 1 - len(floats)) > cfg.coefficient_bit_budget:
                return inconclusive(method, f"budget: coefficient storage would exceed the budget at N={N}",
                                    params, last_values=values[-cfg.ladder_window:])
        xs = x.prefix(N + 1)
        for c in xs[len(floats):]:
            used_bits += _coefficient_bits(c)
            floats.append(_to_mpf(c, ctx))
        if used_bits > cfg.coefficient_bit_budget:
            return inconclusive(method, f"budget: coefficient storage exceeded at N={N}", params,
                                last_values=values[-cfg.ladder_window:])
        v, err = _cesaro_numeric(floats, N, k, ctx)
        # the odd neighbour N - 1 guards against a ladder that only sees one phase of an oscillation
        v_odd, err_odd = _cesaro_numeric(floats, N - 1, k, ctx)
        ladder.append(N)
        values.append(v)
        neighbours.append(v_odd)
        rounding.append(max(err, err_odd))
        if len(values) >= 4 and N >= 256:
            # when the means approach the limit like 1/N, each ladder gap is about half the previous
            # one and the gaps bound the tail; slower laws (N^-1/4, say) fail the ratio window
            d1, d2, d3 = (abs(values[-i] - values[-i - 1]) for i in (1, 2, 3))
            parity = abs(values[-1] - neighbours[-1])
            if d2 and d3 and 0.25 <= d1 / d2 <= 0.75 and 0.25 <= d2 / d3 <= 0.75 and parity <= tol:
                q = max(d1 / d2, d2 / d3)
                correction = (values[-1] - values[-2]) * q / (1 - q)
                # the extrapolated value is far closer than the last mean; the correction itself bounds both
                bound = abs(correction) + parity + rounding[-1]
                if bound <= tol:
                    return summed(method, _approx(values[-1] + correction, bound, cfg.bits), params,
                                  rule="geometric gaps",
                                  ladder=ladder[-3:], values=values[-3:], odd_neighbour=neighbours[-1])
        if len(values) >= cfg.ladder_window:
            _, spread = _spread(values[-cfg.ladder_window:] + neighbours[-cfg.ladder_window:], ctx)
            if spread <= tol:
                bound = spread + max(rounding[-cfg.ladder_window:])
                return summed(method, _approx(values[-1], bound, cfg.bits), params,
                              ladder=ladder[-cfg.ladder_window:], values=values[-cfg.ladder_window:])
    return inconclusive(method, f"ladder did not stabilize up to N=2^{cfg.cesaro_max_log2}", params,
                        last_values=values[-cfg.ladder_window:])


def _cesaro_numeric(floats, N, k, ctx):
    """The Cesàro–Hölder mean at working precision and a bound on its rounding error.

    Each x_n carries relative error <= 2^-prec from conversion; the N + 1
    products and sums add at most (N + 3) 2^-prec relative to sum |w_n x_n|.
    """
    total = ctx.mpf(0)
    mag = ctx.mpf(0)
    c = 1
    for m in range(N + 1):
        if m:
            c = c * (m + k) // m
        t = floats[N - m] * c
        total += t
        mag += abs(t)
    scale = ctx.mpf(math.factorial(k)) / ctx.mpf(N) ** k
    err = mag * scale * (N + 4) * ctx.ldexp(1, 1 - ctx.prec)
    return total * scale, err


def sum_cesaro_scan(x: S.Series, k_max: int = 4, cfg: SummerConfig = DEFAULT) -> SummationOutcome:
    """Try orders k = 0..k_max and report the least one that sums."""
    tried = []
    for k in range(k_max + 1):
        out = sum_cesaro_holder(x, k, cfg)
        tried.append(out.verdict.value)
        if out.summed:
            out.params["k_scan"] = k_max
            out.witness["orders_tried"] = tried
            return out
        if out.verdict.value == "NotInDomain":
            return out
    return inconclusive("cesaro", f"no order k <= {k_max} stabilized", {"k_scan": k_max}, orders_tried=tried)


# -- Abel ---------------------------------------------------------------------

@dataclass
class GrowthFit:
    """Heuristic majorant |x_n| <= C (n+1)^k r^n fitted on a prefix."""

    C: float
    k: int
    r: float
    fitted_on: int

    def log2_term(self, n, rho_log2):
        return math.log2(self.C) + self.k * math.log2(n + 1) + n * (math.log2(self.r) + rho_log2)


def fit_growth(x: S.Series, m: int) -> GrowthFit:
    terms = x.nonzero_terms(m)
    if not terms:
        return GrowthFit(1.0, 0, 1.0, m)
    logs = {n: log2abs(c) for n, c in terms}

    def envelope(lo, hi):
        vals = [v for n, v in logs.items() if lo <= n < hi]
        return max(vals) if vals else None

    q1 = envelope(m // 2, 3 * m // 4)
    q2 = envelope(3 * m // 4, m + 1)
    slope = 0.0
    if q1 is not None and q2 is not None and m >= 16:
        slope = (q2 - q1) / (m / 4)
    if slope > 0.05:
        r = 2.0**slope
    elif slope < -0.05:
        # decaying: keep a margin so the majorant stays above the observed envelope
        r = 2.0 ** (0.8 * slope)
    else:
        r = 1.0
    k = 0
    if r == 1.0:
        h1 = envelope(m // 4, m // 2)
        h2 = envelope(m // 2, m + 1)
        if h1 is not None and h2 is not None:
            k = max(0, math.ceil(h2 - h1 - 0.25))
    lc = max(v - k * math.log2(n + 1) - n * math.log2(r) for n, v in logs.items())
    return GrowthFit(2.0 ** (lc + 1), k, r, m)


def _abel_terms_needed(fit: GrowthFit, j: int, tol: float, cap: int):
    """Smallest N with majorant tail beyond N below tol; None when it exceeds cap."""
    rho_log2 = math.log2(1 - 2.0**-j)
    if math.log2(fit.r) + rho_log2 >= 0:
        return None
    target = math.log2(tol)

    def tail_log2(N):
        q_log2 = fit.k * math.log2((N + 3) / (N + 2)) + math.log2(fit.r) + rho_log2
        if q_log2 >= 0:
            return math.inf
        return fit.log2_term(N + 1, rho_log2) - math.log2(1 - 2.0**q_log2)

    N = 16
    while tail_log2(N) > target:
        N *= 2
        if N > 4 * cap:
            return None
    lo, hi = N // 2, N
    while lo < hi:
        mid = (lo + hi) // 2
        if tail_log2(mid) > target:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo <= cap else None


def _richardson(values, ctx):
    """Richardson table for f(h), h halving; returns the diagonal."""
    table = []
    diag = []
    for i, v in enumerate(values):
        row = [v]
        for m in range(1, min(i, 8) + 1):
            f = ctx.mpf(2) ** m
            row.append((f * row[m - 1] - table[i - 1][m - 1]) / (f - 1))
        table.append(row)
        diag.append(row[-1])
    return diag


def sum_abel(x: S.Series, cfg: SummerConfig = DEFAULT) -> SummationOutcome:
    """lim_{rho -> 1-} sum x_n rho^n via exact values at rho_j = 1 - 2^-j and Richardson extrapolation."""
    method = "abel"
    params = {"tolerance": cfg.tolerance, "depth": cfg.abel_depth, "n_max": cfg.n_max}
    short = _polynomial_shortcut(x, method, params)
    if short:
        return short
    if cfg.use_closed_form and x.rational is not None:
        r = x.rational
        rep = unit_disk_report(r.den)
        if rep.inside:
            return not_in_domain(method, "PoleInsideDisk: the power series diverges for some rho < 1",
                                 params, denominator=r.den, root_test=rep.method)
        if rep.root_at_one:
            return not_in_domain(method, "PoleAtOne: f(rho) is unbounded as rho -> 1", params,
                                 denominator=r.den)
        return summed(method, r(1), params, rule="closed form continuous on [0, 1]", closed_form=r,
                      root_test=rep.method)
    tol = cfg.tolerance
    ctx = _working(cfg)
    # a short fit first: clear geometric growth needs no more terms
    fit = fit_growth(x, min(cfg.n_max, 256))
    if fit.r <= 1.0:
        fit = fit_growth(x, min(cfg.n_max, 1024))
    if fit.r > 1.0:
        return inconclusive(method, f"coefficients grow like {fit.r:.4g}^n; radius of convergence appears < 1",
                            params, growth_rate=fit.r)
    values, used = [], []
    for j in range(1, cfg.abel_depth + 1):
        N = _abel_terms_needed(fit, j, tol / 16, cfg.n_max)
        if N is None:
            break
        xs = x.prefix(N + 1)
        bits = sum(_coefficient_bits(c) for c in xs[-8:]) // 8 * (N + 1)
        if bits > cfg.coefficient_bit_budget:
            break
        f = kernels.horner(xs, 2**j - 1, 2**j)
        values.append(_to_mpf(f, ctx))
        used.append((j, N))
        diag = _richardson(values, ctx)
        # the diagonal converges superlinearly: the last step bounds the remaining error
        w = 2
        if len(diag) >= 3:
            spread = abs(diag[-1] - diag[-2])
            if spread <= tol:
                err = spread + ctx.mpf(tol) / 16
                return summed(method, _approx(diag[-1], err, cfg.bits), params,
                              rho=[f"1-2^-{jj}" for jj, _ in used], terms=[nn for _, nn in used],
                              growth={"C": fit.C, "k": fit.k, "r": fit.r}, extrapolants=diag[-w:])
    return inconclusive(method, f"extrapolants did not stabilize (levels used: {len(values)})", params,
                        terms=[nn for _, nn in used], growth={"C": fit.C, "k": fit.k, "r": fit.r})


# -- Borel --------------------------------------------------------------------

def _lgamma_log2(n):
    return math.lgamma(n + 1) / math.log(2)


def _growth_rate(x, m=256):
    fit = fit_growth(x, m)
    return max(fit.r, 1.0), fit


def _borel_exp_at(ps_coeffs, t: int):
    """Exact sum_{n} S_n t^n / n! over the given prefix."""
    xs = []
    f = 1
    for n, s in enumerate(ps_coeffs):
        if n:
            f *= n
        xs.append(s / f)
    return kernels.horner(xs, t, 1)


def sum_borel_exponential(x: S.Series, cfg: SummerConfig = DEFAULT) -> SummationOutcome:
    """lim_{t -> inf} e^-t sum S_n t^n / n! on the ladder t = 2^i, sums evaluated exactly."""
    method = "borel-exp"
    params = {"tolerance": cfg.tolerance, "t_max": cfg.borel_t_max}
    short = _polynomial_shortcut(x, method, params)
    if short:
        return short
    ctx = _working(cfg)
    tol = _tol(cfg, ctx)
    ps = S.partial_sums(x)
    R, fit = _growth_rate(ps)
    ladder, values = [], []
    t = 1
    while t <= cfg.borel_t_max:
        # terms |S_n| t^n / n! <= C (n+1)^k (R t)^n / n!; truncate once below tol e^t 2^-guard
        target = math.log2(cfg.tolerance) + t * math.log2(math.e) - cfg.guard
        M = int(math.e * R * t) + 16
        while (math.log2(fit.C) + fit.k * math.log2(M + 1) + M * math.log2(R * t) - _lgamma_log2(M)) > target:
            M += 16
            if M > cfg.n_max:
                return inconclusive(method, "truncation order exceeds n_max", params, t=t)
        if M > cfg.borel_max_terms:
            return inconclusive(method, f"budget: truncation order {M} exceeds borel_max_terms at t={t}",
                                params, ladder=ladder, last_values=values[-cfg.ladder_window:])
        F = _borel_exp_at(ps.prefix(M + 1), t)
        v = _to_mpf(F, ctx) * ctx.exp(-t)
        ladder.append(t)
        values.append(v)
        if len(values) >= 2 and abs(v) > 1e30 and abs(v) > 4 * abs(values[-2]):
            return inconclusive(method, "e^-t B(t) grows along the ladder", params, ladder=ladder)
        if len(values) >= cfg.ladder_window:
            mean, spread = _spread(values[-cfg.ladder_window:], ctx)
            if spread <= tol:
                return summed(method, _approx(v, spread + tol / 16, cfg.bits), params, ladder=ladder,
                              truncation=M)
        t *= 2
    return inconclusive(method, f"ladder did not stabilize up to t={cfg.borel_t_max}", params,
                        last_values=values[-cfg.ladder_window:])


class _BorelIntegrand:
    """e^-t B(t) with B evaluated from exact coefficients at a working precision."""

    def __init__(self, x, cfg):
        self.x = x
        self.cfg = cfg
        self.R, self.fit = _growth_rate(x)
        self._cache = {}

    def order(self, b):
        """Truncation order so the omitted terms are below 2^-(bits+guard) e^b on [0, b]."""
        fit, R = self.fit, self.R
        target = -(self.cfg.bits + self.cfg.guard) + b * math.log2(math.e)
        M = int(math.e * R * b) + 16
        while (math.log2(fit.C) + fit.k * math.log2(M + 1) + M * math.log2(max(R * b, 1e-300))
               - _lgamma_log2(M)) > target:
            M += 16
            if M > self.cfg.n_max:
                return None
        return M

    def precision(self, b, M):
        xs = self.x.prefix(M + 1)
        logs = [log2abs(c) - _lgamma_log2(n) + n * math.log2(b) for n, c in enumerate(xs) if c]
        big = max(logs) if logs else 0.0
        extra = max(0.0, big - b * math.log2(math.e))
        p = self.cfg.bits + self.cfg.guard + int(extra) + 16
        return (p + 63) // 64 * 64

    def coeffs(self, M, prec):
        key = (M, prec)
        if key not in self._cache:
            xs = self.x.prefix(M + 1)
            out = []
            f = 1
            for n, c in enumerate(xs):
                if n:
                    f *= n
                out.append(libmp.from_rational(c.numerator, c.denominator * f, prec, libmp.round_nearest))
            self._cache = {key: out}
        return self._cache[key]


def sum_borel_integral(x: S.Series, cfg: SummerConfig = DEFAULT) -> SummationOutcome:
    """integral_0^inf e^-t sum x_n t^n/n! dt by Gauss-Legendre on panels [0,1], [1,2], [2,4], ..."""
    method = "borel-int"
    params = {"tolerance": cfg.tolerance, "t_max": cfg.borel_t_max}
    short = _polynomial_shortcut(x, method, params)
    if short:
        return short
    integrand = _BorelIntegrand(x, cfg)
    # a Summed verdict needs panels out to t = 4; refuse up front when that is over budget
    M4 = integrand.order(4)
    if M4 is None or M4 > cfg.borel_max_terms:
        return inconclusive(method, f"budget: truncation order {M4 or 'above n_max'} at t=4 exceeds "
                            "borel_max_terms", params)
    work = _working(cfg)
    tol = _tol(cfg, work)
    total = work.mpf(0)
    quad_err = work.mpf(0)
    panels = []
    a, b = 0, 1
    sizes = []
    while b <= cfg.borel_t_max:
        M = integrand.order(b)
        if M is None:
            return inconclusive(method, "truncation order exceeds n_max", params, panels=panels)
        if M > cfg.borel_max_terms:
            return inconclusive(method, f"budget: truncation order {M} exceeds borel_max_terms on [{a}, {b}]",
                                params, panels=panels[-3:])
        prec = integrand.precision(b, M)
        if prec > 4 * (cfg.bits + cfg.guard):
            # terms this far above the integrand cancel; quadrature nodes at this precision are ruinous
            return inconclusive(method, f"budget: cancellation needs {prec}-bit arithmetic on [{a}, {b}]",
                                params, panels=panels[-3:])
        cs = integrand.coeffs(M, prec)
        ctx = _context(prec)

        def f(t, cs=cs, prec=prec):
            tt = t._mpf_
            acc = libmp.fzero
            for c in reversed(cs):
                acc = libmp.mpf_add(libmp.mpf_mul(acc, tt, prec), c, prec)
            return ctx.make_mpf(libmp.mpf_mul(acc, libmp.mpf_exp(libmp.mpf_neg(tt), prec), prec))

        val, err = ctx.quad(f, [a, b], method="gauss-legendre", error=True, maxdegree=8)
        val, err = work.make_mpf(val._mpf_), work.make_mpf(err._mpf_)
        if err > tol:
            raise QuadratureFailure(f"quadrature error {mpmath.nstr(err, 3)} on [{a}, {b}] exceeds tolerance")
        total += val
        quad_err += err
        end = work.make_mpf(abs(f(ctx.mpf(b)))._mpf_)
        panels.append({"interval": [a, b], "integral": val, "endpoint": end, "order": M,
                       "precision": prec})
        sizes.append(abs(val) + end)
        # t^k e^(-ct) rises until t = k/c; only growth persisting past t = 32 counts
        if b >= 32 and sizes[-1] > 2 * sizes[-2] > 4 * sizes[-3] and sizes[-1] > 1:
            return inconclusive(method, "Borel integrand grows; integral not shown to converge", params,
                                panels=panels[-3:])
        ends = [pn["endpoint"] for pn in panels[-3:]]
        if b >= 32 and ends[-1] > tol and 2 * ends[-1] >= ends[0]:
            # a convergent integrand must decay; this one has not halved over two doublings of t
            return inconclusive(method, "Borel integrand does not decay; integral not shown to converge",
                                params, panels=panels[-3:])
        if len(sizes) >= 3 and b >= 4:
            q = sizes[-1] / sizes[-2] if sizes[-2] else work.mpf(0)
            if q < work.mpf(1) / 2 and sizes[-1] < tol / 16:
                tail = sizes[-1] * q / (1 - q)
                return summed(method, _approx(total, quad_err + tail + tol / 16, cfg.bits), params,
                              panels=len(panels), t_end=b, tail_estimate=tail, quadrature_error=quad_err)
        a, b = b, 2 * b
    return inconclusive(method, f"integral not converged by t={cfg.borel_t_max}", params,
                        last_panels=panels[-2:])


def sum_borel(x: S.Series, cfg: SummerConfig = DEFAULT) -> SummationOutcome:
    """Shift-stabilized Borel sum: the first N <= n_shift with sigma^N X integral-Borel summable.

    Every Summed result is cross-checked against the exponential form on
    sigma^(N+1) X, the two being equal whenever both exist.
    """
    method = "borel"
    params = {"tolerance": cfg.tolerance, "n_shift": cfg.n_shift}
    short = _polynomial_shortcut(x, method, params)
    if short:
        return short
    attempts = []
    for N in range(cfg.n_shift + 1):
        y = S.shift(x, N) if N else x
        try:
            out = sum_borel_integral(y, cfg)
        except QuadratureFailure as e:
            attempts.append({"shift": N, "verdict": "Inconclusive", "reason": str(e)})
            continue
        attempts.append({"shift": N, "verdict": out.verdict.value, "reason": out.reason})
        if out.reason.startswith("budget:"):
            # shifting does not shrink the truncation order
            return inconclusive(method, out.reason, params, attempts=attempts)
        if not out.summed:
            continue
        try:
            companion = sum_borel_exponential(S.shift(x, N + 1), cfg)
        except SummaError as e:
            companion = inconclusive("borel-exp", str(e))
        relation = {"exponential_shift": N + 1, "verdict": companion.verdict.value}
        if companion.summed:
            diff = abs(companion.approx() - out.approx())
            bound = companion.error_bound() + out.error_bound() + 2 * cfg.tolerance
            relation["difference"] = diff
            if diff > bound:
                return inconclusive(method, "integral and exponential forms disagree", params,
                                    shift=N, relation=relation)
        return summed(method, out.value, params, shift=N, integral=out.witness, shift_relation=relation,
                      attempts=attempts)
    return inconclusive(method, f"no shift N <= {cfg.n_shift} gave a convergent Borel integral", params,
                        attempts=attempts)


# -- Euler on rational closed forms ------------------------------------------

def sum_euler_rational(x: S.Series, cfg: SummerConfig = DEFAULT) -> SummationOutcome:
    """Value at 1 of the rational continuation, when no pole lies on [0, 1]."""
    method = "euler-rational"
    r = x.rational
    if r is None:
        raise NoClosedForm("series carries no rational closed form")
    params = {}
    roots = count_real_roots(r.den, 0, 1) if r.den.degree > 0 else 0
    if roots:
        return not_in_domain(method, f"PoleOnPath: denominator has {roots} root(s) in [0, 1]", params,
                             denominator=r.den, sturm_roots_in_unit_interval=roots)
    return summed(method, r(1), params, closed_form=r, sturm_roots_in_unit_interval=0)


# -- p-adic -------------------------------------------------------------------

def _valuations(x, p, lo, hi):
    out = []
    for n, c in x.nonzero_terms(hi):
        if n >= lo:
            out.append((n, valuation(c, p)))
    return out


def sum_padic(x: S.Series, p: int, cfg: SummerConfig = DEFAULT) -> SummationOutcome:
    """Limit of partial sums in Q_p, certified by a linear lower bound on v_p(x_n)."""
    require_prime(p)
    method = "padic"
    k = cfg.padic_precision
    params = {"p": p, "k": k}
    r = x.rational
    if r is not None and r.is_polynomial:
        return summed(method, padic_embed(r.num(1), p, k), params, rule="polynomial", polynomial=r.num)
    L = 64
    while True:
        vals = _valuations(x, p, 0, L)
        if not vals:
            return summed(method, padic_embed(0, p, k), params, rule="no nonzero coefficient", scanned_to=L)
        half = L // 2
        first = [v for n, v in vals if n < half]
        second = [v for n, v in vals if n >= half]
        if not second:
            if L >= cfg.n_max // 4 or L >= 4096:
                total = sum((c for _, c in x.nonzero_terms(L)), Fraction(0))
                return summed(method, padic_embed(total, p, k), params, rule="support appears finite",
                              scanned_to=L)
            L *= 2
            continue
        m1 = min(first) if first else min(second)
        m2 = min(second)
        slope = Fraction(m2 - m1, max(1, L - half))
        if slope <= 0:
            if m2 <= max(m1, 0) or L >= 1024:
                return not_in_domain(method, f"TermsNotTendingToZero: v_{p}(x_n) stays <= {m2} on [{half}, {L}]",
                                     params, scanned_to=L, min_valuation_first_half=m1,
                                     min_valuation_second_half=m2)
            L *= 2
            continue
        c = max(slope * n - v for n, v in vals)
        partial = sum((cc for _, cc in x.nonzero_terms(L)), Fraction(0))
        v_sum = valuation(partial, p)
        base = v_sum if v_sum != INF else 0
        target = base + k
        need = math.ceil((target + c) / slope)
        if need <= L:
            bound = math.floor(slope * (L + 1) - c)
            if bound <= base:
                L *= 2
                continue
            emb = padic_embed(partial, p, max(1, bound - base)) if partial else PAdicValue(p, INF, 0, bound)
            value = emb if emb.is_zero else PAdicValue(p, emb.valuation, emb.unit % p**min(emb.precision, k),
                                                       min(emb.precision, k))
            return summed(method, value, params, slope=slope, offset=c, scanned_to=L,
                          tail_valuation_bound=bound)
        if need > cfg.n_max:
            return inconclusive(method, f"certified precision needs {need} terms (> n_max)", params,
                                slope=slope)
        L = max(2 * L, need + cfg.window)


# -- dispatch -----------------------------------------------------------------

METHODS = ("add", "classical", "absolute", "cesaro", "cesaro-scan", "abel", "borel", "borel-exp",
           "borel-int", "euler-rational", "padic")


def parse_method(text: str):
    """``"padic:p=7,k=12"`` -> ("padic", {"p": 7, "k": 12})."""
    name, _, rest = text.partition(":")
    name = name.strip()
    params = {}
    if rest:
        for item in rest.split(","):
            key, eq, val = item.partition("=")
            if not eq:
                raise ValueError(f"bad method parameter {item!r}")
            params[key.strip()] = int(val)
    if name not in METHODS:
        raise UnknownBase(f"unknown method {name!r}")
    return name, params


def run_summer(method: str, x: S.Series, cfg: SummerConfig = DEFAULT, **params) -> SummationOutcome:
    """Run a summer by id; NoClosedForm and QuadratureFailure become Inconclusive."""
    name, parsed = parse_method(method) if ":" in method else (method, {})
    if name not in METHODS:
        raise UnknownBase(f"unknown method {name!r}")
    params = {**parsed, **params}
    try:
        if name == "add":
            return sum_add(x, cfg)
        if name == "classical":
            return sum_classical(x, cfg)
        if name == "absolute":
            return sum_absolute(x, cfg)
        if name == "cesaro":
            return sum_cesaro_holder(x, params.get("k", 1), cfg)
        if name == "cesaro-scan":
            return sum_cesaro_scan(x, params.get("k", 4), cfg)
        if name == "abel":
            return sum_abel(x, cfg)
        if name == "borel":
            return sum_borel(x, cfg)
        if name == "borel-exp":
            return sum_borel_exponential(x, cfg)
        if name == "borel-int":
            return sum_borel_integral(x, cfg)
        if name == "euler-rational":
            return sum_euler_rational(x, cfg)
        if name == "padic":
            if "p" not in params:
                raise ValueError("padic needs p")
            c = cfg.replace(padic_precision=params["k"]) if "k" in params else cfg
            return sum_padic(x, params["p"], c)
    except NoClosedForm as e:
        return inconclusive(name, f"NoClosedForm: {e}", params)
    except QuadratureFailure as e:
        return inconclusive(name, f"QuadratureFailure: {e}", params)
    raise UnknownBase(f"unknown method {name!r}")


def method_label(name: str, params: dict) -> str:
    if not params:
        return name
    return name + ":" + ",".join(f"{k}={v}" for k, v in params.items())
