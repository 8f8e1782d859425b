"""Command-line front end.

Every command builds a JSON envelope first; the text output is rendered from
that envelope, so both carry the same numbers.
"""

from __future__ import annotations

import argparse
import configparser
import dataclasses
import sys
from concurrent.futures import ThreadPoolExecutor

from . import series as S
from .arith import Codomain
from .errors import NorlundDenominatorZero, NotRegular, SummaError
from .extensions import (ProductExpression, consistency_report, grade_lower_bound, mult_extension_sum,
                         norlund_mean, rational_extension_sum, telescope_sum)
from .fixtures import CATALOG, catalog_expression, corpus, default_args
from .lang import evaluate
from .outcome import SCHEMA_VERSION, Verdict, dumps, jsonable
from .summers import DEFAULT, METHODS, SummerConfig, parse_method, run_summer

EXIT_OK, EXIT_USAGE, EXIT_INCONCLUSIVE, EXIT_NOT_IN_DOMAIN, EXIT_ACCEPTANCE = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


# -- inputs -------------------------------------------------------------------

def load_series(text: str) -> S.Series:
    """An expression, or a bare catalog name such as ``G-2`` or ``Xa(4)``."""
    bare = text.strip()
    head = bare.split("(", 1)[0].replace("_", "-")
    if head in CATALOG and not bare.startswith("fixture"):
        bare = f"fixture({bare})"
    try:
        return evaluate(bare)
    except SummaError as e:
        raise UsageError(f"cannot read series {text!r}: {e}") from e


def _coerce(field: dataclasses.Field, raw: str):
    if field.type in ("bool", bool):
        if raw.lower() in ("1", "true", "yes", "on"):
            return True
        if raw.lower() in ("0", "false", "no", "off"):
            return False
        raise UsageError(f"{field.name}: expected a boolean, got {raw!r}")
    kind = float if field.type in ("float", float) else int
    try:
        return kind(raw)
    except ValueError:
        raise UsageError(f"{field.name}: expected {kind.__name__}, got {raw!r}") from None


def read_config_file(path: str) -> dict:
    """``key = value`` lines naming SummerConfig fields; ``#`` starts a comment."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_string("[summa]\n" + fh.read())
    except (OSError, configparser.Error) as e:
        raise UsageError(f"config file {path}: {e}") from e
    fields = {f.name: f for f in dataclasses.fields(SummerConfig)}
    out = {}
    for key, raw in parser["summa"].items():
        key = key.replace("-", "_")
        if key not in fields:
            raise UsageError(f"config file {path}: unknown key {key!r}")
        out[key] = _coerce(fields[key], raw)
    return out


def build_config(args) -> SummerConfig:
    overrides = read_config_file(args.config) if args.config else {}
    for flag, key in (("tol", "tolerance"), ("n_max", "n_max"), ("max_degree", "max_degree"),
                      ("bits", "bits")):
        v = getattr(args, flag, None)
        if v is not None:
            overrides[key] = v
    try:
        return DEFAULT.replace(**overrides)
    except ValueError as e:
        raise UsageError(str(e)) from e


def validate_method(text: str) -> str:
    try:
        name, params = parse_method(text)
    except (SummaError, ValueError) as e:
        raise UsageError(str(e)) from e
    allowed = {"cesaro": {"k"}, "cesaro-scan": {"k"}, "padic": {"p", "k"}}.get(name, set())
    extra = set(params) - allowed
    if extra:
        raise UsageError(f"method {name} does not take {sorted(extra)}")
    if name == "padic" and "p" not in params:
        raise UsageError("padic needs p, as in padic:p=7")
    return text


def validate_base(text: str) -> str:
    validate_method(text)
    return text


# -- exit codes and rendering -------------------------------------------------

def exit_code_for(verdicts) -> int:
    """0 when everything is Summed; NotInDomain outranks Inconclusive."""
    vs = set(verdicts)
    if Verdict.NOT_IN_DOMAIN.value in vs:
        return EXIT_NOT_IN_DOMAIN
    if Verdict.INCONCLUSIVE.value in vs:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def render_value(v) -> str:
    if v is None:
        return ""
    if "exact" in v:
        return v["exact"]
    if "approx" in v:
        return f"{v['approx']} ± {v['error_bound']}"
    if "padic" in v:
        p = v["padic"]
        shown = v["congruent_to"] if v["congruent_to"] is not None else f"{p['prime']}^{p['valuation']}*{p['unit']}"
        return f"≡ {shown} mod {p['prime']}^{p['absolute_precision']}"
    return str(v)


def render_report(rep: dict) -> str:
    line = f"{rep['method']}: {rep['verdict']}"
    if rep["value"] is not None:
        line += f"  {render_value(rep['value'])}"
    if rep.get("reason"):
        line += f"  ({rep['reason']})"
    cert = rep["witness"].get("certificate")
    if isinstance(cert, dict) and "F" in cert:
        line += (f"\n  certificate: F = {cert['F']['text']}, f = {_plain(cert['f'])}, "
                 f"F X sums to {_plain(cert['fx'])}, rule: {cert['rule']}")
    elif isinstance(cert, dict) and "A" in cert:
        line += (f"\n  certificate: A = {cert['A']}, B = {cert['B']}, base(A) = {_plain(cert['a'])}, "
                 f"base(B) = {_plain(cert['b'])}, A = B X checked to {cert['verified_to']}")
    return line


def _plain(v):
    return render_value(v) if isinstance(v, dict) else str(v)


def emit(envelope: dict, as_json: bool, text: str, out=None):
    out = out or sys.stdout
    if as_json:
        out.write(dumps(envelope) + "\n")
    else:
        out.write(text.rstrip("\n") + "\n")


def _envelope(command, input_=None, **body):
    env = {"schema": SCHEMA_VERSION, "command": command}
    if input_ is not None:
        env["input"] = input_
    env.update(body)
    return env


def _reports_result(command, input_, outcomes, args, header=""):
    reports = [jsonable(o.to_json()) for o in outcomes]
    code = exit_code_for(r["verdict"] for r in reports)
    env = _envelope(command, input_, reports=reports, exit_code=code)
    text = "\n".join(([header] if header else []) + [render_report(r) for r in reports])
    emit(env, args.json, text)
    return code


# -- commands -----------------------------------------------------------------

def cmd_sum(args) -> int:
    cfg = build_config(args)
    methods = [validate_method(m) for m in (args.method or ["classical"])]
    load_series(args.expr)  # fail early on a bad expression

    def run(m):
        # each method gets its own series so lazy caches are never shared across threads
        return run_summer(m, load_series(args.expr), cfg)

    if args.jobs > 1 and len(methods) > 1:
        with ThreadPoolExecutor(args.jobs) as pool:
            outcomes = list(pool.map(run, methods))
    else:
        outcomes = [run(m) for m in methods]
    return _reports_result("sum", args.expr, outcomes, args)


def cmd_telescope(args) -> int:
    cfg = build_config(args)
    base = validate_base(args.base)
    try:
        codomain = Codomain.parse(args.codomain)
    except (ValueError, SummaError) as e:
        raise UsageError(str(e)) from e
    out = telescope_sum(load_series(args.expr), base, cfg, codomain=codomain, cross_check=args.cross_check)
    return _reports_result("telescope", args.expr, [out], args)


def cmd_mult(args) -> int:
    cfg = build_config(args)
    base = validate_base(args.base)
    factors = [load_series(f) for f in args.factors]
    expr = ProductExpression([factors * args.power])
    out = mult_extension_sum(expr, base, cfg)
    header = ""
    if args.grade:
        g = grade_lower_bound(expr.expand(), cfg=cfg)
        out.witness["grade_lower_bound"] = g
        header = f"grade lower bound of the product: {g}"
    return _reports_result("mult", args.factors, [out], args, header)


def cmd_rational(args) -> int:
    cfg = build_config(args)
    base = validate_base(args.base)
    if (args.num is None) != (args.den is None):
        raise UsageError("give both --num and --den or neither")
    A = load_series(args.num) if args.num else None
    B = load_series(args.den) if args.den else None
    out = rational_extension_sum(load_series(args.expr), base, cfg, A=A, B=B)
    return _reports_result("rational", args.expr, [out], args)


def cmd_norlund(args) -> int:
    cfg = build_config(args)
    limit = validate_base(args.limit)
    out = norlund_mean(load_series(args.expr), load_series(args.weights), limit, cfg)
    return _reports_result("norlund", {"series": args.expr, "weights": args.weights}, [out], args)


def cmd_compare(args) -> int:
    cfg = build_config(args)
    methods = [validate_method(m) for m in (args.method or ["classical", "abel", "borel", "euler-rational"])]
    series = {e: load_series(e) for e in args.exprs} if args.exprs else corpus()
    pairs = []
    for p in args.pair or ():
        a, _, b = p.partition(",")
        if a not in series or b not in series:
            raise UsageError(f"--pair {p!r}: both names must be in the compared set")
        pairs.append((a, b))
    rep = consistency_report(methods, series, cfg, pairs)
    data = jsonable(rep.to_json())
    code = EXIT_OK if rep.consistent else EXIT_INCONCLUSIVE
    env = _envelope("compare", list(series), reports=list(data["outcomes"].values()), consistency=data,
                    exit_code=code)
    lines = [rep.render(), ""]
    for key, o in data["outcomes"].items():
        lines.append(f"{key.split('|', 1)[1]}: {render_report(o)}")
    lines.append(f"consistent: {rep.consistent}")
    emit(env, args.json, "\n".join(lines))
    return code


def cmd_coeffs(args) -> int:
    if args.n < 0:
        raise UsageError("-n must be nonnegative")
    xs = load_series(args.expr).prefix(args.n)
    env = _envelope("coeffs", args.expr, coefficients=[str(c) for c in xs])
    emit(env, args.json, "".join(f"{k}: {c}\n" for k, c in enumerate(xs)))
    return EXIT_OK


def cmd_fixtures(args) -> int:
    if args.action == "list":
        rows = [{"name": spec.label(*default_args(name)), "note": spec.note,
                 "expression": spec.expr or catalog_expression(name, *default_args(name)),
                 "arity": "variadic" if spec.variadic else spec.arity}
                for name, spec in CATALOG.items()]
        width = max(len(r["name"]) for r in rows)
        text = "\n".join(f"{r['name'].ljust(width)}  {r['note']}\n{'':{width}}  = {r['expression']}" for r in rows)
        emit(_envelope("fixtures-list", fixtures=rows), args.json, text)
        return EXIT_OK
    from .acceptance import run_all

    numbers = [int(n) for n in args.only.split(",")] if args.only else None
    results = run_all(numbers)
    code = EXIT_OK if all(r.passed for r in results) else EXIT_ACCEPTANCE
    env = _envelope("fixtures-run-all", results=[r.to_json() for r in results], exit_code=code)
    passed = sum(r.passed for r in results)
    text = "\n".join([r.line() for r in results] + [f"{passed}/{len(results)} criteria passed"])
    emit(env, args.json, text)
    return code


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the summa-report/1 JSON envelope")
    common.add_argument("--tol", type=float, help="stabilization tolerance")
    common.add_argument("--n-max", type=int, help="largest coefficient index a numeric summer may use")
    common.add_argument("--max-degree", type=int, help="largest multiplier degree for telescoping")
    common.add_argument("--bits", type=int, help="working precision of numeric summers")
    common.add_argument("--config", metavar="FILE", help="key = value file of config overrides; flags win")

    p = argparse.ArgumentParser(prog="summa", description="Summation of formal power series at 1.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sum", parents=[common], help="run base summers")
    s.add_argument("--method", action="append", help=f"one of {', '.join(METHODS)}; repeatable; "
                   "parameters as padic:p=7,k=12 or cesaro:k=2")
    s.add_argument("--jobs", type=int, default=1, help="run methods on this many threads")
    s.add_argument("expr")
    s.set_defaults(func=cmd_sum)

    t = sub.add_parser("telescope", parents=[common], help="telescopic extension")
    t.add_argument("--base", default="add")
    t.add_argument("--codomain", default="Q", help="Q, Z, R or padic:p")
    t.add_argument("--cross-check", action="store_true", help="try every candidate and compare certificates")
    t.add_argument("expr")
    t.set_defaults(func=cmd_telescope)

    m = sub.add_parser("mult", parents=[common], help="multiplicative extension of a product")
    m.add_argument("--base", default="classical")
    m.add_argument("--power", type=int, default=1, help="repeat the factor list this many times")
    m.add_argument("--grade", action="store_true", help="also report a grade lower bound")
    m.add_argument("factors", nargs="+")
    m.set_defaults(func=cmd_mult)

    r = sub.add_parser("rational", parents=[common], help="rational extension base(A)/base(B)")
    r.add_argument("--base", default="absolute")
    r.add_argument("--num", help="A in A = B X")
    r.add_argument("--den", help="B in A = B X")
    r.add_argument("expr")
    r.set_defaults(func=cmd_rational)

    n = sub.add_parser("norlund", parents=[common], help="Norlund mean with weights P")
    n.add_argument("--weights", default="1/(1-s)", help="weight series P; the default gives Cesaro means")
    n.add_argument("--limit", default="classical", help="summer applied to the sequence of means")
    n.add_argument("expr")
    n.set_defaults(func=cmd_norlund)

    c = sub.add_parser("compare", parents=[common], help="consistency matrix over methods")
    c.add_argument("--method", action="append")
    c.add_argument("--pair", action="append", help="x,y: also check multiplicativity on x * y")
    c.add_argument("exprs", nargs="*", help="series to compare; the fixture catalog when omitted")
    c.set_defaults(func=cmd_compare)

    k = sub.add_parser("coeffs", parents=[common], help="first n exact coefficients")
    k.add_argument("-n", type=int, default=10)
    k.add_argument("expr")
    k.set_defaults(func=cmd_coeffs)

    f = sub.add_parser("fixtures", parents=[common], help="fixture catalog and acceptance run")
    f.add_argument("action", choices=["list", "run-all"])
    f.add_argument("--only", help="comma-separated criterion numbers for run-all")
    f.set_defaults(func=cmd_fixtures)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as e:
        print(f"summa: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (NotRegular, NorlundDenominatorZero) as e:
        # a zero denominator sum puts the input outside the extension's domain
        print(f"summa: {type(e).__name__}: {e}", file=sys.stderr)
        if args.json:
            env = _envelope(args.command, getattr(args, "expr", None),
                            error={"kind": type(e).__name__, "message": str(e)}, exit_code=EXIT_NOT_IN_DOMAIN)
            emit(env, True, "")
        return EXIT_NOT_IN_DOMAIN
    except SummaError as e:
        print(f"summa: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
