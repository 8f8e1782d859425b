import json
import re
import math
from fractions import Fraction
from pathlib import Path

import jsonschema
import pytest

from summa import cli
from summa.outcome import ENVELOPE_SCHEMA

GOLDEN = Path(__file__).parent / "golden"
GOLDEN_FIXTURES = {
    "one-one": "one-one", "G-1": "G-1", "G-2": "G-2", "G2": "G2", "Z16": "Z16", "sqrt79": "sqrt79",
    "Xa4": "Xa(4)", "crt-Y3-5": "crt-Y(3,5)", "sigma": "sigma", "inv-sqrt": "inv-sqrt",
    "conv-not-tel": "conv-not-tel", "multnottel-X": "multnottel-X", "ratnottel-T": "ratnottel-T",
    "ratnottel-S": "ratnottel-S", "ratnottel-X": "ratnottel-X",
}


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    env = json.loads(out)
    jsonschema.validate(env, ENVELOPE_SCHEMA)
    return code, env


def parse_dump(text):
    rows = [line.split(": ", 1) for line in text.splitlines() if line]
    assert [int(k) for k, _ in rows] == list(range(len(rows)))
    return [Fraction(v) for _, v in rows]


# -- documented examples ------------------------------------------------------

def test_sum_borel_on_g_minus_2(capsys):
    code, env = run_json(capsys, "sum", "--method", "borel", "fixture(G-2)")
    rep = env["reports"][0]
    assert code == 0 and env["exit_code"] == 0 and rep["verdict"] == "Summed"
    v = rep["value"]
    assert abs(Fraction(v["approx"]) - Fraction(1, 3)) <= Fraction(1, 10**6)
    assert Fraction(v["error_bound"]) <= Fraction(1, 10**6)


def test_sum_euler_rational_exact(capsys):
    code, out, _ = run(capsys, "sum", "--method", "euler-rational", "fixture(Z16)")
    assert code == 0 and "Summed" in out and "1/17" in out


def test_sum_padic_with_parameters(capsys):
    code, env = run_json(capsys, "sum", "--method", "padic:p=7,k=12", "sqrt(1+(7/9)*s)")
    v = env["reports"][0]["value"]
    assert code == 0 and v["congruent_to"] == "-4/3" and v["padic"]["absolute_precision"] >= 12


def test_telescope_one_one(capsys):
    code, env = run_json(capsys, "telescope", "--base", "add", "fixture(one-one)")
    rep = env["reports"][0]
    assert code == 0 and rep["value"]["exact"] == "1/2"
    assert rep["witness"]["certificate"]["F"]["text"] in ("1 + s", "1+s", "s + 1")
    code, out, _ = run(capsys, "telescope", "--base", "add", "fixture(one-one)")
    assert "certificate: F =" in out and "rule:" in out


def test_telescope_codomain_z_is_not_in_domain(capsys):
    code, out, _ = run(capsys, "telescope", "--base", "add", "--codomain", "Z", "fixture(one-one)")
    assert code == cli.EXIT_NOT_IN_DOMAIN and "ValueEscapesCodomain" in out


def test_telescope_conv_not_tel_inconclusive(capsys):
    code, out, _ = run(capsys, "telescope", "--base", "absolute", "--max-degree", "8", "fixture(conv-not-tel)")
    assert code == cli.EXIT_INCONCLUSIVE and "Inconclusive" in out


@pytest.mark.parametrize("expr, n, expected", [
    ("fixture(ratnottel-T)", 5, ["1", "-2", "1/2", "1/3", "5/24"]),
    ("1/(1+2*s)", 4, ["1", "-2", "4", "-8"]),
    ("0", 3, ["0", "0", "0"]),
])
def test_coeffs_examples(capsys, expr, n, expected):
    code, out, _ = run(capsys, "coeffs", "-n", str(n), expr)
    assert code == 0
    assert out.splitlines() == [f"{k}: {c}" for k, c in enumerate(expected)]


def test_fixtures_list_has_notes(capsys):
    code, out, _ = run(capsys, "fixtures", "list")
    assert code == 0 and "G-2" in out
    code, env = run_json(capsys, "fixtures", "list")
    names = {f["name"] for f in env["fixtures"]}
    assert {"G-2", "one-one", "Z16", "sqrt79", "ratnottel-T"} <= names
    assert all(f["note"] for f in env["fixtures"])


def test_fixtures_run_all_subset_json(capsys):
    code, env = run_json(capsys, "fixtures", "run-all", "--only", "1,4", "--json")
    assert code == 0 and [r["criterion"] for r in env["results"]] == [1, 4]
    assert all(r["passed"] for r in env["results"])


def test_fixtures_run_all_failure_exit(capsys):
    code, env = run_json(capsys, "fixtures", "run-all", "--only", "10")
    assert code == cli.EXIT_ACCEPTANCE and not env["results"][0]["passed"]


# -- exit codes ----------------------------------------------------------------

def test_exit_code_lattice(capsys):
    assert run(capsys, "sum", "--method", "classical", "fixture(sqrt79)")[0] == cli.EXIT_OK
    assert run(capsys, "sum", "--method", "classical", "fixture(G2)")[0] == cli.EXIT_NOT_IN_DOMAIN
    assert run(capsys, "sum", "--method", "classical", "--n-max", "64", "fixture(one-one)")[0] \
        == cli.EXIT_INCONCLUSIVE
    # NotInDomain outranks Inconclusive and Summed
    code, _, _ = run(capsys, "sum", "--method", "euler-rational", "--method", "classical", "--n-max", "64",
                     "fixture(G2)")
    assert code == cli.EXIT_NOT_IN_DOMAIN
    code, _, _ = run(capsys, "sum", "--method", "abel", "--method", "classical", "--n-max", "64",
                     "fixture(one-one)")
    assert code == cli.EXIT_INCONCLUSIVE


def test_exit_code_for():
    assert cli.exit_code_for([]) == 0
    assert cli.exit_code_for(["Summed", "Inconclusive"]) == 2
    assert cli.exit_code_for(["Inconclusive", "NotInDomain"]) == 3


@pytest.mark.parametrize("argv", [
    ["sum", "--method", "nonsense", "1"],
    ["sum", "--method", "padic", "1"],
    ["sum", "--method", "abel:k=3", "1"],
    ["sum", "1/(1+"],
    ["sum", "--tol", "-1", "1"],
    ["coeffs", "-n", "-2", "1"],
    ["telescope", "--codomain", "W", "1"],
    ["rational", "--num", "1", "1"],
    ["bogus-verb"],
    [],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == cli.EXIT_USAGE and err


def test_norlund_zero_denominator_exit(capsys):
    code, _, err = run(capsys, "norlund", "--weights", "1-s", "fixture(one-one)")
    assert code == cli.EXIT_NOT_IN_DOMAIN and "Norlund" in err


# -- config, rendering, concurrency --------------------------------------------

def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "summa.cfg"
    cfg.write_text("# loose run\nn_max = 64\ntolerance = 1e-3\n")
    code, env = run_json(capsys, "sum", "--config", str(cfg), "--method", "classical", "fixture(one-one)")
    assert code == cli.EXIT_INCONCLUSIVE
    assert env["reports"][0]["witness"].get("last_index", 64) <= 64
    code, env = run_json(capsys, "sum", "--config", str(cfg), "--n-max", "4000", "--method", "cesaro:k=1",
                         "fixture(one-one)")
    assert code == 0


def test_config_file_rejects_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("frobnicate = 3\n")
    code, _, err = run(capsys, "sum", "--config", str(cfg), "1")
    assert code == cli.EXIT_USAGE and "frobnicate" in err


def _numbers_in(text):
    return set(re.findall(r"-?\d+(?:/\d+)?(?:\.\d+)?(?:e-?\d+)?", text))


@pytest.mark.parametrize("argv", [
    ["sum", "--method", "borel", "--method", "euler-rational", "fixture(G-2)"],
    ["sum", "--method", "padic:p=7,k=12", "fixture(sqrt79)"],
    ["telescope", "--base", "add", "fixture(one-one)"],
    ["rational", "--base", "absolute", "--tol", "1e-3", "fixture(ratnottel-X)"],
    ["coeffs", "-n", "6", "fixture(ratnottel-T)"],
])
def test_text_renders_json_values(capsys, argv):
    _, out, _ = run(capsys, *argv)
    _, env = run_json(capsys, *argv)
    text_numbers = _numbers_in(out)
    for rep in env.get("reports", []):
        v = rep["value"]
        if v is None:
            continue
        shown = [v.get("exact"), v.get("approx"), v.get("error_bound"), v.get("congruent_to")]
        for s in filter(None, shown):
            assert s in text_numbers, (s, out)
    for c in env.get("coefficients", []):
        assert c in text_numbers


def test_jobs_keep_method_order(capsys):
    methods = ["euler-rational", "abel", "borel", "classical"]
    argv = ["sum", "--jobs", "4", "--n-max", "256"] + [a for m in methods for a in ("--method", m)]
    _, env = run_json(capsys, *argv, "fixture(G-1)")
    assert [r["method"] for r in env["reports"]] == methods
    _, serial = run_json(capsys, *argv[:1], *argv[3:], "fixture(G-1)")
    assert [r["value"] for r in serial["reports"]] == [r["value"] for r in env["reports"]]


# -- schema over the corpus ----------------------------------------------------

CHEAP = ["--n-max", "512", "--tol", "1e-6"]


@pytest.mark.parametrize("name", sorted(GOLDEN_FIXTURES.values()))
def test_json_validates_on_corpus(capsys, name):
    run_json(capsys, "sum", *CHEAP, "--method", "classical", "--method", "euler-rational",
             "--method", "padic:p=3", name)
    run_json(capsys, "telescope", *CHEAP, "--max-degree", "3", name)
    run_json(capsys, "rational", *CHEAP, "--base", "euler-rational", name)
    run_json(capsys, "mult", *CHEAP, "--base", "euler-rational", name)
    run_json(capsys, "coeffs", "-n", "4", name)


def test_json_validates_for_compare_and_norlund(capsys):
    code, env = run_json(capsys, "compare", *CHEAP, "--method", "classical", "--method", "euler-rational",
                         "--pair", "G-1,Z16", "G-1", "Z16", "one-one")
    assert env["consistency"]["consistent"] and code == 0
    code, env = run_json(capsys, "norlund", "--tol", "1e-3", "--limit", "classical", "fixture(one-one)")
    assert code == 0 and env["reports"][0]["verdict"] == "Summed"
    code, env = run_json(capsys, "mult", "--grade", "--power", "2", "--base", "classical", "--tol", "2e-2",
                         "fixture(inv-sqrt)")
    assert env["reports"][0]["witness"]["grade_lower_bound"] >= 2


# -- golden coefficient dumps --------------------------------------------------

@pytest.mark.parametrize("stem", sorted(GOLDEN_FIXTURES))
def test_golden_dumps(capsys, stem):
    expected = (GOLDEN / f"{stem}.txt").read_text()
    code, out, _ = run(capsys, "coeffs", "-n", "16", GOLDEN_FIXTURES[stem])
    assert code == 0 and out == expected


def test_golden_dumps_against_closed_forms():
    # independent formulas for the dumps that have one
    load = lambda stem: parse_dump((GOLDEN / f"{stem}.txt").read_text())
    assert load("one-one") == [(-1) ** n for n in range(16)]
    assert load("G-2") == [(-2) ** n for n in range(16)]
    assert load("G2") == [2**n for n in range(16)]
    assert load("sigma") == [1] * 16
    assert load("inv-sqrt") == [Fraction((-1) ** n * math.comb(2 * n, n), 4**n) for n in range(16)]
    sqrt79 = [Fraction(1)]
    for n in range(1, 16):
        # binom(1/2, n) (7/9)^n term by term
        sqrt79.append(sqrt79[-1] * (Fraction(1, 2) - n + 1) / n * Fraction(7, 9))
    assert load("sqrt79") == sqrt79
