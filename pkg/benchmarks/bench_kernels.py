"""Compiled kernels against their pure-Python twins.

    python benchmarks/bench_kernels.py [--repeat 5] [--json]

Each kernel runs on identical inputs in both backends; results must match
exactly before a timing is reported.  The end-to-end row runs a small
workload in a subprocess with and without SUMMA_PURE=1.
"""

import argparse
import json
import os
import random
import subprocess
import sys
import timeit
from fractions import Fraction

from summa import _pykernels

try:
    from summa import _ckernels
except ImportError:
    _ckernels = None


def _fractions(rng, n, bits=40):
    return [Fraction(rng.getrandbits(bits) - 2 ** (bits - 1), rng.getrandbits(bits // 2) + 1) for _ in range(n)]


def cases(seed=0):
    rng = random.Random(seed)
    xs, ys = _fractions(rng, 400), _fractions(rng, 400)
    ints = [rng.getrandbits(64) for _ in range(2000)]
    rows = [[rng.randint(-10**6, 10**6) for _ in range(12)] for _ in range(40)]
    coeffs = _fractions(rng, 300)
    small = [Fraction(rng.randint(-9, 9), rng.choice([1, 2, 4, 8])) for _ in range(2000)]
    return {
        "dot (2000 small dyadic fractions)": ("dot", (small, small[::-1])),
        "dot (400 fractions)": ("dot", (xs, ys)),
        "convolve_at (n=399)": ("convolve_at", (xs, ys, 399)),
        "weighted_sum (2000 ints)": ("weighted_sum", (ints, ints)),
        "horner (300 terms at 1023/1024)": ("horner", (coeffs, 1023, 1024)),
        "bareiss (40 x 12)": ("bareiss", (rows,)),
    }


WORKLOAD = """
import time
from summa import fixture, kernels, summers as M
from summa.recurrence import fit_linear_recurrence
t = time.perf_counter()
M.sum_abel(fixture("sqrt79"))
M.sum_classical(fixture("Xa", 4))
fit_linear_recurrence(fixture("Z16"), 8, 256)
print(kernels.BACKEND, time.perf_counter() - t)
"""


def end_to_end():
    out = {}
    for pure in ("0", "1"):
        env = dict(os.environ, SUMMA_PURE=pure)
        res = subprocess.run([sys.executable, "-c", WORKLOAD], env=env, capture_output=True, text=True, check=True)
        backend, secs = res.stdout.split()
        out[backend] = float(secs)
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels are not built; run pip install -e . --no-build-isolation", file=sys.stderr)
        return 1
    rows = []
    for label, (name, inputs) in cases().items():
        py_fn, c_fn = getattr(_pykernels, name), getattr(_ckernels, name)
        if py_fn(*inputs) != c_fn(*inputs):
            raise SystemExit(f"{name}: backends disagree")
        number = 20
        t_py = min(timeit.repeat(lambda: py_fn(*inputs), number=number, repeat=args.repeat)) / number
        t_c = min(timeit.repeat(lambda: c_fn(*inputs), number=number, repeat=args.repeat)) / number
        rows.append({"kernel": label, "python_s": t_py, "cython_s": t_c, "speedup": t_py / t_c})
    e2e = end_to_end()
    if args.json:
        print(json.dumps({"kernels": rows, "end_to_end": e2e}, indent=2))
        return 0
    print(f"{'kernel':34s} {'python':>11s} {'cython':>11s} {'speedup':>8s}")
    for r in rows:
        print(f"{r['kernel']:34s} {r['python_s'] * 1e6:9.1f}us {r['cython_s'] * 1e6:9.1f}us {r['speedup']:7.2f}x")
    print(f"{'end to end (abel, classical, fit)':34s} {e2e['python']:10.3f}s {e2e['cython']:10.3f}s "
          f"{e2e['python'] / e2e['cython']:7.2f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
