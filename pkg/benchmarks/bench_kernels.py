"""Compiled vs pure-Python kernels.

Micro benchmarks call both backends directly on identical seeded inputs.
The end-to-end rows run a workload in a subprocess once per backend, with
SUPERFLAG_PURE selecting the fallback.

    python3 benchmarks/bench_kernels.py [--repeat N] [--json out.json] [--skip-e2e]
"""
import argparse
import json
import os
import random
import subprocess
import sys
import timeit

from superflag import _pykernels as py
from superflag.supercalc import Q

try:
    from superflag import _ckernels as ck
except ImportError:
    ck = None

ONE = ((), ())


def random_poly(rng, n_even=4, n_odd=6, terms=12):
    out = {}
    for _ in range(terms):
        ev = sorted(rng.sample(range(n_even), rng.randint(0, min(2, n_even))))
        e = tuple(x for v in ev for x in (v, rng.randint(1, 3)))
        o = tuple(sorted(rng.sample(range(100, 100 + n_odd), rng.randint(0, 3))))
        out[(e, o)] = Q(rng.randint(-9, 9) or 1, rng.randint(1, 5))
    return out


def random_unit_matrix(rng, n):
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            x = {k: c for k, c in random_poly(rng, n_even=0, terms=4).items() if k[1]}
            if i == j:
                x[ONE] = Q(rng.randint(1, 7))
            row.append(x)
        rows.append(row)
    return rows


def random_rows(rng, nrows, ncols, density):
    return [{c: Q(rng.randint(-5, 5)) for c in range(ncols) if rng.random() < density} for _ in range(nrows)]


def micro_cases(rng):
    a, b = random_poly(rng, terms=40), random_poly(rng, terms=40)
    m = random_unit_matrix(rng, 5)
    mcols = [[m[t][j] for t in range(5)] for j in range(5)]
    rows = random_rows(rng, 120, 160, 0.08)
    return [
        ("poly_mul 40x40 terms", lambda k: k.poly_mul(a, b)),
        ("mat_mul_terms 5x5", lambda k: k.mat_mul_terms(m, mcols)),
        ("gauss_jordan_inverse 5x5", lambda k: k.gauss_jordan_inverse(m, Q(1))),
        ("sparse_rref 120x160", lambda k: k.sparse_rref([dict(r) for r in rows])),
    ]


E2E = {
    "cocycle Fe(4,2|4,2), 60 triples": (
        "import random\n"
        "from superflag.flagatlas import *\n"
        "f = validate_flag_type((2, 2), (2, 2), EVEN_ISO)\n"
        "rng = random.Random(0)\n"
        "for t in chart_triples(f, 60, random.Random(1)):\n"
        "    assert not cocycle_check(f, *t, rng, points=20)['failures']\n"
    ),
    "oracle Fe(4,2|4,2), degrees 2 and 3": (
        "from superflag.flagatlas import *\n"
        "from superflag.harness import OracleProblem, oracle_global_fields\n"
        "f = validate_flag_type((2, 2), (2, 2), EVEN_ISO)\n"
        "assert oracle_global_fields(OracleProblem(f))[:2] == (16, 16)\n"
    ),
}


def time_subprocess(code, pure):
    env = dict(os.environ)
    if pure:
        env["SUPERFLAG_PURE"] = "1"
    else:
        env.pop("SUPERFLAG_PURE", None)
    wrapper = ("import time\nt0 = time.perf_counter()\n" + code +
               "print(time.perf_counter() - t0)\n")
    out = subprocess.run([sys.executable, "-c", wrapper], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout.strip().splitlines()[-1])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", help="also write results to this file")
    ap.add_argument("--skip-e2e", action="store_true")
    args = ap.parse_args(argv)

    rows = []
    for name, fn in micro_cases(random.Random(0)):
        if ck is not None:
            assert fn(ck) == fn(py), name
        number = 20
        t_py = min(timeit.repeat(lambda: fn(py), number=number, repeat=args.repeat)) / number
        t_c = min(timeit.repeat(lambda: fn(ck), number=number, repeat=args.repeat)) / number if ck else None
        rows.append({"case": name, "python_s": t_py, "cython_s": t_c})
    if not args.skip_e2e:
        for name, code in E2E.items():
            t_py = time_subprocess(code, pure=True)
            t_c = time_subprocess(code, pure=False) if ck else None
            rows.append({"case": name, "python_s": t_py, "cython_s": t_c})

    print(f"{'case':40s} {'python':>12s} {'cython':>12s} {'speedup':>8s}")
    for r in rows:
        c = r["cython_s"]
        speed = f"{r['python_s'] / c:7.1f}x" if c else "   n/a"
        cs = f"{c * 1e3:10.3f}ms" if c else "         n/a"
        print(f"{r['case']:40s} {r['python_s'] * 1e3:10.3f}ms {cs} {speed}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"rows": rows}, fh, indent=2)
            fh.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
