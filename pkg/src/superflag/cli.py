"""Command line entry point: ``superflag <group> <command> ...``.

Every command prints JSON on stdout.  The exit status is 0 when every
non-skipped check passed, 1 when something failed and 2 on bad input.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from typing import List, Optional

from superflag.errors import SuperflagError, UnstableDegree


def _dump(obj, path: Optional[str] = None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)


def _ints(text: str) -> List[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _chart(f, spec: str):
    from superflag.flagatlas import distinguished_index, enumerate_charts

    if spec == "distinguished":
        return distinguished_index(f)
    charts = enumerate_charts(f)
    if spec.isdigit():
        return charts[int(spec)]
    for I in charts:
        if str(I) == spec:
            return I
    raise ValueError(f"no chart {spec!r}; use 'distinguished', a position or one of {[str(I) for I in charts[:6]]}...")


# -- algebra


def cmd_algebra_dump(a) -> int:
    from superflag.liesuperalg import build_algebra

    _dump(build_algebra(a.algebra, _ints(a.params)).to_json_dict(), a.json)
    return 0


# -- flag


def cmd_flag_validate(a) -> int:
    from superflag.flagatlas import chart_count, plain_coordinate_counts, expected_isotropic_free_counts
    from superflag.harness import parse_flag

    f = parse_flag(a.flag)
    out = {"flag": str(f), **f.to_json_dict(), "r": f.r, "charts": chart_count(f)}
    if f.is_isotropic:
        base = expected_isotropic_free_counts(f)
        deeper = plain_coordinate_counts(f.fiber()) if f.r > 1 else (0, 0)
        out["dimension"] = [base[0] + deeper[0], base[1] + deeper[1]]
    else:
        out["dimension"] = list(plain_coordinate_counts(f))
    _dump(out, a.json)
    return 0


def cmd_flag_charts(a) -> int:
    from superflag.flagatlas import (distinguished_index, enumerate_charts, is_supported_isotropic_index,
                                     same_component)
    from superflag.harness import parse_flag

    f = parse_flag(a.flag)
    d = distinguished_index(f)
    rows = []
    for pos, I in enumerate(enumerate_charts(f)):
        row = {"position": pos, "chart": str(I), "distinguished": I == d}
        if f.is_isotropic:
            row["same_component"] = same_component(f, I)
            row["supported"] = is_supported_isotropic_index(f, I)
        rows.append(row)
    _dump({"flag": str(f), "charts": rows}, a.json)
    return 0


def cmd_flag_cocycle(a) -> int:
    from superflag.flagatlas import chart_triples, cocycle_check
    from superflag.harness import parse_flag

    f = parse_flag(a.flag)
    rng = random.Random(a.seed)
    triples = chart_triples(f, a.triples, rng)
    results = [cocycle_check(f, *t, rng, a.points) for t in triples]
    bad = [r for r in results if r["failures"]]
    _dump({"flag": str(f), "seed": a.seed, "points": a.points, "triples": len(results),
           "failures": bad}, a.json)
    return 1 if bad else 0


def cmd_flag_isotropy(a) -> int:
    from superflag.harness import run_check

    r = run_check("isotropy", {"op": "isotropy", "flag": a.flag}, 0)
    _dump(r.data, a.json)
    return 0 if r.status == "pass" else 1


# -- fields


def cmd_fields_fundamental(a) -> int:
    from superflag.flagatlas import build_chart
    from superflag.fundfields import fundamental_fields
    from superflag.harness import parse_flag
    from superflag.liesuperalg import build_algebra

    g = build_algebra(a.algebra, _ints(a.params))
    f = parse_flag(a.flag)
    chart = build_chart(f, _chart(f, a.chart))
    fields = fundamental_fields(g, chart)
    out = []
    for lab, v in zip(g.labels, fields):
        if a.element and lab != a.element:
            continue
        out.append({"element": lab, **v.to_json_dict()})
    if a.element and not out:
        raise ValueError(f"no basis element labelled {a.element!r}")
    _dump({"algebra": g.name, "params": list(g.params), "flag": str(f), "chart": str(chart.index),
           "coordinates": [v.name for v in chart.coords], "fields": out}, a.json)
    return 0


def _fields_check(op: str, a) -> int:
    from superflag.harness import run_check

    params = {"op": op, "algebra": a.algebra, "params": a.params, "flag": a.flag}
    if getattr(a, "expect", None):
        params["expect"] = a.expect
    r = run_check(op, params, 0)
    _dump({"status": r.status, **r.data}, a.json)
    return 0 if r.status == "pass" else 1


def cmd_fields_homomorphism(a) -> int:
    return _fields_check("homomorphism", a)


def cmd_fields_kernel(a) -> int:
    from superflag.fundfields import kernel_of_action
    from superflag.harness import parse_flag
    from superflag.liesuperalg import build_algebra

    g = build_algebra(a.algebra, _ints(a.params))
    f = parse_flag(a.flag)
    ker = kernel_of_action(g, f)
    dims = [sum(1 for v in ker if g.parity_of(next(iter(v))) == p) for p in (0, 1)]
    _dump({"algebra": g.name, "params": list(g.params), "flag": str(f), "kernel": dims,
           "basis": [{g.labels[i]: str(c) for i, c in sorted(v.items())} for v in ker]}, a.json)
    return 0


def cmd_fields_span(a) -> int:
    from superflag.fundfields import span_dimension
    from superflag.harness import parse_flag
    from superflag.liesuperalg import build_algebra

    g = build_algebra(a.algebra, _ints(a.params))
    f = parse_flag(a.flag)
    _dump({"algebra": g.name, "params": list(g.params), "flag": str(f),
           "span": list(span_dimension(g, f))}, a.json)
    return 0


# -- bwb


def cmd_bwb_sections(a) -> int:
    from superflag.weightsbwb import sections_report

    _dump(sections_report(a.case, a.k1, a.l1, a.n), a.json)
    return 0


# -- suites, oracle, gate


def cmd_suite_run(a) -> int:
    from superflag.harness import run_suite

    rep = run_suite(a.name, seed=a.seed, slow=a.slow, jobs=a.jobs)
    text = rep.to_json(timing=a.timing)
    if a.json:
        with open(a.json, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)
    for c in rep.checks:
        print(f"{c.status:7s} {c.name}", file=sys.stderr)
    print(f"runtime_ms {rep.runtime_ms}", file=sys.stderr)
    return 0 if rep.ok else 1


def cmd_suite_list(a) -> int:
    from superflag.harness import suite_names

    _dump({"suites": suite_names()})
    return 0


def cmd_oracle_run(a) -> int:
    from superflag.harness import MAX_UNKNOWNS, OracleProblem, oracle_global_fields, parse_flag

    f = parse_flag(a.flag)
    p = OracleProblem(f, a.degree, seed=a.seed, points_per_overlap=a.points,
                      check_stability=not a.no_stability, max_unknowns=a.max_unknowns or MAX_UNKNOWNS)
    try:
        e, o, basis = oracle_global_fields(p)
    except UnstableDegree as exc:
        _dump({"flag": str(f), "degree_bound": a.degree, "status": "bracket",
               "lower": list(exc.lower) if exc.lower else None,
               "upper": list(exc.upper) if exc.upper else None, "reason": str(exc)}, a.json)
        return 1
    diag = dict(basis.diagnostics)
    seconds = diag.pop("seconds", None)
    out = {"flag": str(f), "degree_bound": a.degree, "status": "pass", "dimensions": [e, o],
           "diagnostics": diag}
    if a.fields:
        out["even_fields"] = [v.to_json_dict() for v in basis.even]
        out["odd_fields"] = [v.to_json_dict() for v in basis.odd]
    _dump(out, a.json)
    print(f"seconds {seconds}", file=sys.stderr)
    return 0 if diag.get("certificate", {}).get("ok", True) else 1


def cmd_gate_check(a) -> int:
    from superflag.harness import hypothesis_gate, parse_flag

    rep = hypothesis_gate(parse_flag(a.flag), fiber_oracle=not a.no_fiber_oracle)
    _dump(rep, a.json)
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="superflag", description=__doc__.splitlines()[0])
    groups = ap.add_subparsers(dest="group", required=True)

    def cmd(group, name, fn, help_):
        p = group.add_parser(name, help=help_)
        p.set_defaults(fn=fn)
        p.add_argument("--json", help="also write the JSON output to this file")
        return p

    def algebra_args(p):
        p.add_argument("--algebra", required=True, choices=["gl", "osp", "pisp"])
        p.add_argument("--params", required=True, help="comma separated, e.g. 4,4 or 5")

    flag_help = "flag type as [plain|even|odd:]k0,k1,...|l0,l1,..."

    alg = groups.add_parser("algebra").add_subparsers(dest="cmd", required=True)
    algebra_args(cmd(alg, "dump", cmd_algebra_dump, "basis and structure constants as JSON"))

    fl = groups.add_parser("flag").add_subparsers(dest="cmd", required=True)
    for name, fn, h in (("validate", cmd_flag_validate, "check a flag type"),
                        ("charts", cmd_flag_charts, "list the chart indices"),
                        ("isotropy", cmd_flag_isotropy, "isotropy residuals of the reduced charts")):
        cmd(fl, name, fn, h).add_argument("--flag", required=True, help=flag_help)
    p = cmd(fl, "cocycle", cmd_flag_cocycle, "cocycle identity on chart triples")
    p.add_argument("--flag", required=True, help=flag_help)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--points", type=int, default=20)
    p.add_argument("--triples", type=int, default=None, help="sample this many triples (default all)")

    fi = groups.add_parser("fields").add_subparsers(dest="cmd", required=True)
    p = cmd(fi, "fundamental", cmd_fields_fundamental, "fundamental fields on one chart")
    algebra_args(p)
    p.add_argument("--flag", required=True, help=flag_help)
    p.add_argument("--chart", default="distinguished")
    p.add_argument("--element", help="only the basis element with this label")
    for name, fn, h in (("homomorphism", cmd_fields_homomorphism, "bracket compatibility of the action"),
                        ("kernel", cmd_fields_kernel, "elements acting by zero"),
                        ("span", cmd_fields_span, "superdimension of the span of the fields")):
        p = cmd(fi, name, fn, h)
        algebra_args(p)
        p.add_argument("--flag", required=True, help=flag_help)

    bw = groups.add_parser("bwb").add_subparsers(dest="cmd", required=True)
    p = cmd(bw, "sections", cmd_bwb_sections, "global sections of the zeroth graded piece")
    p.add_argument("--case", required=True, choices=["even", "odd"])
    p.add_argument("--k1", type=int, required=True)
    p.add_argument("--l1", type=int, required=True)
    p.add_argument("--n", type=int, default=None)

    su = groups.add_parser("suite").add_subparsers(dest="cmd", required=True)
    p = su.add_parser("run", help="run a named suite or a .conf file")
    p.set_defaults(fn=cmd_suite_run)
    p.add_argument("name")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json")
    p.add_argument("--slow", action="store_true", help="also run checks marked slow")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for independent checks")
    p.add_argument("--timing", action="store_true", help="write runtime_ms into the JSON (breaks byte equality)")
    su.add_parser("list", help="names of the shipped suites").set_defaults(fn=cmd_suite_list)

    orc = groups.add_parser("oracle").add_subparsers(dest="cmd", required=True)
    p = cmd(orc, "run", cmd_oracle_run, "polynomial fields that extend to every chart")
    p.add_argument("--flag", required=True, help=flag_help)
    p.add_argument("--degree", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--points", type=int, default=20, help="points for the transport audit, 0 to skip")
    p.add_argument("--max-unknowns", type=int, default=None)
    p.add_argument("--no-stability", action="store_true", help="skip the degree+1 rerun")
    p.add_argument("--fields", action="store_true", help="print the basis fields")

    ga = groups.add_parser("gate").add_subparsers(dest="cmd", required=True)
    p = cmd(ga, "check", cmd_gate_check, "hypotheses of the matching main theorem")
    p.add_argument("--flag", required=True, help=flag_help)
    p.add_argument("--no-fiber-oracle", action="store_true",
                   help="leave v(fiber) undecided for one-level fibers instead of running the oracle")
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (SuperflagError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
