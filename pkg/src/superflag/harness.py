"""Global-vector-field oracle, hypothesis gate and verification suites.

The oracle writes an unknown field on the distinguished chart with
polynomial coefficients of bounded even degree, moves it to the other
charts of a covering family and asks for the moved coefficients to be
polynomial.  Charts whose pole divisor (the body determinant of the
transition) is a monomial in their own coordinates are tested exactly:
every expression is a Laurent polynomial there and polynomiality means no
negative exponents.  Other charts are only reported; leaving them out can
enlarge the solution space but never shrink it, so a result that meets the
span of the fundamental fields is certified anyway.
"""
from __future__ import annotations

import configparser
import json
import random
import time
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from superflag import kernels
from superflag.errors import (
    AnsatzTooLarge,
    NotNumericCore,
    SingularOverlap,
    SuperflagError,
    UnknownSuite,
    UnstableDegree,
)
from superflag.flagatlas import (
    EVEN_ISO,
    ODD_ISO,
    Chart,
    ChartIndex,
    FlagType,
    build_chart,
    distinguished_index,
    enumerate_charts,
    functions_predicate,
    gl_hypotheses_predicate,
    level_rows,
    same_component,
    transition_at_random_point,
)
from superflag.fundfields import FieldSpace, VectorField, fundamental_field, fundamental_fields
from superflag.liesuperalg import build_gl, build_osp, build_pisp
from superflag.linalg import EchelonSpace, nullspace
from superflag.supercalc import (
    EVEN,
    ODD,
    ONE,
    Q,
    SuperMatrix,
    SuperPolynomial,
    Var,
    derivative,
    odd_derivative,
    odd_var,
    smat_inverse_fraction,
    substitute,
    var_by_id,
)

MAX_UNKNOWNS = 50_000

# ---------------------------------------------------------------------------
# Laurent arithmetic with monomial denominators
#
# A value is (numerator, den) with den a dict var-id -> exponent, meaning
# numerator / prod w^e.  Numerators are ordinary SuperPolynomials.


def _mono(den: Dict[int, int]) -> SuperPolynomial:
    flat = tuple(x for i in sorted(den) for x in (i, den[i]) if den[i])
    return SuperPolynomial({(flat, ()): Q(1)}, _clean=True)


def _lmul(a, b):
    den = dict(a[1])
    for i, e in b[1].items():
        den[i] = den.get(i, 0) + e
    return a[0] * b[0], den


def _lift(a, den):
    """Rewrite ``a`` over the (larger) denominator ``den``."""
    extra = {i: e - a[1].get(i, 0) for i, e in den.items()}
    if any(extra.values()):
        return a[0] * _mono(extra)
    return a[0]


def _lmat_mul(a, b):
    """Product of two (SuperMatrix, den) pairs."""
    den = dict(a[1])
    for i, e in b[1].items():
        den[i] = den.get(i, 0) + e
    return a[0] * b[0], den


def _lmat_sub(a, b):
    den = {i: max(a[1].get(i, 0), b[1].get(i, 0)) for i in set(a[1]) | set(b[1])}
    ma = a[0] if den == a[1] else a[0].map(lambda x: _lift((x, a[1]), den))
    mb = b[0] if den == b[1] else b[0].map(lambda x: _lift((x, b[1]), den))
    return ma - mb, den


def _square_rows(m: SuperMatrix, idx) -> SuperMatrix:
    c = m.rows(idx)
    return SuperMatrix(c.row_parities, m.col_parities, c.entries)


def _polar_terms(value) -> Dict[tuple, object]:
    """Terms of numerator/den with a negative exponent, keyed by Laurent monomial."""
    num, den = value
    if not den:
        return {}
    flat = tuple(x for i in sorted(den) for x in (i, den[i]) if den[i])
    return kernels.polar_terms(num.terms, flat)


# ---------------------------------------------------------------------------
# the oracle


@dataclass
class OracleProblem:
    flag: FlagType
    degree_bound: int = 2
    chart_family: Optional[Sequence[ChartIndex]] = None  # None: every chart meeting the distinguished one
    seed: int = 0
    points_per_overlap: int = 20  # random points for the coordinate-change audit; 0 turns the audit off
    check_stability: bool = True
    max_unknowns: int = MAX_UNKNOWNS


@dataclass
class OracleBasis:
    """Solution fields on the distinguished chart plus run diagnostics."""

    chart: Chart
    even: List[VectorField]
    odd: List[VectorField]
    space: FieldSpace
    diagnostics: Dict = field(default_factory=dict)

    def vectors(self, parity: int):
        return [self.space.vector(v) for v in (self.even if parity == EVEN else self.odd)]

    def contains(self, v: VectorField) -> bool:
        ech = EchelonSpace()
        for w in self.vectors(v.parity):
            ech.add(w)
        return ech.contains(self.space.vector(v))


def _ansatz_monomials(chart: Chart, degree: int):
    """Monomial keys of even degree <= degree times any odd word, grouped by parity."""
    ev = sorted(chart.even_coords, key=lambda v: v.id)
    od = sorted(chart.odd_coords, key=lambda v: v.id)
    evens = []
    for d in range(degree + 1):
        for combo in combinations_with_replacement([v.id for v in ev], d):
            exps: Dict[int, int] = {}
            for i in combo:
                exps[i] = exps.get(i, 0) + 1
            evens.append(tuple(x for i in sorted(exps) for x in (i, exps[i])))
    odds = []
    for d in range(len(od) + 1):
        odds += [tuple(v.id for v in c) for c in combinations(od, d)]
    out = {EVEN: [], ODD: []}
    for o in odds:
        for e in evens:
            out[len(o) % 2].append((e, o))
    return out


class _Transport:
    """Everything about one target chart J needed to move fields from I."""

    def __init__(self, f: FlagType, chart_i: Chart, J: ChartIndex):
        self.f = f
        self.J = J
        self.chart_j = build_chart(f, J, prefix="w")
        self.ok = True
        self.reason = ""
        self.deltas = []
        zt = self.chart_j.matrices
        I = chart_i.index
        cp, cinv, zi = [], [], []
        for s, z in enumerate(zt, start=1):
            lz = z if s == 1 else cp[-1] * z
            c = _square_rows(lz, level_rows(f, s, I))
            try:
                num, delta, power = smat_inverse_fraction(c)
            except NotNumericCore:
                self.ok, self.reason = False, f"level {s}: charts do not meet"
                return
            self.deltas.append(str(delta))
            if len(delta.terms) != 1:
                self.ok, self.reason = False, f"level {s}: pole divisor {delta} is not a monomial"
                return
            (key, coef), = delta.terms.items()
            e, _ = key
            den = {i: x * power for i, x in zip(e[0::2], e[1::2])}
            inv = (Q(1) / coef) ** power
            n = num.map(lambda x: x.scale(inv))
            cp.append(c)
            cinv.append((n, den))
            zi.append((lz * n, den))
        self.cp, self.cinv = cp, cinv
        # distinguished-chart coordinates as Laurent polynomials in the J coordinates
        self.u = {v: (zi[s][0].entries[i][j], zi[s][1]) for v, (s, i, j) in chart_i.positions.items()}
        self._theta = odd_var("_oracle_theta")

    def response(self, chart_i: Chart, b: Var) -> Dict[Var, tuple]:
        """Coefficients of d/dw_c in the image of 'sigma d/du_b', sigma of parity |u_b| removed."""
        f = self.f
        s_b = chart_i.positions[b][0] + 1
        sigma = SuperPolynomial.of(self._theta) if b.parity == ODD else ONE
        zt = self.chart_j.matrices
        delta_z = {}
        k_prev = None
        for s in range(s_b, f.r + 1):
            z = zt[s - 1]
            if s == s_b:
                phi = chart_i.matrices[s - 1].map(lambda x: sigma * derivative(x, b))
                if s == 1:
                    t = (phi * self.cp[0], {})
                else:
                    t = (self.cinv[s - 2][0] * phi * self.cp[s - 1], self.cinv[s - 2][1])
            else:
                t = _lmat_mul(k_prev, (z, {}))
            k = (_square_rows(t[0], level_rows(f, s, self.J)), t[1])
            delta_z[s] = _lmat_sub(t, _lmat_mul((z, {}), k))
            k_prev = k
        out = {}
        for c, (s0, i, j) in self.chart_j.positions.items():
            m = delta_z.get(s0 + 1)
            if m is None:
                continue
            x = m[0].entries[i][j]
            if b.parity == ODD:
                x = odd_derivative(x, self._theta)
            if x:
                out[c] = (x, m[1])
        return out


def _monomial_value(tr: _Transport, key, cache):
    """u^key as a Laurent polynomial in the J coordinates, built left to right."""
    if key in cache:
        return cache[key]
    e, o = key
    if o:
        val = _lmul(_monomial_value(tr, (e, o[:-1]), cache), tr.u_by_id[o[-1]])
    elif e:
        flat = list(e)
        if flat[-1] > 1:
            flat[-1] -= 1
        else:
            flat = flat[:-2]
        val = _lmul(_monomial_value(tr, (tuple(flat), ()), cache), tr.u_by_id[e[-2]])
    else:
        val = (ONE, {})
    cache[key] = val
    return val


def _family(f: FlagType, chart_family) -> List[ChartIndex]:
    I = distinguished_index(f)
    if chart_family is None:
        chart_family = [J for J in enumerate_charts(f) if not f.is_isotropic or same_component(f, J)]
    return [J for J in chart_family if J != I]


def _torus_coordinate(f: FlagType, a: int) -> Tuple[int, int]:
    """Ambient basis index -> (torus coordinate, sign) for the algebra's diagonal torus."""
    m = f.m
    if f.kind == EVEN_ISO:
        s, n = f.k[1], f.l[1]
        if a < s:
            return a, 1
        if a < 2 * s:
            return a - s, -1
        if a < m:
            return -1, 0  # middle vector of an odd-dimensional orthogonal block
        j = a - m
        return (2 * s + j, 1) if j < n else (2 * s + j - n, -1)
    if f.kind == ODD_ISO:
        return (a, 1) if a < m else (a - m, -1)
    return a, 1


def coordinate_weights(f: FlagType, chart: Chart) -> Dict[Var, Tuple[int, ...]]:
    """Torus weight of every chart coordinate.

    The entry (r, c) of level s scales like t_a / t_b with a the ambient
    basis vector behind row r and b the one behind the identity row of
    column c; isotropic kinds fold dual vectors onto one torus coordinate.
    """
    size = f.m + f.n
    amb = [list(range(size))]
    for s in range(1, f.r + 1):
        rows = level_rows(f, s, chart.index)
        amb.append([amb[s - 1][r] for r in rows])
    out = {}
    for v, (s0, r, c) in chart.positions.items():
        w = [0] * size
        for a, sign in ((amb[s0][r], 1), (amb[s0 + 1][c], -1)):
            t, e = _torus_coordinate(f, a)
            if e:
                w[t] += sign * e
        out[v] = tuple(w)
    return out


def _key_weight(key, weights_by_id, size):
    e, o = key
    w = [0] * size
    for i, x in zip(e[0::2], e[1::2]):
        for t, y in enumerate(weights_by_id[i]):
            w[t] += x * y
    for i in o:
        for t, y in enumerate(weights_by_id[i]):
            w[t] += y
    return w


def _solve(f: FlagType, degree: int, chart_family, transports=None, max_unknowns=MAX_UNKNOWNS):
    I = distinguished_index(f)
    chart_i = build_chart(f, I)
    monos = _ansatz_monomials(chart_i, degree)
    coords = sorted(chart_i.coords, key=lambda v: chart_i.positions[v])
    weights = coordinate_weights(f, chart_i)
    wid = {v.id: w for v, w in weights.items()}
    size = f.m + f.n
    # unknowns grouped by (field parity, torus weight of u^key d/du_b)
    blocks: Dict[tuple, List] = {}
    total = 0
    for par in (EVEN, ODD):
        for key_par in (EVEN, ODD):
            for key in monos[key_par]:
                kw = _key_weight(key, wid, size)
                for b in coords:
                    if (b.parity + par) % 2 != key_par:
                        continue
                    w = tuple(x - y for x, y in zip(kw, weights[b]))
                    blocks.setdefault((par, w), []).append((b, key))
                    total += 1
    if total > max_unknowns:
        raise AnsatzTooLarge(f"{total} unknowns at degree {degree} (limit {max_unknowns})")
    if transports is None:
        transports = [_Transport(f, chart_i, J) for J in _family(f, chart_family)]
    live = [t for t in transports if t.ok]
    caches = []
    for tr in live:
        tr.u_by_id = {v.id: val for v, val in tr.u.items()}
        if not hasattr(tr, "resp"):
            tr.resp = {b: tr.response(chart_i, b) for b in coords}
        caches.append({})
    fields = {EVEN: [], ODD: []}
    nconds = [0, 0]
    nunk = [0, 0]
    for (par, _w) in sorted(blocks):
        unknowns = blocks[(par, _w)]
        nunk[par] += len(unknowns)
        rows: Dict[tuple, Dict[int, object]] = {}
        for t, tr in enumerate(live):
            cache = caches[t]
            for col, (b, key) in enumerate(unknowns):
                r = tr.resp[b]
                if not r:
                    continue
                ua = _monomial_value(tr, key, cache)
                for c, x in r.items():
                    for lk, coef in _polar_terms(_lmul(ua, x)).items():
                        row = rows.setdefault((t, c.id, lk), {})
                        row[col] = row.get(col, 0) + coef
        eqs = [{c: v for c, v in row.items() if v} for row in rows.values()]
        eqs = [r for r in eqs if r]
        nconds[par] += len(eqs)
        for vec in nullspace(eqs, len(unknowns)):
            coeffs: Dict[Var, Dict] = {}
            for col, c in vec.items():
                b, key = unknowns[col]
                coeffs.setdefault(b, {})[key] = c
            fields[par].append(VectorField(
                chart_i, {b: SuperPolynomial(t) for b, t in coeffs.items()}, par))
    basis = OracleBasis(chart_i, fields[EVEN], fields[ODD], FieldSpace())
    basis.diagnostics = {
        "degree_bound": degree,
        "unknowns": nunk,
        "conditions": nconds,
        "weight_blocks": len(blocks),
    }
    return len(fields[EVEN]), len(fields[ODD]), basis, transports


def coverage_report(transports) -> List[Dict]:
    return [{"chart": str(t.J), "used": t.ok, "pole_divisor": t.deltas, "reason": t.reason}
            for t in transports]


def algebra_for_flag(f: FlagType):
    if f.kind == EVEN_ISO:
        return build_osp(f.m, f.n)
    if f.kind == ODD_ISO:
        return build_pisp(f.m)
    return build_gl(f.m, f.n)


def _laurent_at(value, point) -> SuperPolynomial:
    num, den = value
    scale = Q(1)
    for i, e in den.items():
        scale *= point[var_by_id(i)] ** e
    return substitute(num, point).scale(Q(1) / scale)


def _laurent_sum(values):
    den: Dict[int, int] = {}
    for _, d in values:
        for i, e in d.items():
            den[i] = max(den.get(i, 0), e)
    total = SuperPolynomial()
    for v in values:
        total = total + _lift(v, den)
    return total, den


def transport_certificate(f: FlagType, transports, rng: random.Random, points: int) -> Dict:
    """Audit the transport to one randomly chosen chart.

    The Laurent coordinate change is compared with a direct numerical
    transition at random points, and every fundamental field is pushed
    forward symbolically and compared with its own expression on that chart.
    """
    live = [t for t in transports if t.ok]
    if not live:
        return {"chart": None, "ok": True, "points": 0, "mismatches": []}
    tr = live[rng.randrange(len(live))]
    chart_i = build_chart(f, distinguished_index(f))
    mismatches = []
    done = 0
    for _ in range(points):
        try:
            pt, _, mats = transition_at_random_point(f, tr.chart_j, chart_i.index, rng)
        except SingularOverlap:
            continue
        done += 1
        direct = chart_i.read(mats)
        for v, val in tr.u.items():
            if _laurent_at(val, pt) != direct[v]:
                mismatches.append({"coordinate": v.name,
                                   "point": {w.name: str(c) for w, c in sorted(pt.items(), key=lambda t: t[0].name)}})
    g = algebra_for_flag(f)
    resp = getattr(tr, "resp", None) or {b: tr.response(chart_i, b) for b in chart_i.coords}
    u_by_id = {v.id: val for v, val in tr.u.items()}
    tr.u_by_id = u_by_id
    cache = {}
    bad_fields = []
    for (x, par), label in zip(g.basis, g.labels):
        src = fundamental_field(x, chart_i, par, check_form=False)
        dst = fundamental_field(x, tr.chart_j, par, check_form=False)
        pushed: Dict[Var, List] = {}
        for b, poly in src.coeffs.items():
            for key, coef in poly.terms.items():
                ua = _monomial_value(tr, key, cache)
                for c, r in resp[b].items():
                    num, den = _lmul(ua, r)
                    pushed.setdefault(c, []).append((num.scale(coef), den))
        for c in set(pushed) | set(dst.coeffs):
            num, den = _laurent_sum(pushed.get(c, []) + [(-dst.coefficient(c), {})])
            if num:
                bad_fields.append(label)
                break
    return {"chart": str(tr.J), "points": done, "mismatches": mismatches,
            "fields_checked": len(g.basis), "field_mismatches": bad_fields,
            "ok": not mismatches and not bad_fields}


def oracle_global_fields(p: OracleProblem):
    """Dimensions (even, odd) of polynomial-on-every-chart fields, and their basis.

    With ``check_stability`` the computation is repeated at degree_bound + 1;
    differing dimensions raise UnstableDegree carrying both results.
    """
    if p.degree_bound < 2:
        raise ValueError("degree_bound must be at least 2")
    t0 = time.perf_counter()
    even, odd, basis, transports = _solve(p.flag, p.degree_bound, p.chart_family,
                                          max_unknowns=p.max_unknowns)
    basis.diagnostics["coverage"] = coverage_report(transports)
    if p.check_stability:
        try:
            e2, o2, _, _ = _solve(p.flag, p.degree_bound + 1, p.chart_family, transports,
                                  max_unknowns=p.max_unknowns)
        except AnsatzTooLarge as exc:
            basis.diagnostics["next_degree"] = None
            raise UnstableDegree(f"stability not checked: {exc}", lower=(even, odd), upper=None) from exc
        basis.diagnostics["next_degree"] = [e2, o2]
        if (e2, o2) != (even, odd):
            raise UnstableDegree(
                f"dimensions {(even, odd)} at degree {p.degree_bound} but {(e2, o2)} at degree {p.degree_bound + 1}",
                lower=(even, odd), upper=(e2, o2))
    if p.points_per_overlap > 0:
        basis.diagnostics["certificate"] = transport_certificate(
            p.flag, transports, random.Random(p.seed), p.points_per_overlap)
    basis.diagnostics["seconds"] = round(time.perf_counter() - t0, 3)
    return even, odd, basis


# ---------------------------------------------------------------------------
# hypothesis gate


def pgl_superdimension(m: int, n: int) -> Tuple[int, int]:
    return m * m + n * n - 1, 2 * m * n


def _condition(name: str, holds, detail=None) -> Dict:
    return {"name": name, "holds": holds, "detail": detail}


def _fiber_is_pgl(fiber: FlagType, fiber_oracle: bool, max_unknowns: int) -> Dict:
    """Decide v(fiber) = pgl(k1|l1).

    For fibers with at least two levels the gl-flag restriction lines decide.
    Those lines are only established for r > 1, so a one-level fiber (a
    super-Grassmannian) is measured with the oracle instead.
    """
    lines = gl_hypotheses_predicate(fiber)
    target = pgl_superdimension(fiber.m, fiber.n)
    if fiber.r > 1:
        return _condition("v(fiber) = pgl(k_1|l_1)", not lines,
                          {"method": "gl-flag restriction lines", "violated": lines})
    detail = {"method": "oracle on the fiber Grassmannian", "violated": lines,
              "pgl": list(target)}
    if not fiber_oracle:
        detail["method"] = "not evaluated"
        return _condition("v(fiber) = pgl(k_1|l_1)", None, detail)
    try:
        e, o, basis = oracle_global_fields(OracleProblem(fiber, max_unknowns=max_unknowns))
    except UnstableDegree as exc:
        detail["oracle"] = {"lower": list(exc.lower or ()), "upper": list(exc.upper or ())}
        return _condition("v(fiber) = pgl(k_1|l_1)", None, detail)
    except AnsatzTooLarge as exc:
        detail["oracle"] = {"error": str(exc)}
        return _condition("v(fiber) = pgl(k_1|l_1)", None, detail)
    detail["oracle"] = [e, o]
    return _condition("v(fiber) = pgl(k_1|l_1)", (e, o) == target, detail)


def hypothesis_gate(f: FlagType, fiber_oracle: bool = True, max_unknowns: int = MAX_UNKNOWNS) -> Dict:
    """Evaluate every hypothesis of the main theorem matching the flag's form.

    ``applies`` is true only when all conditions hold; a condition that could
    not be decided (``holds`` is None) keeps the gate closed.
    """
    theorem = {EVEN_ISO: "v = osp(2k_1|2l_1)", ODD_ISO: "v = pisp(k_1+l_1)"}.get(f.kind)
    conds = []
    if theorem is None:
        conds.append(_condition("isotropic form", False, "plain flags are covered by the gl-flag theorem"))
        return {"flag": str(f), "theorem": None, "applies": False, "conditions": conds,
                "failed": ["isotropic form"], "undecided": []}
    k, l = f.k, f.l
    if f.kind == EVEN_ISO:
        conds.append(_condition("maximal type with k_0 = 2k_1, l_0 = 2l_1",
                                k[0] == 2 * k[1] and l[0] == 2 * l[1], {"k_0": k[0], "l_0": l[0]}))
    else:
        conds.append(_condition("maximal type with k_0 = l_0 = k_1 + l_1",
                                k[0] == l[0] == k[1] + l[1], {"k_0": k[0], "l_0": l[0]}))
    conds.append(_condition("r > 1", f.r > 1, {"r": f.r}))
    for i in range(2, f.r + 1):
        if (k[i], l[i]) == (k[i - 1], 0):
            conds.append(_condition(f"(k_{i},l_{i}) != (k_{i - 1},0)", False, [k[i], l[i]]))
        if (k[i], l[i]) == (0, l[i - 1]):
            conds.append(_condition(f"(k_{i},l_{i}) != (0,l_{i - 1})", False, [k[i], l[i]]))
    if f.kind == EVEN_ISO:
        conds.append(_condition("k_1 >= 1", k[1] >= 1))
        conds.append(_condition("l_1 >= 1", l[1] >= 1))
    else:
        conds.append(_condition("k_1 >= 3", k[1] >= 3))
        conds.append(_condition("l_1 >= 2", l[1] >= 2))
    if f.r > 1:
        fiber = f.fiber()
        fn = functions_predicate(fiber)
        conds.append(_condition("constant functions on the fiber", fn == "constant-functions",
                                {"fiber": str(fiber), "branch": fn}))
        early = all(c["holds"] for c in conds)
        if early or not fiber_oracle:
            conds.append(_fiber_is_pgl(fiber, fiber_oracle and early, max_unknowns))
        else:
            conds.append(_condition("v(fiber) = pgl(k_1|l_1)", None, {"method": "skipped, gate already closed"}))
    failed = [c["name"] for c in conds if c["holds"] is False]
    undecided = [c["name"] for c in conds if c["holds"] is None]
    return {"flag": str(f), "theorem": theorem, "applies": not failed and not undecided,
            "conditions": conds, "failed": failed, "undecided": undecided}


# ---------------------------------------------------------------------------
# suites
#
# A suite is an INI file: a [suite] section, then one section per check in
# run order.  Every check section names its ``op`` and ``anchor``; ``slow``
# marks checks skipped unless asked for; the other keys are op parameters.

SUITE_DIR = Path(__file__).with_name("suites")
STATUSES = ("pass", "fail", "skip", "bracket")
KIND_ALIASES = {"plain": "plain", "even": EVEN_ISO, "odd": ODD_ISO,
                EVEN_ISO: EVEN_ISO, ODD_ISO: ODD_ISO}


def parse_flag(text: str) -> FlagType:
    """``[kind:]k0,k1,...|l0,l1,...`` with kind plain (default), even or odd."""
    from superflag.flagatlas import validate_flag_type

    kind = "plain"
    if ":" in text:
        kind, text = text.split(":", 1)
    if kind.strip() not in KIND_ALIASES:
        raise ValueError(f"unknown flag kind {kind!r}")
    ks, ls = text.split("|")
    return validate_flag_type(_ints(ks), _ints(ls), KIND_ALIASES[kind.strip()])


def _ints(text: str) -> List[int]:
    return [int(x) for x in text.replace(" ", "").split(",") if x]


def _pair(text: str) -> List[int]:
    out = _ints(text)
    if len(out) != 2:
        raise ValueError(f"expected two integers, got {text!r}")
    return out


def _flag_text(f: FlagType) -> str:
    return str(f)


@dataclass
class CheckResult:
    name: str
    anchor: str
    status: str
    data: Dict

    def to_json_dict(self):
        return {"name": self.name, "anchor": self.anchor, "status": self.status, "data": self.data}


@dataclass
class SuiteReport:
    suite: str
    seed: int
    checks: List[CheckResult]
    runtime_ms: Optional[int] = None

    @property
    def ok(self) -> bool:
        """No failed check; skipped checks and brackets do not count against it."""
        return all(c.status != "fail" for c in self.checks)

    def to_json_dict(self, timing: bool = False):
        return {"suite": self.suite, "seed": self.seed,
                "checks": [c.to_json_dict() for c in self.checks],
                "runtime_ms": self.runtime_ms if timing else None}

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_json_dict(timing), indent=2, sort_keys=True) + "\n"


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def _algebra(args):
    from superflag.liesuperalg import build_algebra

    return build_algebra(args["algebra"], _ints(args.get("params", "")))


# -- individual checks.  Each takes the section's parameters and a seeded rng
# -- and returns (status, data).


def _check_algebra_closure(args, rng):
    from superflag.liesuperalg import build_algebra, graded_jacobi_residual, jacobi_residual_coords

    if "sweep" in args:
        limit = int(args["sweep"])
        cases = [("gl", (m, n)) for m in range(limit + 1) for n in range(limit + 1) if 0 < m + n <= limit]
        cases += [("osp", (m, 2 * n)) for m in range(1, limit + 1) for n in range(limit + 1)
                  if 0 < m + 2 * n <= limit]
        cases += [("pisp", (n,)) for n in range(1, limit // 2 + 1)]
    else:
        cases = [(args["algebra"], tuple(_ints(args["params"])))]
    samples = args.get("jacobi", "all")
    out, ok = [], True
    for name, params in cases:
        g = build_algebra(name, params)
        entry = {"algebra": name, "params": list(params)}
        try:
            g.compute_structure_constants()
            entry["closure"] = True
        except ValueError as exc:
            entry["closure"], entry["error"] = False, str(exc)
            ok = False
            out.append(entry)
            continue
        triples = list(combinations_with_replacement(range(len(g)), 3))
        if samples != "all" and len(triples) > int(samples):
            triples = rng.sample(triples, int(samples))
        if args.get("jacobi_on", "structure-constants") == "matrices":
            bad = [[g.labels[i] for i in t] for t in triples
                   if not graded_jacobi_residual(*(g.basis[i][0] for i in t)).is_zero()]
        else:
            bad = [[g.labels[i] for i in t] for t in triples if jacobi_residual_coords(g, *t)]
        entry["jacobi_triples"] = len(triples)
        entry["jacobi_failures"] = bad[:10]
        ok = ok and not bad
        out.append(entry)
    return _status(ok), {"cases": out}


def _check_superdimension(args, rng):
    from superflag.liesuperalg import superdimension

    got = list(superdimension(_algebra(args)))
    want = _pair(args["expect"])
    return _status(got == want), {"superdimension": got, "expected": want}


def _check_center(args, rng):
    from superflag.liesuperalg import center, identity_of

    g = _algebra(args)
    z = center(g)
    dims = [sum(1 for x in z if x.homogeneous_parity() == p) for p in (EVEN, ODD)]
    want = _pair(args["expect"])
    data = {"dimensions": dims, "expected": want}
    ok = dims == want
    if g.name == "gl" and ok and dims == [1, 0]:
        data["spanned_by_identity"] = z[0] == identity_of(g).scale(z[0].entries[0][0].constant_term())
        ok = data["spanned_by_identity"]
    return _status(ok), data


def _check_invariance(args, rng):
    from superflag.liesuperalg import INVARIANCE_SIGN, check_invariance

    g = _algebra(args)
    signs = None
    if "signs" in args:
        e, o = _ints(args["signs"])
        signs = {EVEN: e, ODD: o}
    bad = [lab for (x, _), lab in zip(g.basis, g.labels) if not check_invariance(x, g.form, signs).is_zero()]
    used = signs or INVARIANCE_SIGN[g.form.kind]
    return _status(not bad), {"form": g.form.kind, "signs": [used[EVEN], used[ODD]],
                              "basis_elements": len(g), "failures": bad}


def _check_cocycle(args, rng):
    from superflag.flagatlas import chart_triples, cocycle_check

    f = parse_flag(args["flag"])
    points = int(args.get("points", 20))
    limit = args.get("triples", "all")
    triples = chart_triples(f, None if limit == "all" else int(limit), rng)
    results = [cocycle_check(f, *t, rng, points) for t in triples]
    failures = [r for r in results if r["failures"]]
    short = [r["triple"] for r in results if r["points"] < points]
    return _status(not failures and not short), {
        "flag": _flag_text(f), "triples": len(results), "points_per_triple": points,
        "failures": failures[:5], "short_triples": short[:5]}


def _check_isotropy(args, rng):
    from superflag.flagatlas import isotropy_residual, is_supported_isotropic_index

    f = parse_flag(args["flag"])
    checked, bad = 0, []
    for I in enumerate_charts(f):
        if not is_supported_isotropic_index(f, I):
            continue
        checked += 1
        if not isotropy_residual(f, build_chart(f, I).matrices[0]).is_zero():
            bad.append(str(I))
    return _status(checked > 0 and not bad), {"flag": _flag_text(f), "charts": checked, "failures": bad}


def _check_homomorphism(args, rng):
    from superflag.fundfields import check_homomorphism

    g = _algebra(args)
    f = parse_flag(args["flag"])
    data = {"algebra": g.name, "params": list(g.params), "flag": _flag_text(f)}
    g.compute_structure_constants()
    if "corrupt" in args:
        i, j, k = _ints(args["corrupt"])
        sc = dict(g.structure_constants[(i, j)])
        sc[k] = sc.get(k, 0) + 1
        g.structure_constants[(i, j)] = sc
        data["corrupted"] = [g.labels[i], g.labels[j], g.labels[k]]
    rep = check_homomorphism(g, f)
    data.update({"pairs": rep["pairs"], "failures": [list(p) for p in rep["failures"][:10]]})
    return _status(rep["ok"]), data


def _check_span(args, rng):
    from superflag.fundfields import span_dimension

    f = parse_flag(args["flag"])
    got = list(span_dimension(_algebra(args), f))
    want = _pair(args["expect"])
    return _status(got == want), {"flag": _flag_text(f), "span": got, "expected": want}


def _check_kernel(args, rng):
    from superflag.fundfields import kernel_of_action

    g = _algebra(args)
    f = parse_flag(args["flag"])
    ker = kernel_of_action(g, f)
    dims = [sum(1 for v in ker if g.parity_of(next(iter(v))) == p) for p in (EVEN, ODD)]
    want = _pair(args.get("expect", "0,0"))
    return _status(dims == want), {
        "flag": _flag_text(f), "kernel": dims, "expected": want,
        "basis": [{g.labels[i]: str(c) for i, c in sorted(v.items())} for v in ker]}


def _check_membership(args, rng):
    from superflag.fundfields import coordinate_field_membership

    g = _algebra(args)
    f = parse_flag(args["flag"])
    chart = build_chart(f, distinguished_index(f))
    level1 = [v for v in chart.odd_coords if chart.positions[v][0] == 0]
    missing = [v.name for v in level1 if not coordinate_field_membership(g, f, v)["in_span"]]
    return _status(bool(level1) and not missing), {
        "flag": _flag_text(f), "odd_level1_coordinates": len(level1), "not_fundamental": missing}


def expected_sections(case: str, k1: int, l1: int) -> Tuple[List, int]:
    """Dominant highest weights and total dimension, branch by branch."""
    from superflag.weightsbwb import Weight

    if case == "even":
        W = lambda mu=None, lam=None: Weight.of(k1, l1, mu, lam)
        if k1 > 2:
            return [W()], 1
        if k1 == 2:
            return [W({1: 1, 2: -1}), W()], 4
        return [W({1: -1}, {1: 1}), W()], 1 + 2 * l1
    n = k1 + l1
    W = lambda mu=None: Weight.of(n, 0, mu)
    if k1 > 1 and l1 > 1:
        return [W()], 1
    if k1 == 1:
        return [W({l1: -1, l1 + 1: -1}), W()], 1 + n * (n - 1) // 2
    return [W({1: 1, 2: 1}), W()], 1 + n * (n - 1) // 2


def _check_bwb_table(args, rng):
    from superflag.weightsbwb import Weight, sections_report

    top = int(args.get("max_sum", 6))
    rows, bad = [], []
    for case in ("even", "odd"):
        for k1 in range(1, top):
            for l1 in range(1, top - k1 + 1):
                if k1 == l1 == 1:
                    continue
                rep = sections_report(case, k1, l1)
                want, dim = expected_sections(case, k1, l1)
                got = [Weight(tuple(Q(x) for x in m["coordinates"]["mu"]),
                              tuple(Q(x) for x in m["coordinates"]["lambda"])) for m in rep["modules"]]
                ok = sorted(map(str, got)) == sorted(map(str, want)) and rep["total_dimension"] == dim
                rows.append({"case": case, "k1": k1, "l1": l1, "branch": rep["branch"],
                             "dominant": rep["dominant"], "dimension": rep["total_dimension"], "ok": ok})
                if not ok:
                    bad.append([case, k1, l1])
    return _status(not bad), {"rows": rows, "failures": bad}


def _check_oracle(args, rng):
    f = parse_flag(args["flag"])
    prob = OracleProblem(f, int(args.get("degree", 2)), seed=rng.randrange(2 ** 32),
                         points_per_overlap=int(args.get("points", 20)),
                         max_unknowns=int(args.get("max_unknowns", MAX_UNKNOWNS)))
    want = _pair(args["expect"]) if "expect" in args else None
    data = {"flag": _flag_text(f), "degree_bound": prob.degree_bound, "expected": want}
    try:
        e, o, basis = oracle_global_fields(prob)
    except UnstableDegree as exc:
        data["lower"] = list(exc.lower) if exc.lower else None
        data["upper"] = list(exc.upper) if exc.upper else None
        data["reason"] = str(exc)
        if want is not None and data["lower"] is not None:
            data["lower_matches_expected"] = data["lower"] == want
        return "bracket", data
    except AnsatzTooLarge as exc:
        data["reason"] = str(exc)
        return "skip", data
    diag = {k: v for k, v in basis.diagnostics.items() if k != "seconds"}
    data.update({"dimensions": [e, o], "diagnostics": diag})
    ok = diag.get("certificate", {}).get("ok", True)
    if want is not None:
        ok = ok and [e, o] == want
    if args.get("containment", "yes") == "yes":
        g = algebra_for_flag(f)
        inside = all(basis.contains(v) for v in fundamental_fields(g, basis.chart))
        data["contains_fundamental_fields"] = inside
        ok = ok and inside
    return _status(ok), data


def _check_gate(args, rng):
    f = parse_flag(args["flag"])
    rep = hypothesis_gate(f)
    want = args.get("expect", "approve")
    ok = rep["applies"] == (want == "approve")
    if "condition" in args:
        ok = ok and args["condition"] in rep["failed"]
    return _status(ok), {"expected": want, **rep}


def _check_transition_roundtrip(args, rng):
    """I -> J -> I at random points must return the starting point."""
    from superflag.flagatlas import transition_matrices

    f = parse_flag(args["flag"])
    charts = [J for J in enumerate_charts(f) if same_component(f, J)]
    I = distinguished_index(f)
    J = charts[rng.randrange(len(charts))] if "target" not in args else charts[int(args["target"])]
    chart_i = build_chart(f, I)
    tamper = args.get("tamper", "no") == "yes"
    bad, done = [], 0
    for _ in range(int(args.get("points", 20))):
        pt, zs, zj = transition_at_random_point(f, chart_i, J, rng, extra_targets=())
        if tamper:
            zj = [zj[0].map(lambda x: x)] + zj[1:]
            row = level_rows(f, 1, J)
            r = next(i for i in range(zj[0].shape[0]) if i not in row)
            zj[0].entries[r][0] = zj[0].entries[r][0] + ONE
        back = transition_matrices(f, zj, I)
        done += 1
        if any(a != b for a, b in zip(back, zs)):
            bad.append({v.name: str(c) for v, c in sorted(pt.items(), key=lambda t: t[0].name)})
    return _status(not bad), {"flag": _flag_text(f), "charts": [str(I), str(J)], "tampered": tamper,
                              "points": done, "failures": bad[:5]}


CHECKS: Dict[str, Callable] = {
    "algebra_closure": _check_algebra_closure,
    "superdimension": _check_superdimension,
    "center": _check_center,
    "invariance": _check_invariance,
    "cocycle": _check_cocycle,
    "isotropy": _check_isotropy,
    "homomorphism": _check_homomorphism,
    "span": _check_span,
    "kernel": _check_kernel,
    "membership": _check_membership,
    "bwb_table": _check_bwb_table,
    "oracle": _check_oracle,
    "gate": _check_gate,
    "transition_roundtrip": _check_transition_roundtrip,
}


def suite_names() -> List[str]:
    return sorted(p.stem for p in SUITE_DIR.glob("*.conf"))


def load_suite(name: str) -> configparser.ConfigParser:
    path = Path(name)
    if not (path.suffix == ".conf" and path.exists()):
        path = SUITE_DIR / f"{name}.conf"
    if not path.exists():
        raise UnknownSuite(f"no suite named {name!r}; known: {', '.join(suite_names())}")
    cfg = configparser.ConfigParser(interpolation=None)
    cfg.read(path, encoding="utf-8")
    if "suite" not in cfg:
        raise UnknownSuite(f"{path} has no [suite] section")
    return cfg


def run_check(name: str, params: Dict[str, str], seed: int, slow: bool = False) -> CheckResult:
    params = dict(params)
    op = params.pop("op")
    anchor = params.pop("anchor", "")
    is_slow = params.pop("slow", "no") == "yes"
    if is_slow and not slow:
        return CheckResult(name, anchor, "skip", {"reason": "slow check; pass --slow to run it"})
    fn = CHECKS.get(op)
    if fn is None:
        return CheckResult(name, anchor, "fail", {"error": f"unknown op {op!r}"})
    rng = random.Random(f"{seed}:{name}")
    try:
        status, data = fn(params, rng)
    except (SuperflagError, ValueError, KeyError) as exc:
        status, data = "fail", {"error": f"{type(exc).__name__}: {exc}"}
    return CheckResult(name, anchor, status, data)


def _run_check_job(job):
    return run_check(*job)


def run_suite(name: str, seed: int = 0, slow: bool = False, jobs: int = 1) -> SuiteReport:
    """Run every check of a suite; results come back in file order whatever ``jobs`` is."""
    cfg = load_suite(name)
    t0 = time.perf_counter()
    work = [(sec, dict(cfg[sec]), seed, slow) for sec in cfg.sections() if sec != "suite"]
    if jobs > 1 and len(work) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_check_job, work))
    else:
        results = [run_check(*w) for w in work]
    runtime = int((time.perf_counter() - t0) * 1000)
    return SuiteReport(cfg["suite"].get("name", Path(name).stem), seed, results, runtime)
