"""Vector fields on chart domains and the fundamental fields of a Lie superalgebra action."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from superflag.errors import ChartMismatch, KindMismatch, NotInAlgebra, ParityMismatch
from superflag.flagatlas import (
    EVEN_ISO,
    ODD_ISO,
    PLAIN,
    Chart,
    ChartIndex,
    FlagType,
    level_rows,
    build_chart,
    distinguished_index,
    enumerate_charts,
    form_matrix,
    same_component,
)
from superflag.liesuperalg import AlgebraPresentation, BilinearFormMatrix, check_invariance
from superflag.linalg import EchelonSpace, nullspace, rank
from superflag.supercalc import (
    EVEN,
    ODD,
    ONE,
    ZERO,
    P,
    Q,
    SuperMatrix,
    SuperPolynomial,
    Var,
    derivative,
    poly_sum,
)

# X -> d/dt (exp(tX) . z) is an anti-homomorphism into vector fields, so the
# fundamental field carries an overall minus sign.  For odd X the parameter
# is odd and passes the row coordinates with a Koszul sign, which shows up
# as (-1)^{parity of the row} on the velocity entries.
FIELD_SIGN = -1


@dataclass
class VectorField:
    """A homogeneous derivation ``sum_b coeffs[b] d/du_b`` on one chart."""

    chart: Chart
    coeffs: Dict[Var, SuperPolynomial]
    parity: int

    def __post_init__(self):
        self.coeffs = {v: P(c) for v, c in self.coeffs.items() if P(c)}

    def coefficient(self, v: Var) -> SuperPolynomial:
        return self.coeffs.get(v, ZERO)

    def apply(self, g) -> SuperPolynomial:
        g = P(g)
        return poly_sum(c * derivative(g, v) for v, c in self.coeffs.items())

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check(self, other: "VectorField"):
        if self.chart.index != other.chart.index or self.chart.flag != other.chart.flag:
            raise ChartMismatch("fields live on different charts")

    def __add__(self, other: "VectorField") -> "VectorField":
        self._check(other)
        if self.parity != other.parity and not (self.is_zero() or other.is_zero()):
            raise ParityMismatch("adding fields of different parity")
        out = dict(self.coeffs)
        for v, c in other.coeffs.items():
            out[v] = out.get(v, ZERO) + c
        par = self.parity if not self.is_zero() else other.parity
        return VectorField(self.chart, out, par)

    def __neg__(self):
        return VectorField(self.chart, {v: -c for v, c in self.coeffs.items()}, self.parity)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "VectorField":
        return VectorField(self.chart, {v: x.scale(c) for v, x in self.coeffs.items()}, self.parity)

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return (self.chart.index == other.chart.index
                and self.coeffs == {v: c for v, c in other.coeffs.items() if c})

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for v in sorted(self.coeffs, key=lambda v: v.name):
            parts.append(f"({self.coeffs[v]})*d/d{v.name}")
        return " + ".join(parts)

    def to_json_dict(self):
        return {"parity": self.parity,
                "coefficients": {v.name: str(c) for v, c in sorted(self.coeffs.items(), key=lambda t: t[0].name)}}


def field_bracket(v: VectorField, w: VectorField) -> VectorField:
    """Graded commutator ``[v, w] = v w - (-1)^{|v||w|} w v``."""
    v._check(w)
    sign = -1 if v.parity == ODD and w.parity == ODD else 1
    coords = set(v.coeffs) | set(w.coeffs)
    out = {}
    for b in coords:
        out[b] = v.apply(w.coefficient(b)) - w.apply(v.coefficient(b)).scale(sign)
    return VectorField(v.chart, out, (v.parity + w.parity) % 2)


def coordinate_field(chart: Chart, v: Var) -> VectorField:
    if v not in chart.positions:
        raise ChartMismatch(f"{v.name} is not a coordinate of chart {chart.index}")
    return VectorField(chart, {v: ONE}, v.parity)


# ---------------------------------------------------------------------------
# fundamental fields


def _check_pairing(g: AlgebraPresentation, f: FlagType):
    if f.kind == PLAIN:
        if g.name != "gl" or tuple(g.params) != (f.m, f.n):
            raise KindMismatch(f"plain flag in C^{f.m}|{f.n} needs gl({f.m}|{f.n}), got {g.name}{g.params}")
    elif f.kind == EVEN_ISO:
        if g.name != "osp" or tuple(g.params) != (f.m, f.n):
            raise KindMismatch(f"even isotropic flag needs osp({f.m}|{f.n}), got {g.name}{g.params}")
    elif f.kind == ODD_ISO:
        if g.name != "pisp" or tuple(g.params) != (f.m,):
            raise KindMismatch(f"odd isotropic flag needs pisp({f.m}), got {g.name}{g.params}")


def chart_velocity(x: SuperMatrix, chart: Chart) -> List[SuperMatrix]:
    """First-order motion of the chart matrices under E + tX.

    V_1 = X Z_1 - Z_1 (X Z_1)_I, then V_s = D Z_s - Z_s (D Z_s)_I with
    D the I-rows of the previous product.  No inversion is needed because
    the identity rows stay at I to first order.
    """
    f = chart.flag
    out = []
    d = x
    for s, z in enumerate(chart.matrices, start=1):
        dz = d * z
        sel = dz.rows(level_rows(f, s, chart.index))
        out.append(dz - z * sel)
        d = SuperMatrix(sel.row_parities, sel.row_parities, sel.entries)
    return out


def _form_of(f: FlagType) -> BilinearFormMatrix:
    kind = "even-symmetric" if f.kind == EVEN_ISO else "odd-skew"
    return BilinearFormMatrix(kind, form_matrix(f))


def fundamental_field(x: SuperMatrix, chart: Chart, parity: Optional[int] = None,
                      check_form: bool = True) -> VectorField:
    """Fundamental field of a homogeneous ambient matrix on ``chart``."""
    f = chart.flag
    if parity is None:
        parity = x.homogeneous_parity()
    if check_form and f.is_isotropic and not check_invariance(x, _form_of(f)).is_zero():
        raise NotInAlgebra("matrix does not preserve the form of the flag")
    vel = chart_velocity(x, chart)
    coeffs = {}
    for v, (s, i, j) in chart.positions.items():
        e = vel[s].entries[i][j]
        if e:
            sign = FIELD_SIGN
            if parity == ODD and vel[s].row_parities[i] == ODD:
                sign = -sign
            coeffs[v] = e.scale(sign)
    return VectorField(chart, coeffs, parity)


def fundamental_fields(g: AlgebraPresentation, chart: Chart) -> List[VectorField]:
    """Fields of every basis element, in basis order."""
    _check_pairing(g, chart.flag)
    return [fundamental_field(b, chart, p, check_form=False) for b, p in g.basis]


def combine_fields(fields: Sequence[VectorField], coeffs, chart: Chart, parity: int) -> VectorField:
    out = VectorField(chart, {}, parity)
    for i, c in (coeffs.items() if isinstance(coeffs, dict) else enumerate(coeffs)):
        if c:
            out = out + fields[i].scale(c)
    return out


def check_homomorphism(g: AlgebraPresentation, f: FlagType, index: Optional[ChartIndex] = None,
                       chart: Optional[Chart] = None) -> Dict:
    """Compare [mu(a), mu(b)] with mu([a, b]) for every pair of basis elements."""
    chart = chart or build_chart(f, index or distinguished_index(f))
    fields = fundamental_fields(g, chart)
    sc = g.structure_constants or g.compute_structure_constants()
    failures = []
    pairs = 0
    for i in range(len(g.basis)):
        for j in range(i, len(g.basis)):
            pi, pj = g.basis[i][1], g.basis[j][1]
            lhs = field_bracket(fields[i], fields[j])
            rhs = combine_fields(fields, sc.get((i, j), {}), chart, (pi + pj) % 2)
            pairs += 1
            if not (lhs - rhs).is_zero():
                failures.append((g.labels[i], g.labels[j]))
    return {"pairs": pairs, "failures": failures, "ok": not failures}


# ---------------------------------------------------------------------------
# linear algebra on fields


class FieldSpace:
    """Flattens fields into sparse vectors over (coordinate, monomial) columns.

    The column registry grows as new monomials appear, so the window never
    truncates a field.
    """

    def __init__(self):
        self._cols: Dict[Tuple[str, object], int] = {}

    def column(self, name: str, key) -> int:
        k = (name, key)
        c = self._cols.get(k)
        if c is None:
            c = self._cols[k] = len(self._cols)
        return c

    def vector(self, v: VectorField, tag: str = "") -> Dict[int, object]:
        out = {}
        for var_, poly in v.coeffs.items():
            for key, c in poly.terms.items():
                out[self.column(tag + var_.name, key)] = c
        return out

    @property
    def ncols(self) -> int:
        return len(self._cols)


def span_dimension(g: AlgebraPresentation, f: FlagType, index: Optional[ChartIndex] = None,
                   chart: Optional[Chart] = None) -> Tuple[int, int]:
    """Superdimension of the span of the fundamental fields on one chart."""
    chart = chart or build_chart(f, index or distinguished_index(f))
    fields = fundamental_fields(g, chart)
    space = FieldSpace()
    dims = [0, 0]
    for par in (EVEN, ODD):
        rows = [space.vector(v) for v, (_, p) in zip(fields, g.basis) if p == par]
        dims[par] = rank(rows)
    return dims[0], dims[1]


def covering_charts(f: FlagType) -> List[ChartIndex]:
    return [I for I in enumerate_charts(f) if same_component(f, I)]


def kernel_of_action(g: AlgebraPresentation, f: FlagType,
                     charts: Optional[Iterable[ChartIndex]] = None) -> List[Dict[int, object]]:
    """Basis (coefficient vectors over g.basis) of elements acting by zero on every chart given."""
    _check_pairing(g, f)
    charts = list(charts) if charts is not None else covering_charts(f)
    out = []
    for par in (EVEN, ODD):
        idx = [i for i, (_, p) in enumerate(g.basis) if p == par]
        space = FieldSpace()
        # columns of the linear map are basis elements; rows are (chart, coord, monomial)
        colvecs = [dict() for _ in idx]
        for I in charts:
            chart = build_chart(f, I)
            for t, i in enumerate(idx):
                v = fundamental_field(g.basis[i][0], chart, par, check_form=False)
                colvecs[t].update(space.vector(v, tag=str(I) + ":"))
        rows: Dict[int, Dict[int, object]] = {}
        for t, cv in enumerate(colvecs):
            for r, c in cv.items():
                rows.setdefault(r, {})[t] = c
        for vec in nullspace(list(rows.values()), len(idx)):
            out.append({idx[t]: c for t, c in vec.items()})
    return out


def coordinate_field_membership(g: AlgebraPresentation, f: FlagType, v: Var,
                                index: Optional[ChartIndex] = None) -> Dict:
    """Whether d/dv lies in the span of the fundamental fields on the chart."""
    chart = build_chart(f, index or distinguished_index(f))
    target = coordinate_field(chart, v)
    fields = fundamental_fields(g, chart)
    space = FieldSpace()
    ech = EchelonSpace()
    for w, (_, p) in zip(fields, g.basis):
        if p == v.parity:
            ech.add(space.vector(w))
    return {"coordinate": v.name, "parity": v.parity, "in_span": ech.contains(space.vector(target))}


__all__ = [
    "VectorField", "field_bracket", "coordinate_field", "fundamental_field", "fundamental_fields",
    "combine_fields", "check_homomorphism", "FieldSpace", "span_dimension", "kernel_of_action",
    "coordinate_field_membership", "covering_charts", "FIELD_SIGN",
]
