"""Flag types, chart atlases, transition maps and isotropic reductions.

Conventions
-----------
* Flag types carry the full sequences ``k = (k_0..k_r)`` and ``l = (l_0..l_r)``
  with ``k_0 = m``, ``l_0 = n`` the ambient superdimension.  For isotropic
  kinds a shorthand with ``k_0 = k_1`` and ``l_0 = l_1`` is accepted and
  expanded to the maximal-type ambient space (``2k_1 | 2l_1`` for the even
  form, ``n | n`` with ``n = k_1 + l_1`` for the odd form).
* All row/column indices are 0-based internally; chart indices print 1-based.
* The level-``s`` coordinate matrix has even rows first, then odd rows, and
  even columns first, then odd columns.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from superflag.errors import (
    ChainViolation,
    KindMismatch,
    MaximalTypeViolation,
    NotNumericCore,
    SingularOverlap,
    UnsupportedChart,
)
from superflag.liesuperalg import gamma_matrix, upsilon_matrix
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
    smat_inverse,
    substitute,
    supertranspose,
    var,
)

PLAIN = "plain"
EVEN_ISO = "even-isotropic"
ODD_ISO = "odd-isotropic"
KINDS = (PLAIN, EVEN_ISO, ODD_ISO)


# ---------------------------------------------------------------------------
# flag types


@dataclass(frozen=True)
class FlagType:
    k: Tuple[int, ...]
    l: Tuple[int, ...]
    kind: str = PLAIN

    @property
    def m(self) -> int:
        return self.k[0]

    @property
    def n(self) -> int:
        return self.l[0]

    @property
    def r(self) -> int:
        return len(self.k) - 1

    @property
    def is_isotropic(self) -> bool:
        return self.kind != PLAIN

    def fiber(self) -> "FlagType":
        """The plain flag type (k_1..k_r | l_1..l_r) of the fibre over the base Grassmannian."""
        return FlagType(self.k[1:], self.l[1:], PLAIN)

    def base(self) -> "FlagType":
        return FlagType(self.k[:2], self.l[:2], self.kind)

    def __str__(self):
        tag = {PLAIN: "F", EVEN_ISO: "Fe", ODD_ISO: "Fo"}[self.kind]
        return f"{tag}_({','.join(map(str, self.k))}|{','.join(map(str, self.l))})"

    def to_json_dict(self):
        return {"k": list(self.k), "l": list(self.l), "kind": self.kind}


def validate_flag_type(k: Sequence[int], l: Sequence[int], kind: str = PLAIN) -> FlagType:
    """Check the chain conditions (and maximal type for isotropic kinds)."""
    k, l = tuple(int(x) for x in k), tuple(int(x) for x in l)
    if kind not in KINDS:
        raise ValueError(f"unknown flag kind {kind!r}")
    if len(k) != len(l) or len(k) < 2:
        raise ChainViolation("k and l need the same length r+1 >= 2")
    if kind != PLAIN and k[0] == k[1] and l[0] == l[1]:
        k, l = _expand_isotropic_shorthand(k, l, kind)
    if any(x < 0 for x in k + l):
        raise ChainViolation("entries must be nonnegative")
    for s in range(1, len(k)):
        if k[s] > k[s - 1]:
            raise ChainViolation(f"k_{s} = {k[s]} > k_{s - 1} = {k[s - 1]}")
        if l[s] > l[s - 1]:
            raise ChainViolation(f"l_{s} = {l[s]} > l_{s - 1} = {l[s - 1]}")
        if k[s] + l[s] >= k[s - 1] + l[s - 1]:
            raise ChainViolation(
                f"k_{s}+l_{s} = {k[s] + l[s]} is not < k_{s - 1}+l_{s - 1} = {k[s - 1] + l[s - 1]}")
    if k[-1] + l[-1] <= 0:
        raise ChainViolation("k_r + l_r must be > 0")
    if kind == EVEN_ISO:
        if l[0] % 2:
            raise MaximalTypeViolation(f"l_0 = {l[0]} must be even for the even form")
        if k[0] not in (2 * k[1], 2 * k[1] + 1) or l[0] != 2 * l[1]:
            raise MaximalTypeViolation(
                f"not maximal type: need k_0 in {{2k_1, 2k_1+1}} and l_0 = 2l_1, got k_0={k[0]}, l_0={l[0]}")
    elif kind == ODD_ISO:
        if k[0] != l[0] or k[0] != k[1] + l[1]:
            raise MaximalTypeViolation(
                f"not maximal type: need k_0 = l_0 = k_1 + l_1, got {k[0]}|{l[0]} and k_1+l_1={k[1] + l[1]}")
    return FlagType(k, l, kind)


def _expand_isotropic_shorthand(k, l, kind):
    if kind == EVEN_ISO:
        return (2 * k[1],) + k[1:], (2 * l[1],) + l[1:]
    n = k[1] + l[1]
    return (n,) + k[1:], (n,) + l[1:]


# ---------------------------------------------------------------------------
# chart indices


@dataclass(frozen=True)
class ChartIndex:
    """Per level ``(I_s0, I_s1)`` as sorted 0-based tuples."""

    levels: Tuple[Tuple[Tuple[int, ...], Tuple[int, ...]], ...]

    def __str__(self):
        parts = []
        for i0, i1 in self.levels:
            parts.append("{" + ",".join(str(i + 1) for i in i0) + "|" + ",".join(str(i + 1) for i in i1) + "}")
        return "".join(parts)

    def to_json(self):
        return [[[i + 1 for i in i0], [i + 1 for i in i1]] for i0, i1 in self.levels]

    @classmethod
    def from_json(cls, data):
        return cls(tuple((tuple(i - 1 for i in a), tuple(i - 1 for i in b)) for a, b in data))


def _plain_level_indices(k0, k1, l0, l1):
    return [(tuple(a), tuple(b)) for a in itertools.combinations(range(k0), k1)
            for b in itertools.combinations(range(l0), l1)]


def _isotropic_level1_indices(f: FlagType):
    k0, l0, k1, l1 = f.k[0], f.l[0], f.k[1], f.l[1]
    out = []
    if f.kind == EVEN_ISO:
        if k0 % 2:
            raise UnsupportedChart("charts for odd orthogonal dimension are not supported")
        s, n = k1, l1
        for so in itertools.product((0, 1), repeat=s):
            for sp in itertools.product((0, 1), repeat=n):
                i0 = tuple(sorted(i if so[i] else s + i for i in range(s)))
                i1 = tuple(sorted(j if sp[j] else n + j for j in range(n)))
                out.append((i0, i1))
    else:
        n = k0
        for i0 in itertools.combinations(range(n), k1):
            i1 = tuple(j for j in range(n) if j not in i0)
            out.append((tuple(i0), i1))
    return out


def enumerate_charts(f: FlagType) -> List[ChartIndex]:
    """All chart indices, deterministic order.

    Plain flags give the full product of subsets; isotropic flags give the
    swap orbit of the distinguished level-1 index times plain deeper levels.
    """
    per_level = []
    for s in range(1, f.r + 1):
        if s == 1 and f.is_isotropic:
            per_level.append(_isotropic_level1_indices(f))
        else:
            per_level.append(_plain_level_indices(f.k[s - 1], f.k[s], f.l[s - 1], f.l[s]))
    return [ChartIndex(tuple(c)) for c in itertools.product(*per_level)]


def distinguished_index(f: FlagType) -> ChartIndex:
    levels = []
    for s in range(1, f.r + 1):
        k0, k1, l0, l1 = f.k[s - 1], f.k[s], f.l[s - 1], f.l[s]
        if s == 1 and f.kind == ODD_ISO:
            levels.append((tuple(range(k0 - k1, k0)), tuple(range(l1))))
        else:
            levels.append((tuple(range(k0 - k1, k0)), tuple(range(l0 - l1, l0))))
    return ChartIndex(tuple(levels))


def orthogonal_swaps(f: FlagType, index: ChartIndex) -> int:
    """Number of swapped orthogonal pairs relative to the distinguished chart."""
    if f.kind != EVEN_ISO:
        return 0
    s = f.k[1]
    return sum(1 for i in index.levels[0][0] if i < s)


def same_component(f: FlagType, index: ChartIndex) -> bool:
    """Whether the chart meets the component of the distinguished chart.

    Only the even form splits: an odd number of orthogonal swaps is a
    determinant -1 isometry and moves to the other family of maximal
    isotropic subspaces.
    """
    return orthogonal_swaps(f, index) % 2 == 0


def chart_count(f: FlagType) -> int:
    if not f.is_isotropic:
        out = 1
        for s in range(1, f.r + 1):
            out *= comb(f.k[s - 1], f.k[s]) * comb(f.l[s - 1], f.l[s])
        return out
    return len(enumerate_charts(f))


def _row_ids(k_prev: int, i0: Sequence[int], i1: Sequence[int]) -> List[int]:
    return list(i0) + [k_prev + i for i in i1]


# ---------------------------------------------------------------------------
# charts


@dataclass
class Chart:
    """Coordinate matrices of one chart expressed in its free coordinates."""

    flag: FlagType
    index: ChartIndex
    matrices: List[SuperMatrix]
    coords: List[Var]
    positions: Dict[Var, Tuple[int, int, int]]  # coord -> (level, row, col), 0-based level
    dependent_bindings: Dict[Var, SuperPolynomial] = field(default_factory=dict)
    prefix: str = ""

    @property
    def even_coords(self) -> List[Var]:
        return [v for v in self.coords if v.parity == EVEN]

    @property
    def odd_coords(self) -> List[Var]:
        return [v for v in self.coords if v.parity == ODD]

    def read(self, matrices: Sequence[SuperMatrix]) -> Dict[Var, SuperPolynomial]:
        """Coordinate values of a point given by its normalised matrices in this chart."""
        return {v: matrices[s].entries[i][j] for v, (s, i, j) in self.positions.items()}

    def at(self, bindings) -> List[SuperMatrix]:
        return [z.substitute(bindings) for z in self.matrices]

    def coordinate_count(self) -> Tuple[int, int]:
        return len(self.even_coords), len(self.odd_coords)


def _coord_name(prefix, s, tag, i, j):
    return f"{prefix}{tag}{s}_{i + 1}_{j + 1}"


def _plain_level_matrix(prefix, s, k0, k1, l0, l1, i0, i1):
    """Z_{I_s} with identity rows at I and fresh coordinates elsewhere."""
    rows_p = SuperMatrix.block_parities(k0, l0)
    cols_p = SuperMatrix.block_parities(k1, l1)
    ident = {r: c for c, r in enumerate(_row_ids(k0, i0, i1))}
    entries = []
    coords = []
    pos = {}
    for r in range(k0 + l0):
        row = []
        if r in ident:
            row = [ONE if c == ident[r] else ZERO for c in range(k1 + l1)]
        else:
            rodd = r >= k0
            ri = r - k0 if rodd else r
            for c in range(k1 + l1):
                codd = c >= k1
                cj = c - k1 if codd else c
                tag = {(0, 0): "x", (0, 1): "xi", (1, 0): "eta", (1, 1): "y"}[(rodd, codd)]
                v = var(_coord_name(prefix, s, tag, ri, cj), int(rodd) ^ int(codd))
                coords.append(v)
                pos[v] = (s - 1, r, c)
                row.append(P(v))
        entries.append(row)
    return SuperMatrix(rows_p, cols_p, entries), coords, pos


def _check_index(f: FlagType, index: ChartIndex):
    if len(index.levels) != f.r:
        raise UnsupportedChart("chart index has the wrong number of levels")
    for s, (i0, i1) in enumerate(index.levels, start=1):
        if len(i0) != f.k[s] or len(i1) != f.l[s]:
            raise UnsupportedChart(f"level {s}: wrong cardinalities")
        if any(not 0 <= i < f.k[s - 1] for i in i0) or any(not 0 <= i < f.l[s - 1] for i in i1):
            raise UnsupportedChart(f"level {s}: index out of range")
        if list(i0) != sorted(set(i0)) or list(i1) != sorted(set(i1)):
            raise UnsupportedChart(f"level {s}: indices must be sorted and distinct")


def build_chart(f: FlagType, index: ChartIndex, prefix: str = "") -> Chart:
    """Coordinate matrices of chart ``index``; isotropic kinds get reduced level 1."""
    _check_index(f, index)
    if f.is_isotropic:
        return reduce_isotropic_chart(f, index, prefix=prefix)
    mats, coords, pos = [], [], {}
    for s, (i0, i1) in enumerate(index.levels, start=1):
        z, c, p = _plain_level_matrix(prefix, s, f.k[s - 1], f.k[s], f.l[s - 1], f.l[s], i0, i1)
        mats.append(z)
        coords += c
        pos.update(p)
    return Chart(f, index, mats, coords, pos, prefix=prefix)


def build_raw_chart(f: FlagType, index: ChartIndex, prefix: str = "") -> Chart:
    """Unconstrained chart (no isotropy), also for isotropic kinds."""
    return build_chart(FlagType(f.k, f.l, PLAIN), index, prefix)


# ---------------------------------------------------------------------------
# transitions and the group action


def level_rows(f: FlagType, s: int, index: ChartIndex) -> List[int]:
    i0, i1 = index.levels[s - 1]
    return _row_ids(f.k[s - 1], i0, i1)


def act(f: FlagType, L: Optional[SuperMatrix], matrices: Sequence[SuperMatrix], target: ChartIndex,
        inverse=smat_inverse) -> List[SuperMatrix]:
    """Move a point (L applied first if given) into chart ``target``.

    Z~_1 = L Z_1 C_1^-1 with C_1 the target rows of L Z_1, then
    Z~_s = C_{s-1} Z_s C_s^-1 with C_s the target rows of C_{s-1} Z_s.
    """
    out = []
    prev_c = None
    for s, z in enumerate(matrices, start=1):
        if s == 1:
            lz = L * z if L is not None else z
        else:
            lz = prev_c * z
        c = lz.rows(level_rows(f, s, target))
        c = SuperMatrix(c.row_parities, lz.col_parities, c.entries)
        try:
            cinv = inverse(c)
        except NotNumericCore as exc:
            raise SingularOverlap(f"level {s}: target rows are not invertible at this point") from exc
        out.append(lz * cinv)
        prev_c = c
    return out


def transition_matrices(f: FlagType, matrices: Sequence[SuperMatrix], target: ChartIndex) -> List[SuperMatrix]:
    return act(f, None, matrices, target)


def transition(f: FlagType, I: ChartIndex, J: ChartIndex, point: Dict[Var, object],
               chart_i: Optional[Chart] = None) -> List[SuperMatrix]:
    """J-chart matrices of the I-chart point with even coordinates bound to ``point``.

    Odd coordinates stay symbolic.  Raises SingularOverlap off the overlap.
    """
    ci = chart_i or build_chart(f, I)
    zs = ci.at(point)
    return transition_matrices(f, zs, J)


def random_point(chart: Chart, rng: random.Random, bound: int = 13) -> Dict[Var, object]:
    """Small random rationals for every even coordinate of ``chart``."""
    pt = {}
    for v in chart.even_coords:
        num = rng.randint(-bound, bound)
        den = rng.randint(1, bound)
        pt[v] = Q(num, den)
    return pt


def _draw_on_overlap(f, chart_i: Chart, targets: Sequence[ChartIndex], rng: random.Random, retries: int):
    for _ in range(retries):
        pt = random_point(chart_i, rng)
        zs = chart_i.at(pt)
        try:
            return pt, zs, [transition_matrices(f, zs, T) for T in targets]
        except SingularOverlap:
            continue
    raise SingularOverlap(f"no point on the overlap after {retries} tries")


def transition_at_random_point(f, chart_i: Chart, J: ChartIndex, rng: random.Random,
                               retries: int = 32, extra_targets: Sequence[ChartIndex] = ()):
    """Draw points until chart_i -> J (and any extra targets) are all defined."""
    pt, zs, outs = _draw_on_overlap(f, chart_i, (J,) + tuple(extra_targets), rng, retries)
    return pt, zs, outs[0]


def cocycle_check(f: FlagType, I: ChartIndex, J: ChartIndex, K: ChartIndex,
                  rng: random.Random, points: int = 20, retries: int = 32) -> Dict:
    """Compare I -> K with I -> J -> K at random points of the triple overlap.

    Points where J -> K is undefined are redrawn, so ``points`` comparisons
    are made.  Returns the count and, for each mismatch, the even bindings
    that reproduce it.
    """
    ci = build_chart(f, I)
    failures = []
    done = 0
    misses = 0
    while done < points:
        pt, _, (zj, direct) = _draw_on_overlap(f, ci, (J, K), rng, retries)
        try:
            via = transition_matrices(f, zj, K)
        except SingularOverlap:
            misses += 1
            if misses > retries:
                raise
            continue
        done += 1
        if any(a != b for a, b in zip(direct, via)):
            failures.append({v.name: str(c) for v, c in sorted(pt.items(), key=lambda t: t[0].name)})
    return {"triple": [str(I), str(J), str(K)], "points": done, "failures": failures}


def chart_triples(f: FlagType, limit: Optional[int] = None, rng: Optional[random.Random] = None):
    """Ordered triples of distinct charts in one component, optionally a seeded sample."""
    charts = [I for I in enumerate_charts(f) if same_component(f, I)]
    triples = [t for t in itertools.permutations(charts, 3)] if len(charts) >= 3 else \
        [t for t in itertools.product(charts, repeat=3)]
    if limit is not None and len(triples) > limit:
        triples = (rng or random.Random(0)).sample(triples, limit)
    return triples


# ---------------------------------------------------------------------------
# isotropy


def form_matrix(f: FlagType) -> SuperMatrix:
    if f.kind == EVEN_ISO:
        return gamma_matrix(f.k[0], f.l[0] // 2)
    if f.kind == ODD_ISO:
        return upsilon_matrix(f.k[0])
    raise KindMismatch("plain flags carry no form")


def isotropy_residual(f: FlagType, z1: SuperMatrix) -> SuperMatrix:
    """Z_1^ST * form * Z_1; zero iff the chart parametrises isotropic subspaces."""
    if not f.is_isotropic:
        raise KindMismatch("isotropy residual needs an isotropic flag type")
    return supertranspose(z1) * form_matrix(f) * z1


def _distinguished_level1(f: FlagType, prefix: str):
    """Reduced level-1 matrix of the distinguished chart, plus its free coordinates."""
    k0, l0, k1, l1 = f.k[0], f.l[0], f.k[1], f.l[1]
    rows_p = SuperMatrix.block_parities(k0, l0)
    cols_p = SuperMatrix.block_parities(k1, l1)
    ent = [[ZERO] * (k1 + l1) for _ in range(k0 + l0)]
    free: List[Var] = []

    def new(tag, par, ri, cj):
        v = var(_coord_name(prefix, 1, tag, ri, cj), par)
        free.append(v)
        return P(v)

    if f.kind == EVEN_ISO:
        if k0 != 2 * k1:
            raise UnsupportedChart("charts for odd orthogonal dimension are not supported")
        # even rows 0..k1-1: X skew | Xi ; rows k1..2k1-1: E | 0
        for i in range(k1):
            for j in range(i + 1, k1):
                x = new("x", EVEN, i, j)
                ent[i][j] = x
                ent[j][i] = -x
        for i in range(k1):
            for j in range(l1):
                ent[i][k1 + j] = new("xi", ODD, i, j)
        for i in range(k1):
            ent[k1 + i][i] = ONE
        # odd rows 0..l1-1: -Xi^t | Y sym ; rows l1..2l1-1: 0 | E
        for i in range(l1):
            for j in range(k1):
                ent[k0 + i][j] = -ent[j][k1 + i]
        for i in range(l1):
            for j in range(i, l1):
                y = new("y", EVEN, i, j)
                ent[k0 + i][k1 + j] = y
                ent[k0 + j][k1 + i] = y
        for i in range(l1):
            ent[k0 + l1 + i][k1 + i] = ONE
    else:
        n = k0
        # even rows 0..l1-1: X (l1 x k1) | Xi sym (l1 x l1); rows l1..n-1: E_k1 | 0
        for i in range(l1):
            for j in range(k1):
                ent[i][j] = new("x", EVEN, i, j)
        for i in range(l1):
            for j in range(i, l1):
                xi = new("xi", ODD, i, j)
                ent[i][k1 + j] = xi
                ent[j][k1 + i] = xi
        for i in range(k1):
            ent[l1 + i][i] = ONE
        # odd rows 0..l1-1: 0 | E_l1 ; rows l1..n-1: Eta skew (k1 x k1) | -X^t
        for i in range(l1):
            ent[n + i][k1 + i] = ONE
        for i in range(k1):
            for j in range(i + 1, k1):
                e = new("eta", ODD, l1 + i, j)
                ent[n + l1 + i][j] = e
                ent[n + l1 + j][i] = -e
        for i in range(k1):
            for j in range(l1):
                ent[n + l1 + i][k1 + j] = -ent[j][i]
    return SuperMatrix(rows_p, cols_p, ent), free


def _swap_matrix(f: FlagType, idx1) -> Tuple[List[Tuple[int, int]], SuperMatrix]:
    """Signed permutation of the ambient space taking the distinguished level-1 index to ``idx1``.

    Returns the row map as a list of (target_row, sign) per source row.
    """
    k0, l0, k1, l1 = f.k[0], f.l[0], f.k[1], f.l[1]
    size = k0 + l0
    rowmap = [(r, 1) for r in range(size)]
    i0, i1 = idx1
    if f.kind == EVEN_ISO:
        s, n = k1, l1
        for i in range(s):
            if i in i0:  # pair swapped: identity row s+i goes to row i
                rowmap[i] = (s + i, 1)
                rowmap[s + i] = (i, 1)
        for j in range(n):
            if j in i1:
                a, b = k0 + j, k0 + n + j
                # e_a -> -e_b ... chosen so the symplectic form is preserved
                rowmap[a] = (b, 1)
                rowmap[b] = (a, -1)
    else:
        n = k0
        dist0 = list(range(n - k1, n))
        comp_dist = [j for j in range(n) if j not in dist0]
        comp_new = [j for j in range(n) if j not in i0]
        sigma = {}
        for a, b in zip(dist0, i0):
            sigma[a] = b
        for a, b in zip(comp_dist, comp_new):
            sigma[a] = b
        for a in range(n):
            rowmap[a] = (sigma[a], 1)
            rowmap[n + a] = (n + sigma[a], 1)
    return rowmap


def _apply_rowmap(z: SuperMatrix, rowmap) -> SuperMatrix:
    ent = [None] * len(z.entries)
    for r, (t, sign) in enumerate(rowmap):
        ent[t] = [x if sign > 0 else -x for x in z.entries[r]]
    return SuperMatrix(z.row_parities, z.col_parities, ent)


def is_supported_isotropic_index(f: FlagType, index: ChartIndex) -> bool:
    try:
        return index.levels[0] in _isotropic_level1_indices(f)
    except UnsupportedChart:
        return False


def reduce_isotropic_chart(f: FlagType, index: ChartIndex, prefix: str = "") -> Chart:
    """Chart of an isotropic flag: level 1 reduced, deeper levels plain.

    Supported indices are the images of the distinguished index under the
    signed swaps of dual basis pairs (which preserve the form).  The free
    coordinates are named after their position in the chart's own matrix.
    """
    if not f.is_isotropic:
        raise KindMismatch("reduce_isotropic_chart needs an isotropic flag type")
    _check_index(f, index)
    if not is_supported_isotropic_index(f, index):
        raise UnsupportedChart(f"chart {index} is outside the supported swap orbit")
    k0, l0, k1, l1 = f.k[0], f.l[0], f.k[1], f.l[1]
    zd, free_d = _distinguished_level1(f, prefix="_d" + prefix)
    rowmap = _swap_matrix(f, index.levels[0])
    zp = _apply_rowmap(zd, rowmap)
    c = zp.rows(_row_ids(k0, *index.levels[0]))
    c = SuperMatrix(c.row_parities, zp.col_parities, c.entries)
    z1 = zp * smat_inverse(c)  # c is a signed permutation
    # rename free coordinates after their first position in z1
    raw = build_raw_chart(f, index, prefix)
    raw_at = {pos: v for v, pos in raw.positions.items() if pos[0] == 0}
    rename = {}
    positions = {}
    for r, row in enumerate(z1.entries):
        for col, x in enumerate(row):
            if len(x.terms) != 1:
                continue
            (key, coeff), = x.terms.items()
            e, o = key
            ids = list(e[0::2]) + list(o)
            if len(ids) != 1 or (e and e[1] != 1) or coeff not in (1, -1):
                continue
            dv = next(v for v in free_d if v.id == ids[0])
            if dv in rename:
                continue
            nv = raw_at[(0, r, col)]
            rename[dv] = P(nv) if coeff == 1 else -P(nv)
            positions[nv] = (0, r, col)
    if len(rename) != len(free_d):
        raise UnsupportedChart("could not locate every free coordinate")  # pragma: no cover
    z1 = z1.substitute(rename)
    coords = sorted(positions, key=lambda v: positions[v])
    dependent = {}
    for v, pos in raw.positions.items():
        if pos[0] == 0 and v not in positions:
            dependent[v] = z1.entries[pos[1]][pos[2]]
    mats = [z1]
    for s in range(2, f.r + 1):
        i0, i1 = index.levels[s - 1]
        z, cs, p = _plain_level_matrix(prefix, s, f.k[s - 1], f.k[s], f.l[s - 1], f.l[s], i0, i1)
        mats.append(z)
        coords += cs
        positions.update(p)
    return Chart(f, index, mats, coords, positions, dependent, prefix=prefix)


def expected_isotropic_free_counts(f: FlagType) -> Tuple[int, int]:
    k1, l1 = f.k[1], f.l[1]
    if f.kind == EVEN_ISO:
        return k1 * (k1 - 1) // 2 + l1 * (l1 + 1) // 2, k1 * l1
    return k1 * l1, l1 * (l1 + 1) // 2 + k1 * (k1 - 1) // 2


def plain_coordinate_counts(f: FlagType) -> Tuple[int, int]:
    even = odd = 0
    for s in range(1, f.r + 1):
        k0, k1, l0, l1 = f.k[s - 1], f.k[s], f.l[s - 1], f.l[s]
        even += (k0 - k1) * k1 + (l0 - l1) * l1
        odd += (k0 - k1) * l1 + (l0 - l1) * k1
    return even, odd


# ---------------------------------------------------------------------------
# hypothesis predicates


def functions_predicate(f: FlagType) -> str:
    """Which branch of the constant-functions theorem applies.

    The excluded families are read on the tail ``(k_1..k_r | l_1..l_r)``:
    some level ``j >= 1`` equals ``m|0`` or ``0|n``.  Those flags carry the
    Grassmann algebra on ``mn`` generators as global functions.
    """
    m, n = f.m, f.n
    for j in range(1, f.r + 1):
        if f.k[j] == m and f.l[j] == 0 and m * n > 0:
            return "grassmann-algebra"
        if f.k[j] == 0 and f.l[j] == n and m * n > 0:
            return "grassmann-algebra"
    return "constant-functions"


def gl_hypotheses_predicate(f: FlagType) -> List[str]:
    """Violated restriction lines of the gl-flag theorem (empty list = satisfied)."""
    k, l, r = f.k, f.l, f.r
    m, n = f.m, f.n
    bad = []
    for i in range(2, r + 1):
        if (k[i], l[i]) == (k[i - 1], 0):
            bad.append(f"(k_{i},l_{i}) = (k_{i - 1},0)")
        if (k[i], l[i]) == (0, l[i - 1]):
            bad.append(f"(k_{i},l_{i}) = (0,l_{i - 1})")
    for i in range(1, r + 1):
        t = (k[i - 1], k[i], l[i - 1], l[i])
        if t == (1, 0, l[i - 1], l[i - 1] - 1):
            bad.append(f"(k_{i - 1},k_{i}|l_{i - 1},l_{i}) = (1,0|l_{i - 1},l_{i - 1}-1)")
        if t == (1, 1, l[i - 1], 1):
            bad.append(f"(k_{i - 1},k_{i}|l_{i - 1},l_{i}) = (1,1|l_{i - 1},1)")
        if t == (k[i - 1], k[i - 1] - 1, 1, 0):
            bad.append(f"(k_{i - 1},k_{i}|l_{i - 1},l_{i}) = (k_{i - 1},k_{i - 1}-1|1,0)")
        if t == (k[i - 1], 1, 1, 1):
            bad.append(f"(k_{i - 1},k_{i}|l_{i - 1},l_{i}) = (k_{i - 1},1|1,1)")
    if all(x == 0 for x in k[1:]) and l[1] == n:
        bad.append("k|l = (0,...,0|n,l_2,...,l_r)")
    if k[1] == m and all(x == 0 for x in l[1:]):
        bad.append("k|l = (m,k_2,...,k_r|0,...,0)")
    return bad


__all__ = [
    "PLAIN", "EVEN_ISO", "ODD_ISO", "FlagType", "validate_flag_type", "ChartIndex",
    "enumerate_charts", "distinguished_index", "same_component", "chart_count", "Chart",
    "build_chart", "build_raw_chart", "act", "transition", "transition_matrices",
    "random_point", "transition_at_random_point", "form_matrix", "isotropy_residual",
    "reduce_isotropic_chart", "expected_isotropic_free_counts", "plain_coordinate_counts",
    "functions_predicate", "gl_hypotheses_predicate", "level_rows", "orthogonal_swaps",
    "is_supported_isotropic_index", "cocycle_check", "chart_triples",
]
