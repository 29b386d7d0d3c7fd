"""Matrix Lie superalgebras gl(m|n), osp(m|2n) and pisp(n).

Bases enumerate the free parameters of the block forms, block by block and
then by (row, col).  Each basis matrix owns a *primary position*: the entry
holding its free parameter, which no other basis matrix touches.  Reading
those positions gives coordinates; reconstructing and comparing makes the
membership test exact.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from superflag.errors import NonHomogeneous, ShapeMismatch
from superflag.linalg import nullspace
from superflag.supercalc import (
    EVEN,
    ODD,
    ONE,
    Q,
    SuperMatrix,
    P,
    supertranspose,
)

Entry = Tuple[int, int, int]  # row, col, sign


@dataclass(frozen=True)
class BilinearFormMatrix:
    kind: str  # "even-symmetric" or "odd-skew"
    matrix: SuperMatrix


@dataclass
class AlgebraPresentation:
    name: str
    params: Tuple[int, ...]
    parities: Tuple[int, ...]  # row/column parities of the matrices
    basis: List[Tuple[SuperMatrix, int]]
    primary: List[Tuple[int, int]]
    labels: List[str]
    form: Optional[BilinearFormMatrix] = None
    structure_constants: Dict[Tuple[int, int], Dict[int, object]] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.parities)

    def __len__(self):
        return len(self.basis)

    def parity_of(self, k: int) -> int:
        return self.basis[k][1]

    def coordinates(self, x: SuperMatrix) -> Optional[Dict[int, object]]:
        """Coefficients of ``x`` in the basis, or None if ``x`` is outside the span."""
        coeffs = {}
        for k, (i, j) in enumerate(self.primary):
            c = x.entries[i][j].constant_term()
            if c:
                coeffs[k] = c
        if self.combine(coeffs) != x:
            return None
        return coeffs

    def combine(self, coeffs: Dict[int, object]) -> SuperMatrix:
        n = self.size
        rows = [[Q(0)] * n for _ in range(n)]
        for k, c in coeffs.items():
            m = self.basis[k][0]
            for i in range(n):
                for j in range(n):
                    v = m.entries[i][j].constant_term()
                    if v:
                        rows[i][j] += c * v
        return SuperMatrix.from_numbers(self.parities, self.parities, rows)

    def bracket_coords(self, i: int, j: int) -> Dict[int, object]:
        key = (i, j)
        if key not in self.structure_constants:
            b = bracket(self.basis[i][0], self.basis[j][0])
            c = self.coordinates(b)
            if c is None:
                raise ValueError(f"bracket of basis {i},{j} leaves the span")
            self.structure_constants[key] = c
        return self.structure_constants[key]

    def compute_structure_constants(self):
        for i in range(len(self)):
            for j in range(len(self)):
                self.bracket_coords(i, j)
        return self.structure_constants

    def to_json_dict(self) -> dict:
        self.compute_structure_constants()
        basis = []
        for (m, p), lab in zip(self.basis, self.labels):
            entries = [[i, j, str(m.entries[i][j].constant_term())]
                       for i in range(self.size) for j in range(self.size)
                       if m.entries[i][j].terms]
            basis.append({"label": lab, "parity": p, "entries": entries})
        sc = [{"i": i, "j": j, "coeffs": [[k, str(v)] for k, v in sorted(c.items())]}
              for (i, j), c in sorted(self.structure_constants.items()) if c]
        even, odd = superdimension(self)
        return {
            "name": self.name,
            "params": list(self.params),
            "superdimension": [even, odd],
            "parities": list(self.parities),
            "basis": basis,
            "structure_constants": sc,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


# ---------------------------------------------------------------------------
# helpers


def _matrix(parities, entries: Sequence[Entry]) -> SuperMatrix:
    n = len(parities)
    rows = [[0] * n for _ in range(n)]
    for i, j, s in entries:
        rows[i][j] += s
    return SuperMatrix.from_numbers(parities, parities, rows)


class _Builder:
    def __init__(self, parities):
        self.parities = tuple(parities)
        self.basis: List[Tuple[SuperMatrix, int]] = []
        self.primary: List[Tuple[int, int]] = []
        self.labels: List[str] = []

    def add(self, label: str, entries: Sequence[Entry]):
        i, j, _ = entries[0]
        parity = self.parities[i] ^ self.parities[j]
        self.basis.append((_matrix(self.parities, entries), parity))
        self.primary.append((i, j))
        self.labels.append(label)

    def build(self, name, params, form=None) -> AlgebraPresentation:
        return AlgebraPresentation(name, tuple(params), self.parities, self.basis,
                                   self.primary, self.labels, form)


def gamma_matrix(m: int, n: int) -> SuperMatrix:
    """Gram matrix of the even symmetric form on C^{m|2n}."""
    s, odd_m = divmod(m, 2)
    pars = SuperMatrix.block_parities(m, 2 * n)
    e = []
    for i in range(s):
        e += [(i, s + i, 1), (s + i, i, 1)]
    if odd_m:
        e.append((2 * s, 2 * s, 1))
    for j in range(n):
        e += [(m + j, m + n + j, 1), (m + n + j, m + j, -1)]
    return _matrix(pars, e)


def upsilon_matrix(n: int) -> SuperMatrix:
    """Gram matrix of the odd skew form on C^{n|n}."""
    pars = SuperMatrix.block_parities(n, n)
    e = []
    for j in range(n):
        e += [(j, n + j, 1), (n + j, j, 1)]
    return _matrix(pars, e)


# ---------------------------------------------------------------------------
# constructors


def build_gl(m: int, n: int) -> AlgebraPresentation:
    if m < 0 or n < 0 or m + n < 1:
        raise ValueError("need m + n >= 1")
    b = _Builder(SuperMatrix.block_parities(m, n))
    for a in range(m + n):
        for c in range(m + n):
            b.add(f"E{a + 1},{c + 1}", [(a, c, 1)])
    return b.build("gl", (m, n))


def build_osp(m: int, n2: int) -> AlgebraPresentation:
    """osp(m|n2) from the displayed block forms (m = 2s or 2s+1, n2 = 2n)."""
    if m < 1 or n2 < 0 or n2 % 2:
        raise ValueError("need m >= 1 and even n2 >= 0")
    n = n2 // 2
    s, odd_m = divmod(m, 2)
    b = _Builder(SuperMatrix.block_parities(m, n2))
    # row offsets of the blocks
    A1, A2 = 0, s
    G = 2 * s  # middle row when m is odd
    B1, B2 = m, m + n
    # even: so part
    for i in range(s):
        for j in range(s):
            b.add(f"A11[{i + 1},{j + 1}]", [(A1 + i, A1 + j, 1), (A2 + j, A2 + i, -1)])
    for i in range(s):
        for j in range(i + 1, s):
            b.add(f"A12[{i + 1},{j + 1}]", [(A1 + i, A2 + j, 1), (A1 + j, A2 + i, -1)])
    for i in range(s):
        for j in range(i + 1, s):
            b.add(f"A21[{i + 1},{j + 1}]", [(A2 + i, A1 + j, 1), (A2 + j, A1 + i, -1)])
    if odd_m:
        for i in range(s):
            b.add(f"G1[{i + 1}]", [(A1 + i, G, 1), (G, A2 + i, -1)])
        for i in range(s):
            b.add(f"G2[{i + 1}]", [(A2 + i, G, 1), (G, A1 + i, -1)])
    # even: sp part
    for i in range(n):
        for j in range(n):
            b.add(f"B11[{i + 1},{j + 1}]", [(B1 + i, B1 + j, 1), (B2 + j, B2 + i, -1)])
    for i in range(n):
        for j in range(i, n):
            e = [(B1 + i, B2 + j, 1)] + ([(B1 + j, B2 + i, 1)] if i != j else [])
            b.add(f"B12[{i + 1},{j + 1}]", e)
    for i in range(n):
        for j in range(i, n):
            e = [(B2 + i, B1 + j, 1)] + ([(B2 + j, B1 + i, 1)] if i != j else [])
            b.add(f"B21[{i + 1},{j + 1}]", e)
    # odd part: upper-right blocks as displayed; the lower-left blocks carry the
    # opposite sign so the algebra is the tangent algebra of the group equation
    # (see tests/test_fundfields.py for why the displayed sign cannot act)
    def add_odd(label, entries):
        b.add(label, [(i, j, -e if i >= m else e) for i, j, e in entries])

    for i in range(s):
        for j in range(n):
            add_odd(f"C11[{i + 1},{j + 1}]", [(A1 + i, B1 + j, 1), (B2 + j, A2 + i, 1)])
    for i in range(s):
        for j in range(n):
            add_odd(f"C12[{i + 1},{j + 1}]", [(A1 + i, B2 + j, 1), (B1 + j, A2 + i, -1)])
    for i in range(s):
        for j in range(n):
            add_odd(f"C21[{i + 1},{j + 1}]", [(A2 + i, B1 + j, 1), (B2 + j, A1 + i, 1)])
    for i in range(s):
        for j in range(n):
            add_odd(f"C22[{i + 1},{j + 1}]", [(A2 + i, B2 + j, 1), (B1 + j, A1 + i, -1)])
    if odd_m:
        for j in range(n):
            add_odd(f"G3[{j + 1}]", [(G, B1 + j, 1), (B2 + j, G, 1)])
        for j in range(n):
            add_odd(f"G4[{j + 1}]", [(G, B2 + j, 1), (B1 + j, G, -1)])
    form = BilinearFormMatrix("even-symmetric", gamma_matrix(m, n))
    return b.build("osp", (m, n2), form)


def build_pisp(n: int) -> AlgebraPresentation:
    if n < 1:
        raise ValueError("need n >= 1")
    b = _Builder(SuperMatrix.block_parities(n, n))
    for i in range(n):
        for j in range(n):
            b.add(f"A[{i + 1},{j + 1}]", [(i, j, 1), (n + j, n + i, -1)])
    for i in range(n):
        for j in range(i, n):
            e = [(i, n + j, 1)] + ([(j, n + i, 1)] if i != j else [])
            b.add(f"B[{i + 1},{j + 1}]", e)
    for i in range(n):
        for j in range(i + 1, n):
            b.add(f"C[{i + 1},{j + 1}]", [(n + i, j, 1), (n + j, i, -1)])
    form = BilinearFormMatrix("odd-skew", upsilon_matrix(n))
    return b.build("pisp", (n,), form)


def build_algebra(name: str, params: Sequence[int]) -> AlgebraPresentation:
    if name == "gl":
        return build_gl(*params)
    if name == "osp":
        return build_osp(*params)
    if name == "pisp":
        return build_pisp(*params)
    raise ValueError(f"unknown algebra {name!r}")


# ---------------------------------------------------------------------------
# operations


def bracket(x: SuperMatrix, y: SuperMatrix) -> SuperMatrix:
    """[X, Y] = XY - (-1)^{p(X)p(Y)} YX for homogeneous X, Y."""
    if x.shape != y.shape or x.row_parities != y.row_parities:
        raise ShapeMismatch("bracket needs matrices of the same format")
    px, py = x.parity(), y.parity()
    if px is None or py is None:
        raise NonHomogeneous("bracket needs homogeneous matrices")
    xy, yx = x * y, y * x
    return xy + yx if (px and py) else xy - yx


def superdimension(g: AlgebraPresentation) -> Tuple[int, int]:
    odd = sum(p for _, p in g.basis)
    return len(g.basis) - odd, odd


# Sign in front of form*x in the infinitesimal invariance residual, per form
# kind and parity of x.  Fixed so every basis element has zero residual; the
# regression test in tests/test_liesuperalg.py pins it.
INVARIANCE_SIGN = {
    "even-symmetric": {EVEN: 1, ODD: -1},
    "odd-skew": {EVEN: 1, ODD: 1},
}


def check_invariance(x: SuperMatrix, form: BilinearFormMatrix, signs=None) -> SuperMatrix:
    """Residual x^ST * form + sign_p * form * x; zero iff x preserves the form."""
    if x.shape != form.matrix.shape:
        raise ShapeMismatch("form and matrix sizes differ")
    p = x.homogeneous_parity()
    sign = (signs or INVARIANCE_SIGN[form.kind])[p]
    left = supertranspose(x) * form.matrix
    right = form.matrix * x
    return left + right if sign > 0 else left - right


def graded_jacobi_residual(x: SuperMatrix, y: SuperMatrix, z: SuperMatrix) -> SuperMatrix:
    """[x,[y,z]] - [[x,y],z] - (-1)^{p(x)p(y)} [y,[x,z]]."""
    px, py = x.homogeneous_parity(), y.homogeneous_parity()
    lhs = bracket(x, bracket(y, z))
    r1 = bracket(bracket(x, y), z)
    r2 = bracket(y, bracket(x, z))
    return lhs - r1 + r2 if (px and py) else lhs - r1 - r2


def _sc_bracket(g: AlgebraPresentation, a: Dict[int, object], b: Dict[int, object]) -> Dict[int, object]:
    out: Dict[int, object] = {}
    for i, ca in a.items():
        for j, cb in b.items():
            for k, c in g.bracket_coords(i, j).items():
                v = out.get(k, 0) + ca * cb * c
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
    return out


def jacobi_residual_coords(g: AlgebraPresentation, i: int, j: int, k: int) -> Dict[int, object]:
    """The graded Jacobi residual of three basis elements, from structure constants alone."""
    x, y, z = {i: 1}, {j: 1}, {k: 1}
    sign = -1 if g.parity_of(i) and g.parity_of(j) else 1
    out = _sc_bracket(g, x, _sc_bracket(g, y, z))
    for term, c in ((_sc_bracket(g, _sc_bracket(g, x, y), z), -1), (_sc_bracket(g, y, _sc_bracket(g, x, z)), -sign)):
        for key, v in term.items():
            w = out.get(key, 0) + c * v
            if w:
                out[key] = w
            else:
                out.pop(key, None)
    return out


def center(g: AlgebraPresentation) -> List[SuperMatrix]:
    """Basis of the center, as the exact nullspace of the adjoint action.

    The center is graded, so each parity is solved separately.
    """
    out = []
    nb = len(g)
    for parity in (EVEN, ODD):
        idx = [k for k in range(nb) if g.parity_of(k) == parity]
        if not idx:
            continue
        col = {k: c for c, k in enumerate(idx)}
        rows: Dict[Tuple[int, int], Dict[int, object]] = {}
        for k in idx:
            for j in range(nb):
                for l, v in g.bracket_coords(k, j).items():
                    rows.setdefault((j, l), {})[col[k]] = v
        for vec in nullspace(list(rows.values()), len(idx)):
            out.append(g.combine({idx[c]: v for c, v in vec.items()}))
    return out


def is_center_element(g: AlgebraPresentation, x: SuperMatrix) -> bool:
    return all(bracket(x, b).is_zero() for b, _ in g.basis)


def identity_of(g: AlgebraPresentation) -> SuperMatrix:
    return SuperMatrix.identity(g.parities)


__all__ = [
    "AlgebraPresentation", "BilinearFormMatrix", "build_gl", "build_osp", "build_pisp",
    "build_algebra", "bracket", "superdimension", "check_invariance", "center",
    "gamma_matrix", "upsilon_matrix", "graded_jacobi_residual", "INVARIANCE_SIGN",
    "identity_of", "is_center_element", "jacobi_residual_coords",
]
