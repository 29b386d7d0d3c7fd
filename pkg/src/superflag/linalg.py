"""Exact sparse linear algebra over Q on top of the row-reduction kernel."""
from __future__ import annotations

from typing import Dict, List, Sequence

from superflag import kernels
from superflag.supercalc import Q

SparseVec = Dict[int, object]


def rref(rows: Sequence[SparseVec]):
    """Reduced row echelon form; returns ``(rows, pivots)``."""
    return kernels.sparse_rref([dict(r) for r in rows])


def rank(rows: Sequence[SparseVec]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[SparseVec], ncols: int) -> List[SparseVec]:
    """Basis of ``{c : sum_j row[j] c_j = 0 for every row}``, one vector per free column."""
    red, pivots = rref(rows)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = {f: Q(1)}
        for p, row in zip(pivots, red):
            c = row.get(f)
            if c:
                v[p] = -c
        basis.append(v)
    return basis


class EchelonSpace:
    """Incrementally maintained row space with canonical membership tests."""

    def __init__(self):
        self._rows: Dict[int, SparseVec] = {}

    def __len__(self):
        return len(self._rows)

    def reduce(self, vec: SparseVec) -> SparseVec:
        r = {c: v for c, v in vec.items() if v}
        for p in sorted(self._rows):
            f = r.get(p)
            if not f:
                continue
            for c, v in self._rows[p].items():
                nv = r.get(c, 0) - f * v
                if nv:
                    r[c] = nv
                else:
                    r.pop(c, None)
        return r

    def add(self, vec: SparseVec) -> bool:
        """Insert ``vec``; returns False when it was already in the span."""
        r = self.reduce(vec)
        if not r:
            return False
        p = min(r)
        inv = 1 / r[p]
        r = {c: v * inv for c, v in r.items()}
        # keep fully reduced: clear the new pivot from older rows
        for q, row in self._rows.items():
            f = row.get(p)
            if f:
                for c, v in r.items():
                    nv = row.get(c, 0) - f * v
                    if nv:
                        row[c] = nv
                    else:
                        row.pop(c, None)
        self._rows[p] = r
        return True

    def contains(self, vec: SparseVec) -> bool:
        return not self.reduce(vec)

    def rows(self) -> List[SparseVec]:
        return [self._rows[p] for p in sorted(self._rows)]
