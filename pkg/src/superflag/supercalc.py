"""Exact supercommutative polynomial and matrix calculus over the rationals.

Even variables commute; odd generators anticommute and square to zero.
Monomials are stored as ``(even, odd)`` keys (see ``_pykernels``) with the
odd word sorted by variable id, so every polynomial has a unique canonical
form and equality is dictionary equality.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from superflag import kernels
from superflag.errors import (
    NonHomogeneous,
    NonNilpotentRemainder,
    NotNumericCore,
    ParityMismatch,
    ShapeMismatch,
    ZeroDenominator,
)

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    from fractions import Fraction as Q

EVEN = 0
ODD = 1

Key = Tuple[tuple, tuple]
_ONE_KEY: Key = ((), ())


def rational(x, y=1):
    """Exact rational ``x/y`` in lowest terms."""
    return Q(x, y) if y != 1 else Q(x)


# ---------------------------------------------------------------------------
# variables


@dataclass(frozen=True)
class Var:
    id: int
    name: str
    parity: int

    def __repr__(self):
        return self.name

    @property
    def is_odd(self):
        return self.parity == ODD


_VARS: list = []
_BY_NAME: Dict[str, Var] = {}


def var(name: str, parity: int) -> Var:
    """Get or create the variable ``name``; ids follow creation order."""
    v = _BY_NAME.get(name)
    if v is not None:
        if v.parity != parity:
            raise ParityMismatch(f"{name} already declared with parity {v.parity}")
        return v
    v = Var(len(_VARS), name, parity)
    _VARS.append(v)
    _BY_NAME[name] = v
    return v


def even_var(name: str) -> Var:
    return var(name, EVEN)


def odd_var(name: str) -> Var:
    return var(name, ODD)


def var_by_id(i: int) -> Var:
    return _VARS[i]


def lookup_var(name: str) -> Optional[Var]:
    return _BY_NAME.get(name)


# ---------------------------------------------------------------------------
# polynomials


def _key_parity(key: Key) -> int:
    return len(key[1]) & 1


class SuperPolynomial:
    """Element of Q[x_1..x_p] (x) Lambda(xi_1..xi_q).

    Treated as immutable; ``terms`` maps monomial keys to nonzero rationals.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Optional[Dict[Key, object]] = None, _clean: bool = False):
        if terms is None:
            terms = {}
        elif not _clean:
            terms = {k: Q(c) for k, c in terms.items() if c}
        self.terms = terms
        self._hash = None

    # construction -----------------------------------------------------------
    @classmethod
    def const(cls, c) -> "SuperPolynomial":
        c = Q(c)
        return cls({_ONE_KEY: c} if c else {}, _clean=True)

    @classmethod
    def of(cls, v: Var, power: int = 1) -> "SuperPolynomial":
        if v.parity == ODD:
            if power == 0:
                return ONE
            if power > 1:
                return ZERO
            return cls({((), (v.id,)): Q(1)}, _clean=True)
        if power == 0:
            return ONE
        return cls({((v.id, power), ()): Q(1)}, _clean=True)

    @staticmethod
    def coerce(x) -> "SuperPolynomial":
        if isinstance(x, SuperPolynomial):
            return x
        if isinstance(x, Var):
            return SuperPolynomial.of(x)
        return SuperPolynomial.const(x)

    # queries ----------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    @property
    def parity(self) -> Optional[int]:
        """0 or 1 for homogeneous polynomials (zero counts as even), else None."""
        ps = {_key_parity(k) for k in self.terms}
        if not ps:
            return EVEN
        if len(ps) == 1:
            return ps.pop()
        return None

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and _ONE_KEY in self.terms)

    def constant_term(self):
        return self.terms.get(_ONE_KEY, Q(0))

    def has_odd(self) -> bool:
        return any(k[1] for k in self.terms)

    def has_even_vars(self) -> bool:
        return any(k[0] for k in self.terms)

    def body(self) -> "SuperPolynomial":
        """Drop every monomial that contains an odd generator."""
        return SuperPolynomial({k: c for k, c in self.terms.items() if not k[1]}, _clean=True)

    def variables(self) -> set:
        out = set()
        for e, o in self.terms:
            out.update(e[0::2])
            out.update(o)
        return {_VARS[i] for i in out}

    def even_degree(self) -> int:
        return max((sum(e[1::2]) for e, _ in self.terms), default=0)

    # arithmetic -------------------------------------------------------------
    def __add__(self, other):
        other = SuperPolynomial.coerce(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        return SuperPolynomial(kernels.poly_axpy(dict(self.terms), other.terms, 1), _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return SuperPolynomial({k: -c for k, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        other = SuperPolynomial.coerce(other)
        if not other.terms:
            return self
        return SuperPolynomial(kernels.poly_axpy(dict(self.terms), other.terms, -1), _clean=True)

    def __rsub__(self, other):
        return SuperPolynomial.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, SuperPolynomial):
            if not self.terms or not other.terms:
                return ZERO
            return SuperPolynomial(kernels.poly_mul(self.terms, other.terms), _clean=True)
        if isinstance(other, Var):
            return self * SuperPolynomial.of(other)
        return self.scale(other)

    def __rmul__(self, other):
        # scalars and variables sit on the left
        return SuperPolynomial.coerce(other) * self

    def scale(self, c) -> "SuperPolynomial":
        c = Q(c)
        if not c:
            return ZERO
        return SuperPolynomial({k: v * c for k, v in self.terms.items()}, _clean=True)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out, base = ONE, self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __eq__(self, other):
        if not isinstance(other, SuperPolynomial):
            try:
                other = SuperPolynomial.coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # printing ---------------------------------------------------------------
    def __repr__(self):
        return f"SuperPolynomial({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for key in sorted(self.terms, key=_print_order):
            c = self.terms[key]
            mono = monomial_str(key)
            if not mono:
                s = str(c)
            elif c == 1:
                s = mono
            elif c == -1:
                s = "-" + mono
            else:
                s = f"{c}*{mono}"
            parts.append(s)
        return " + ".join(parts).replace("+ -", "- ")


def _print_order(key: Key):
    e, o = key
    return (sum(e[1::2]) + len(o), [(_VARS[i].name, x) for i, x in zip(e[0::2], e[1::2])],
            [_VARS[i].name for i in o])


def monomial_str(key: Key) -> str:
    e, o = key
    fs = []
    for i, x in zip(e[0::2], e[1::2]):
        fs.append(_VARS[i].name if x == 1 else f"{_VARS[i].name}^{x}")
    fs.extend(_VARS[i].name for i in o)
    return "*".join(fs)


ZERO = SuperPolynomial({}, _clean=True)
ONE = SuperPolynomial({_ONE_KEY: Q(1)}, _clean=True)


def P(x) -> SuperPolynomial:
    """Shorthand coercion to SuperPolynomial."""
    return SuperPolynomial.coerce(x)


def poly_arith(a: SuperPolynomial, b: SuperPolynomial, kind: str) -> SuperPolynomial:
    if kind == "add":
        return a + b
    if kind == "mul":
        return a * b
    raise ValueError(f"unknown kind {kind!r}")


def poly_sum(items: Iterable[SuperPolynomial]) -> SuperPolynomial:
    acc: dict = {}
    for p in items:
        kernels.poly_axpy(acc, p.terms, 1)
    return SuperPolynomial(acc, _clean=True)


# ---------------------------------------------------------------------------
# derivatives and substitution


def odd_derivative(p: SuperPolynomial, v: Var) -> SuperPolynomial:
    """Left derivative: move ``v`` to the front (Koszul sign), then delete it."""
    if v.parity != ODD:
        raise ParityMismatch(f"{v.name} is not odd")
    out = {}
    vid = v.id
    for (e, o), c in p.terms.items():
        if vid in o:
            k = o.index(vid)
            out[(e, o[:k] + o[k + 1:])] = -c if k & 1 else c
    return SuperPolynomial(out, _clean=True)


def even_derivative(p: SuperPolynomial, v: Var) -> SuperPolynomial:
    if v.parity != EVEN:
        raise ParityMismatch(f"{v.name} is not even")
    out: dict = {}
    vid = v.id
    for (e, o), c in p.terms.items():
        ids = e[0::2]
        if vid not in ids:
            continue
        k = ids.index(vid)
        x = e[2 * k + 1]
        ne = e[:2 * k] + e[2 * k + 2:] if x == 1 else e[:2 * k + 1] + (x - 1,) + e[2 * k + 2:]
        key = (ne, o)
        val = out.get(key, 0) + c * x
        if val:
            out[key] = val
        else:
            out.pop(key, None)
    return SuperPolynomial(out, _clean=True)


def derivative(p: SuperPolynomial, v: Var) -> SuperPolynomial:
    return odd_derivative(p, v) if v.parity == ODD else even_derivative(p, v)


def substitute(p: SuperPolynomial, bindings: Mapping[Var, object]) -> SuperPolynomial:
    """Simultaneous substitution of variables by polynomials.

    Odd factors are replaced in their stored order, so the Koszul signs of
    the original monomial are respected.
    """
    if not bindings:
        return p
    return _substitute_compiled(p, _compile_bindings(bindings), {})


def _compile_bindings(bindings: Mapping[Var, object]) -> Dict[int, SuperPolynomial]:
    bind: Dict[int, SuperPolynomial] = {}
    for v, val in bindings.items():
        val = SuperPolynomial.coerce(val)
        vp = val.parity
        if val.terms and vp != v.parity:
            raise ParityMismatch(f"cannot bind {v.name} (parity {v.parity}) to {val}")
        bind[v.id] = val
    return bind


def _substitute_compiled(p: SuperPolynomial, bind: Dict[int, SuperPolynomial],
                         powers: Dict[Tuple[int, int], SuperPolynomial]) -> SuperPolynomial:
    """Substitution with validated bindings; ``powers`` caches bound powers across calls."""
    if not p.terms or not bind:
        return p

    def power(i, x):
        k = (i, x)
        r = powers.get(k)
        if r is None:
            r = bind[i] if x == 1 else power(i, x - 1) * bind[i]
            powers[k] = r
        return r

    acc: dict = {}
    for (e, o), c in p.terms.items():
        # untouched part of the monomial stays as a single key
        keep_e = []
        sub_factors = []
        for i, x in zip(e[0::2], e[1::2]):
            if i in bind:
                sub_factors.append(power(i, x))
            else:
                keep_e.extend((i, x))
        if not any(i in bind for i in o):
            term = {(tuple(keep_e), o): c}
            for f in sub_factors:
                term = kernels.poly_mul(term, f.terms)
                if not term:
                    break
            kernels.poly_axpy(acc, term, 1)
            continue
        term = {(tuple(keep_e), ()): c}
        for f in sub_factors:
            term = kernels.poly_mul(term, f.terms)
            if not term:
                break
        for i in o:
            if not term:
                break
            f = bind[i].terms if i in bind else {((), (i,)): Q(1)}
            term = kernels.poly_mul(term, f)
        if term:
            kernels.poly_axpy(acc, term, 1)
    return SuperPolynomial(acc, _clean=True)


# ---------------------------------------------------------------------------
# division by purely even polynomials


def _even_order_key(e: tuple):
    # graded lex; smaller variable id dominates
    return (sum(e[1::2]), tuple((-i, x) for i, x in zip(e[0::2], e[1::2])))


def _even_divides(a: tuple, b: tuple):
    """Return b/a for even exponent tuples, or None."""
    da = dict(zip(a[0::2], a[1::2]))
    out = []
    for i, x in zip(b[0::2], b[1::2]):
        y = x - da.pop(i, 0)
        if y < 0:
            return None
        if y:
            out.extend((i, y))
    if da:
        return None
    return tuple(out)


def divmod_even(num: SuperPolynomial, den: SuperPolynomial):
    """Multivariate division of ``num`` by the purely even ``den``.

    Applied coefficientwise over odd words with a graded-lex order; since a
    single polynomial generates its ideal with itself as Groebner basis the
    remainder vanishes iff ``den`` divides ``num``.  Returns ``(q, r)``.
    """
    if not den.terms:
        raise ZeroDenominator("division by zero polynomial")
    if den.has_odd():
        raise ParityMismatch("denominator must be purely even")
    lead = max(den.terms, key=lambda k: _even_order_key(k[0]))
    lead_e, lead_c = lead[0], den.terms[lead]
    if len(den.terms) == 1:
        q, r = {}, {}
        for (e, o), c in num.terms.items():
            d = _even_divides(lead_e, e)
            if d is None:
                r[(e, o)] = c
            else:
                q[(d, o)] = c / lead_c
        return SuperPolynomial(q, _clean=True), SuperPolynomial(r, _clean=True)
    by_odd: Dict[tuple, dict] = {}
    for (e, o), c in num.terms.items():
        by_odd.setdefault(o, {})[e] = c
    den_items = [(e, c) for (e, _), c in den.terms.items()]
    q_terms: dict = {}
    r_terms: dict = {}
    for o, part in by_odd.items():
        part = dict(part)
        while part:
            e = max(part, key=_even_order_key)
            c = part[e]
            d = _even_divides(lead_e, e)
            if d is None:
                r_terms[(e, o)] = c
                del part[e]
                continue
            f = c / lead_c
            q_terms[(d, o)] = q_terms.get((d, o), 0) + f
            for de, dc in den_items:
                ne = kernels.even_merge(d, de)
                nv = part.get(ne, 0) - f * dc
                if nv:
                    part[ne] = nv
                else:
                    part.pop(ne, None)
    q_terms = {k: v for k, v in q_terms.items() if v}
    return SuperPolynomial(q_terms, _clean=True), SuperPolynomial(r_terms, _clean=True)


def divides(den: SuperPolynomial, num: SuperPolynomial) -> Optional[SuperPolynomial]:
    """Return ``q`` with ``q * den == num`` in the polynomial ring, else None."""
    q, r = divmod_even(num, den)
    return None if r.terms else q


# ---------------------------------------------------------------------------
# rational super functions


class RationalSuperFunction:
    """``numerator / denominator`` with a purely even, nonzero denominator."""

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator, denominator=1):
        numerator = P(numerator)
        denominator = P(denominator)
        if not denominator.terms:
            raise ZeroDenominator("zero denominator")
        if denominator.has_odd():
            raise ParityMismatch("denominator must be purely even")
        self.numerator = numerator
        self.denominator = denominator

    def __add__(self, other):
        other = _as_rsf(other)
        if self.denominator == other.denominator:
            return RationalSuperFunction(self.numerator + other.numerator, self.denominator)
        return RationalSuperFunction(
            self.numerator * other.denominator + self.denominator * other.numerator,
            self.denominator * other.denominator,
        )

    def __neg__(self):
        return RationalSuperFunction(-self.numerator, self.denominator)

    def __sub__(self, other):
        return self + (-_as_rsf(other))

    def __mul__(self, other):
        other = _as_rsf(other)
        return RationalSuperFunction(self.numerator * other.numerator,
                                     self.denominator * other.denominator)

    def __eq__(self, other):
        other = _as_rsf(other)
        return self.numerator * other.denominator == other.numerator * self.denominator

    __hash__ = None  # type: ignore[assignment]

    def as_polynomial(self) -> Optional[SuperPolynomial]:
        return divides(self.denominator, self.numerator)

    def __repr__(self):
        return f"({self.numerator}) / ({self.denominator})"


def _as_rsf(x) -> RationalSuperFunction:
    return x if isinstance(x, RationalSuperFunction) else RationalSuperFunction(x)


# ---------------------------------------------------------------------------
# supermatrices


class SuperMatrix:
    """Dense matrix of SuperPolynomials with parity-labelled rows and columns.

    ``homogeneous=True`` enforces that entry parity equals row parity plus
    column parity; raw coordinate matrices may leave it off.
    """

    __slots__ = ("row_parities", "col_parities", "entries")

    def __init__(self, row_parities, col_parities, entries, homogeneous: bool = False):
        self.row_parities = tuple(row_parities)
        self.col_parities = tuple(col_parities)
        rows = [[P(x) for x in row] for row in entries]
        if len(rows) != len(self.row_parities) or any(len(r) != len(self.col_parities) for r in rows):
            raise ShapeMismatch("entries do not match parity labels")
        self.entries = rows
        if homogeneous:
            self.check_homogeneous()

    @classmethod
    def _raw(cls, row_parities, col_parities, rows) -> "SuperMatrix":
        """Trusted constructor: ``rows`` already holds SuperPolynomials of the right shape."""
        out = cls.__new__(cls)
        out.row_parities = tuple(row_parities)
        out.col_parities = tuple(col_parities)
        out.entries = rows
        return out

    # construction -----------------------------------------------------------
    @classmethod
    def identity(cls, parities) -> "SuperMatrix":
        n = len(parities)
        return cls(parities, parities, [[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, row_parities, col_parities) -> "SuperMatrix":
        return cls(row_parities, col_parities,
                   [[ZERO] * len(col_parities) for _ in row_parities])

    @classmethod
    def block_parities(cls, m: int, n: int) -> tuple:
        return (EVEN,) * m + (ODD,) * n

    @classmethod
    def from_numbers(cls, row_parities, col_parities, rows) -> "SuperMatrix":
        return cls(row_parities, col_parities, [[P(x) for x in r] for r in rows])

    # shape ------------------------------------------------------------------
    @property
    def shape(self):
        return len(self.row_parities), len(self.col_parities)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def check_homogeneous(self):
        for i, pr in enumerate(self.row_parities):
            for j, pc in enumerate(self.col_parities):
                x = self.entries[i][j]
                if x.terms and x.parity != (pr ^ pc):
                    raise ParityMismatch(f"entry ({i},{j}) = {x} has wrong parity")

    def parity(self) -> Optional[int]:
        """Parity of a homogeneous matrix (an element of gl), None if mixed."""
        found = set()
        for i, pr in enumerate(self.row_parities):
            for j, pc in enumerate(self.col_parities):
                x = self.entries[i][j]
                if not x.terms:
                    continue
                xp = x.parity
                if xp is None:
                    return None
                found.add(xp ^ pr ^ pc)
        if len(found) > 1:
            return None
        return found.pop() if found else EVEN

    def homogeneous_parity(self) -> int:
        p = self.parity()
        if p is None:
            raise NonHomogeneous("matrix is not parity-homogeneous")
        return p

    def is_zero(self) -> bool:
        return all(not x.terms for row in self.entries for x in row)

    # arithmetic -------------------------------------------------------------
    def _same_shape(self, other):
        if self.row_parities != other.row_parities or self.col_parities != other.col_parities:
            raise ShapeMismatch("parity labels differ")

    def __add__(self, other: "SuperMatrix") -> "SuperMatrix":
        self._same_shape(other)
        return SuperMatrix._raw(self.row_parities, self.col_parities,
                                [[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __sub__(self, other: "SuperMatrix") -> "SuperMatrix":
        self._same_shape(other)
        return SuperMatrix._raw(self.row_parities, self.col_parities,
                                [[a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __neg__(self):
        return SuperMatrix._raw(self.row_parities, self.col_parities,
                                [[-a for a in r] for r in self.entries])

    def scale(self, c) -> "SuperMatrix":
        """Left multiplication by a scalar or a SuperPolynomial."""
        c = P(c)
        return SuperMatrix(self.row_parities, self.col_parities,
                           [[c * a for a in r] for r in self.entries])

    def __mul__(self, other):
        if isinstance(other, SuperMatrix):
            return smat_mul(self, other)
        return SuperMatrix(self.row_parities, self.col_parities,
                           [[a * P(other) for a in r] for r in self.entries])

    def __eq__(self, other):
        if not isinstance(other, SuperMatrix):
            return NotImplemented
        return (self.row_parities == other.row_parities
                and self.col_parities == other.col_parities
                and self.entries == other.entries)

    __hash__ = None  # type: ignore[assignment]

    def map(self, fn) -> "SuperMatrix":
        return SuperMatrix(self.row_parities, self.col_parities,
                           [[fn(a) for a in r] for r in self.entries])

    def substitute(self, bindings) -> "SuperMatrix":
        if not bindings:
            return self
        bind = _compile_bindings(bindings)
        powers: dict = {}
        return SuperMatrix._raw(self.row_parities, self.col_parities,
                                [[_substitute_compiled(a, bind, powers) for a in r] for r in self.entries])

    def rows(self, idx: Sequence[int]) -> "SuperMatrix":
        return SuperMatrix([self.row_parities[i] for i in idx], self.col_parities,
                           [self.entries[i] for i in idx])

    def transpose_plain(self) -> "SuperMatrix":
        r, c = self.shape
        return SuperMatrix(self.col_parities, self.row_parities,
                           [[self.entries[i][j] for i in range(r)] for j in range(c)])

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in r) for r in self.entries)
        return f"SuperMatrix[{body}]"


def smat_mul(a: SuperMatrix, b: SuperMatrix) -> SuperMatrix:
    if a.col_parities != b.row_parities:
        raise ShapeMismatch(f"cannot multiply {a.shape} by {b.shape} (parities differ)")
    k = a.shape[1]
    bcols = [[b.entries[t][j].terms for t in range(k)] for j in range(b.shape[1])]
    arows = [[x.terms for x in row] for row in a.entries]
    out = [[SuperPolynomial(acc, _clean=True) for acc in row] for row in kernels.mat_mul_terms(arows, bcols)]
    return SuperMatrix._raw(a.row_parities, b.col_parities, out)


def _is_block_sorted(ps) -> bool:
    return list(ps) == sorted(ps)


def supertranspose(a: SuperMatrix) -> SuperMatrix:
    """Block formula (X11, X12; X21, X22) -> (X11^T, X21^T; -X12^T, X22^T)."""
    if not (_is_block_sorted(a.row_parities) and _is_block_sorted(a.col_parities)):
        raise ShapeMismatch("supertranspose needs block-sorted parities")
    r, c = a.shape
    out = []
    for i in range(c):
        row = []
        for j in range(r):
            x = a.entries[j][i]
            if a.col_parities[i] == ODD and a.row_parities[j] == EVEN:
                x = -x
            row.append(x)
        out.append(row)
    return SuperMatrix(a.col_parities, a.row_parities, out)


def _numeric_inverse(rows):
    """Gauss-Jordan inverse of a square matrix of rationals, None if singular."""
    n = len(rows)
    m = [list(r) + [Q(1) if i == j else Q(0) for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


def numeric_core(a: SuperMatrix) -> SuperMatrix:
    return a.map(lambda x: P(x.constant_term()))


def smat_inverse(a: SuperMatrix) -> SuperMatrix:
    """Inverse of a numeric-core-plus-nilpotent supermatrix.

    Gauss-Jordan with row operations applied as left multiplications, so the
    order of odd factors is the matrix-product order.  Each pivot is chosen
    with a nonzero constant term, which the invertible numeric core
    guarantees; every other monomial must contain an odd generator.
    """
    n, m = a.shape
    if n != m or a.row_parities != a.col_parities:
        raise ShapeMismatch("inverse needs a square matrix with equal row/col parities")
    for row in a.entries:
        for x in row:
            if any(not k[1] and k != _ONE_KEY for k in x.terms):
                raise NonNilpotentRemainder("remainder has purely even monomials; evaluate even variables first")
    inv = kernels.gauss_jordan_inverse([[x.terms for x in row] for row in a.entries], Q(1))
    if inv is None:
        raise NotNumericCore("numeric part is singular")
    pars = a.row_parities
    return SuperMatrix._raw(pars, pars, [[SuperPolynomial(x, _clean=True) for x in row] for row in inv])


def _det_and_adj(rows):
    """Determinant and adjugate of a square polynomial matrix by cofactors."""
    n = len(rows)
    if n == 0:
        return ONE, []
    memo: Dict[Tuple[tuple, tuple], SuperPolynomial] = {}

    def minor(rs: tuple, cs: tuple) -> SuperPolynomial:
        if not rs:
            return ONE
        key = (rs, cs)
        got = memo.get(key)
        if got is not None:
            return got
        r0, rest = rs[0], rs[1:]
        acc = ZERO
        for k, c in enumerate(cs):
            x = rows[r0][c]
            if not x.terms:
                continue
            sub = minor(rest, cs[:k] + cs[k + 1:])
            term = x * sub
            acc = acc - term if k & 1 else acc + term
        memo[key] = acc
        return acc

    allr = tuple(range(n))
    det = minor(allr, allr)
    adj = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            cof = minor(allr[:j] + allr[j + 1:], allr[:i] + allr[i + 1:])
            adj[i][j] = -cof if (i + j) & 1 else cof
    return det, adj


def smat_inverse_fraction(a: SuperMatrix):
    """Inverse of a supermatrix whose body is invertible over Q(even vars).

    Returns ``(numerator, delta, power)`` with ``a^-1 = numerator / delta**power``
    and ``delta`` the (purely even) determinant of the body of ``a``.  The
    body is the matrix with every odd-containing monomial deleted; the rest
    is nilpotent and handled by the terminating Neumann series.
    """
    n, m = a.shape
    if n != m or a.row_parities != a.col_parities:
        raise ShapeMismatch("inverse needs a square matrix")
    body = [[x.body() for x in row] for row in a.entries]
    delta, adj = _det_and_adj(body)
    if not delta.terms:
        raise NotNumericCore("body is singular")
    pars = a.row_parities
    A = SuperMatrix(pars, pars, adj)  # delta * body^-1
    R = SuperMatrix(pars, pars, [[x - b for x, b in zip(row, brow)]
                                 for row, brow in zip(a.entries, body)])
    step = -(A * R)
    terms = [A]
    term = A
    for _ in range(64 * n + 1):
        term = step * term
        if term.is_zero():
            break
        terms.append(term)
    power = len(terms)
    total = SuperMatrix.zeros(pars, pars)
    # term j carries delta^-(j+1); bring all to delta^-power
    for j, t in enumerate(terms):
        total = total + t.scale(delta ** (power - 1 - j))
    return total, delta, power


def commutes_graded(a: SuperPolynomial, b: SuperPolynomial) -> bool:
    """a*b == (-1)^{p(a)p(b)} b*a for homogeneous a, b."""
    pa, pb = a.parity, b.parity
    if pa is None or pb is None:
        raise NonHomogeneous("supercommutativity needs homogeneous inputs")
    ba = b * a
    return a * b == (-ba if pa and pb else ba)


__all__ = [
    "EVEN", "ODD", "Q", "Var", "var", "even_var", "odd_var", "lookup_var", "var_by_id",
    "SuperPolynomial", "P", "ZERO", "ONE", "poly_arith", "poly_sum",
    "odd_derivative", "even_derivative", "derivative", "substitute",
    "divmod_even", "divides", "RationalSuperFunction",
    "SuperMatrix", "smat_mul", "supertranspose", "smat_inverse", "smat_inverse_fraction",
    "numeric_core", "commutes_graded", "rational", "monomial_str",
]
