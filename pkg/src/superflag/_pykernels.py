"""Pure-Python reference implementations of the hot kernels.

Monomials are keyed as ``(even, odd)`` where ``even`` is a flat tuple
``(id0, e0, id1, e1, ...)`` sorted by variable id and ``odd`` is a strictly
increasing tuple of odd variable ids.  Coefficients are any exact field
elements supporting ``+``, ``*`` and ``== 0``.

The compiled module ``_ckernels`` exposes the same functions with the same
semantics; ``superflag.kernels`` picks one at import time.
"""


def even_merge(a, b):
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    na, nb = len(a), len(b)
    while i < na and j < nb:
        va, vb = a[i], b[j]
        if va == vb:
            out.append(va)
            out.append(a[i + 1] + b[j + 1])
            i += 2
            j += 2
        elif va < vb:
            out.append(va)
            out.append(a[i + 1])
            i += 2
        else:
            out.append(vb)
            out.append(b[j + 1])
            j += 2
    if i < na:
        out.extend(a[i:])
    if j < nb:
        out.extend(b[j:])
    return tuple(out)


def odd_merge(a, b):
    """Return ``(sign, merged)`` for the product of odd words ``a`` and ``b``.

    ``sign`` is 0 when the words share a generator.
    """
    if not a:
        return 1, b
    if not b:
        return 1, a
    out = []
    i = j = 0
    na, nb = len(a), len(b)
    swaps = 0
    while i < na and j < nb:
        va, vb = a[i], b[j]
        if va == vb:
            return 0, None
        if va < vb:
            out.append(va)
            i += 1
        else:
            # vb jumps over the remaining na - i letters of a
            swaps += na - i
            out.append(vb)
            j += 1
    if i < na:
        out.extend(a[i:])
    if j < nb:
        out.extend(b[j:])
    return (-1 if swaps & 1 else 1), tuple(out)


def poly_mul(ta, tb):
    out = {}
    get = out.get
    for (ea, oa), ca in ta.items():
        for (eb, ob), cb in tb.items():
            if oa and ob:
                sign, o = odd_merge(oa, ob)
                if not sign:
                    continue
            else:
                sign, o = 1, (oa or ob)
            key = (even_merge(ea, eb), o)
            c = ca * cb
            if sign < 0:
                c = -c
            prev = get(key)
            if prev is None:
                out[key] = c
            else:
                s = prev + c
                if s:
                    out[key] = s
                else:
                    del out[key]
    return out


def mat_mul_terms(arows, bcols):
    """Products of term-dict matrices given as rows of the left and columns of the right factor."""
    out = []
    for arow in arows:
        row = []
        for bcol in bcols:
            acc = {}
            for x, y in zip(arow, bcol):
                if x and y:
                    poly_axpy(acc, poly_mul(x, y), 1)
            row.append(acc)
        out.append(row)
    return out


_ONE = ((), ())


def _unit_inverse(terms):
    ci = 1 / terms[_ONE]
    step = {k: -v * ci for k, v in terms.items() if k != _ONE}
    total = {_ONE: ci}
    power = {_ONE: ci}
    while step:
        power = poly_mul(step, power)
        if not power:
            break
        poly_axpy(total, power, 1)
    return total


def gauss_jordan_inverse(rows, one):
    """Inverse of a square matrix of term dicts by left row operations.

    Pivots need a nonzero constant term; returns None when none is left.
    ``one`` is the constant-coefficient 1 of the coefficient field.
    """
    n = len(rows)
    M = [[dict(x) for x in r] for r in rows]
    inv = [[{_ONE: one} if i == j else {} for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if M[r][col].get(_ONE):
                piv = r
                break
        if piv is None:
            return None
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            inv[col], inv[piv] = inv[piv], inv[col]
        u = _unit_inverse(M[col][col])
        M[col] = [poly_mul(u, x) if x else x for x in M[col]]
        inv[col] = [poly_mul(u, x) if x else x for x in inv[col]]
        for r in range(n):
            fac = M[r][col]
            if r == col or not fac:
                continue
            neg = {k: -v for k, v in fac.items()}
            mr, ir = M[r], inv[r]
            for j in range(n):
                if M[col][j]:
                    mr[j] = poly_axpy(dict(mr[j]), poly_mul(neg, M[col][j]), 1)
                if inv[col][j]:
                    ir[j] = poly_axpy(dict(ir[j]), poly_mul(neg, inv[col][j]), 1)
    return inv


def poly_axpy(acc, tb, scale):
    """In place ``acc += scale * tb``; returns ``acc``."""
    for key, c in tb.items():
        prev = acc.get(key)
        v = c * scale if prev is None else prev + c * scale
        if v:
            acc[key] = v
        elif prev is not None:
            del acc[key]
    return acc


def sparse_rref(rows):
    """Reduced row echelon form of sparse rows (``dict col -> coef``).

    Returns ``(pivot_rows, pivots)``: rows normalised to leading coefficient
    1, fully reduced against each other, sorted by pivot column.
    """
    basis = {}  # pivot column -> row
    for row in rows:
        r = {c: v for c, v in row.items() if v}
        # reduce against existing pivots until the leading column is new
        while r:
            p = min(r)
            prow = basis.get(p)
            if prow is None:
                break
            f = r[p]
            for c, v in prow.items():
                nv = r.get(c, 0) - f * v
                if nv:
                    r[c] = nv
                else:
                    r.pop(c, None)
        if not r:
            continue
        p = min(r)
        inv = 1 / r[p]
        r = {c: v * inv for c, v in r.items()}
        basis[p] = r
    pivots = sorted(basis)
    # back substitution, last pivot first
    for idx in range(len(pivots) - 1, -1, -1):
        p = pivots[idx]
        prow = basis[p]
        for q in pivots[:idx]:
            qrow = basis[q]
            f = qrow.get(p)
            if f:
                for c, v in prow.items():
                    nv = qrow.get(c, 0) - f * v
                    if nv:
                        qrow[c] = nv
                    else:
                        qrow.pop(c, None)
    return [basis[p] for p in pivots], pivots


def polar_terms(terms, den):
    """Terms of ``terms / w^den`` with a negative exponent somewhere.

    ``den`` is a flat sorted ``(id, exp, ...)`` tuple.  Keys of the result
    are ``(laurent, odd)`` with ``laurent`` the flat exponent tuple after
    division (zero exponents dropped, negative ones kept).
    """
    out = {}
    nd = len(den)
    for (e, o), c in terms.items():
        i = j = 0
        ne = len(e)
        lau = []
        neg = False
        while i < ne or j < nd:
            if j >= nd or (i < ne and e[i] < den[j]):
                lau.append(e[i])
                lau.append(e[i + 1])
                i += 2
            elif i >= ne or den[j] < e[i]:
                lau.append(den[j])
                lau.append(-den[j + 1])
                neg = True
                j += 2
            else:
                x = e[i + 1] - den[j + 1]
                if x:
                    lau.append(e[i])
                    lau.append(x)
                    if x < 0:
                        neg = True
                i += 2
                j += 2
        if neg:
            out[(tuple(lau), o)] = c
    return out
