# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the kernels in ``_pykernels``.

Same monomial layout and semantics; see that module for the contract.
"""


cpdef tuple even_merge(tuple a, tuple b):
    cdef Py_ssize_t i = 0, j = 0, na = len(a), nb = len(b)
    cdef long va, vb
    if na == 0:
        return b
    if nb == 0:
        return a
    out = []
    while i < na and j < nb:
        va = a[i]
        vb = b[j]
        if va == vb:
            out.append(va)
            out.append(<long>a[i + 1] + <long>b[j + 1])
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
    while i < na:
        out.append(a[i])
        i += 1
    while j < nb:
        out.append(b[j])
        j += 1
    return tuple(out)


cpdef tuple odd_merge(tuple a, tuple b):
    cdef Py_ssize_t i = 0, j = 0, na = len(a), nb = len(b)
    cdef long va, vb, swaps = 0
    if na == 0:
        return (1, b)
    if nb == 0:
        return (1, a)
    out = []
    while i < na and j < nb:
        va = a[i]
        vb = b[j]
        if va == vb:
            return (0, None)
        if va < vb:
            out.append(va)
            i += 1
        else:
            swaps += na - i
            out.append(vb)
            j += 1
    while i < na:
        out.append(a[i])
        i += 1
    while j < nb:
        out.append(b[j])
        j += 1
    return ((-1 if swaps & 1 else 1), tuple(out))


cdef void _mul_into(dict out, dict ta, dict tb):
    cdef tuple ka, kb, ea, oa, eb, ob, o, merged, key
    cdef int sign
    for ka, ca in ta.items():
        ea = <tuple>ka[0]
        oa = <tuple>ka[1]
        for kb, cb in tb.items():
            eb = <tuple>kb[0]
            ob = <tuple>kb[1]
            if len(oa) and len(ob):
                merged = odd_merge(oa, ob)
                sign = merged[0]
                if sign == 0:
                    continue
                o = <tuple>merged[1]
            else:
                sign = 1
                o = oa if len(oa) else ob
            key = (even_merge(ea, eb), o)
            c = ca * cb
            if sign < 0:
                c = -c
            prev = out.get(key)
            if prev is None:
                out[key] = c
            else:
                s = prev + c
                if s:
                    out[key] = s
                else:
                    del out[key]


cpdef dict poly_mul(dict ta, dict tb):
    cdef dict out = {}
    _mul_into(out, ta, tb)
    return out


cpdef list mat_mul_terms(list arows, list bcols):
    cdef list out = [], row, arow, bcol
    cdef dict acc, x, y
    cdef Py_ssize_t t, k
    for arow in arows:
        row = []
        k = len(arow)
        for bcol in bcols:
            acc = {}
            for t in range(k):
                x = <dict>arow[t]
                y = <dict>bcol[t]
                if x and y:
                    _mul_into(acc, x, y)
            row.append(acc)
        out.append(row)
    return out


cpdef dict poly_axpy(dict acc, dict tb, scale):
    for key, c in tb.items():
        prev = acc.get(key)
        if prev is None:
            v = c * scale
        else:
            v = prev + c * scale
        if v:
            acc[key] = v
        elif prev is not None:
            del acc[key]
    return acc


cpdef tuple sparse_rref(rows):
    cdef dict basis = {}
    cdef dict r, prow, qrow
    cdef list pivots
    cdef Py_ssize_t idx, k
    for row in rows:
        r = {c: v for c, v in (<dict>row).items() if v}
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
    for idx in range(len(pivots) - 1, -1, -1):
        p = pivots[idx]
        prow = basis[p]
        for k in range(idx):
            qrow = basis[pivots[k]]
            f = qrow.get(p)
            if f:
                for c, v in prow.items():
                    nv = qrow.get(c, 0) - f * v
                    if nv:
                        qrow[c] = nv
                    else:
                        qrow.pop(c, None)
    return [basis[p] for p in pivots], pivots


cpdef dict polar_terms(dict terms, tuple den):
    cdef Py_ssize_t i, j, ne, nd = len(den)
    cdef long x, ei, dj
    cdef bint neg
    out = {}
    for key, c in terms.items():
        e = key[0]
        ne = len(e)
        i = 0
        j = 0
        lau = []
        neg = False
        while i < ne or j < nd:
            if j >= nd or (i < ne and <long>e[i] < <long>den[j]):
                lau.append(e[i])
                lau.append(e[i + 1])
                i += 2
            elif i >= ne or <long>den[j] < <long>e[i]:
                lau.append(den[j])
                lau.append(-<long>den[j + 1])
                neg = True
                j += 2
            else:
                x = <long>e[i + 1] - <long>den[j + 1]
                if x:
                    lau.append(e[i])
                    lau.append(x)
                    if x < 0:
                        neg = True
                i += 2
                j += 2
        if neg:
            out[(tuple(lau), key[1])] = c
    return out


cdef tuple _ONE = ((), ())


cdef dict _unit_inverse(dict terms):
    ci = 1 / terms[_ONE]
    cdef dict step = {}
    for k, v in terms.items():
        if k != _ONE:
            step[k] = -v * ci
    cdef dict total = {_ONE: ci}
    cdef dict power = {_ONE: ci}
    while step:
        power = poly_mul(step, power)
        if not power:
            break
        poly_axpy(total, power, 1)
    return total


cpdef object gauss_jordan_inverse(list rows, one):
    cdef Py_ssize_t n = len(rows), col, r, j, piv
    cdef list M = [[dict(x) for x in row] for row in rows]
    cdef list inv = [[{_ONE: one} if i == j2 else {} for j2 in range(n)] for i in range(n)]
    cdef list mrow, irow, mc, ic
    cdef dict u, fac, neg, x
    for col in range(n):
        piv = -1
        for r in range(col, n):
            if (<dict>(<list>M[r])[col]).get(_ONE):
                piv = r
                break
        if piv < 0:
            return None
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            inv[col], inv[piv] = inv[piv], inv[col]
        u = _unit_inverse(<dict>(<list>M[col])[col])
        M[col] = [poly_mul(u, x) if x else x for x in <list>M[col]]
        inv[col] = [poly_mul(u, x) if x else x for x in <list>inv[col]]
        mc = <list>M[col]
        ic = <list>inv[col]
        for r in range(n):
            mrow = <list>M[r]
            fac = <dict>mrow[col]
            if r == col or not fac:
                continue
            neg = {k: -v for k, v in fac.items()}
            irow = <list>inv[r]
            for j in range(n):
                if mc[j]:
                    x = dict(<dict>mrow[j])
                    _mul_into(x, neg, <dict>mc[j])
                    mrow[j] = x
                if ic[j]:
                    x = dict(<dict>irow[j])
                    _mul_into(x, neg, <dict>ic[j])
                    irow[j] = x
    return inv
