import pytest
from hypothesis import given, settings, strategies as st

from superflag.errors import NonNilpotentRemainder, NotNumericCore, ParityMismatch, ShapeMismatch, ZeroDenominator
from superflag.supercalc import (
    EVEN,
    ODD,
    ONE,
    ZERO,
    P,
    Q,
    RationalSuperFunction,
    SuperMatrix,
    SuperPolynomial,
    divides,
    even_var,
    odd_derivative,
    odd_var,
    poly_arith,
    smat_inverse,
    smat_mul,
    substitute,
    supertranspose,
)

x, y = even_var("sc_x"), even_var("sc_y")
a, b, c = odd_var("sc_a"), odd_var("sc_b"), odd_var("sc_c")
X, Y, A, B, C = (SuperPolynomial.of(v) for v in (x, y, a, b, c))


# -- arithmetic


def test_odd_generators_anticommute():
    assert poly_arith(A * B, B * A, "add") == ZERO


def test_odd_generator_squares_to_zero():
    assert poly_arith(A, A, "mul") == ZERO


def test_product_with_nilpotent_cross_terms():
    assert (X + A * B) * (X - A * B) == X * X


def test_rationals_stay_exact():
    p = X.scale(Q(1, 3)) + X.scale(Q(2, 3))
    assert p == X
    assert p.terms[next(iter(p.terms))] == 1


# -- derivatives


def test_odd_derivative_leading_factor():
    assert odd_derivative(A * B, a) == B


def test_odd_derivative_second_factor_picks_a_sign():
    assert odd_derivative(A * B, b) == -A


def test_odd_derivative_of_even_monomial_vanishes():
    assert odd_derivative(X * X, a) == ZERO


def test_odd_derivative_rejects_even_variable():
    with pytest.raises(ParityMismatch):
        odd_derivative(X, x)


# -- substitution


def test_substitute_number():
    assert substitute(X * A, {x: 2}) == A.scale(2)


def test_substitute_sign_flip():
    assert substitute(A, {a: -B}) == -B


def test_substitute_collision_is_nilpotent():
    assert substitute(A * B, {a: B}) == ZERO


def test_substitute_parity_checked():
    with pytest.raises(ParityMismatch):
        substitute(X, {x: A})


# -- matrices


def _m(rp, cp, rows):
    return SuperMatrix(rp, cp, [[P(e) for e in r] for r in rows])


def test_identity_product():
    m = _m((EVEN, EVEN), (EVEN, EVEN), [[X, 1], [Y, X * Y]])
    assert smat_mul(SuperMatrix.identity((EVEN, EVEN)), m) == m


def test_gamma_times_inverse():
    from superflag.liesuperalg import gamma_matrix

    g = gamma_matrix(2, 1)
    assert g * smat_inverse(g) == SuperMatrix.identity(g.row_parities)


def test_odd_row_times_odd_column_is_even():
    row = _m((EVEN,), (ODD, ODD), [[A, B]])
    col = _m((ODD, ODD), (EVEN,), [[B], [C]])
    prod = smat_mul(row, col)
    assert prod.entries[0][0] == A * B + B * C
    assert prod.entries[0][0].parity == EVEN


def test_mul_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        smat_mul(SuperMatrix.identity((EVEN,)), SuperMatrix.identity((EVEN, ODD)))


def test_supertranspose_identity():
    e = SuperMatrix.identity((EVEN, ODD))
    assert supertranspose(e) == e


def test_supertranspose_twice_on_odd_blocks_negates():
    m = _m((EVEN, ODD), (EVEN, ODD), [[0, A], [B, 0]])
    assert supertranspose(supertranspose(m)) == m.scale(-1)


def test_supertranspose_even_block_diagonal_is_transpose():
    m = _m((EVEN, EVEN), (EVEN, EVEN), [[X, Y], [1, 2]])
    assert supertranspose(m) == _m((EVEN, EVEN), (EVEN, EVEN), [[X, 1], [Y, 2]])


def test_supertranspose_block_formula():
    m = _m((EVEN, ODD), (EVEN, ODD), [[X, A], [B, Y]])
    assert supertranspose(m) == _m((EVEN, ODD), (EVEN, ODD), [[X, B], [-A, Y]])


def test_inverse_geometric_series():
    e = SuperMatrix.identity((EVEN, EVEN))
    m = e + e.map(lambda t: t * A * B)
    assert smat_inverse(m) == e - e.map(lambda t: t * A * B)


def test_inverse_numeric_diagonal():
    m = SuperMatrix.from_numbers((EVEN, EVEN), (EVEN, EVEN), [[2, 0], [0, 3]])
    assert smat_inverse(m) == SuperMatrix.from_numbers((EVEN, EVEN), (EVEN, EVEN), [[Q(1, 2), 0], [0, Q(1, 3)]])


def test_inverse_needs_numeric_core():
    m = _m((EVEN, ODD), (EVEN, ODD), [[0, A], [B, 0]])
    with pytest.raises(NotNumericCore):
        smat_inverse(m)


def test_inverse_refuses_even_variables():
    m = _m((EVEN,), (EVEN,), [[X + 1]])
    with pytest.raises(NonNilpotentRemainder):
        smat_inverse(m)


# -- division


def test_divides_monomial():
    assert divides(X, X * X * A) == X * A


def test_divides_fails_off_the_ideal():
    assert divides(X, X + 1) is None


def test_divides_difference_of_squares():
    den = X * X - Y * Y
    num = (X - Y) * (X + Y) * X
    q = divides(den, num)
    assert q is not None and q * den == num


def test_divides_zero_denominator():
    with pytest.raises(ZeroDenominator):
        divides(ZERO, X)


def test_rational_function_equality_cross_multiplies():
    assert RationalSuperFunction(X * A, X * Y) == RationalSuperFunction(A, Y)


# -- properties

_coef = st.integers(-5, 5)


@st.composite
def homogeneous(draw, parity=None):
    parity = draw(st.sampled_from([EVEN, ODD])) if parity is None else parity
    odd_words = [w for w in ([], [A], [B], [C], [A, B], [A, C], [B, C], [A, B, C]) if len(w) % 2 == parity]
    p = ZERO
    for _ in range(draw(st.integers(1, 4))):
        t = SuperPolynomial.const(draw(_coef))
        for _ in range(draw(st.integers(0, 2))):
            t = t * draw(st.sampled_from([X, Y]))
        for g in draw(st.sampled_from(odd_words)):
            t = t * g
        p = p + t
    return p, parity


@settings(max_examples=60, deadline=None)
@given(homogeneous(), homogeneous())
def test_supercommutativity(pa, pb):
    (p, i), (q, j) = pa, pb
    sign = -1 if i and j else 1
    assert p * q == (q * p).scale(sign)


@settings(max_examples=60, deadline=None)
@given(homogeneous(), homogeneous(), st.sampled_from([a, b, c]))
def test_odd_derivative_is_odd_derivation(pa, pb, v):
    (p, i), (q, _) = pa, pb
    sign = -1 if i else 1
    assert odd_derivative(p * q, v) == odd_derivative(p, v) * q + (p * odd_derivative(q, v)).scale(sign)


@settings(max_examples=40, deadline=None)
@given(homogeneous(EVEN), homogeneous(ODD))
def test_inverse_times_matrix_is_identity(pe, po):
    body = SuperMatrix.from_numbers((EVEN, ODD), (EVEN, ODD), [[2, 0], [1, 3]])
    nil = substitute(pe[0], {x: 1, y: 2}) - SuperPolynomial.const(substitute(pe[0], {x: 1, y: 2}).constant_term())
    odd = substitute(po[0], {x: 1, y: 2})
    m = body + _m((EVEN, ODD), (EVEN, ODD), [[nil, odd], [odd, nil]])
    assert smat_inverse(m) * m == SuperMatrix.identity((EVEN, ODD))


@settings(max_examples=30, deadline=None)
@given(st.lists(homogeneous(EVEN), min_size=4, max_size=4), st.lists(homogeneous(ODD), min_size=4, max_size=4),
       st.lists(homogeneous(EVEN), min_size=4, max_size=4), st.lists(homogeneous(ODD), min_size=4, max_size=4))
def test_supertranspose_of_product(ea, oa, eb, ob):
    par = (EVEN, ODD)

    def mat(ev, od):
        return _m(par, par, [[ev[0][0], od[0][0]], [od[1][0], ev[1][0]]])

    ma, mb = mat(ea, oa), mat(eb, ob)
    assert supertranspose(ma * mb) == supertranspose(mb) * supertranspose(ma)


@settings(max_examples=60, deadline=None)
@given(homogeneous(), homogeneous(EVEN))
def test_divides_recovers_quotient(pq, pd):
    q, d = pq[0], pd[0]
    if not d.body().terms:
        d = d + ONE
    assert divides(d.body(), q * d.body()) == q
