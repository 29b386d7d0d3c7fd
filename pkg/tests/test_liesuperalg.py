import itertools
import json

import pytest
from hypothesis import given, settings, strategies as st

from superflag.errors import NonHomogeneous, ShapeMismatch
from superflag.liesuperalg import (
    INVARIANCE_SIGN,
    BilinearFormMatrix,
    bracket,
    build_algebra,
    build_gl,
    build_osp,
    build_pisp,
    center,
    check_invariance,
    gamma_matrix,
    graded_jacobi_residual,
    identity_of,
    jacobi_residual_coords,
    superdimension,
)
from superflag.supercalc import EVEN, ODD, Q, SuperMatrix


def small_algebras(limit=5):
    for m in range(limit + 1):
        for n in range(limit + 1 - m):
            if m + n:
                yield build_gl(m, n)
    for m in range(1, limit + 1):
        for n2 in range(0, limit + 1 - m, 2):
            yield build_osp(m, n2)
    for n in range(1, 3):
        yield build_pisp(n)


# -- superdimensions


def test_gl22_superdimension():
    assert superdimension(build_gl(2, 2)) == (8, 8)


def test_gl10_is_one_dimensional_abelian():
    g = build_gl(1, 0)
    assert superdimension(g) == (1, 0)
    assert bracket(g.basis[0][0], g.basis[0][0]).is_zero()


def test_gl20_relation():
    g = build_gl(2, 0)
    e11, e12 = g.basis[0][0], g.basis[1][0]
    assert bracket(e11, e12) == e12


@pytest.mark.parametrize("m,n2,expected", [(4, 4, (16, 16)), (3, 2, (6, 6)), (2, 2, (4, 4))])
def test_osp_superdimension(m, n2, expected):
    assert superdimension(build_osp(m, n2)) == expected


@pytest.mark.parametrize("n,expected", [(3, (9, 9)), (1, (1, 1))])
def test_pisp_superdimension(n, expected):
    assert superdimension(build_pisp(n)) == expected


@pytest.mark.parametrize("m,n", [(1, 0), (2, 1), (3, 2), (0, 3)])
def test_gl_closed_form(m, n):
    assert superdimension(build_gl(m, n)) == (m * m + n * n, 2 * m * n)


@pytest.mark.parametrize("s,n", [(1, 1), (2, 1), (2, 2), (3, 1), (1, 3)])
def test_osp_even_closed_form(s, n):
    assert superdimension(build_osp(2 * s, 2 * n)) == (s * (2 * s - 1) + n * (2 * n + 1), 4 * s * n)


@pytest.mark.parametrize("s,n", [(0, 1), (1, 1), (2, 1), (1, 2)])
def test_osp_odd_m_has_odd_part_m_times_2n(s, n):
    assert superdimension(build_osp(2 * s + 1, 2 * n))[1] == (2 * s + 1) * 2 * n


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_pisp_closed_form(n):
    assert superdimension(build_pisp(n)) == (n * n, n * n)


# -- brackets


def test_odd_self_bracket_is_twice_the_square():
    g = build_gl(1, 1)
    x = next(b for b, p in g.basis if p == ODD) + next(b for b, p in g.basis[::-1] if p == ODD)
    assert bracket(x, x) == (x * x).scale(2)


def test_identity_brackets_to_zero():
    g = build_gl(2, 1)
    e = identity_of(g)
    assert all(bracket(e, b).is_zero() for b, _ in g.basis)


def test_osp22_odd_brackets_land_in_even_part():
    g = build_osp(2, 2)
    odd = [i for i, (_, p) in enumerate(g.basis) if p == ODD]
    for i, j in itertools.product(odd, odd):
        coeffs = g.bracket_coords(i, j)
        assert all(g.parity_of(k) == EVEN for k in coeffs)


def test_bracket_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        bracket(SuperMatrix.identity((EVEN,)), SuperMatrix.identity((EVEN, ODD)))


def test_bracket_needs_homogeneous():
    g = build_gl(1, 1)
    mixed = g.basis[0][0] + g.basis[1][0]
    with pytest.raises(NonHomogeneous):
        bracket(mixed, g.basis[0][0])


def test_closure_and_jacobi_for_small_parameters():
    for g in small_algebras(4):
        g.compute_structure_constants()
        n = len(g)
        triples = itertools.combinations_with_replacement(range(n), 3)
        for i, j, k in itertools.islice(triples, 400):
            assert graded_jacobi_residual(g.basis[i][0], g.basis[j][0], g.basis[k][0]).is_zero(), (g.name, g.params)


def test_structure_constant_jacobi_holds():
    g = build_osp(3, 2)
    g.compute_structure_constants()
    assert not any(jacobi_residual_coords(g, *t) for t in itertools.combinations_with_replacement(range(len(g)), 3))


def test_structure_constant_jacobi_sees_corruption():
    g = build_gl(2, 1)
    g.compute_structure_constants()
    g.structure_constants[(0, 1)] = {k: c + 1 for k, c in g.structure_constants[(0, 1)].items()} or {1: Q(1)}
    assert any(jacobi_residual_coords(g, *t) for t in itertools.product(range(len(g)), repeat=3))


def test_structure_constants_reproduce_brackets():
    g = build_osp(3, 2)
    for i in range(len(g)):
        for j in range(len(g)):
            assert g.combine(g.bracket_coords(i, j)) == bracket(g.basis[i][0], g.basis[j][0])


# -- centers


def test_gl_center_is_scalars():
    z = center(build_gl(2, 1))
    assert len(z) == 1
    assert z[0] == identity_of(build_gl(2, 1)).scale(z[0].entries[0][0].constant_term())


def test_osp_center_trivial():
    assert center(build_osp(4, 4)) == []


def test_pisp_center_trivial():
    assert center(build_pisp(3)) == []


@pytest.mark.parametrize("g", [build_gl(1, 1), build_gl(2, 2), build_gl(3, 0)])
def test_gl_center_always_identity(g):
    assert len(center(g)) == 1


# -- invariance


def test_osp44_basis_preserves_form():
    g = build_osp(4, 4)
    assert all(check_invariance(x, g.form).is_zero() for x, _ in g.basis)


def test_pisp2_basis_preserves_form():
    g = build_pisp(2)
    assert all(check_invariance(x, g.form).is_zero() for x, _ in g.basis)


def test_gl_element_outside_osp():
    e11 = build_gl(2, 2).basis[0][0]
    form = BilinearFormMatrix("even-symmetric", gamma_matrix(2, 1))  # C^{2|2}
    assert not check_invariance(e11, form).is_zero()


@pytest.mark.parametrize("g", [build_osp(4, 4), build_osp(3, 2), build_pisp(3)])
def test_invariance_sign_is_unique(g):
    """Of the four sign choices exactly one annihilates the whole basis."""
    good = []
    for se, so in itertools.product((1, -1), repeat=2):
        signs = {EVEN: se, ODD: so}
        if all(check_invariance(x, g.form, signs).is_zero() for x, _ in g.basis):
            good.append(signs)
    assert good == [INVARIANCE_SIGN[g.form.kind]]


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=16, max_size=16), st.lists(st.integers(-3, 3), min_size=16, max_size=16))
def test_invariance_residual_is_linear(c1, c2):
    g = build_osp(4, 4)
    even = [i for i, (_, p) in enumerate(g.basis) if p == EVEN]
    x = g.combine({i: Q(c) for i, c in zip(even, c1)})
    y = g.combine({i: Q(c) for i, c in zip(even, c2)})
    lhs = check_invariance(x + y, g.form)
    assert lhs == check_invariance(x, g.form) + check_invariance(y, g.form)
    assert lhs.is_zero()


# -- serialisation


def test_json_dump_round_trips_superdimension():
    data = json.loads(build_algebra("pisp", (2,)).to_json())
    assert data["superdimension"] == [4, 4]
    assert len(data["basis"]) == 8
