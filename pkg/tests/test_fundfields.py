import dataclasses

import pytest

from superflag.errors import ChartMismatch, KindMismatch, NotInAlgebra, ParityMismatch
from superflag.flagatlas import EVEN_ISO, ODD_ISO, build_chart, distinguished_index, enumerate_charts
from superflag.flagatlas import validate_flag_type as V
from superflag.fundfields import (
    VectorField,
    check_homomorphism,
    coordinate_field,
    coordinate_field_membership,
    field_bracket,
    fundamental_field,
    fundamental_fields,
    kernel_of_action,
    span_dimension,
)
from superflag.liesuperalg import bracket, build_gl, build_osp, build_pisp
from superflag.supercalc import EVEN, ODD, ONE, SuperMatrix, SuperPolynomial

P1 = V((2, 1), (0, 0))
GL22_GR = V((2, 1), (2, 1))
OSP_GR = V((4, 2), (4, 2), EVEN_ISO)
PISP_GR = V((5, 3), (5, 2), ODD_ISO)


def _p1():
    c = build_chart(P1, distinguished_index(P1))
    (x,) = c.even_coords
    return c, x, SuperPolynomial.of(x)


def _gl2_element(label):
    g = build_gl(2, 0)
    return g.basis[g.labels.index(label)][0]


# -- the projective line


def test_raising_operator_is_a_translation():
    c, x, X = _p1()
    assert fundamental_field(_gl2_element("E1,2"), c) == VectorField(c, {x: -ONE}, EVEN)


def test_lowering_operator_is_quadratic():
    c, x, X = _p1()
    assert fundamental_field(_gl2_element("E2,1"), c) == VectorField(c, {x: X * X}, EVEN)


def test_diagonal_operator_is_euler_field():
    c, x, X = _p1()
    assert fundamental_field(_gl2_element("E1,1"), c) == VectorField(c, {x: -X}, EVEN)


def test_identity_acts_by_zero():
    c, _, _ = _p1()
    assert fundamental_field(SuperMatrix.identity((EVEN, EVEN)), c).is_zero()


def test_p1_fields_respect_the_bracket():
    c, _, _ = _p1()
    e, f_ = _gl2_element("E1,2"), _gl2_element("E2,1")
    lhs = field_bracket(fundamental_field(e, c), fundamental_field(f_, c))
    assert lhs == fundamental_field(bracket(e, f_), c)


# -- field brackets


def test_bracket_of_coordinate_fields_vanishes():
    c = build_chart(GL22_GR, distinguished_index(GL22_GR))
    u, v = c.odd_coords
    assert field_bracket(coordinate_field(c, u), coordinate_field(c, v)).is_zero()


def test_translation_and_euler_field():
    c, x, X = _p1()
    dx = coordinate_field(c, x)
    euler = VectorField(c, {x: X}, EVEN)
    assert field_bracket(dx, euler) == dx


def test_odd_fields_bracket_symmetrically():
    c = build_chart(GL22_GR, distinguished_index(GL22_GR))
    (x, _), (a, b) = c.even_coords, c.odd_coords
    v = VectorField(c, {a: SuperPolynomial.of(x)}, ODD)
    w = coordinate_field(c, b)
    assert field_bracket(v, w) == field_bracket(w, v)


def test_fields_on_different_charts_do_not_mix():
    charts = enumerate_charts(P1)
    c0, c1 = (build_chart(P1, I) for I in charts)
    with pytest.raises(ChartMismatch):
        field_bracket(coordinate_field(c0, c0.even_coords[0]), coordinate_field(c1, c1.even_coords[0]))


def test_adding_fields_of_mixed_parity():
    c = build_chart(GL22_GR, distinguished_index(GL22_GR))
    with pytest.raises(ParityMismatch):
        coordinate_field(c, c.even_coords[0]) + coordinate_field(c, c.odd_coords[0])


def test_coordinate_field_of_foreign_variable():
    c0 = build_chart(P1, distinguished_index(P1))
    other = build_chart(GL22_GR, distinguished_index(GL22_GR))
    with pytest.raises(ChartMismatch):
        coordinate_field(c0, other.odd_coords[0])


# -- homomorphism


@pytest.mark.parametrize("g,f", [(build_gl(2, 2), GL22_GR), (build_gl(3, 2), V((3, 2, 1), (2, 1, 1))),
                                 (build_osp(4, 4), OSP_GR), (build_pisp(5), PISP_GR)],
                         ids=["gl22", "gl32-three-step", "osp44", "pisp5"])
def test_action_is_a_homomorphism(g, f):
    rep = check_homomorphism(g, f)
    assert rep["ok"], rep["failures"][:5]
    assert rep["pairs"] == len(g) * (len(g) + 1) // 2


def test_homomorphism_on_a_second_chart():
    I = enumerate_charts(GL22_GR)[-1]
    assert check_homomorphism(build_gl(2, 2), GL22_GR, index=I)["ok"]


def test_sign_of_lower_left_odd_blocks_matters():
    """Flipping the lower-left odd blocks back gives a closed algebra whose fields misbehave."""
    g = build_osp(4, 4)

    def flip(x, p):
        if p != ODD:
            return x
        rows = [[-e if i >= 4 else e for e in r] for i, r in enumerate(x.entries)]
        return SuperMatrix(x.row_parities, x.col_parities, rows)

    h = dataclasses.replace(g, basis=[(flip(x, p), p) for x, p in g.basis], structure_constants={})
    h.compute_structure_constants()
    rep = check_homomorphism(h, OSP_GR)
    assert not rep["ok"]
    assert check_homomorphism(g, OSP_GR)["ok"]


def test_form_check_rejects_foreign_matrix():
    c = build_chart(OSP_GR, distinguished_index(OSP_GR))
    e11 = build_gl(4, 4).basis[0][0]
    with pytest.raises(NotInAlgebra):
        fundamental_field(e11, c)


def test_algebra_must_match_flag_kind():
    with pytest.raises(KindMismatch):
        fundamental_fields(build_gl(4, 4), build_chart(OSP_GR, distinguished_index(OSP_GR)))


@pytest.mark.parametrize("g,f", [(build_gl(2, 2), GL22_GR), (build_osp(4, 4), OSP_GR)])
def test_coefficients_are_at_most_quadratic(g, f):
    c = build_chart(f, distinguished_index(f))
    for v in fundamental_fields(g, c):
        for poly in v.coeffs.values():
            for e, o in poly.terms:
                assert sum(e[1::2]) + len(o) <= 2


# -- spans, kernels, membership


def test_gl22_span_and_kernel():
    assert span_dimension(build_gl(2, 2), GL22_GR) == (7, 8)
    ker = kernel_of_action(build_gl(2, 2), GL22_GR)
    assert len(ker) == 1
    g = build_gl(2, 2)
    ident = g.combine(ker[0])
    assert ident == SuperMatrix.identity(ident.row_parities).scale(ident.entries[0][0].constant_term())


def test_osp_acts_faithfully():
    assert kernel_of_action(build_osp(4, 4), OSP_GR) == []
    assert span_dimension(build_osp(4, 4), OSP_GR) == (16, 16)


def test_pisp_acts_faithfully():
    assert kernel_of_action(build_pisp(5), PISP_GR) == []
    assert span_dimension(build_pisp(5), PISP_GR) == (25, 25)


def test_kernel_is_an_ideal():
    g = build_gl(2, 1)
    f = V((2, 1), (1, 0))
    ker = [g.combine(v) for v in kernel_of_action(g, f)]
    assert ker
    c = build_chart(f, distinguished_index(f))
    for k in ker:
        for b, p in g.basis:
            assert fundamental_field(bracket(k, b), c, p, check_form=False).is_zero()


def test_every_coordinate_field_is_fundamental():
    c = build_chart(GL22_GR, distinguished_index(GL22_GR))
    for v in c.even_coords + c.odd_coords:
        assert coordinate_field_membership(build_gl(2, 2), GL22_GR, v)["in_span"]


def test_membership_respects_parity():
    c, x, _ = _p1()
    rep = coordinate_field_membership(build_gl(2, 0), P1, x)
    assert rep == {"coordinate": x.name, "parity": EVEN, "in_span": True}
