import json
import random

import pytest

from superflag.errors import AnsatzTooLarge, UnknownSuite, UnstableDegree
from superflag.flagatlas import validate_flag_type as V
from superflag.fundfields import fundamental_fields
from superflag.harness import (
    OracleProblem,
    _solve,
    hypothesis_gate,
    load_suite,
    oracle_global_fields,
    parse_flag,
    pgl_superdimension,
    run_check,
    run_suite,
    suite_names,
    transport_certificate,
)
from superflag.liesuperalg import build_osp


# -- flag strings


def test_parse_plain_flag():
    f = parse_flag("3,2,1|2,1,0")
    assert (f.k, f.l, f.kind) == ((3, 2, 1), (2, 1, 0), "plain")


def test_parse_isotropic_shorthand():
    f = parse_flag("even:2,2,1|2,2,1")
    assert f.k == (4, 2, 1) and f.kind == "even-isotropic"


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_flag("2,1")


# -- oracle


def test_projective_line_has_sl2():
    e, o, basis = oracle_global_fields(OracleProblem(V((2, 1), (0, 0))))
    assert (e, o) == (3, 0)
    assert basis.diagnostics["certificate"]["ok"]


def test_gl22_grassmannian_has_extra_fields():
    """The (2|2) Grassmannian carries more than pgl: two extra even fields."""
    e, o, _ = oracle_global_fields(OracleProblem(V((2, 1), (2, 1))))
    assert (e, o) == (9, 8) != pgl_superdimension(2, 2)


def test_osp_grassmannian_matches_and_contains_the_action():
    f = V((4, 2), (4, 2), "even-isotropic")
    e, o, basis = oracle_global_fields(OracleProblem(f, seed=3))
    assert (e, o) == (16, 16)
    assert basis.diagnostics["next_degree"] == [16, 16]
    assert basis.diagnostics["certificate"]["ok"]
    assert all(basis.contains(v) for v in fundamental_fields(build_osp(4, 4), basis.chart))


def test_oracle_needs_degree_two():
    with pytest.raises(ValueError):
        oracle_global_fields(OracleProblem(V((2, 1), (0, 0)), degree_bound=1))


def test_oracle_refuses_large_ansatz():
    with pytest.raises(AnsatzTooLarge):
        oracle_global_fields(OracleProblem(V((2, 1), (2, 1)), max_unknowns=10))


def test_low_degree_is_flagged_unstable():
    f = V((2, 1, 0), (4, 2, 1), "even-isotropic")
    with pytest.raises(UnstableDegree) as info:
        oracle_global_fields(OracleProblem(f, points_per_overlap=0))
    assert info.value.lower == (9, 8) and info.value.upper == (11, 8)


def test_certificate_catches_a_tampered_transport():
    f = V((2, 1), (2, 1))
    _, _, _, transports = _solve(f, 2, None)
    assert transport_certificate(f, transports, random.Random(0), 5)["ok"]
    for tr in transports:
        v = next(iter(tr.u))
        num, den = tr.u[v]
        tr.u[v] = (num.scale(2), den)
    rep = transport_certificate(f, transports, random.Random(0), 5)
    assert not rep["ok"] and rep["mismatches"]


# -- gate


def test_gate_rejects_plain_flags():
    rep = hypothesis_gate(V((2, 1), (2, 1)))
    assert not rep["applies"] and rep["failed"] == ["isotropic form"]


def test_gate_rejects_small_odd_k1():
    rep = hypothesis_gate(parse_flag("odd:4,2,1|4,2,1"))
    assert "k_1 >= 3" in rep["failed"]


def test_gate_excluded_level_pattern():
    rep = hypothesis_gate(parse_flag("even:4,2,2|4,2,0"))
    assert "(k_2,l_2) != (k_1,0)" in rep["failed"]


def test_gate_skips_fiber_oracle_once_closed():
    rep = hypothesis_gate(parse_flag("even:4,2,2|4,2,0"))
    last = rep["conditions"][-1]
    assert last["holds"] is None and last["detail"]["method"] == "skipped, gate already closed"


def test_gate_without_fiber_oracle_is_undecided():
    rep = hypothesis_gate(parse_flag("even:4,2,1|2,1,0"), fiber_oracle=False)
    assert not rep["applies"] and rep["undecided"] == ["v(fiber) = pgl(k_1|l_1)"]


def test_gate_opens_when_fiber_is_projective():
    rep = hypothesis_gate(parse_flag("even:4,2,1|2,1,0"))
    assert rep["applies"], rep
    assert rep["theorem"] == "v = osp(2k_1|2l_1)"


def test_gate_exceptional_fiber_keeps_it_closed():
    rep = hypothesis_gate(parse_flag("even:4,2,1|4,2,1"))
    assert rep["failed"] == ["v(fiber) = pgl(k_1|l_1)"]
    assert rep["conditions"][-1]["detail"]["oracle"] == [9, 8]


def test_gate_multi_level_fiber_uses_restriction_lines():
    rep = hypothesis_gate(parse_flag("odd:5,3,2,1|5,2,1,1"))
    cond = rep["conditions"][-1]
    assert cond["detail"]["method"] == "gl-flag restriction lines"


# -- suites


def test_suites_are_packaged():
    names = suite_names()
    for n in ("osp-grassmannian-2-2", "negative-controls", "gate-examples", "bwb-lemma-table"):
        assert n in names


def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        load_suite("no-such-suite")


def test_suite_output_is_deterministic():
    a = run_suite("bwb-lemma-table", seed=7).to_json()
    b = run_suite("bwb-lemma-table", seed=7).to_json()
    assert a == b
    data = json.loads(a)
    assert data["runtime_ms"] is None and data["seed"] == 7


def test_parallel_run_matches_serial():
    a = run_suite("negative-controls", seed=1).to_json()
    b = run_suite("negative-controls", seed=1, jobs=2).to_json()
    assert a == b


def test_negative_controls_are_red():
    rep = run_suite("negative-controls")
    assert not rep.ok
    assert all(c.status == "fail" for c in rep.checks)


def test_bad_check_becomes_a_failure():
    res = run_check("broken", {"op": "superdimension", "anchor": "x", "algebra": "nope"}, 0)
    assert res.status == "fail" and "error" in res.data


def test_slow_checks_skip_by_default():
    res = run_check("s", {"op": "superdimension", "anchor": "x", "algebra": "gl", "params": "1,1",
                          "expect": "2,2", "slow": "yes"}, 0)
    assert res.status == "skip"


def test_oracle_check_brackets_when_next_degree_is_too_big():
    res = run_check("o", {"op": "oracle", "anchor": "x", "flag": "2,1|2,1",
                          "degree": "2", "expect": "9,8", "max_unknowns": "100"}, 0)
    assert res.status == "bracket"
    assert res.data["lower"] == [9, 8] and res.data["lower_matches_expected"]


def test_oracle_check_skips_when_ansatz_is_too_big():
    res = run_check("o", {"op": "oracle", "anchor": "x", "flag": "2,1|2,1",
                          "degree": "2", "expect": "9,8", "max_unknowns": "50"}, 0)
    assert res.status == "skip"


@pytest.mark.slow
def test_three_level_osp_flag_reaches_degree_three():
    f = parse_flag("even:2,2,1|2,2,1")
    with pytest.raises(UnstableDegree) as info:
        oracle_global_fields(OracleProblem(f, degree_bound=3, max_unknowns=70_000, points_per_overlap=0))
    assert info.value.lower == (16, 16) and info.value.upper is None
