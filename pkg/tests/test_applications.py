import numpy as np
import pytest

from fphomalg.applications import (
    EMSSInput,
    GroupAction,
    bu_to_bu1_input,
    emss_hypothesis_check,
    emss_tor_algebra,
    exterior_series,
    invariant_dims,
    invariants_closed_under_products,
    lie_formality_checklist,
    loop_cohomology_dims,
    stanley_reisner_dims,
)
from fphomalg.errors import CrossCheckError, ValidationError
from fphomalg.linalg import GradedVectorSpace
from fphomalg.monalg import MonomialAlgebra


def minus_one_action(p):
    return GroupAction(p, [[[p - 1, 0], [0, p - 1]]], [2, 2])


def swap_action(p):
    return GroupAction(p, [[[0, 1], [1, 0]]], [2, 2])


def test_group_closure_and_validation():
    a = minus_one_action(3)
    assert a.order == 2
    s = swap_action(5)
    assert s.order == 2
    with pytest.raises(ValidationError):
        GroupAction(3, [[[1, 1], [0, 1]]], [2, 4])  # mixes degrees
    with pytest.raises(ValidationError):
        GroupAction(3, [[[0, 0], [0, 0]]], [2, 2])  # singular


def test_invariants_golden_minus_one():
    series = invariant_dims(minus_one_action(3), 12)
    assert series.nonzero() == {0: 1, 4: 3, 8: 5, 12: 7}


def test_invariants_trivial_group_full_sym():
    triv = GroupAction(3, [[[1, 0], [0, 1]]], [2, 2])
    series = invariant_dims(triv, 8)
    assert series.nonzero() == {0: 1, 2: 2, 4: 3, 6: 4, 8: 5}


def test_invariants_symmetric_group():
    series = invariant_dims(swap_action(5), 8)
    assert series.nonzero() == {0: 1, 2: 1, 4: 2, 6: 2, 8: 3}


def test_invariants_products_stay_invariant():
    assert invariants_closed_under_products(minus_one_action(3), 8)
    assert invariants_closed_under_products(swap_action(5), 8)


def test_checklist_golden_f3():
    rep = lie_formality_checklist(minus_one_action(3), 12)
    assert not rep["p_divides_order"]
    assert rep["verdict"] == "formality criteria satisfied"
    assert rep["polynomial_verdict"] == "not_polynomial"
    assert rep["polynomial_witness"] == {
        "degree": 8, "invariant_dim": 5, "free_dim": 6
    }


def test_checklist_p_divides_order():
    # at p=2 the sign representation collapses; the abstract order of the
    # order-two Weyl group is declared explicitly
    action = GroupAction(2, [[[1, 0], [0, 1]]], [2, 2], order=2)
    rep = lie_formality_checklist(action, 8)
    assert rep["p_divides_order"]
    assert rep["verdict"] == "criteria not satisfied"


def test_checklist_polynomial_case():
    rep = lie_formality_checklist(swap_action(5), 8)
    assert rep["verdict"] == "formality criteria satisfied"
    assert rep["polynomial_verdict"] == "polynomial_up_to_cap"
    assert sorted(rep["generator_degrees"]) == [2, 4]


def test_stanley_reisner_point():
    out = stanley_reisner_dims(["v"], [["v"]], 2, 8, 3)
    assert out["series"].nonzero() == {0: 1, 2: 1, 4: 1, 6: 1, 8: 1}


def test_stanley_reisner_two_points():
    out = stanley_reisner_dims(["a", "b"], [["a"], ["b"]], 2, 6, 2)
    assert out["series"].nonzero() == {0: 1, 2: 2, 4: 2, 6: 2}


def test_stanley_reisner_triangle_boundary():
    out = stanley_reisner_dims(
        ["a", "b", "c"], [["a", "b"], ["b", "c"], ["a", "c"]], 2, 8, 3
    )
    # degree 6 (k=3): all 10 monomials minus the full-support one
    assert out["series"][6] == 9


def test_emss_surjectivity_bu_n():
    for n in range(1, 10):
        inp = bu_to_bu1_input(n, cap=8)
        rep = emss_hypothesis_check(inp)
        assert rep["to_x"]["surjective"] == (n % 2 == 1), n
        assert rep["to_y"]["surjective"]


def test_emss_identity_map_check():
    B = MonomialAlgebra.polynomial(2, [("u", 2)])
    inp = EMSSInput(B, B, MonomialAlgebra.trivial(2),
                    {"u": "u"}, {"u": "0"}, cap=8)
    rep = emss_hypothesis_check(inp)
    assert rep["hypotheses_satisfied"]
    assert rep["to_x"]["generator_images_linear"]["u"]


def test_emss_tor_pu2_square_zero_witness():
    inp = bu_to_bu1_input(2, cap=10)
    out = emss_tor_algebra(inp)
    assert out["totals"] == {0: 1, 1: 1, 2: 1, 3: 1}
    deg1 = [i for i, c in enumerate(out["classes"]) if c["total"] == 1]
    assert len(deg1) == 1
    sq = [r for r in out["squares"] if r["class"] == deg1[0]]
    assert sq[0]["square"] == "zero"


def test_emss_tor_pu3_exterior_pattern():
    inp = bu_to_bu1_input(3, cap=12)
    out = emss_tor_algebra(inp)
    totals = {d: n for d, n in out["totals"].items() if d <= 8}
    assert totals == {0: 1, 3: 1, 5: 1, 8: 1}


def test_emss_tor_identity_collapse():
    B = MonomialAlgebra.polynomial(3, [("u", 2)])
    inp = EMSSInput(B, B, B, {"u": "u"}, {"u": "u"}, cap=8)
    out = emss_tor_algebra(inp)
    # Tor = H_B in column 0
    assert all(s == 0 for (s, t) in out["table"].entries)
    assert out["totals"] == {0: 1, 2: 1, 4: 1, 6: 1, 8: 1}


def test_loop_cohomology_examples():
    out = loop_cohomology_dims(GradedVectorSpace({2: 1}), 8, 3)
    assert out["series"].nonzero() == {0: 1, 1: 1}
    assert out["primitive_count"] == 1
    out = loop_cohomology_dims(GradedVectorSpace({4: 1}), 8, 2)
    assert out["series"].nonzero() == {0: 1, 3: 1}
    out = loop_cohomology_dims(GradedVectorSpace({2: 1, 4: 1}), 8, 5)
    assert out["series"].nonzero() == {0: 1, 1: 1, 3: 1, 4: 1}
    with pytest.raises(ValidationError):
        loop_cohomology_dims(GradedVectorSpace({3: 1}), 8, 3)


def test_exterior_series_char_independent():
    assert exterior_series([1], 5).nonzero() == {0: 1, 1: 1}
    assert exterior_series([1, 3], 5).nonzero() == {0: 1, 1: 1, 3: 1, 4: 1}
