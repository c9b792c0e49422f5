"""Completion searches: refuted scenarios stay empty, live ones recover
the two families exactly, and every found table re-verifies independently."""
import pytest

from nilgrade.errors import BudgetExhausted, ConstraintViolation
from nilgrade.families import family_a6, family_b4
from nilgrade.grading import characteristic_sequence_at, is_naturally_graded
from nilgrade.nonexistence import (
    REFUTED_WORDING,
    completion_problem,
    parse_scenario,
    refutation_report,
    search_completion,
    solution_algebra,
)
from nilgrade.scalar import fp_field


def _table_mod(alg, slot):
    return {idx: c.val for idx, c in alg.table.get(slot, {}).items()}


# ---------------------------------------------------------------------------
# scenarios with no completions


@pytest.mark.parametrize("prime", [5, 13])
@pytest.mark.parametrize("scenario", ["shape:2,4,1", "r1=1,r2=3", "r1=2,r2=1"])
def test_refuted_scenarios_are_empty(scenario, prime):
    out = search_completion(completion_problem(7, scenario, prime))
    assert out.complete
    assert out.solutions_found == 0
    # all three die under propagation alone, before any branching
    assert out.nodes == 0


def test_shape_contradiction_needs_no_unknowns():
    # blocks (2,4,1): the pinned products of the adapted basis already
    # violate associativity, so the constructor-time sweep catches it
    prob = completion_problem(7, "shape:2,4,1", 5)
    out = search_completion(prob)
    assert out.complete and not out.solutions
    assert prob.degrees == (1, 2, 1, 2, 3, 4, 1)


def test_refutation_report_wording():
    report = refutation_report(7, "r1=2,r2=1")
    assert report["verdict"] == REFUTED_WORDING
    assert [r["field"] for r in report["runs"]] == [5, 13]
    assert all(r["solutions_found"] == 0 and r["complete"]
               for r in report["runs"])

    alive = refutation_report(7, "r1=1,r2=2", primes=(5,))
    assert alive["verdict"] == "completions exist"
    assert alive["runs"][0]["solutions_found"] > 0


# ---------------------------------------------------------------------------
# scenarios whose census is exactly one of the families


def test_degree_one_tail_census_is_the_six_parameter_family():
    prob = completion_problem(7, "r1=1,r2=1", 5)
    out = search_completion(prob)
    assert out.complete
    assert out.solutions_found == 5 ** 6

    F = fp_field(5)
    seen = set()
    for sol in out.solutions:
        params = (
            sol[(5, 1)].get(6, 0), sol[(5, 5)].get(6, 0), sol[(5, 7)].get(6, 0),
            sol[(7, 1)].get(6, 0), sol[(7, 5)].get(6, 0), sol[(7, 7)].get(6, 0),
        )
        seen.add(params)
        alg = family_a6(7, params, F)
        for slot, _span in prob.unknown:
            assert sol[slot] == _table_mod(alg, slot)
    # every parameter choice occurs exactly once
    assert len(seen) == 5 ** 6


def test_degree_two_tail_census_is_the_four_parameter_family():
    prob = completion_problem(7, "r1=1,r2=2", 5)
    assert prob.required == (7,)
    out = search_completion(prob)
    assert out.complete
    # 5^4 parameter tuples minus the 5^2 with (b2, b4) = (0, 0)
    assert out.solutions_found == 5 ** 4 - 5 ** 2

    F = fp_field(5)
    for sol in out.solutions:
        b1 = sol[(5, 1)].get(6, 0)
        b2 = sol[(5, 1)].get(7, 0)
        b3 = sol[(5, 5)].get(6, 0)
        b4 = sol[(5, 5)].get(7, 0)
        assert (b2, b4) != (0, 0)
        alg = family_b4(7, (b1, b2, b3, b4), F)
        for slot, _span in prob.unknown:
            assert sol[slot] == _table_mod(alg, slot)


@pytest.mark.parametrize("scenario,stride", [("r1=1,r2=1", 977), ("r1=1,r2=2", 37)])
def test_solutions_reverify_as_graded_algebras(scenario, stride):
    prob = completion_problem(7, scenario, 5)
    out = search_completion(prob)
    for sol in out.solutions[::stride]:
        alg = solution_algebra(prob, sol)
        assert alg.verify_associativity() == []
        graded, _ = is_naturally_graded(alg)
        assert graded
        e1 = alg.basis_vector(1)
        assert characteristic_sequence_at(alg, e1) == (4, 2, 1)


def test_solution_order_is_deterministic():
    prob = completion_problem(7, "r1=1,r2=2", 5)
    first = search_completion(prob).solutions
    second = search_completion(completion_problem(7, "r1=1,r2=2", 5)).solutions
    assert first == second
    # lexicographic in the branching variables, so the head is fully zero
    # except for the forced reach of e_7
    head = first[0]
    assert head[(5, 1)] == {}
    assert head[(5, 5)] == {7: 1}


# ---------------------------------------------------------------------------
# scenario parsing and problem construction


def test_parse_scenario_accepts_both_forms():
    assert parse_scenario("shape:2,4,1") == {"kind": "shape", "sizes": (2, 4, 1)}
    assert parse_scenario(" r1=1, r2=3 ") == {"kind": "degrees", "r1": 1, "r2": 3}


@pytest.mark.parametrize("bad", [
    "shape:", "shape:2,x,1", "shape:0,4,3",
    "r1=1", "r2=3", "r1=0,r2=2", "blocks:2,4,1", "gibberish",
])
def test_parse_scenario_rejects_garbage(bad):
    with pytest.raises(ConstraintViolation):
        parse_scenario(bad)


def test_problem_rejects_out_of_range_degrees():
    with pytest.raises(ConstraintViolation):
        completion_problem(7, "r1=4,r2=1", 5)  # e_{n-1} would leave the gradation
    with pytest.raises(ConstraintViolation):
        completion_problem(7, "shape:2,4,2", 5)  # sizes must sum to n
    with pytest.raises(ConstraintViolation):
        completion_problem(6, "r1=1,r2=1", 5)


def test_degree_problem_shape():
    prob = completion_problem(7, "r1=1,r2=3", 5)
    assert prob.degrees == (1, 2, 3, 4, 1, 2, 3)
    assert prob.known[(1, 5)] == {6: 1}
    assert prob.known[(2, 5)] == {}
    # degree >= 2 holds {e_2, e_3, e_4, e_6, e_7}, and so on up the chain
    assert prob.target_dims() == [5, 3, 1, 0]
    # e_7 sits in degree 3 and nothing pinned reaches it
    assert prob.required == (7,)


# ---------------------------------------------------------------------------
# budget behaviour


def test_budget_too_small_to_certify_raises():
    prob = completion_problem(7, "r1=1,r2=1", 5)
    with pytest.raises(BudgetExhausted):
        search_completion(prob, budget=5)


def test_budget_partial_census_is_marked_incomplete():
    prob = completion_problem(7, "r1=1,r2=1", 5)
    out = search_completion(prob, budget=60)
    assert not out.complete
    assert 0 < out.solutions_found < 5 ** 6
