from __future__ import annotations

import random
from fractions import Fraction

import pytest

from nilgrade.classify import (
    a6_admissible,
    a6_transform,
    apply_a6_chain,
    apply_b4_chain,
    b4_transform,
    canonical_form_a6,
    canonical_form_b4,
    invariants_a6,
)
from nilgrade.errors import BadPrime, DegenerateParams, InadmissibleChange
from nilgrade.families import (
    REP_CATALOG,
    random_a6_params,
    random_b4_params,
    random_qi,
    representative_params,
)
from nilgrade.scalar import QI_FIELD, Qi, fp_field

I = Qi(0, 1)


def _p(*xs) -> tuple:
    return tuple(x if isinstance(x, Qi) else Qi(x) for x in xs)


# Hand-forced inputs, one per leaf of the decision tree.  The expected
# branch follows from the defining predicates (I1, K, Q0, I2, I5, nabla and
# the two stage-one components), all checked by hand for these tuples.
FORCED = [
    (_p(2, 0, 0, 0, 0, 0), "a.1.1.1.1", "teo.1", {"alpha": Qi(2)}, []),
    (_p(3, 0, 0, 2, 0, 0), "a.1.1.1.2", "teo.2", {}, []),
    (_p(1, 2, 0, 0, 0, 0), "a.1.1.2.1.1", "teo.3", {}, []),
    (_p(3, 2, 0, 0, 0, 0), "a.1.1.2.1.2", "teo.4", {}, []),
    (_p(0, 1, 0, 1, 0, 0), "a.1.1.2.2", "teo.5", {}, ["theorem-list-discrepancy"]),
    (_p(1, 0, 0, 0, 0, 1), "a.1.2.1.1", "teo.6", {"beta": Qi(1)}, []),
    (_p(1, 0, 0, 1, 0, 1), "a.1.2.1.2", "teo.7", {}, []),
    (_p(2, 0, 0, 0, 0, 1), "a.1.2.2", "teo.6", {"beta": Qi(2)}, []),
    (_p(1, 1, 0, 0, 0, 1), "a.2.1.1", "teo.8", {}, []),
    (_p(0, 1, 0, I, 0, 1), "a.2.1.2", "teo.9", {}, []),
    (_p(0, 1, 0, 0, 0, 1), "a.2.2", "teo.10", {}, []),
    (_p(0, 0, 0, 0, 1, 0), "b.1.1", "teo.11", {}, []),
    (_p(1, 0, 0, 0, 1, 0), "b.1.2", "teo.12", {}, []),
    (_p(0, 0, 0, 1, 1, 1), "b.2.1.1", "teo.13", {}, []),
    (_p(1, 0, 0, 0, 1, 1), "b.2.1.2", "teo.14", {}, []),
    (_p(0, 1, 0, 3, 1, -6), "b.2.2.1", "teo.15", {"gamma": Qi(3)}, []),
    (_p(1, 1, 0, 0, 1, 2), "b.2.2.2", "teo.16", {"delta": Qi(2)}, []),
    (_p(1, 1, 0, 1, 1, 1), "b.2.2.1", "extra.1", {"eps": Qi(1)},
     ["unlisted-representative"]),
]

FORCED_B4 = [
    (_p(0, 1, 0, 0), "b4.1", "teo1.1", {}),
    (_p(0, 1, 1, 0), "b4.2", "teo1.2", {}),
    (_p(1, 0, 0, 1), "b4.3", "teo1.3", {}),
    (_p(1, 1, 0, 1), "b4.4", "teo1.4", {"beta": Qi(1)}),
    (_p(3, 1, 0, 1), "b4.4", "teo1.4", {"beta": Qi(3)}),
    (_p(2, 1, -1, 2), "b4.4", "teo1.4", {"beta": Qi(Fraction(5, 2))}),
]


@pytest.mark.parametrize("p,branch,rep,param,flags", FORCED,
                         ids=[f[1] for f in FORCED])
def test_every_leaf_is_reachable(p, branch, rep, param, flags):
    res = canonical_form_a6(p)
    assert res.branch_trace == branch
    assert res.rep_id == rep
    assert res.param == param
    assert res.flags == flags
    # the produced chain really lands on the catalog tuple
    assert apply_a6_chain(p, res.chain) == res.target
    assert res.target == representative_params(
        rep, param.get(REP_CATALOG[rep].param_name), res.work_field)


@pytest.mark.parametrize("b,branch,rep,param", FORCED_B4,
                         ids=[f[1] for f in FORCED_B4])
def test_b4_leaves(b, branch, rep, param):
    res = canonical_form_b4(b)
    assert (res.branch_trace, res.rep_id, res.param) == (branch, rep, param)
    assert apply_b4_chain(b, res.chain) == res.target


def test_discrepancy_sample_keeps_its_flag():
    res = canonical_form_a6(_p(0, 1, 0, 1, 0, 0))
    assert res.branch_trace == "a.1.1.2.2"
    assert "theorem-list-discrepancy" in res.flags


def test_b4_refuses_degenerate_tail():
    with pytest.raises(DegenerateParams):
        canonical_form_b4(_p(1, 0, 1, 0))


PARAM_VALUES = [Qi(2), Qi(-1), Qi(Fraction(1, 2)), Qi(0, 1), Qi(7)]


def test_catalog_round_trip():
    """Classifying a representative returns itself, parameter included."""
    for rep_id, entry in REP_CATALOG.items():
        classify = canonical_form_a6 if entry.family == "a6" else canonical_form_b4
        if entry.param_name is None:
            res = classify(representative_params(rep_id))
            assert res.rep_id == rep_id and res.param == {}
            continue
        for v in PARAM_VALUES:
            if entry.excluded(v):
                continue
            res = classify(representative_params(rep_id, v))
            assert res.rep_id == rep_id
            assert res.param == {entry.param_name: v}


def _admissible(rng, p):
    while True:
        g = tuple(random_qi(rng) for _ in range(6))
        if a6_admissible(p, g):
            return g


def test_orbit_points_classify_alike():
    rng = random.Random(20260817)
    for _ in range(30):
        p = random_a6_params(rng)
        base = canonical_form_a6(p)
        q = a6_transform(p, _admissible(rng, p))
        moved = canonical_form_a6(q)
        assert moved.rep_id == base.rep_id
        assert moved.param == base.param


def test_b4_orbit_points_classify_alike():
    rng = random.Random(77)
    for _ in range(30):
        b = random_b4_params(rng)
        base = canonical_form_b4(b)
        while True:
            g = tuple(random_qi(rng) for _ in range(5))
            try:
                b1 = b4_transform(b, g)
                break
            except InadmissibleChange:
                continue
        moved = canonical_form_b4(b1)
        assert (moved.rep_id, moved.param) == (base.rep_id, base.param)


def test_random_tuples_always_classify():
    rng = random.Random(31)
    seen = set()
    for _ in range(120):
        p = random_a6_params(rng)
        res = canonical_form_a6(p)
        start = tuple(res.work_field.coerce(x) for x in p)
        assert apply_a6_chain(start, res.chain) == res.target
        seen.add(res.rep_id)
    # a random tuple is generic, so the open stratum dominates
    assert "teo.16" in seen


def test_gamma_value_satisfies_its_quadratic():
    rng = random.Random(41)
    for k in (2, 3, -1, Fraction(2, 3)):
        gamma = Qi(k)
        p = representative_params("teo.15", gamma)
        g = _admissible(rng, p)
        res = canonical_form_a6(a6_transform(p, g))
        got = res.param["gamma"]
        # the attained root of x^2 - x + gamma(1-gamma); both roots name
        # the same orbit
        assert got == gamma or got == Qi(1) - gamma


def test_delta_reads_off_the_invariants():
    rng = random.Random(42)
    for k in (2, -1, Fraction(1, 3)):
        delta = Qi(k)
        p = representative_params("teo.16", delta)
        inv = invariants_a6(p)
        assert inv["delta"] == delta
        q = a6_transform(p, _admissible(rng, p))
        res = canonical_form_a6(q)
        assert res.rep_id == "teo.16" and res.param["delta"] == delta
        assert invariants_a6(q)["delta"] == delta


def test_square_root_extensions_are_tracked():
    res = canonical_form_a6(_p(1, 2, 0, 0, 0, 1))  # needs sqrt(2)
    assert res.rep_id == "teo.8"
    assert res.work_field.kind == "Qi_sqrt" and res.work_field.d == Qi(2)
    with pytest.raises(BadPrime):
        F = fp_field(13)
        canonical_form_a6(tuple(F.coerce(x) for x in (1, 2, 0, 0, 0, 1)), F)


def test_classification_mod_13():
    F = fp_field(13)
    res = canonical_form_a6(tuple(F.coerce(x) for x in (1, 1, 0, 0, 0, 1)), F)
    assert (res.rep_id, res.branch_trace) == ("teo.8", "a.2.1.1")
    res = canonical_form_a6(tuple(F.coerce(x) for x in (0, 1, 0, 0, 0, 1)), F)
    assert res.rep_id == "teo.10"  # needs a rotation, which F13 can supply


def test_mod_p_failures_are_only_bad_prime():
    F = fp_field(13)
    rng = random.Random(53)
    done = refused = 0
    for _ in range(150):
        p = tuple(F.coerce(rng.randrange(13)) for _ in range(6))
        try:
            res = canonical_form_a6(p, F)
        except BadPrime:
            refused += 1
            continue
        done += 1
        assert apply_a6_chain(p, res.chain) == res.target
    assert done > 100  # refusals stay the exception, not the rule
