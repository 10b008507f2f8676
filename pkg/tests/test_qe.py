from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given

from conftest import rng_of, seeds
from tamelin import corpus as cp
from tamelin.errors import ResourceLimitError
from tamelin.intervals import Interval
from tamelin.lang import as_formula, conj, evaluate, forall, implies, free_vars, is_quantifier_free, parse_formula
from tamelin.oracle import node_truth, vs_eliminate, witness_truth
from tamelin.qe import decide, eliminate, to_interval_union


def _equivalent(f, g, names):
    f, g = as_formula(f), as_formula(g)
    return decide(forall(sorted(names), conj(implies(f, g), implies(g, f))))


@pytest.mark.parametrize("text,expected", [
    ("exists x. a < x and x < b", "a < b"),
    ("exists x. 2*x = y and x > 0", "y > 0"),
    ("exists x. x > y and x > z", "true"),
])
def test_eliminate_examples(text, expected):
    g = eliminate(text)
    assert is_quantifier_free(g)
    assert _equivalent(g, expected, free_vars(parse_formula(text)))


@pytest.mark.parametrize("text,expected", [
    ("forall e. e > 0 implies exists d. d > 0 and d < e", True),
    ("exists x. x < x", False),
    ("forall x. exists y. y < x", True),
])
def test_decide_examples(text, expected):
    assert decide(text) is expected


def test_interval_extraction_examples():
    u = to_interval_union("x = 0 or (1 < x and x < 2)", "x")
    assert list(u) == [Interval.point(0), Interval.open(1, 2)]
    assert to_interval_union("x < x", "x").is_empty()
    neq = to_interval_union("not x = 0", "x")
    assert [(c.lo, c.hi) for c in neq] == [(-cp.INF, 0), (0, cp.INF)]
    assert not neq.contains(0)


def test_budget_exceeded_raises():
    with pytest.raises(ResourceLimitError):
        eliminate("exists x. exists y. (x < y and y < a) or (x > b and y > x)", budget=1)


@given(seeds)
def test_eliminate_agrees_with_witness_oracle(seed):
    rng = rng_of(seed)
    f = cp.random_formula(rng, max_atoms=6, max_quants=2)
    g = eliminate(f)
    assert is_quantifier_free(g)
    assert free_vars(g) <= free_vars(f)
    for _ in range(10):
        p = cp.random_point(rng, free_vars(f))
        assert evaluate(g, p) == witness_truth(f, p)


@given(seeds)
def test_virtual_substitution_agrees_with_witness_oracle(seed):
    # two independent oracles, cross-checked so that neither is trusted blindly
    rng = rng_of(seed)
    f = cp.random_formula(rng, max_atoms=5, max_quants=2)
    node = vs_eliminate(f)
    for _ in range(10):
        p = cp.random_point(rng, free_vars(f))
        assert node_truth(node, p) == witness_truth(f, p)


@given(seeds)
def test_elimination_is_idempotent(seed):
    f = cp.random_formula(rng_of(seed), max_atoms=5, max_quants=2)
    g = eliminate(f)
    assert _equivalent(eliminate(g), g, free_vars(g))


@given(seeds)
def test_interval_union_normal_form(seed):
    rng = rng_of(seed)
    f = cp.random_qf_set(rng, ("x",), max_disjuncts=3)
    u = to_interval_union(f, "x")
    comps = list(u)
    for a, b in zip(comps, comps[1:]):
        assert a.hi <= b.lo
        assert not (a.hi == b.lo and (a.hi_closed or b.lo_closed))
    for _ in range(30):
        x = cp.random_point(rng, ("x",), span=3)["x"]
        assert u.contains(x) == evaluate(f, {"x": x})


def test_closed_sentence_decided_exactly():
    assert decide("exists x. 2*x = 1 and 3*x > 1")
    assert not decide(f"exists x. x > {Fraction(1, 3)} and 3*x < 1")
