"""Exact polyhedral unions checked pointwise against formula evaluation."""
from __future__ import annotations

from hypothesis import given

from conftest import rng_of, seeds
from tamelin import corpus as cp
from tamelin import polyhedra as ph
from tamelin.lang import evaluate, parse_formula
from tamelin.qe import formula_union

NAMES = ("a", "b")


def _pair(seed):
    rng = rng_of(seed)
    f, g = cp.random_qf_set(rng, NAMES), cp.random_qf_set(rng, NAMES)
    pts = [cp.random_point(rng, NAMES, span=3) for _ in range(40)]
    return f, g, pts


@given(seeds)
def test_boolean_operations_match_evaluation(seed):
    f, g, pts = _pair(seed)
    u, v = formula_union(f), formula_union(g)
    inter, diff, comp = ph.intersect(u, v), ph.difference(u, v), ph.complement(u)
    for p in pts:
        in_f, in_g = evaluate(f, p), evaluate(g, p)
        assert ph.union_contains(u, p) == in_f
        assert ph.union_contains(inter, p) == (in_f and in_g)
        assert ph.union_contains(diff, p) == (in_f and not in_g)
        assert ph.union_contains(comp, p) == (not in_f)


@given(seeds)
def test_complement_pieces_are_disjoint(seed):
    f, _, pts = _pair(seed)
    comp = ph.complement(formula_union(f))
    for p in pts:
        assert sum(1 for poly in comp if all(c.holds(p) for c in poly)) <= 1


@given(seeds)
def test_simplify_preserves_the_set(seed):
    f, g, pts = _pair(seed)
    u = formula_union(f) + formula_union(g)
    s = ph.simplify(u)
    for p in pts:
        assert ph.union_contains(s, p) == ph.union_contains(u, p)


@given(seeds)
def test_sample_point_lies_in_feasible_polyhedra(seed):
    f, _, _ = _pair(seed)
    for poly in formula_union(f):
        pt = ph.sample_point(poly)
        assert (pt is not None) == ph.is_feasible(poly)
        if pt is not None:
            d = dict(pt)
            assert all(c.holds({n: d.get(n, 0) for n in c.variables}) for c in poly)


def test_infeasible_strict_pair():
    u = formula_union(parse_formula("a < 0 and a > 0"))
    assert u == ()
    assert not ph.is_feasible(frozenset(formula_union(parse_formula("a <= 0"))[0]
                                        | formula_union(parse_formula("a > 0"))[0]))


def test_closure_relaxes_strict_inequalities():
    u = ph.closure_union(formula_union(parse_formula("0 < a and a < 1")))
    for x, inside in ((0, True), (1, True), (2, False)):
        assert ph.union_contains(u, {"a": x}) == inside
