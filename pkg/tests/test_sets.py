from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import rng_of, seeds
from tamelin import corpus as cp
from tamelin.dim import dimension, hull_dimension
from tamelin.errors import PreconditionError
from tamelin.intervals import INF, Interval, IntervalUnion1D
from tamelin.lang import evaluate
from tamelin.sets import (PeriodicSet1D, PiecewiseLinearFunction, SemilinearSet, boolean_ops, closure, frontier,
                          inf_sup_1d, interior, is_closed, is_discrete_closed, is_open, local_complexity, member,
                          periodic_window, plf_eval, plf_graph)

H = Fraction(1, 2)


def iv(text):
    return SemilinearSet.parse("x", text)


def test_membership_examples():
    assert member(iv("0 < x and x < 1"), H)
    assert not member(iv("x < x"), 3)
    assert member(SemilinearSet.parse("x y", "y = x"), (1, 1))


def test_boolean_examples():
    s = boolean_ops(iv("0 < x and x < 1"), iv("1 < x and x < 2"), "union")
    assert not s.member(1)
    assert boolean_ops(iv("x < x"), None, "complement").is_full()
    d = boolean_ops(iv("0 < x and x < 2"), iv("0 < x and x <= 1"), "difference")
    assert list(d.interval_union()) == [Interval.open(1, 2)]


def test_topology_examples():
    assert list(closure(iv("0 < x and x < 1")).interval_union()) == [Interval.closed(0, 1)]
    assert interior(iv("x = 0")).is_empty()
    square = SemilinearSet.parse("x y", "0 < x and x < 1 and 0 < y and y < 1")
    fr = frontier(square)
    assert dimension(fr) == hull_dimension(fr) == 1
    assert fr.member((0, 0)) and fr.member((1, H)) and not fr.member((H, H))


def test_inf_sup_examples():
    assert inf_sup_1d(iv("2 < x and x < 3"), "inf") == (2, False)
    assert inf_sup_1d(iv("x = 5 or (6 < x and x < 7)"), "inf") == (5, True)
    assert inf_sup_1d(iv("x > 0"), "sup") == (INF, False)


def test_discrete_closed_examples():
    assert is_discrete_closed(iv("x = 0 or x = 1"))
    assert not is_discrete_closed(iv("0 < x and x < 1"))
    assert is_discrete_closed(PeriodicSet1D.integers())


def test_periodic_window_examples():
    z = PeriodicSet1D.integers()
    assert periodic_window(z, Fraction(-1, 2), Fraction(5, 2)) == IntervalUnion1D.points([0, 1, 2])
    half = PeriodicSet1D(IntervalUnion1D(), IntervalUnion1D([Interval.open(0, H)]), Fraction(1))
    assert list(periodic_window(half, 0, 2)) == [Interval.open(0, H), Interval.open(1, Fraction(3, 2))]
    ten = PeriodicSet1D(IntervalUnion1D.points([10]), IntervalUnion1D(), Fraction(1))
    assert periodic_window(ten, 0, 1).is_empty()


def _grid_complexity(s: PeriodicSet1D, c: Fraction, steps: int = 96) -> int:
    """Largest run count of ``s`` on a fine grid inside windows centred on grid points of two periods."""
    h = s.period / steps
    best = 0
    for k in range(2 * steps):
        x = k * h
        runs, prev = 0, False
        j = 1
        while True:
            y = x - c + j * h
            if y >= x + c:
                break
            cur = s.member(y)
            runs += cur and not prev
            prev = cur
            j += 1
        best = max(best, runs)
    return best


LOCAL_CASES = [
    (PeriodicSet1D.integers(), Fraction(1, 3)),
    (PeriodicSet1D.integers(), Fraction(1)),
    (PeriodicSet1D(IntervalUnion1D(), IntervalUnion1D([Interval.open(0, Fraction(1, 4)),
                                                       Interval.open(H, Fraction(3, 4))]), Fraction(1)), H),
]


@pytest.mark.parametrize("s,c,expected", [(s, c, e) for (s, c), e in zip(LOCAL_CASES, (1, 2, 3))])
def test_local_complexity_matches_window_oracle(s, c, expected):
    assert _grid_complexity(s, c) == expected
    assert local_complexity(s, c) == expected


def test_local_complexity_needs_positive_radius():
    with pytest.raises(PreconditionError):
        local_complexity(PeriodicSet1D.integers(), 0)


def test_plf_examples():
    frac = PiecewiseLinearFunction.unary("x", [(Interval(0, 1, True, False), "x")], period=1)
    assert plf_eval(frac, Fraction(7, 3)) == Fraction(1, 3)
    ident = PiecewiseLinearFunction.unary("x", [(Interval.open(0, 1), "x")])
    assert plf_eval(ident, H) == H
    with pytest.raises(PreconditionError):
        plf_eval(ident, 2)
    assert plf_graph(ident).same_set(SemilinearSet.parse("x y", "0 < x and x < 1 and y = x"))
    zero = PiecewiseLinearFunction.unary("x", [(Interval(-INF, INF, False, False), 0)])
    assert plf_graph(zero).same_set(SemilinearSet.parse("x y", "y = 0"))
    absolute = PiecewiseLinearFunction.unary("x", [(Interval(-INF, 0, False, False), "-x"),
                                                   (Interval(0, INF, True, False), "x")])
    assert plf_graph(absolute).member((-2, 2))


@given(seeds)
def test_boolean_operations_commute_with_membership(seed):
    rng = rng_of(seed)
    s = SemilinearSet(("a", "b"), cp.random_qf_set(rng, ("a", "b")))
    t = SemilinearSet(("a", "b"), cp.random_qf_set(rng, ("a", "b")))
    ops = {op: boolean_ops(s, t, op) for op in ("union", "intersect", "difference")}
    comp = boolean_ops(s, None, "complement")
    for _ in range(20):
        p = cp.random_point(rng, ("a", "b"), span=3)
        pt = (p["a"], p["b"])
        a, b = s.member(pt), t.member(pt)
        assert ops["union"].member(pt) == (a or b)
        assert ops["intersect"].member(pt) == (a and b)
        assert ops["difference"].member(pt) == (a and not b)
        assert comp.member(pt) == (not a)
        assert s.member(pt) == evaluate(s.formula, p)


@given(seeds)
def test_closure_and_interior_bracket_the_set(seed):
    rng = rng_of(seed)
    s = SemilinearSet(("a",), cp.random_qf_set(rng, ("a",), max_disjuncts=3))
    cl, it = closure(s), interior(s)
    assert is_closed(cl) and is_open(it)
    assert it.subset_of(s) and s.subset_of(cl)
    assert frontier(s).same_set(cl.difference(s))


@given(seeds)
def test_interval_union_algebra(seed):
    rng = rng_of(seed)
    u, v = cp.random_interval_union(rng), cp.random_interval_union(rng)
    for _ in range(30):
        x = cp.random_point(rng, ("x",), span=4)["x"]
        assert u.union(v).contains(x) == (u.contains(x) or v.contains(x))
        assert u.intersection(v).contains(x) == (u.contains(x) and v.contains(x))
        assert u.complement().contains(x) == (not u.contains(x))
    assert u.closure().is_closed() and u.interior().is_open()


@given(seeds, st.integers(-6, 6))
def test_periodic_function_repeats(seed, k):
    rng = rng_of(seed)
    f, _ = cp.random_unary_plf(rng, periodic=True)
    for _ in range(10):
        x = cp.random_point(rng, ("x",), span=3)["x"]
        if f.owner(x) is not None:
            assert plf_eval(f, x + k * f.period) == plf_eval(f, x)


@given(seeds)
def test_periodic_sets_normalize_idempotently(seed):
    rng = rng_of(seed)
    base = cp.random_interval_union(rng).intersection(IntervalUnion1D([Interval(0, 1, True, False)]))
    fin = cp.random_interval_union(rng).intersection(IntervalUnion1D([Interval.closed(-3, 3)]))
    s = PeriodicSet1D(fin, base, Fraction(1), rng.choice([-INF, Fraction(-1), Fraction(2)]))
    assert s.normalize() == s
    assert s.finite_part.intersection(s.segment(Fraction(-3), Fraction(3))).is_empty()
