from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import rng_of, seeds
from tamelin import corpus as cp
from tamelin.choice import (Selector, choose_element, curve_limit, curve_selection, limit_sentence,
                            skolem_section)
from tamelin.errors import EmptySetError, PreconditionError
from tamelin.intervals import INF, Interval, IntervalUnion1D
from tamelin.lang import AffineTerm, parse_formula
from tamelin.qe import decide
from tamelin.sets import Piece, PiecewiseLinearFunction, SemilinearSet, plf_eval

H = Fraction(1, 2)


def u(*comps):
    return IntervalUnion1D(list(comps))


@pytest.mark.parametrize("j,sel,expected", [
    (u(Interval.open(-1, 1)), Selector(), 0),
    (u(Interval.open(1, 3)), Selector(), 2),
    (u(Interval(1, INF)), Selector(1), 2),
    (u(Interval.open(-3, -1)), Selector(), -2),
    (u(Interval(-INF, -1)), Selector(Fraction(1, 3)), Fraction(-4, 3)),
    (u(Interval.point(5), Interval.open(6, 7)), Selector(), 5),
])
def test_choose_element_examples(j, sel, expected):
    assert choose_element(j, sel) == expected


def test_choice_preconditions():
    with pytest.raises(EmptySetError):
        choose_element(IntervalUnion1D())
    with pytest.raises(PreconditionError):
        Selector(0)


@given(seeds)
def test_choose_element_lies_in_the_set(seed):
    rng = rng_of(seed)
    j = cp.random_interval_union(rng)
    if not j.is_empty():
        sel = Selector(Fraction(rng.randint(1, 6), rng.randint(1, 3)))
        assert j.contains(choose_element(j, sel))


def test_section_of_triangle():
    f = skolem_section(SemilinearSet.parse("t y", "0 < t and t < y"), 1)
    assert plf_eval(f, 3) == (Fraction(3, 2), 3)
    assert plf_eval(f, H) == (Fraction(1, 4), H)


def test_section_of_graph_is_the_graph():
    f = skolem_section(SemilinearSet.parse("t y", "t = 2*y + 1 and y > 0"), 1)
    for y in (Fraction(1, 3), Fraction(2), Fraction(9)):
        assert plf_eval(f, y) == (2 * y + 1, y)


def test_section_through_zero():
    assert plf_eval(skolem_section(SemilinearSet.parse("t y", "y = 0"), 1), 0) == (0, 0)


@settings(max_examples=20)
@given(seeds)
def test_section_is_a_right_inverse(seed):
    rng = rng_of(seed)
    x = SemilinearSet(("t", "y"), cp.random_qf_set(rng, ("t", "y")))
    if x.is_empty():
        return
    f = skolem_section(x, 1)
    proj = SemilinearSet(("y",), parse_formula(f"exists t. {x.formula}"))
    for _ in range(20):
        y = cp.random_point(rng, ("y",), span=3)["y"]
        if proj.member((y,)):
            t, y2 = plf_eval(f, y)
            assert y2 == y and x.member((t, y))


def test_curve_into_a_wedge():
    eps, g = curve_selection(SemilinearSet.parse("x y", "0 < y and y < x"), (0, 0))
    assert eps == 1
    (piece,) = g.pieces
    assert piece.values == (AffineTerm.var("t"), AffineTerm.var("t") / 2)
    assert curve_limit(g) == (0, 0)


def test_curve_into_an_interval():
    eps, g = curve_selection(SemilinearSet.parse("x", "0 < x and x < 1"), (0,))
    assert eps == 1 and g.pieces[0].values == (AffineTerm.var("t"),)


def test_curve_needs_a_frontier_point():
    with pytest.raises(PreconditionError):
        curve_selection(SemilinearSet.parse("x y", "x > 0 and y > 0"), (5, 5))
    with pytest.raises(PreconditionError):
        curve_selection(SemilinearSet.parse("x y", "x > 0 and y > 0"), (-5, 5))


def test_curve_limits():
    t = AffineTerm.var("t")
    gamma = PiecewiseLinearFunction(("t",), (Piece(parse_formula("0 < t and t < 1"), (t, 1 - t)),))
    assert curve_limit(gamma) == (0, 1)
    const = PiecewiseLinearFunction(("t",), (Piece(parse_formula("0 < t and t < 1"), (AffineTerm.constant(3),)),))
    assert curve_limit(const) == (3,)
    kinked = PiecewiseLinearFunction.unary("t", [(Interval.open(0, H), "t"), (Interval(H, 1, True, False), "2*t - 1/2")])
    assert curve_limit(kinked) == (0,)
    assert decide(limit_sentence(kinked, (0,)))
    assert not decide(limit_sentence(kinked, (H,)))


@settings(max_examples=10)
@given(seeds)
def test_curves_stay_inside_and_converge(seed):
    rng = rng_of(seed)
    a = (cp.small_rational(rng), cp.small_rational(rng))
    r = Fraction(rng.choice([1, 2]))
    x = SemilinearSet(("x", "y"), parse_formula(
        f"{a[0]} < x and x < {a[0]} + {r} and {a[1]} - {r} < y and y < {a[1]} + {r}"))
    eps, g = curve_selection(x, a)
    for k in range(1, 6):
        s = eps * Fraction(k, 6)
        p = plf_eval(g, s)
        assert x.member(p)
        assert max(abs(p[0] - a[0]), abs(p[1] - a[1])) == s
    assert curve_limit(g) == a
    assert decide(limit_sentence(g, a))
