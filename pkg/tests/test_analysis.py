from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import rng_of, seeds
from tamelin import corpus as cp
from tamelin.analysis import (DECREASING, INCREASING, DefinableFamily, ascoli_check, check_partition,
                              curve_family, discontinuity_projection_check, equi_continuous, inf_modulus,
                              limit_function, modulus, mono_partition, pointwise_bounded, pointwise_convergent,
                              uniformly_convergent, uniformly_equi_continuous)
from tamelin.errors import PreconditionError
from tamelin.intervals import Interval, IntervalUnion1D
from tamelin.lang import TRUE, parse_formula, parse_term
from tamelin.sets import PeriodicSet1D, Piece, PiecewiseLinearFunction, SemilinearSet, plf_eval

H = Fraction(1, 2)


def family(pieces, domain="0 <= x and x <= 1", params="0 < t and t < 1"):
    return DefinableFamily(("x",), ("t",), parse_formula(domain), parse_formula(params),
                           tuple(Piece(parse_formula(r), (parse_term(v),)) for r, v in pieces))


def single(value, domain="0 <= x and x <= 1"):
    return DefinableFamily(("x",), (), parse_formula(domain), TRUE, (Piece(TRUE, (parse_term(value),)),))


IDENT = family([("true", "x")])
STEP = family([("x <= t", "0"), ("x > t", "1")])
RAMP = family([("x <= t", "0"), ("x > t", "x - t")])
CONST = family([("true", "3")])
SHIFT = family([("true", "x + t")])


def _deciders(f):
    return (equi_continuous(f), uniformly_equi_continuous(f), pointwise_bounded(f),
            pointwise_convergent(f), uniformly_convergent(f))


@pytest.mark.parametrize("fam,expected", [
    (IDENT, (True,) * 5),
    (STEP, (False, False, True, True, False)),
    (RAMP, (True,) * 5),
    (CONST, (True,) * 5),
])
def test_family_deciders(fam, expected):
    assert _deciders(fam) == expected


def test_family_rejects_partial_pieces():
    with pytest.raises(PreconditionError):
        family([("x < t", "0")])


@pytest.mark.parametrize("fam,expected", [(RAMP, "x"), (SHIFT, "x"), (CONST, "3")])
def test_limit_functions(fam, expected):
    g = limit_function(fam)
    for x in (0, Fraction(1, 3), 1):
        assert plf_eval(g, x) == parse_term(expected).evaluate({"x": x})


def test_modulus_of_identity_and_constant():
    m = modulus(single("x"), H)
    assert all(plf_eval(m, x) == H for x in (0, Fraction(1, 3), 1))
    assert inf_modulus(single("x"), H) == (H, True)
    m = modulus(single("3"), H, cap=2)
    assert all(plf_eval(m, x) == 2 for x in (0, H, 1))


def test_modulus_infimum_examples():
    assert inf_modulus(STEP, H)[0] == 0
    assert inf_modulus(CONST, H) == (1, True)
    tent = DefinableFamily(("x",), (), parse_formula("0 <= x and x <= 1"), TRUE,
                           (Piece(parse_formula("x <= 1/2"), (parse_term("2*x"),)),
                            Piece(parse_formula("x > 1/2"), (parse_term("2 - 2*x"),))))
    assert inf_modulus(tent, H)[0] > 0


def test_ascoli_reports():
    r = ascoli_check(RAMP)
    assert (r["equi_continuous"], r["pointwise_convergent"], r["uniformly_convergent"]) == (True, True, True)
    r = ascoli_check(STEP)
    assert (r["equi_continuous"], r["pointwise_convergent"], r["uniformly_convergent"]) == (False, True, False)
    assert r["conclusion_holds"] is None
    assert ascoli_check(CONST)["conclusion_holds"] is True
    open_c = family([("true", "x")], domain="0 < x and x < 1")
    assert ascoli_check(open_c)["hypotheses"] is False


def test_curve_family_at_a_frontier_point():
    eps, gamma, g = curve_family(SHIFT, (0,))
    assert eps == 1
    assert uniformly_convergent(g)
    assert plf_eval(g.plf(), (Fraction(1, 3), Fraction(1, 4))) == Fraction(1, 3) + plf_eval(gamma, Fraction(1, 4))
    _, _, flat = curve_family(CONST, (0,))
    assert all(pc.value == parse_term("3") for pc in flat.pieces)
    with pytest.raises(PreconditionError):
        curve_family(SHIFT, (5,))


def test_discontinuity_projection():
    jump = family([("t <= 1/2", "0"), ("t > 1/2", "1")])
    r = discontinuity_projection_check(jump)
    assert r.discontinuities.same_set(SemilinearSet.parse("x t", "0 <= x and x <= 1 and t = 1/2"))
    assert (r.dim_projection, r.dim_params, r.passed) == (0, 1, True)
    assert discontinuity_projection_check(IDENT).discontinuities.is_empty()
    with pytest.raises(PreconditionError):
        discontinuity_projection_check(family([("x <= 1/2", "0"), ("x > 1/2", "1")]))


def test_mono_partition_examples():
    unit = Interval.open(0, 1)
    mp = mono_partition(PiecewiseLinearFunction.unary("x", [(unit, "x")]), unit)
    assert mp.increasing == IntervalUnion1D([unit]) and check_partition(mp, unit)
    mp = mono_partition(PiecewiseLinearFunction.unary("x", [(unit, "2")]), unit)
    assert mp.constant == IntervalUnion1D([unit])
    frac = PiecewiseLinearFunction.unary("x", [(Interval(0, 1, True, False), "x")], period=1)
    mp = mono_partition(frac)
    assert mp.discrete == PeriodicSet1D.integers()
    assert check_partition(mp)
    for x in (Fraction(-7, 3), H, Fraction(41, 5)):
        assert mp.classify(x) == INCREASING
    assert mp.classify(-3) == "discrete"


def _sample_tag_ok(f, mp, x):
    tag = mp.classify(x)
    if tag == "discrete":
        return True
    h = Fraction(1, 10**6)
    a, b, c = f(x - h), f(x), f(x + h)
    if tag == INCREASING:
        return a < b < c
    if tag == DECREASING:
        return a > b > c
    return a == b == c


@settings(max_examples=30)
@given(seeds)
def test_mono_partition_property(seed):
    rng = rng_of(seed)
    f, iv = cp.random_unary_plf(rng)
    mp = mono_partition(f, iv) if f.period is None else mono_partition(f)
    assert check_partition(mp, iv) if f.period is None else check_partition(mp)
    for _ in range(20):
        x = cp.random_point(rng, ("x",), span=3)["x"]
        if f.period is not None or iv.contains(x):
            assert _sample_tag_ok(f, mp, x)


@settings(max_examples=10)
@given(seeds)
def test_modulus_condition_holds_below_the_modulus(seed):
    rng = rng_of(seed)
    f = cp.continuous_unary_plf(rng)
    fam = DefinableFamily(("x",), (), parse_formula("0 <= x and x <= 1"), TRUE, f.pieces, check=False)
    eps = Fraction(1, 2)
    m = modulus(fam, eps)
    for k in range(6):
        x = Fraction(k, 5)
        d = plf_eval(m, x)
        assert 0 < d <= 1
        for j in range(-10, 11):
            y = x + d * Fraction(j, 11)
            if 0 <= y <= 1:
                assert abs(plf_eval(f, y) - plf_eval(f, x)) < eps
