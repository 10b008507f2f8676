from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given

from conftest import rationals, rng_of, seeds
from tamelin import corpus as cp
from tamelin.errors import FormulaSyntaxError, UnassignedVariableError
from tamelin.lang import (AffineTerm, And, Atom, Exists, Forall, Not, Or, as_rational, evaluate, format_formula,
                          format_rational, free_vars, normalize, parse_formula, parse_term, substitute)


def test_parse_existential_conjunction():
    f = parse_formula("exists x. 0 < x and x < 1")
    assert isinstance(f, Exists) and f.var == "x"
    assert f.body == And((Atom(-AffineTerm.var("x"), "<"), Atom(AffineTerm.var("x") - 1, "<")))


def test_parse_le_is_sugar_for_lt_or_eq():
    f = parse_formula("1/2*x + y <= 3")
    t = AffineTerm.make({"x": Fraction(1, 2), "y": 1}, -3)
    assert f == Or((Atom(t, "<"), Atom(t, "=")))


def test_syntax_error_reports_column():
    with pytest.raises(FormulaSyntaxError) as info:
        parse_formula("x <")
    assert (info.value.line, info.value.column) == (1, 4)


@pytest.mark.parametrize("text", ["x < < 1", "exists . x < 1", "x * y < 1", "(x < 1", "x < 1 and", ""])
def test_malformed_inputs_raise(text):
    with pytest.raises(FormulaSyntaxError):
        parse_formula(text)


def test_evaluate_examples():
    assert evaluate(parse_formula("x < 1"), {"x": Fraction(1, 2)})
    assert evaluate(parse_formula("x = 0 or x > 2"), {"x": 3})
    with pytest.raises(UnassignedVariableError):
        evaluate(parse_formula("x < y"), {"x": 1})


def test_substitute_examples():
    assert substitute(parse_formula("x < 1"), "x", parse_term("y + 1")) == parse_formula("y + 1 < 1")
    assert substitute(parse_formula("exists x. x < y"), "y", 2) == parse_formula("exists x. x < 2")
    assert substitute(parse_formula("x < 1"), "x", parse_term("x")) == parse_formula("x < 1")


def test_substitution_avoids_capture():
    f = substitute(parse_formula("exists y. x < y"), "x", parse_term("y"))
    assert free_vars(f) == {"y"}
    assert isinstance(f, Exists) and f.var != "y"


def test_rational_normal_form():
    q = as_rational(Fraction(6, -4))
    assert (q.numerator, q.denominator) == (-3, 2)
    assert format_rational(Fraction(-3, 2)) == "-3/2"
    assert format_rational(Fraction(4)) == "4"


@given(rationals, rationals, rationals)
def test_affine_terms_are_a_vector_space(a, b, k):
    s = AffineTerm.make({"x": a, "y": b}, k)
    t = AffineTerm.make({"x": -a, "z": k}, b)
    pt = {"x": Fraction(1, 3), "y": Fraction(-2), "z": Fraction(5, 7)}
    assert (s + t).evaluate(pt) == s.evaluate(pt) + t.evaluate(pt)
    assert (k * s).evaluate(pt) == k * s.evaluate(pt)
    assert (s - s) == AffineTerm()
    assert all(c != 0 for _, c in (s + t).coeffs)


@given(seeds)
def test_print_parse_round_trip(seed):
    f = cp.random_formula(rng_of(seed))
    text = format_formula(f)
    assert parse_formula(text) == f
    assert free_vars(parse_formula(text)) == free_vars(f)
    assert format_formula(parse_formula(text)) == text


def _bound_paths(f, seen=()):
    if isinstance(f, (Exists, Forall)):
        assert f.var not in seen
        _bound_paths(f.body, seen + (f.var,))
    elif isinstance(f, Not):
        _bound_paths(f.arg, seen)
    elif isinstance(f, (And, Or)):
        for a in f.args:
            _bound_paths(a, seen)
    elif hasattr(f, "lhs"):
        _bound_paths(f.lhs, seen)
        _bound_paths(f.rhs, seen)


@given(seeds)
def test_normalize_removes_shadowing(seed):
    rng = rng_of(seed)
    f = cp.random_formula(rng)
    for h in (f, Exists("x", f), Forall("y", Exists("x", f))):
        g = normalize(h)
        _bound_paths(g)
        assert free_vars(g) == free_vars(h)


@given(seeds)
def test_quantifier_free_evaluation_respects_connectives(seed):
    rng = rng_of(seed)
    names = ("a", "b")
    f = cp.random_qf_set(rng, names)
    g = cp.random_qf_set(rng, names)
    pt = cp.random_point(rng, names)
    assert evaluate(Not(f), pt) == (not evaluate(f, pt))
    assert evaluate(And((f, g)), pt) == (evaluate(f, pt) and evaluate(g, pt))
    assert evaluate(Or((f, g)), pt) == (evaluate(f, pt) or evaluate(g, pt))
