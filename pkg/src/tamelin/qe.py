"""Linear quantifier elimination, sentence decision and 1-D extraction.

A formula is compiled bottom-up into a union of NNC polyhedra. Negation is
pushed to the atoms, existential quantifiers are exact projections and
universal ones go through complement-project-complement.
"""
from __future__ import annotations

from contextlib import contextmanager
from contextvars import ContextVar
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from . import polyhedra as ph
from .errors import PreconditionError
from .intervals import INF, Interval, IntervalUnion1D
from .lang import (FALSE, TRUE, AffineTerm, And, Atom, Const, Exists, Forall, Formula, Implies, Not,
                   Or, _is_le_sugar, as_formula, conj, disj, free_vars)

DEFAULT_BUDGET = 200_000

_budget_limit: ContextVar[int] = ContextVar("atom_budget", default=DEFAULT_BUDGET)


@contextmanager
def atom_budget(limit: int) -> Iterator[None]:
    """Run a block with a different atom budget for every elimination."""
    token = _budget_limit.set(limit)
    try:
        yield
    finally:
        _budget_limit.reset(token)


def current_budget() -> int:
    return _budget_limit.get()


# ---------------------------------------------------------------------------
# formula -> union of polyhedra
# ---------------------------------------------------------------------------


def atom_constraint(a: Atom) -> ph.Con:
    return ph.make_con(a.term.coeffs, a.term.const, ph.LT if a.op == "<" else ph.EQ)


def _has_quantifier(f: Formula) -> bool:
    if isinstance(f, (Exists, Forall)):
        return True
    if isinstance(f, Not):
        return _has_quantifier(f.arg)
    if isinstance(f, Implies):
        return _has_quantifier(f.lhs) or _has_quantifier(f.rhs)
    if isinstance(f, (And, Or)):
        return any(_has_quantifier(a) for a in f.args)
    return False


class _Compiler:
    """Formula to union of polyhedra.

    ``run(f, negated, ctx)`` returns a union that agrees with ``f`` (or its
    negation) inside ``ctx``; ``None`` stands for the whole space. Conjuncts
    without quantifiers are compiled first and narrow the context of the
    rest, so a universal quantifier is a difference inside a small region
    rather than a complement in the whole space.
    """

    def __init__(self, budget: ph.Budget) -> None:
        self.budget = budget

    def run(self, f: Formula, negated: bool, ctx: tuple | None = None) -> tuple:
        if isinstance(f, Const):
            return ph.FULL_UNION if f.value != negated else ph.EMPTY_UNION
        if isinstance(f, Atom):
            c = atom_constraint(f)
            if negated:
                return ph.simplify([frozenset([n]) for n in ph.negate(c)])
            return ph.simplify([frozenset([c])])
        if _is_le_sugar(f):
            t = f.args[0].term
            c = ph.make_con(t.coeffs, t.const, ph.LE)
            if negated:
                return ph.simplify([frozenset([n]) for n in ph.negate(c)])
            return ph.simplify([frozenset([c])])
        if isinstance(f, Not):
            return self.run(f.arg, not negated, ctx)
        if isinstance(f, Implies):
            return self.run(Or((Not(f.lhs), f.rhs)), negated, ctx)
        if isinstance(f, (And, Or)):
            if isinstance(f, And) != negated:
                return self._meet(f.args, negated, ctx)
            return ph.simplify([p for a in f.args for p in self.run(a, negated, ctx)], self.budget)
        if isinstance(f, (Exists, Forall)):
            # forall v. b  ==  not exists v. not b
            inner_neg = isinstance(f, Forall)
            inner_ctx = None if ctx is None or f.var in ph.union_vars(ctx) else ctx
            shadow = ph.project_union(self.run(f.body, inner_neg, inner_ctx), f.var, self.budget)
            if negated == inner_neg:
                return shadow
            return ph.difference(ctx if ctx is not None else ph.FULL_UNION, shadow, self.budget)
        raise TypeError(f"not a formula: {f!r}")

    def _meet(self, args, negated: bool, ctx: tuple | None) -> tuple:
        ordered = sorted(args, key=_has_quantifier)
        acc = ctx
        for a in ordered:
            part = self.run(a, negated, acc)
            acc = part if acc is None else ph.intersect(acc, part, self.budget)
            if not acc:
                return ph.EMPTY_UNION
        return acc if acc is not None else ph.FULL_UNION


@lru_cache(maxsize=4096)
def _compile(f: Formula, limit: int) -> tuple:
    return _Compiler(ph.Budget(limit)).run(f, False)


def formula_union(f: Formula | str, budget: int | None = None) -> tuple:
    """The set defined by ``f`` as a simplified union of polyhedra."""
    return _compile(as_formula(f), budget if budget is not None else _budget_limit.get())


def con_formula(c: ph.Con) -> Formula:
    t = AffineTerm.make(dict(c.coeffs), c.const)
    if c.kind == ph.LE:
        return Or((Atom(t, "<"), Atom(t, "=")))
    return Atom(t, "<" if c.kind == ph.LT else "=")


def union_formula(u: tuple) -> Formula:
    """Quantifier-free disjunctive form of a union of polyhedra."""
    if not u:
        return FALSE
    return disj([conj([con_formula(c) for c in sorted(p)]) if p else TRUE for p in u])


def eliminate(f: Formula | str, budget: int | None = None) -> Formula:
    """Equivalent quantifier-free formula (disjunctive normal form)."""
    return union_formula(formula_union(f, budget))


def decide(f: Formula | str, budget: int | None = None) -> bool:
    f = as_formula(f)
    fv = free_vars(f)
    if fv:
        raise PreconditionError(f"not a sentence; free variables {sorted(fv)}")
    return formula_union(f, budget) == ph.FULL_UNION


# ---------------------------------------------------------------------------
# one free variable
# ---------------------------------------------------------------------------


def poly_interval(p: frozenset, var: str) -> Interval | None:
    """The interval cut out by constraints in the single variable ``var``."""
    lo: Fraction | float = -INF
    hi: Fraction | float = INF
    lo_closed = hi_closed = False
    for c in p:
        if not c.coeffs:
            if not c.ground_truth():
                return None
            continue
        if c.variables != {var}:
            raise PreconditionError(f"constraint {c!r} is not in {var!r} alone")
        a = c.coeffs[0][1]
        bound = Fraction(-c.const, a)
        if c.kind == ph.EQ:
            cands = [("lo", bound, True), ("hi", bound, True)]
        elif a > 0:
            cands = [("hi", bound, c.kind == ph.LE)]
        else:
            cands = [("lo", bound, c.kind == ph.LE)]
        for side, b, closed in cands:
            if side == "lo" and (b > lo or (b == lo and not closed)):
                lo, lo_closed = b, closed
            elif side == "hi" and (b < hi or (b == hi and not closed)):
                hi, hi_closed = b, closed
    if lo > hi or (lo == hi and not (lo_closed and hi_closed)):
        return None
    return Interval(lo, hi, lo_closed, hi_closed)


def union_intervals(u: tuple, var: str) -> IntervalUnion1D:
    pieces = []
    for p in u:
        iv = poly_interval(p, var)
        if iv is not None:
            pieces.append(iv)
    return IntervalUnion1D(pieces)


def to_interval_union(f: Formula | str, var: str, budget: int | None = None) -> IntervalUnion1D:
    """Solution set of a formula in one free variable as maximal components."""
    f = as_formula(f)
    extra = free_vars(f) - {var}
    if extra:
        raise PreconditionError(f"free variables other than {var!r}: {sorted(extra)}")
    return union_intervals(formula_union(f, budget), var)
