"""An elimination-free truth oracle for quantified formulas.

Used to cross-check :mod:`tamelin.qe`. Nothing here touches the polyhedra
engine. Inner quantifiers are removed by virtual substitution with the test
points ``-inf``, ``r`` and ``r + eps`` (``r`` ranging over the roots of the
atoms). The outermost quantifier of each branch is then decided numerically:
at the assigned point the body becomes a condition on one variable, its
solution set is built with interval arithmetic and tested for emptiness
(or fullness, for a universal quantifier).
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Union

from .errors import UnassignedVariableError
from .intervals import INF, Interval, IntervalUnion1D
from .lang import (AffineTerm, And, Atom, Const, Exists, Forall, Formula, Implies, Not, Or,
                   as_formula, as_rational)

# NNF nodes: True / False, ("atom", term, rel), ("and", items), ("or", items)
_NEGATE_REL = {"<": ">=", "<=": ">", "=": "!=", "!=": "="}
Node = Union[bool, tuple]


def _atom(t: AffineTerm, rel: str) -> Node:
    # keep only <, <=, =, != by flipping > and >=
    if rel == ">":
        t, rel = -t, "<"
    elif rel == ">=":
        t, rel = -t, "<="
    if t.is_constant():
        v = t.const
        return {"<": v < 0, "<=": v <= 0, "=": v == 0, "!=": v != 0}[rel]
    if rel in ("=", "!="):
        # scale so the first coefficient is 1: structural dedup of equalities
        t = t / t.coeffs[0][1]
    else:
        t = t / abs(t.coeffs[0][1])
    return ("atom", t, rel)


def _join(kind: str, items) -> Node:
    unit, zero = (True, False) if kind == "and" else (False, True)
    out: list = []
    seen = set()
    for it in items:
        if it is unit:
            continue
        if it is zero:
            return zero
        subs = it[1] if it[0] == kind else (it,)
        for s in subs:
            if s not in seen:
                seen.add(s)
                out.append(s)
    if not out:
        return unit
    if len(out) == 1:
        return out[0]
    return (kind, tuple(out))


def _negate(n: Node) -> Node:
    if n is True or n is False:
        return not n
    if n[0] == "atom":
        return _atom(n[1], _NEGATE_REL[n[2]])
    return _join("or" if n[0] == "and" else "and", [_negate(s) for s in n[1]])


def _map_atoms(n: Node, fn) -> Node:
    if n is True or n is False:
        return n
    if n[0] == "atom":
        return fn(n[1], n[2])
    return _join(n[0], [_map_atoms(s, fn) for s in n[1]])


def _collect_atoms(n: Node, out: list) -> None:
    if n is True or n is False:
        return
    if n[0] == "atom":
        out.append(n)
    else:
        for s in n[1]:
            _collect_atoms(s, out)


def _vs_exists(x: str, body: Node) -> Node:
    atoms: list = []
    _collect_atoms(body, atoms)
    roots: list[AffineTerm] = []
    seen = set()
    for _, t, _ in atoms:
        a = t.coeff(x)
        if a:
            r = (AffineTerm.make({x: a}) - t) / a  # t = a*x + s  ->  x = -s/a
            if r not in seen:
                seen.add(r)
                roots.append(r)

    def at_minus_inf(t: AffineTerm, rel: str) -> Node:
        a = t.coeff(x)
        if not a:
            return _atom(t, rel)
        return {"<": a > 0, "<=": a > 0, "=": False, "!=": True}[rel]

    def at_root(r: AffineTerm):
        def fn(t: AffineTerm, rel: str) -> Node:
            return _atom(t.substitute(x, r), rel)
        return fn

    def after_root(r: AffineTerm):
        def fn(t: AffineTerm, rel: str) -> Node:
            a = t.coeff(x)
            if not a:
                return _atom(t, rel)
            u = t.substitute(x, r)
            if rel in ("<", "<="):
                return _atom(u, "<=" if a < 0 else "<")
            return rel == "!="
        return fn

    disjuncts = [_map_atoms(body, at_minus_inf)]
    for r in roots:
        disjuncts.append(_map_atoms(body, at_root(r)))
        disjuncts.append(_map_atoms(body, after_root(r)))
    return _join("or", disjuncts)


@lru_cache(maxsize=2048)
def _nnf(f: Formula) -> Node:
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Atom):
        return _atom(f.term, f.op)
    if isinstance(f, Not):
        return _negate(_nnf(f.arg))
    if isinstance(f, And):
        return _join("and", [_nnf(a) for a in f.args])
    if isinstance(f, Or):
        return _join("or", [_nnf(a) for a in f.args])
    if isinstance(f, Implies):
        return _join("or", [_negate(_nnf(f.lhs)), _nnf(f.rhs)])
    if isinstance(f, Exists):
        return _vs_exists(f.var, _nnf(f.body))
    if isinstance(f, Forall):
        return _negate(_vs_exists(f.var, _negate(_nnf(f.body))))
    raise TypeError(f"not a formula: {f!r}")


def vs_eliminate(f: Formula | str) -> Node:
    """Quantifier-free NNF equivalent of ``f`` by virtual substitution."""
    return _nnf(as_formula(f))


def node_size(n: Node) -> int:
    atoms: list = []
    _collect_atoms(n, atoms)
    return len(atoms)


# ---------------------------------------------------------------------------
# numeric evaluation
# ---------------------------------------------------------------------------


def _eval_term(t: AffineTerm, point: Mapping[str, Fraction]) -> Fraction:
    total = t.const
    for n, a in t.coeffs:
        if n not in point:
            raise UnassignedVariableError(n)
        total += a * point[n]
    return total


def _holds(v: Fraction, rel: str) -> bool:
    return {"<": v < 0, "<=": v <= 0, "=": v == 0, "!=": v != 0}[rel]


def node_truth(n: Node, point: Mapping[str, Fraction]) -> bool:
    if n is True or n is False:
        return n
    if n[0] == "atom":
        return _holds(_eval_term(n[1], point), n[2])
    if n[0] == "and":
        return all(node_truth(s, point) for s in n[1])
    return any(node_truth(s, point) for s in n[1])


_FULL = IntervalUnion1D.full()
_EMPTY = IntervalUnion1D.empty()


def node_solutions(n: Node, x: str, point: Mapping[str, Fraction]) -> IntervalUnion1D:
    """Solution set in ``x`` of a quantifier-free node, the rest fixed."""
    if n is True:
        return _FULL
    if n is False:
        return _EMPTY
    if n[0] == "atom":
        t, rel = n[1], n[2]
        a = t.coeff(x)
        rest = _eval_term(t - AffineTerm.make({x: a}), point)
        if not a:
            return _FULL if _holds(rest, rel) else _EMPTY
        root = -rest / a
        if rel == "=":
            return IntervalUnion1D([Interval.point(root)])
        if rel == "!=":
            return IntervalUnion1D([Interval(-INF, root), Interval(root, INF)])
        closed = rel == "<="
        if a > 0:
            return IntervalUnion1D([Interval(-INF, root, False, closed)])
        return IntervalUnion1D([Interval(root, INF, closed, False)])
    parts = [node_solutions(s, x, point) for s in n[1]]
    acc = parts[0]
    for p in parts[1:]:
        acc = acc.intersection(p) if n[0] == "and" else acc.union(p)
    return acc


def witness_truth(f: Formula | str, point: Mapping[str, object]) -> bool:
    """Truth of ``f`` at ``point`` (which assigns every free variable)."""
    pt = {k: as_rational(v) for k, v in point.items()}
    return _truth(as_formula(f), pt)


def _truth(f: Formula, pt: dict) -> bool:
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Atom):
        return _holds(_eval_term(f.term, pt), "<" if f.op == "<" else "=")
    if isinstance(f, Not):
        return not _truth(f.arg, pt)
    if isinstance(f, And):
        return all(_truth(a, pt) for a in f.args)
    if isinstance(f, Or):
        return any(_truth(a, pt) for a in f.args)
    if isinstance(f, Implies):
        return not _truth(f.lhs, pt) or _truth(f.rhs, pt)
    if isinstance(f, (Exists, Forall)):
        inner = {k: v for k, v in pt.items() if k != f.var}
        sols = node_solutions(_nnf(f.body), f.var, inner)
        return (not sols.is_empty()) if isinstance(f, Exists) else sols.is_full()
    raise TypeError(f"not a formula: {f!r}")
