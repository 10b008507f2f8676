"""Dimension of semilinear sets and the points that witness it."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import polyhedra as ph
from .cells import Box, Cell, cells_inside, decompose, is_total_function
from .errors import ArityError, EmptySetError, PreconditionError
from .lang import (AffineTerm, Formula, conj, disj, dist_lt, eq, exists, forall, format_rational, implies, lt,
                   neg)
from .qe import eliminate, formula_union, union_formula
from .sets import SemilinearSet, rename_coordinates


@lru_cache(maxsize=1024)
def _top_cells(s: SemilinearSet) -> tuple[int, tuple[Cell, ...]]:
    d = decompose(Box.whole(s.variables), [s])
    inside = cells_inside(d, s)
    if not inside:
        return -1, ()
    top = max(c.dimension for c in inside)
    return top, tuple(c for c in inside if c.dimension == top)


def dimension(s: SemilinearSet) -> int:
    """Largest signature sum of a cell inside ``s``; ``-1`` for the empty set."""
    return _top_cells(s)[0]


def hull_dimension(s: SemilinearSet) -> int:
    """Dimension from the affine hulls of the polyhedral pieces.

    A second route to :func:`dimension` that never builds cells.
    """
    n = s.ambient_dim
    best = -1
    for p in s.union:
        c = ph.canonical(p)
        if c is not None:
            best = max(best, n - sum(1 for con in c if con.kind == ph.EQ))
    return best


def local_dim_point(s: SemilinearSet) -> tuple[Fraction, ...]:
    """A point near which ``s`` has full dimension ``dim s``: the
    lexicographically least sample point of a top-dimensional cell."""
    top, cells = _top_cells(s)
    if top < 0:
        raise EmptySetError("empty set has no local-dimension point")
    return min(c.sample for c in cells)


def box_around(variables: Sequence[str], centre: Sequence[Fraction], radius: Fraction) -> Formula:
    return dist_lt(variables, [AffineTerm.constant(c) for c in centre], radius)


def local_dimension_holds(s: SemilinearSet, point: Sequence[Fraction],
                          radii: Sequence[Fraction] = (Fraction(1), Fraction(1, 10), Fraction(1, 1000))) -> bool:
    """``dim(s & U) == dim s`` for boxes ``U`` of the given radii around ``point``."""
    d = dimension(s)
    for r in radii:
        u = SemilinearSet(s.variables, conj(s.formula, box_around(s.variables, point, r)))
        if dimension(u) != d:
            return False
    return True


def projection(x: SemilinearSet, keep: Sequence[str]) -> SemilinearSet:
    drop = [v for v in x.variables if v not in keep]
    return SemilinearSet(tuple(keep), eliminate(exists(drop, x.formula)))


def proj_dim_point(x: SemilinearSet, c: SemilinearSet, p: SemilinearSet) -> tuple[Fraction, ...]:
    """A point ``(c, p)`` of ``x`` such that every box around it projects
    onto a set of dimension ``dim p`` (projection onto the ``p`` coordinates).

    ``x`` lives in ``C x P`` with its first ``dim C`` coordinates for ``C``.
    The decomposition is taken with the ``P`` coordinates first, so that the
    projection is the base decomposition; a cell over a base cell of
    dimension ``dim P`` has the property at its sample point.
    """
    m = c.ambient_dim
    if m + p.ambient_dim != x.ambient_dim:
        raise ArityError("ambient dimensions of C and P do not add up to that of X")
    cvars, pvars = x.variables[:m], x.variables[m:]
    dp = dimension(p)
    if dimension(projection(x, pvars)) != dp:
        raise PreconditionError("dim of the projection of X differs from dim P")
    order = tuple(pvars) + tuple(cvars)
    d = decompose(Box.whole(order), [SemilinearSet(order, x.formula)])
    inside = cells_inside(d, SemilinearSet(order, x.formula))
    best = None
    for cell in inside:
        base = cell
        for _ in range(len(cvars)):
            base = base.base
        if base.dimension == dp:
            pt = cell.sample_map()
            cand = (-cell.dimension, tuple(pt[v] for v in x.variables))
            if best is None or cand < best:
                best = cand
    if best is None:
        raise PreconditionError("no cell projects onto a set of full dimension in P")
    return best[1]


def proj_dim_holds(x: SemilinearSet, p_dim: int, m: int, point: Sequence[Fraction],
                   radii: Sequence[Fraction] = (Fraction(1), Fraction(1, 10), Fraction(1, 1000))) -> bool:
    pvars = x.variables[m:]
    for r in radii:
        w = SemilinearSet(x.variables, conj(x.formula, box_around(x.variables, point, r)))
        if dimension(projection(w, pvars)) != p_dim:
            return False
    return True


def discontinuity_formula(graph: SemilinearSet) -> Formula:
    """Points of the domain where the function with this graph is not continuous."""
    *xs, y = graph.variables
    taken = set(graph.variables)

    def fresh(base: str) -> str:
        name = base
        while name in taken:
            name += "_"
        taken.add(name)
        return name

    e, dl = fresh("eps"), fresh("delta")
    xs2 = [fresh(v + "_") for v in xs]
    y2 = fresh(y + "_")
    other = rename_coordinates(graph.formula, list(xs) + [y], xs2 + [y2])
    close = forall(xs2 + [y2], implies(conj(dist_lt(xs, xs2, dl), other),
                                       dist_lt([y], [y2], e)))
    continuous = forall(e, implies(lt(0, e), exists(dl, conj(lt(0, dl), close))))
    value = exists(y, graph.formula)
    return conj(value, forall(y, implies(graph.formula, neg(continuous))))


def discontinuity_set(graph: SemilinearSet, check: bool = True) -> SemilinearSet:
    *xs, _ = graph.variables
    if check:
        domain = eliminate(exists(graph.variables[-1], graph.formula))
        if not is_total_function(graph, domain):
            raise PreconditionError("graph is not the graph of a function")
    return SemilinearSet(tuple(xs), eliminate(discontinuity_formula(graph)))


def plf_discontinuity_set(f, domain: Formula | None = None) -> SemilinearSet:
    """Points of ``domain`` (default: the domain of ``f``) where ``f``
    restricted to ``domain`` is discontinuous.

    A piecewise-affine map is discontinuous at ``p`` in piece ``i`` exactly
    when ``p`` is in the closure of some piece ``j`` whose affine value at
    ``p`` differs from that of piece ``i``. This needs no quantifiers; the
    definitional route is :func:`discontinuity_set`.
    """
    dom = formula_union(domain if domain is not None else disj([pc.region for pc in f.pieces]))
    regions = [ph.intersect(dom, formula_union(pc.region)) for pc in f.pieces]
    parts = []
    for i, pi in enumerate(f.pieces):
        near = ph.closure_union(regions[i])
        for j, pj in enumerate(f.pieces):
            if i != j and regions[j] and near:
                differ = formula_union(neg(eq(pi.values[0], pj.values[0])))
                parts.extend(ph.intersect(ph.intersect(regions[j], near), differ))
    return SemilinearSet(f.variables, union_formula(ph.simplify(parts)))


def format_point(p: Sequence[Fraction]) -> list[str]:
    return [format_rational(q) for q in p]
