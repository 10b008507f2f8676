"""Definable choice, curve selection and limits of curves."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cells import SECTION, Box, Cell, decompose, family_polys
from .dim import discontinuity_set
from . import polyhedra as ph
from .errors import EmptySetError, PreconditionError
from .intervals import INF, IntervalUnion1D
from .lang import (TRUE, AffineTerm, Formula, as_rational, conj, disj, dist_lt, eq, exists, forall,
                   implies, le, lt, substitute_all)
from .qe import decide, eliminate, formula_union, union_intervals
from .sets import (Piece, PiecewiseLinearFunction, SemilinearSet, as_interval_union, closure_formula,
                   plf_graph)


@dataclass(frozen=True)
class Selector:
    """The offset used when a fibre component is unbounded."""

    c: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        object.__setattr__(self, "c", as_rational(self.c))
        if self.c <= 0:
            raise PreconditionError("selector offset must be positive")


DEFAULT_SELECTOR = Selector()


def choose_element(j, sel: Selector = DEFAULT_SELECTOR) -> Fraction:
    """The canonical element of a nonempty 1-D set.

    0 if it belongs to the set; otherwise, on the positive side, the midpoint
    of the first component (or its left end plus ``c`` when unbounded); the
    negative side is the mirror image.
    """
    j = as_interval_union(j)
    if j.is_empty():
        raise EmptySetError("cannot choose from the empty set")
    if j.contains(0):
        return Fraction(0)
    pos = [c for c in j if c.hi > 0]
    if pos:
        first = pos[0]
        a = Fraction(first.lo)
        b = a if first.is_point else first.hi
        return (a + b) / 2 if b != INF else a + sel.c
    last = [c for c in j if c.lo < 0][-1]
    a = Fraction(last.hi)
    b = a if last.is_point else last.lo
    return (a + b) / 2 if b != -INF else a - sel.c


# ---------------------------------------------------------------------------
# Skolem sections
# ---------------------------------------------------------------------------


def _column_choice(col: Sequence[Cell], flags: Sequence[bool], sel: Selector) -> AffineTerm:
    """The selector applied to a fibre, symbolically over one base cell.

    ``col`` lists the cells of one column bottom to top; ``flags`` marks
    those inside the set. The coordinate itself is one of the boundary
    forms, so some section of the column is the zero level.
    """
    z = next(i for i, c in enumerate(col) if c.kind == SECTION and c.sample[-1] == 0)
    if flags[z]:
        return AffineTerm.constant(0)
    up = [i for i in range(z + 1, len(col)) if flags[i]]
    if up:
        i = up[0]
        a = col[i].lower
        j = i
        while j + 1 < len(col) and flags[j + 1]:
            j += 1
        b = col[j].lower if col[j].kind == SECTION else col[j].upper
        return (a + b) / 2 if b is not None else a + sel.c
    down = [i for i in range(z) if flags[i]]
    i = down[-1]
    a = col[i].lower if col[i].kind == SECTION else col[i].upper
    j = i
    while j - 1 >= 0 and flags[j - 1]:
        j -= 1
    b = col[j].lower
    return (a + b) / 2 if b is not None else a - sel.c


def _section_one(x: SemilinearSet, sel: Selector) -> list[Piece]:
    """Choose the first coordinate of ``x`` as a function of the others."""
    y, params = x.variables[0], x.variables[1:]
    order = tuple(params) + (y,)
    xo = SemilinearSet(order, x.formula)
    zero = SemilinearSet(order, eq(y, 0))
    d = decompose(Box.whole(order), [xo, zero])
    (u,) = family_polys(order, [xo])
    columns: dict[int, list[Cell]] = {}
    for c in d.cells:
        columns.setdefault(id(c.base), []).append(c)
    bases = d.base.cells if d.base is not None else [None]
    pieces = []
    for b in bases:
        col = columns[id(b)]
        flags = [ph.union_contains(u, c.sample_map()) for c in col]
        if not any(flags):
            continue
        value = _column_choice(col, flags, sel)
        region = b.formula() if b is not None else TRUE
        pieces.append(Piece(region, (value,)))
    return pieces


def skolem_section(x: SemilinearSet, n: int, sel: Selector = DEFAULT_SELECTOR) -> PiecewiseLinearFunction:
    """A piecewise-affine ``phi: pi(x) -> x`` with ``pi(phi(p)) = p``, where
    ``pi`` keeps the last ``n`` coordinates.

    The last chosen coordinate is fixed first: ``phi = phi1 o phi2`` with
    ``phi2`` a section of the set forgetting the first coordinate.
    """
    m = x.ambient_dim - n
    if m < 0 or n < 0:
        raise PreconditionError("projection keeps more coordinates than there are")
    if x.is_empty():
        raise EmptySetError("section of the empty set")
    xs = x.variables[m:]
    ident = tuple(AffineTerm.var(v) for v in xs)
    if m == 0:
        return PiecewiseLinearFunction(xs, (Piece(x.formula, ident),))
    first = _section_one(x, sel)
    if m == 1:
        return PiecewiseLinearFunction(xs, tuple(Piece(p.region, p.values + ident) for p in first))
    rest = SemilinearSet(x.variables[1:], eliminate(exists(x.variables[0], x.formula)))
    inner = skolem_section(rest, n, sel)
    chosen = x.variables[1:m]
    pieces = []
    for p2 in inner.pieces:
        sub = dict(zip(chosen, p2.values[: m - 1]))
        for p1 in first:
            region = conj(p2.region, substitute_all(p1.region, sub))
            if not formula_union(region):
                continue
            v = p1.values[0]
            for name, t in sub.items():
                v = v.substitute(name, t)
            pieces.append(Piece(eliminate(region), (v,) + p2.values))
    return PiecewiseLinearFunction(xs, tuple(pieces))


# ---------------------------------------------------------------------------
# curves
# ---------------------------------------------------------------------------


def distance_equals(xs: Sequence[str], a: Sequence[Fraction], t: str) -> Formula:
    """``max_i |x_i - a_i| = t``."""
    diffs = [AffineTerm.var(v) - c for v, c in zip(xs, a)]
    bounded = conj([conj(le(d, t), le(-d, t)) for d in diffs])
    touches = disj([disj(eq(d, t), eq(-d, t)) for d in diffs])
    return conj(bounded, touches)


def _fresh(base: str, taken) -> str:
    name = base
    while name in taken:
        name += "_"
    return name


def curve_selection(x: SemilinearSet, a: Sequence, sel: Selector = DEFAULT_SELECTOR
                    ) -> tuple[Fraction, PiecewiseLinearFunction]:
    """``(eps, gamma)`` with ``gamma: ]0, eps[ -> x`` continuous, ``|a - gamma(t)| = t``.

    When the radii available near 0 are unbounded, ``eps`` is capped at 1.
    """
    a = tuple(as_rational(v) for v in a)
    if len(a) != x.ambient_dim:
        raise PreconditionError("point and set have different dimensions")
    pt = dict(zip(x.variables, a))
    if x.member(a):
        raise PreconditionError("the point lies in the set")
    if not decide(substitute_all(closure_formula(x), pt)):
        raise PreconditionError("the point is not in the closure of the set")
    t = _fresh("t", set(x.variables))
    y = SemilinearSet(x.variables + (t,), conj(x.formula, distance_equals(x.variables, a, t)))
    radii = union_intervals(formula_union(exists(x.variables, y.formula)), t)
    start = next(c for c in radii if c.lo == 0)
    eps = Fraction(start.hi) if start.hi != INF else Fraction(1)
    window = conj(lt(0, t), lt(t, eps))
    yw = SemilinearSet(y.variables, conj(y.formula, window))
    raw = skolem_section(yw, 1, sel)
    gamma = _coordinates(raw, x.ambient_dim)
    bad = IntervalUnion1D()
    for i in range(x.ambient_dim):
        g = plf_graph(_coordinate(gamma, i), "v_")
        bad = bad.union(discontinuity_set(g, check=False).interval_union())
    if not bad.is_empty():
        eps = min(eps, Fraction(bad.inf()[0]))
    return eps, restrict_curve(gamma, eps)


def _coordinates(f: PiecewiseLinearFunction, k: int) -> PiecewiseLinearFunction:
    return PiecewiseLinearFunction(f.variables, tuple(Piece(p.region, p.values[:k]) for p in f.pieces))


def _coordinate(f: PiecewiseLinearFunction, i: int) -> PiecewiseLinearFunction:
    return PiecewiseLinearFunction(f.variables, tuple(Piece(p.region, (p.values[i],)) for p in f.pieces))


def restrict_curve(gamma: PiecewiseLinearFunction, eps: Fraction) -> PiecewiseLinearFunction:
    (t,) = gamma.variables
    window = conj(lt(0, t), lt(t, eps))
    pieces = []
    for p in gamma.pieces:
        region = conj(p.region, window)
        if formula_union(region):
            pieces.append(Piece(eliminate(region), p.values))
    return PiecewiseLinearFunction(gamma.variables, tuple(pieces))


def _germ_piece(gamma: PiecewiseLinearFunction) -> Piece:
    (t,) = gamma.variables
    for p, iv in zip(gamma.pieces, gamma.intervals()):
        for comp in iv:
            if comp.lo == 0 and comp.hi > 0:
                return p
    raise PreconditionError("no piece of the curve reaches down to 0")


def is_bounded_curve(gamma: PiecewiseLinearFunction) -> bool:
    (t,) = gamma.variables
    names = tuple(_fresh(f"g{i}_", {t}) for i in range(gamma.out_dim))
    g = plf_graph(gamma, names)
    r = _fresh("r_", set(names) | {t})
    zeros = [AffineTerm.constant(0)] * len(names)
    return decide(exists(r, forall(g.variables, implies(g.formula, dist_lt(names, zeros, r)))))


def curve_limit(gamma: PiecewiseLinearFunction) -> tuple[Fraction, ...]:
    """``lim_{t -> +0} gamma(t)``: the first piece's affine value at ``t = 0``."""
    if gamma.arity != 1:
        raise PreconditionError("a curve has one parameter")
    if not is_bounded_curve(gamma):
        raise PreconditionError("the curve is unbounded")
    (t,) = gamma.variables
    p = _germ_piece(gamma)
    return tuple(v.evaluate({t: Fraction(0)}) for v in p.values)


def limit_sentence(gamma: PiecewiseLinearFunction, x: Sequence[Fraction]) -> Formula:
    """``forall eps > 0 exists delta > 0 forall t in ]0, delta[: |x - gamma(t)| < eps``."""
    (t,) = gamma.variables
    names = tuple(f"g{i}_" for i in range(gamma.out_dim))
    g = plf_graph(gamma, names)
    e, d = "eps_", "delta_"
    pts = [AffineTerm.constant(as_rational(v)) for v in x]
    body = forall(g.variables, implies(conj(g.formula, lt(0, t), lt(t, d)), dist_lt(names, pts, e)))
    return forall(e, implies(lt(0, e), exists(d, conj(lt(0, d), body))))


def reparametrize(gamma: PiecewiseLinearFunction, factor: Fraction) -> PiecewiseLinearFunction:
    """``t -> gamma(factor * t)``."""
    (t,) = gamma.variables
    s = AffineTerm.var(t) * as_rational(factor)
    pieces = tuple(Piece(substitute_all(p.region, {t: s}), tuple(v.substitute(t, s) for v in p.values))
                   for p in gamma.pieces)
    return PiecewiseLinearFunction(gamma.variables, pieces)
