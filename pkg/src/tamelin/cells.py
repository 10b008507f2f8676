"""Cylindrical cell decompositions of semilinear families.

Cells are built inductively on the coordinates: a cell of ``M^k`` is a
section ``{x_k = g(x')}`` or a band ``{f(x') < x_k < g(x')}`` over a base
cell of ``M^(k-1)`` with affine ``f``, ``g`` (``None`` means infinite).

The algorithm is the linear analogue of cylindrical algebraic
decomposition: the boundary forms of the family are split into those
mentioning the last coordinate (solved for it, the roots) and the rest;
the rest together with all pairwise root differences are decomposed one
level down. Over a base cell every projected form has constant sign, so the
roots keep one order and each family member is a union of cells.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from . import polyhedra as ph
from .errors import ArityError, PreconditionError
from .intervals import INF, Interval
from .lang import (AffineTerm, Formula, as_rational, conj, exists, forall, format_rational, implies,
                   le, lt)
from .qe import decide, formula_union, union_formula
from .sets import SemilinearSet, rename_coordinates

SECTION, BAND = 0, 1


def _term_str(t: AffineTerm | None, side: str) -> str:
    if t is None:
        return "-inf" if side == "lower" else "+inf"
    return str(t)


@dataclass(frozen=True, eq=False)
class Cell:
    """One cell. ``base`` is ``None`` in dimension one."""

    variables: tuple[str, ...]
    signature: tuple[int, ...]
    base: Cell | None
    lower: AffineTerm | None = None
    upper: AffineTerm | None = None
    sample: tuple[Fraction, ...] = ()

    @property
    def kind(self) -> int:
        return self.signature[-1]

    @property
    def dimension(self) -> int:
        return sum(self.signature)

    @property
    def graph(self) -> AffineTerm | None:
        return self.lower if self.kind == SECTION else None

    @cached_property
    def poly(self) -> frozenset:
        """The cell as one conjunction of constraints."""
        v = AffineTerm.var(self.variables[-1])
        own: list[ph.Con] = []
        if self.kind == SECTION:
            t = v - self.lower
            own.append(ph.make_con(t.coeffs, t.const, ph.EQ))
        else:
            if self.lower is not None:
                t = self.lower - v
                own.append(ph.make_con(t.coeffs, t.const, ph.LT))
            if self.upper is not None:
                t = v - self.upper
                own.append(ph.make_con(t.coeffs, t.const, ph.LT))
        base = self.base.poly if self.base is not None else frozenset()
        return base | frozenset(c for c in own if c.coeffs)

    def formula(self) -> Formula:
        return union_formula((self.poly,)) if self.poly else conj([])

    def contains(self, point: Mapping[str, Fraction]) -> bool:
        return all(c.holds(point) for c in self.poly)

    def sample_map(self) -> dict[str, Fraction]:
        return dict(zip(self.variables, self.sample))

    def to_json(self, base_index: Mapping[int, int] | None = None) -> dict:
        if self.kind == SECTION:
            bounds = {"kind": "section", "value": str(self.lower)}
        else:
            bounds = {"kind": "band", "lower": _term_str(self.lower, "lower"),
                      "upper": _term_str(self.upper, "upper")}
        base = None
        if self.base is not None and base_index is not None:
            base = base_index[id(self.base)]
        return {"signature": list(self.signature), "base": base, "bounds": bounds,
                "sample": [format_rational(q) for q in self.sample]}

    def __str__(self) -> str:
        v = self.variables[-1]
        if self.kind == SECTION:
            own = f"{v} = {self.lower}"
        else:
            own = f"{_term_str(self.lower, 'lower')} < {v} < {_term_str(self.upper, 'upper')}"
        sig = "(" + ",".join(map(str, self.signature)) + ")"
        return f"{sig}-cell [{own}]" + (f" over {self.base}" if self.base is not None else "")


@dataclass(frozen=True)
class Box:
    """Product of intervals, one per coordinate (``M`` when unrestricted)."""

    variables: tuple[str, ...]
    sides: tuple[Interval, ...]

    @classmethod
    def whole(cls, variables: Sequence[str]) -> Box:
        return cls(tuple(variables), tuple(Interval(-INF, INF) for _ in variables))

    @classmethod
    def of(cls, variables: Sequence[str], sides: Sequence[Interval | None]) -> Box:
        return cls(tuple(variables), tuple(s if s is not None else Interval(-INF, INF) for s in sides))

    def prefix(self, k: int) -> Box:
        return Box(self.variables[:k], self.sides[:k])

    def contains(self, point: Mapping[str, Fraction]) -> bool:
        return all(s.contains(point[v]) for v, s in zip(self.variables, self.sides))

    def forms(self, k: int) -> list[AffineTerm]:
        """Boundary forms of coordinate ``k`` (0-based)."""
        v, s = self.variables[k], self.sides[k]
        out = []
        for e in (s.lo, s.hi):
            if e not in (INF, -INF):
                out.append(AffineTerm.var(v) - e)
        return out

    def formula(self) -> Formula:
        return conj([s.to_formula(v) for v, s in zip(self.variables, self.sides)])

    def to_json(self) -> list:
        return [s.to_json() for s in self.sides]


@dataclass(frozen=True, eq=False)
class CellDecomposition:
    variables: tuple[str, ...]
    box: Box
    cells: tuple[Cell, ...]
    base: CellDecomposition | None = None
    tags: tuple = field(default=())

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self):
        return iter(self.cells)

    def locate(self, point: Mapping[str, Fraction]) -> Cell | None:
        """The cell containing ``point`` (``None`` outside the box)."""
        for c in self.cells:
            if c.contains(point):
                return c
        return None

    def to_json(self) -> dict:
        base_index = None
        if self.base is not None:
            base_index = {id(c): i for i, c in enumerate(self.base.cells)}
        out = {"variables": list(self.variables), "box": self.box.to_json(),
               "cells": [c.to_json(base_index) for c in self.cells],
               "base": self.base.to_json() if self.base is not None else None}
        if self.tags:
            out["tags"] = list(self.tags)
        return out


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------


def _form_key(t: AffineTerm) -> ph.Con:
    return ph.make_con(t.coeffs, t.const, ph.EQ)


def _dedupe(forms: Iterable[AffineTerm]) -> list[AffineTerm]:
    seen: dict = {}
    for t in forms:
        if t.is_constant():
            continue
        k = _form_key(t)
        if k not in seen:
            seen[k] = AffineTerm.make(dict(k.coeffs), k.const)
    return [seen[k] for k in sorted(seen)]


def _sample_between(lo: Fraction | None, hi: Fraction | None) -> Fraction:
    if lo is None and hi is None:
        return Fraction(0)
    if lo is None:
        return hi - 1
    if hi is None:
        return lo + 1
    return (lo + hi) / 2


def _build(variables: tuple[str, ...], box: Box, forms: list[AffineTerm]) -> CellDecomposition:
    k = len(variables)
    v = variables[-1]
    roots: dict = {}
    rest: list[AffineTerm] = []
    for t in forms:
        a = t.coeff(v)
        if a:
            r = (AffineTerm.var(v) * a - t) / a
            roots.setdefault(_form_key(r - AffineTerm.var(v)), r)
        else:
            rest.append(t)
    root_list = [roots[key] for key in sorted(roots)]
    if k > 1:
        diffs = [root_list[i] - root_list[j]
                 for i in range(len(root_list)) for j in range(i + 1, len(root_list))]
        base = _build(variables[:-1], box.prefix(k - 1), _dedupe(rest + diffs))
        bases: list[Cell | None] = list(base.cells)
    else:
        base = None
        bases = [None]
    side = box.sides[-1]
    cells: list[Cell] = []
    for b in bases:
        pt = b.sample_map() if b is not None else {}
        by_value: dict[Fraction, AffineTerm] = {}
        for r in root_list:
            val = r.evaluate(pt) if r.variables else r.const
            if val not in by_value or str(r) < str(by_value[val]):
                by_value[val] = r
        ordered = sorted(by_value.items())
        prefix_sig = b.signature if b is not None else ()
        prefix_sample = b.sample if b is not None else ()
        lo_val, lo_term = None, None
        for val, r in ordered + [(None, None)]:
            band_sample = _sample_between(lo_val, val)
            if side.contains(band_sample):
                cells.append(Cell(variables, prefix_sig + (BAND,), b, lo_term, r,
                                  prefix_sample + (band_sample,)))
            if val is not None and side.contains(val):
                cells.append(Cell(variables, prefix_sig + (SECTION,), b, r, None,
                                  prefix_sample + (val,)))
            lo_val, lo_term = val, r
    return CellDecomposition(variables, box, tuple(cells), base)


def family_polys(variables: Sequence[str], family: Sequence[SemilinearSet]) -> list[tuple]:
    out = []
    for s in family:
        if s.ambient_dim != len(variables):
            raise ArityError(f"set of dimension {s.ambient_dim} in a decomposition of M^{len(variables)}")
        f = rename_coordinates(s.formula, s.variables, variables)
        out.append(formula_union(f))
    return out


def decompose(box: Box | Sequence[str], family: Sequence[SemilinearSet] = ()) -> CellDecomposition:
    """Decomposition of ``box`` partitioning every member of ``family``."""
    if not isinstance(box, Box):
        box = Box.whole(tuple(box))
    variables = box.variables
    if not variables:
        raise ArityError("ambient dimension must be positive")
    forms: list[AffineTerm] = []
    for u in family_polys(variables, family):
        for p in u:
            for c in p:
                if c.coeffs:
                    forms.append(AffineTerm.make(dict(c.coeffs), c.const))
    for k in range(len(variables)):
        forms.extend(box.forms(k))
    return _build(variables, box, _dedupe(forms))


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


def affine_dimension(poly: frozenset, n: int) -> int:
    """Dimension of a nonempty relatively open convex polyhedron."""
    c = ph.canonical(poly)
    if c is None:
        return -1
    return n - sum(1 for con in c if con.kind == ph.EQ)


def _column_covers(cells: Sequence[Cell], base_poly: frozenset, side_poly: frozenset) -> bool:
    """Cells over one base cover ``base x side`` (exactly, by polyhedra)."""
    remaining: tuple = (base_poly | side_poly,)
    for c in cells:
        own = c.poly - base_poly
        if not own:
            return True
        pieces = [frozenset([n]) for con in own for n in ph.negate(con)]
        remaining = ph.intersect(remaining, ph.simplify(pieces))
        if not remaining:
            return True
    return not remaining


def verify_decomposition(d: CellDecomposition, family: Sequence[SemilinearSet] = ()) -> bool:
    """Check the defining clauses of a decomposition exactly.

    Cells are nonempty, their signatures match their dimensions, bands have
    lower bound below upper bound on the base, cells over a common base are
    pairwise disjoint and cover the column, the bases form a decomposition
    of the projected box, and every family member is a union of cells.
    """
    n = len(d.variables)
    box_union = formula_union(d.box.formula())
    if d.base is not None:
        if not verify_decomposition(d.base):
            return False
        base_ids = {id(c) for c in d.base.cells}
    columns: dict[int, list[Cell]] = {}
    for c in d.cells:
        if not ph.is_feasible(c.poly):
            return False
        if affine_dimension(c.poly, n) != c.dimension:
            return False
        if c.kind == BAND and c.lower is not None and c.upper is not None:
            bp = c.base.poly if c.base is not None else frozenset()
            gap = c.upper - c.lower
            if ph.is_feasible(bp | {ph.make_con(gap.coeffs, gap.const, ph.LE)}):
                return False
        if d.base is not None and id(c.base) not in base_ids:
            return False
        columns.setdefault(id(c.base), []).append(c)
        if not ph.intersect((c.poly,), box_union):
            return False
    # pairwise disjointness: across columns it follows from the bases
    for col in columns.values():
        for i in range(len(col)):
            for j in range(i + 1, len(col)):
                if ph.is_feasible(col[i].poly | col[j].poly):
                    return False
    # covering of each column, and every base has a column
    side = d.box.sides[-1]
    side_poly = frozenset()
    side_u = formula_union(side.to_formula(d.variables[-1]))
    if side_u and side_u != ph.FULL_UNION:
        (side_poly,) = side_u
    bases = d.base.cells if d.base is not None else [None]
    for b in bases:
        col = columns.get(id(b), [])
        bp = b.poly if b is not None else frozenset()
        if not col or not _column_covers(col, bp, side_poly):
            return False
    for u in family_polys(d.variables, family):
        comp = ph.complement(u)
        for c in d.cells:
            inside = not ph.intersect((c.poly,), comp)
            outside = not ph.intersect((c.poly,), u)
            if not (inside or outside):
                return False
    return True


def cells_inside(d: CellDecomposition, s: SemilinearSet) -> list[Cell]:
    """Cells of ``d`` contained in ``s`` (``d`` must partition ``s``)."""
    (u,) = family_polys(d.variables, [s])
    return [c for c in d.cells if ph.union_contains(u, c.sample_map())]


# ---------------------------------------------------------------------------
# monotone fibres and roofs
# ---------------------------------------------------------------------------

INCREASING, DECREASING, CONSTANT = "increasing", "decreasing", "constant"


def _graph_names(graph: SemilinearSet) -> tuple[str, str, str]:
    if graph.ambient_dim != 3:
        raise ArityError("expected the graph of a function of two variables")
    return graph.variables  # type: ignore[return-value]


def is_total_function(graph: SemilinearSet, domain: Formula) -> bool:
    """Every point of ``domain`` has exactly one value in ``graph``
    (points outside ``domain`` are ignored)."""
    *ins, out = graph.variables
    alt = out + "_alt"
    while alt in graph.variables:
        alt += "_"
    g2 = rename_coordinates(graph.formula, [out], [alt])
    total = forall(ins, implies(domain, exists(out, graph.formula)))
    single = forall(ins + [out, alt],
                    implies(conj(domain, graph.formula, g2), conj(le(out, alt), le(alt, out))))
    return decide(conj(total, single))


def monotone_sets(graph: SemilinearSet) -> dict[str, Formula]:
    """Points where the fibre map ``y -> f(x, y)`` is locally strictly
    increasing, strictly decreasing or constant."""
    x, y, z = _graph_names(graph)
    d, y1, y2, z1, z2 = "d_", y + "1_", y + "2_", z + "1_", z + "2_"
    at1 = rename_coordinates(graph.formula, [y, z], [y1, z1])
    at2 = rename_coordinates(graph.formula, [y, z], [y2, z2])
    near = conj(lt(AffineTerm.var(y) - AffineTerm.var(d), y1), lt(y1, y2),
                lt(y2, AffineTerm.var(y) + AffineTerm.var(d)))
    out = {}
    for tag, rel in ((INCREASING, lt(z1, z2)), (DECREASING, lt(z2, z1)),
                     (CONSTANT, le(z1, z2) & le(z2, z1))):
        local = forall([y1, y2, z1, z2], implies(conj(near, at1, at2), rel))
        out[tag] = exists(d, conj(lt(0, d), local))
    return out


def monotone_fiber_partition(graph: SemilinearSet, a, b) -> CellDecomposition:
    """Cells of ``[a, b] x M`` on whose fibres ``f`` is strictly monotone or
    constant, none containing a full vertical line."""
    a, b = as_rational(a), as_rational(b)
    x, y, _ = _graph_names(graph)
    strip = Box((x, y), (Interval(a, b, True, True), Interval(-INF, INF)))
    if not is_total_function(graph, strip.formula()):
        raise PreconditionError("graph is not a total function on the strip")
    mono = monotone_sets(graph)
    family = [SemilinearSet((x, y), mono[t]) for t in (INCREASING, DECREASING, CONSTANT)]
    family.append(SemilinearSet((x, y), conj(le(y, a), le(a, y))))  # the line y = a
    d = decompose(strip, family)
    unions = family_polys((x, y), family[:3])
    tags = []
    for c in d.cells:
        pt = c.sample_map()
        if c.kind == SECTION:
            tags.append(CONSTANT)  # one-point fibre
            continue
        for tag, u in zip((INCREASING, DECREASING, CONSTANT), unions):
            if ph.union_contains(u, pt):
                tags.append(tag)
                break
        else:
            raise PreconditionError(f"band {c} meets no monotone set")
    return CellDecomposition(d.variables, d.box, d.cells, d.base, tuple(tags))


OPEN_ROOF, NON_OPEN_ROOF, NOT_ROOF = "open_roof", "non_open_roof", "not_roof"


def classify_roof(c: Cell) -> str:
    if len(c.signature) != 2 or c.kind != BAND or c.upper is not None or c.lower is None:
        return NOT_ROOF
    if c.base.kind == SECTION:
        return NON_OPEN_ROOF
    if c.base.lower is not None and c.base.upper is not None:
        return OPEN_ROOF
    return NOT_ROOF


def classify_roofs(d: CellDecomposition) -> list[str]:
    if len(d.variables) != 2:
        raise ArityError("roofs live in decompositions of the plane")
    return [classify_roof(c) for c in d.cells]
