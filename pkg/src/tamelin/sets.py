"""Definable sets and functions over the semilinear model, plus the
periodic 1-D model (sets with an eventually periodic part)."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from . import polyhedra as ph
from .errors import ArityError, EmptySetError, PreconditionError
from .intervals import INF, Endpoint, Interval, IntervalUnion1D, fmt_endpoint
from .lang import (FALSE, TRUE, AffineTerm, Formula, all_vars, as_formula, as_rational, conj, disj,
                   dist_lt, eq, exists, forall, free_vars, fresh_name, implies, le, lt, neg,
                   parse_term, substitute_all, term)
from .qe import eliminate, formula_union, union_intervals


def _point_map(variables: Sequence[str], point) -> dict[str, Fraction]:
    if isinstance(point, Mapping):
        if set(point) != set(variables):
            raise ArityError(f"point assigns {sorted(point)}, expected {list(variables)}")
        return {k: as_rational(v) for k, v in point.items()}
    values = list(point) if isinstance(point, (list, tuple)) else [point]
    if len(values) != len(variables):
        raise ArityError(f"point has {len(values)} coordinates, ambient dimension is {len(variables)}")
    return {v: as_rational(x) for v, x in zip(variables, values)}


@dataclass(frozen=True)
class SemilinearSet:
    """``{x in M^n : formula(x)}`` for the ordered coordinate names ``variables``."""

    variables: tuple[str, ...]
    formula: Formula

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "formula", as_formula(self.formula))
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"repeated coordinate names {self.variables}")
        extra = free_vars(self.formula) - set(self.variables)
        if extra:
            raise ArityError(f"formula has free variables {sorted(extra)} outside {self.variables}")

    @classmethod
    def parse(cls, variables: Iterable[str] | str, text: str) -> SemilinearSet:
        names = variables.replace(",", " ").split() if isinstance(variables, str) else list(variables)
        return cls(tuple(names), as_formula(text))

    @classmethod
    def full(cls, variables: Iterable[str]) -> SemilinearSet:
        return cls(tuple(variables), TRUE)

    @classmethod
    def empty(cls, variables: Iterable[str]) -> SemilinearSet:
        return cls(tuple(variables), FALSE)

    @property
    def ambient_dim(self) -> int:
        return len(self.variables)

    @cached_property
    def union(self) -> tuple:
        return formula_union(self.formula)

    @cached_property
    def qf_formula(self) -> Formula:
        return eliminate(self.formula)

    def member(self, point) -> bool:
        pt = _point_map(self.variables, point)
        return ph.union_contains(self.union, pt)

    __contains__ = member

    def is_empty(self) -> bool:
        return not self.union

    def is_full(self) -> bool:
        return self.union == ph.FULL_UNION

    def _aligned(self, other: SemilinearSet) -> Formula:
        if other.ambient_dim != self.ambient_dim:
            raise ArityError(f"ambient dimensions differ: {self.ambient_dim} vs {other.ambient_dim}")
        if other.variables == self.variables:
            return other.formula
        return rename_coordinates(other.formula, other.variables, self.variables)

    def union_with(self, other: SemilinearSet) -> SemilinearSet:
        return SemilinearSet(self.variables, disj(self.formula, self._aligned(other)))

    def intersection(self, other: SemilinearSet) -> SemilinearSet:
        return SemilinearSet(self.variables, conj(self.formula, self._aligned(other)))

    def difference(self, other: SemilinearSet) -> SemilinearSet:
        return SemilinearSet(self.variables, conj(self.formula, neg(self._aligned(other))))

    def complement(self) -> SemilinearSet:
        return SemilinearSet(self.variables, neg(self.formula))

    def subset_of(self, other: SemilinearSet) -> bool:
        return self.difference(other).is_empty()

    def same_set(self, other: SemilinearSet) -> bool:
        return self.subset_of(other) and other.subset_of(self)

    def simplified(self) -> SemilinearSet:
        return SemilinearSet(self.variables, self.qf_formula)

    def substitute_coordinates(self, names: Sequence[str]) -> Formula:
        """The defining formula with the coordinates renamed to ``names``."""
        return rename_coordinates(self.formula, self.variables, tuple(names))

    def interval_union(self) -> IntervalUnion1D:
        if self.ambient_dim != 1:
            raise ArityError("1-D extraction needs ambient dimension 1")
        return union_intervals(self.union, self.variables[0])

    def __str__(self) -> str:
        return "{(" + ", ".join(self.variables) + ") : " + str(self.formula) + "}"


def rename_coordinates(f: Formula, old: Sequence[str], new: Sequence[str]) -> Formula:
    """Simultaneous renaming of free variables ``old[i] -> new[i]``."""
    mapping = {o: AffineTerm.var(n) for o, n in zip(old, new) if o != n}
    return substitute_all(f, mapping) if mapping else f


def _fresh(base: str, taken: set[str]) -> str:
    name = fresh_name(base, taken)
    taken.add(name)
    return name


# ---------------------------------------------------------------------------
# module-level operations
# ---------------------------------------------------------------------------


def member(s: SemilinearSet, point) -> bool:
    return s.member(point)


def boolean_ops(s: SemilinearSet, t: SemilinearSet | None, op: str) -> SemilinearSet:
    if op == "complement":
        return s.complement()
    if t is None:
        raise PreconditionError(f"{op} needs two sets")
    if op == "union":
        return s.union_with(t)
    if op in ("intersect", "intersection"):
        return s.intersection(t)
    if op == "difference":
        return s.difference(t)
    raise ValueError(f"unknown set operation {op!r}")


def closure_formula(s: SemilinearSet) -> Formula:
    """``forall eps > 0 exists y in S with |x - y| < eps``."""
    taken = set(s.variables) | set(_bound_names(s.formula))
    e = _fresh("eps", taken)
    ys = [_fresh(v + "_", taken) for v in s.variables]
    near = conj(s.substitute_coordinates(ys), dist_lt(s.variables, ys, e))
    return forall(e, implies(lt(0, e), exists(ys, near)))


def interior_formula(s: SemilinearSet) -> Formula:
    """``exists eps > 0 such that every y with |x - y| < eps lies in S``."""
    taken = set(s.variables) | set(_bound_names(s.formula))
    e = _fresh("eps", taken)
    ys = [_fresh(v + "_", taken) for v in s.variables]
    ball = forall(ys, implies(dist_lt(s.variables, ys, e), s.substitute_coordinates(ys)))
    return exists(e, conj(lt(0, e), ball))


def _bound_names(f: Formula) -> set[str]:
    return set(all_vars(f))


def closure(s: SemilinearSet) -> SemilinearSet:
    return SemilinearSet(s.variables, eliminate(closure_formula(s)))


def interior(s: SemilinearSet) -> SemilinearSet:
    return SemilinearSet(s.variables, eliminate(interior_formula(s)))


def frontier(s: SemilinearSet) -> SemilinearSet:
    return closure(s).difference(s).simplified()


def is_closed(s: SemilinearSet) -> bool:
    return closure(s).subset_of(s)


def is_open(s: SemilinearSet) -> bool:
    return s.subset_of(interior(s))


def as_interval_union(s) -> IntervalUnion1D:
    if isinstance(s, IntervalUnion1D):
        return s
    if isinstance(s, SemilinearSet):
        return s.interval_union()
    raise TypeError(f"not a 1-D set: {s!r}")


def inf_sup_1d(s, which: str = "inf") -> tuple[Endpoint, bool]:
    """Exact infimum or supremum and whether it belongs to the set."""
    if which not in ("inf", "sup"):
        raise ValueError("which must be 'inf' or 'sup'")
    if isinstance(s, PeriodicSet1D):
        return s.inf() if which == "inf" else s.sup()
    iu = as_interval_union(s)
    if iu.is_empty():
        raise EmptySetError("extremum of the empty set")
    return iu.inf() if which == "inf" else iu.sup()


def is_discrete_closed(s) -> bool:
    if isinstance(s, PeriodicSet1D):
        return s.is_discrete_closed()
    return as_interval_union(s).is_discrete_closed()


# ---------------------------------------------------------------------------
# periodic 1-D model
# ---------------------------------------------------------------------------


def _floor_div(x: Fraction, p: Fraction) -> int:
    return math.floor(x / p)


@dataclass(frozen=True)
class PeriodicSet1D:
    """``finite_part  U  ((base + p*Z) intersected with [m, +inf[)``.

    ``base`` lies in ``[0, p[`` and ``m`` may be ``-inf``. The constructor
    normalizes: base is reduced modulo ``p`` and the finite part loses
    whatever the periodic carrier already covers.
    """

    finite_part: IntervalUnion1D
    base: IntervalUnion1D
    period: Fraction
    threshold: Endpoint = -INF

    def __post_init__(self) -> None:
        p = as_rational(self.period)
        if p <= 0:
            raise PreconditionError("period must be positive")
        object.__setattr__(self, "period", p)
        m = self.threshold
        if m not in (INF, -INF):
            m = as_rational(m)
        if m == INF:
            raise PreconditionError("threshold must be finite or -inf")
        object.__setattr__(self, "threshold", m)
        fin = self.finite_part
        if not fin.bounded_below() or not fin.bounded_above():
            raise PreconditionError("finite part must be bounded")
        object.__setattr__(self, "base", _reduce_base(self.base, p))
        object.__setattr__(self, "finite_part", fin.difference(self._carrier_on(fin)))

    @classmethod
    def integers(cls, threshold: Endpoint = -INF) -> PeriodicSet1D:
        return cls(IntervalUnion1D(), IntervalUnion1D.points([0]), Fraction(1), threshold)

    def normalize(self) -> PeriodicSet1D:
        return PeriodicSet1D(self.finite_part, self.base, self.period, self.threshold)

    def _carrier_on(self, region: IntervalUnion1D) -> IntervalUnion1D:
        """Periodic carrier restricted to the hull of a bounded region."""
        if region.is_empty() or self.base.is_empty():
            return IntervalUnion1D()
        lo, hi = region.components[0].lo, region.components[-1].hi
        return self.segment(Fraction(lo), Fraction(hi))

    def segment(self, lo: Fraction, hi: Fraction) -> IntervalUnion1D:
        """The periodic carrier intersected with the closed interval ``[lo, hi]``."""
        p = self.period
        start = lo if self.threshold == -INF else max(lo, self.threshold)
        if start > hi or self.base.is_empty():
            return IntervalUnion1D()
        k0, k1 = _floor_div(start, p) - 1, _floor_div(hi, p) + 1
        copies = []
        for k in range(k0, k1 + 1):
            copies.extend(self.base.shift(k * p).components)
        window = IntervalUnion1D([Interval(start, hi, True, True)])
        return IntervalUnion1D(copies).intersection(window)

    def member(self, x) -> bool:
        x = as_rational(x)
        if self.finite_part.contains(x):
            return True
        if self.threshold != -INF and x < self.threshold:
            return False
        return self.base.contains(x - self.period * _floor_div(x, self.period))

    __contains__ = member

    def window(self, a, b) -> IntervalUnion1D:
        a, b = as_rational(a), as_rational(b)
        if not a < b:
            raise PreconditionError("window needs a < b")
        inside = self.segment(a, b).union(self.finite_part)
        return inside.intersection(IntervalUnion1D([Interval(a, b)]))

    def is_empty(self) -> bool:
        return self.finite_part.is_empty() and self.base.is_empty()

    def is_discrete_closed(self) -> bool:
        return self.finite_part.is_discrete_closed() and self.base.is_discrete_closed()

    def inf(self) -> tuple[Endpoint, bool]:
        if self.is_empty():
            raise EmptySetError("extremum of the empty set")
        cands: list[tuple[Endpoint, bool]] = []
        if not self.base.is_empty():
            if self.threshold == -INF:
                return -INF, False
            m = self.threshold
            first = self.segment(m, m + self.period + self.base.components[-1].hi)
            if not first.is_empty():
                cands.append(first.inf())
        if not self.finite_part.is_empty():
            cands.append(self.finite_part.inf())
        lo = min(v for v, _ in cands)
        return lo, self.member(lo)

    def sup(self) -> tuple[Endpoint, bool]:
        if self.is_empty():
            raise EmptySetError("extremum of the empty set")
        if not self.base.is_empty():
            return INF, False
        return self.finite_part.sup()

    def __str__(self) -> str:
        m = fmt_endpoint(self.threshold)
        text = f"periodic(base={self.base}; p={fmt_endpoint(self.period)}; m={m})"
        return text if self.finite_part.is_empty() else f"{self.finite_part} U {text}"


def _reduce_base(base: IntervalUnion1D, p: Fraction) -> IntervalUnion1D:
    """Fold a union into ``[0, p[`` modulo ``p``; unbounded input is an error."""
    if base.is_empty():
        return base
    if not base.bounded_below() or not base.bounded_above():
        raise PreconditionError("periodic base must be bounded")
    lo, hi = Fraction(base.components[0].lo), Fraction(base.components[-1].hi)
    window = IntervalUnion1D([Interval(Fraction(0), p, True, False)])
    out = IntervalUnion1D()
    for k in range(_floor_div(lo, p) - 1, _floor_div(hi, p) + 2):
        out = out.union(base.shift(-k * p).intersection(window))
    return out


def periodic_window(s: PeriodicSet1D, a, b) -> IntervalUnion1D:
    return s.window(a, b)


def local_complexity(s: PeriodicSet1D, c) -> int:
    """Largest number of components of ``s`` meeting an open window of radius ``c``.

    The component count is a step function of the window centre whose steps
    sit at ``e - c`` and ``e + c`` for endpoints ``e``; it is evaluated at
    those positions and between them, over a range covering the finite part
    and one full period of the periodic part.
    """
    c = as_rational(c)
    if c <= 0:
        raise PreconditionError("radius must be positive")
    p = s.period
    anchors: list[Fraction] = [Fraction(0)]
    if s.threshold != -INF:
        anchors.append(s.threshold)
    for comp in s.finite_part:
        anchors.extend([Fraction(comp.lo), Fraction(comp.hi)])
    lo = min(anchors) - 2 * c - 2 * p
    hi = max(anchors) + 2 * c + 2 * p
    region = s.window(lo - 2 * c, hi + 2 * c)
    ends = sorted({Fraction(v) for comp in region for v in (comp.lo, comp.hi)} | {lo, hi})
    centres = sorted({e + d for e in ends for d in (-c, c)} | {lo, hi})
    probes = list(centres)
    probes.extend((u + v) / 2 for u, v in zip(centres, centres[1:]))
    best = 0
    for x in probes:
        if lo <= x <= hi:
            best = max(best, len(s.window(x - c, x + c)))
    return best


# ---------------------------------------------------------------------------
# piecewise-linear functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Piece:
    """Affine values on a region; one term per output coordinate."""

    region: Formula
    values: tuple[AffineTerm, ...]

    def __post_init__(self) -> None:
        vals = self.values
        if isinstance(vals, AffineTerm):
            vals = (vals,)
        object.__setattr__(self, "values", tuple(term(v) for v in vals))

    @property
    def value(self) -> AffineTerm:
        if len(self.values) != 1:
            raise ArityError("vector-valued piece has no single value")
        return self.values[0]

    def at(self, point: Mapping[str, Fraction]) -> tuple[Fraction, ...]:
        return tuple(v.evaluate(point) for v in self.values)


@dataclass(frozen=True)
class PiecewiseLinearFunction:
    """A map ``M^n -> M^k`` given by affine values on definable regions.

    With ``period`` set the function is unary, its pieces cover ``[0, p[``,
    and it is extended by ``f(x + p) = f(x)``.
    """

    variables: tuple[str, ...]
    pieces: tuple[Piece, ...]
    period: Fraction | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "pieces", tuple(self.pieces))
        if self.period is not None:
            object.__setattr__(self, "period", as_rational(self.period))
            if self.period <= 0:
                raise PreconditionError("period must be positive")
            if len(self.variables) != 1:
                raise PreconditionError("periodic functions must be unary")
        allowed = set(self.variables)
        widths = {len(pc.values) for pc in self.pieces}
        if len(widths) > 1:
            raise ArityError("pieces disagree on the output dimension")
        for pc in self.pieces:
            if not free_vars(pc.region) <= allowed or any(not v.variables <= allowed for v in pc.values):
                raise ArityError(f"piece {pc} mentions variables outside {self.variables}")

    @classmethod
    def unary(cls, var: str, pieces: Iterable[tuple[Interval, AffineTerm | str | int]],
              period=None) -> PiecewiseLinearFunction:
        out = []
        for iv, val in pieces:
            v = parse_term(val) if isinstance(val, str) else term(val)
            out.append(Piece(iv.to_formula(var), v))
        return cls((var,), tuple(out), period)

    @property
    def arity(self) -> int:
        return len(self.variables)

    @property
    def out_dim(self) -> int:
        return len(self.pieces[0].values) if self.pieces else 1

    @cached_property
    def _regions(self) -> tuple:
        return tuple(formula_union(pc.region) for pc in self.pieces)

    def domain(self) -> SemilinearSet:
        return SemilinearSet(self.variables, disj([pc.region for pc in self.pieces]))

    def reduce(self, point: Mapping[str, Fraction]) -> dict[str, Fraction]:
        if self.period is None:
            return dict(point)
        (v,) = self.variables
        x = point[v]
        return {v: x - self.period * _floor_div(x, self.period)}

    def owner(self, point) -> int | None:
        pt = self.reduce(_point_map(self.variables, point))
        for i, u in enumerate(self._regions):
            if ph.union_contains(u, pt):
                return i
        return None

    def __call__(self, point) -> Fraction:
        return plf_eval(self, point)

    def intervals(self) -> list[IntervalUnion1D]:
        """Regions of a unary function as 1-D sets (window ``[0, p[`` if periodic)."""
        if self.arity != 1:
            raise ArityError("intervals() is for unary functions")
        return [union_intervals(u, self.variables[0]) for u in self._regions]

    def check_partition(self) -> bool:
        """Pieces pairwise disjoint (and cover ``[0, p[`` when periodic)."""
        for i in range(len(self.pieces)):
            for j in range(i + 1, len(self.pieces)):
                if ph.intersect(self._regions[i], self._regions[j]):
                    return False
        if self.period is not None:
            (v,) = self.variables
            window = conj(le(0, v), lt(v, self.period))
            return SemilinearSet(self.variables, window).subset_of(self.domain())
        return True


def plf_eval(f: PiecewiseLinearFunction, point):
    """Value at ``point``: a Fraction, or a tuple for vector-valued maps."""
    pt = f.reduce(_point_map(f.variables, point))
    for pc, u in zip(f.pieces, f._regions):
        if ph.union_contains(u, pt):
            vals = pc.at(pt)
            return vals[0] if len(vals) == 1 else vals
    raise PreconditionError(f"point {point} outside the domain")


def plf_graph(f: PiecewiseLinearFunction, out: str | Sequence[str] | None = None) -> SemilinearSet:
    """``{(x, y) : y = f(x)}``; periodic functions are rejected."""
    if f.period is not None:
        raise PreconditionError("graph of a periodic function is not semilinear")
    if out is None:
        out = ("y",) if f.out_dim == 1 else tuple(f"y{i + 1}" for i in range(f.out_dim))
    names = (out,) if isinstance(out, str) else tuple(out)
    if len(names) != f.out_dim:
        raise ArityError(f"{len(names)} output names for a map into M^{f.out_dim}")
    if set(names) & set(f.variables):
        raise ValueError(f"output names {names} clash with the inputs")
    parts = [conj([pc.region] + [eq(n, v) for n, v in zip(names, pc.values)]) for pc in f.pieces]
    return SemilinearSet(f.variables + names, disj(parts))
