"""Definable families of functions: equi-continuity, convergence, limits,
moduli of continuity, and the monotonicity partition of unary functions."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import polyhedra as ph
from .cells import SECTION, Box, decompose, family_polys, is_total_function
from .choice import curve_selection
from .dim import dimension, discontinuity_set, projection
from .errors import PreconditionError
from .intervals import INF, Endpoint, Interval, IntervalUnion1D
from .lang import (TRUE, AffineTerm, Formula, all_vars, as_rational, conj, disj, dist_lt, eq, exists,
                   forall, implies, le, lt, neg, substitute_all)
from .qe import decide, eliminate, formula_union, union_intervals
from .sets import (Piece, PeriodicSet1D, PiecewiseLinearFunction, SemilinearSet, closure,
                   closure_formula, rename_coordinates)


def graph_to_plf(graph: SemilinearSet) -> PiecewiseLinearFunction:
    """Pieces of the function whose graph is given (last coordinate = value)."""
    *xs, y = graph.variables
    d = decompose(Box.whole(graph.variables), [graph])
    (u,) = family_polys(graph.variables, [graph])
    pieces = []
    for c in d.cells:
        if not ph.union_contains(u, c.sample_map()):
            continue
        if c.kind != SECTION:
            raise PreconditionError("set is not the graph of a function")
        region = c.base.formula() if c.base is not None else TRUE
        pieces.append(Piece(region, (c.lower,)))
    return PiecewiseLinearFunction(tuple(xs), merge_pieces(pieces))


def merge_pieces(pieces: Sequence[Piece]) -> tuple[Piece, ...]:
    """One piece per distinct value, in order of first appearance."""
    groups: dict[tuple, list[Formula]] = {}
    for pc in pieces:
        groups.setdefault(pc.values, []).append(pc.region)
    return tuple(Piece(eliminate(disj(regions)), values) for values, regions in groups.items())


class _Names:
    """Fresh bound-variable names that avoid every name in use."""

    def __init__(self, taken: set[str]) -> None:
        self.taken = set(taken)

    def __call__(self, base: str) -> str:
        name = base
        while name in self.taken:
            name += "_"
        self.taken.add(name)
        return name


@dataclass(frozen=True)
class DefinableFamily:
    """``f: C x P -> M`` given by affine pieces over the ``(x, p)`` coordinates.

    ``domain`` is ``C`` (coordinates ``xs``), ``params`` is ``P``
    (coordinates ``ps``). With ``check`` the pieces are verified to define a
    total single-valued function on ``C x P``.
    """

    xs: tuple[str, ...]
    ps: tuple[str, ...]
    domain: Formula
    params: Formula
    pieces: tuple[Piece, ...]
    check: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "xs", tuple(self.xs))
        object.__setattr__(self, "ps", tuple(self.ps))
        object.__setattr__(self, "pieces", tuple(self.pieces))
        if self.check and not is_total_function(self.graph, conj(self.domain, self.params)):
            raise PreconditionError("pieces do not define a total function on C x P")

    @classmethod
    def from_graph(cls, graph: SemilinearSet, n_x: int, domain: Formula, params: Formula,
                   check: bool = True) -> DefinableFamily:
        *inputs, _ = graph.variables
        if check and not is_total_function(graph, conj(domain, params)):
            raise PreconditionError("graph is not a total function on C x P")
        restricted = SemilinearSet(graph.variables, conj(graph.formula, domain, params))
        plf = graph_to_plf(restricted)
        return cls(tuple(inputs[:n_x]), tuple(inputs[n_x:]), domain, params, plf.pieces, check=False)

    @property
    def variables(self) -> tuple[str, ...]:
        return self.xs + self.ps

    @cached_property
    def out_name(self) -> str:
        return _Names(self._all_names())("y")

    def _all_names(self) -> set[str]:
        names = set(self.variables) | set(all_vars(self.domain)) | set(all_vars(self.params))
        for pc in self.pieces:
            names |= set(all_vars(pc.region))
        return names

    def names(self) -> _Names:
        return _Names(self._all_names() | {self.out_name})

    @cached_property
    def graph(self) -> SemilinearSet:
        y = self.out_name
        parts = [conj(pc.region, eq(y, pc.value)) for pc in self.pieces]
        return SemilinearSet(self.variables + (y,), conj(self.domain, self.params, disj(parts)))

    def plf(self) -> PiecewiseLinearFunction:
        return PiecewiseLinearFunction(self.variables, self.pieces)

    def in_domain(self, xs: Sequence[str]) -> Formula:
        return rename_coordinates(self.domain, self.xs, xs)

    def in_params(self, ps: Sequence[str]) -> Formula:
        return rename_coordinates(self.params, self.ps, ps)

    def _at(self, pc: Piece, xs: Sequence[str], ps: Sequence[str]) -> tuple[Formula, AffineTerm]:
        mapping = {o: AffineTerm.var(n) for o, n in zip(self.variables, tuple(xs) + tuple(ps)) if o != n}
        region = substitute_all(pc.region, mapping) if mapping else pc.region
        value = pc.value
        for o, t in mapping.items():
            value = value.substitute(o, t)
        return region, value

    def values_close(self, xa, pa, xb, pb, eps) -> Formula:
        """``|f(xa, pa) - f(xb, pb)| < eps`` without quantifying over values."""
        parts = []
        for pi in self.pieces:
            ri, vi = self._at(pi, xa, pa)
            for pj in self.pieces:
                rj, vj = self._at(pj, xb, pb)
                parts.append(implies(conj(ri, rj), dist_lt([vi], [vj], eps)))
        return conj(parts)

    def value_near(self, xa, pa, target, eps) -> Formula:
        """``|f(xa, pa) - target| < eps``."""
        parts = []
        for pc in self.pieces:
            r, v = self._at(pc, xa, pa)
            parts.append(implies(r, dist_lt([v], [target], eps)))
        return conj(parts)


def _forall_in(names: Sequence[str], cond: Formula, body: Formula) -> Formula:
    return forall(list(names), implies(cond, body))


def _positive(name: str) -> Formula:
    return lt(0, name)


# ---------------------------------------------------------------------------
# deciders
# ---------------------------------------------------------------------------


def equi_continuity_sentence(fam: DefinableFamily, uniform: bool = False) -> Formula:
    nm = fam.names()
    e, d = nm("eps"), nm("delta")
    x2 = [nm(v + "_2") for v in fam.xs]
    close = implies(dist_lt(fam.xs, x2, d), fam.values_close(fam.xs, fam.ps, x2, fam.ps, e))
    if uniform:
        inner = _forall_in(fam.ps, fam.in_params(fam.ps),
                           _forall_in(list(fam.xs) + x2, conj(fam.in_domain(fam.xs), fam.in_domain(x2)), close))
        return forall(e, implies(_positive(e), exists(d, conj(_positive(d), inner))))
    inner = _forall_in(fam.ps, fam.in_params(fam.ps), _forall_in(x2, fam.in_domain(x2), close))
    per_x = _forall_in(fam.xs, fam.in_domain(fam.xs), exists(d, conj(_positive(d), inner)))
    return forall(e, implies(_positive(e), per_x))


def equi_continuous(fam: DefinableFamily) -> bool:
    return decide(equi_continuity_sentence(fam))


def uniformly_equi_continuous(fam: DefinableFamily) -> bool:
    return decide(equi_continuity_sentence(fam, uniform=True))


def members_continuous_sentence(fam: DefinableFamily) -> Formula:
    """Every ``f_p = f(., p)`` is continuous on ``C``."""
    nm = fam.names()
    e, d = nm("eps"), nm("delta")
    x2 = [nm(v + "_2") for v in fam.xs]
    close = implies(dist_lt(fam.xs, x2, d), fam.values_close(fam.xs, fam.ps, x2, fam.ps, e))
    at_x = exists(d, conj(_positive(d), _forall_in(x2, fam.in_domain(x2), close)))
    body = _forall_in(list(fam.ps) + list(fam.xs), conj(fam.in_params(fam.ps), fam.in_domain(fam.xs)), at_x)
    return forall(e, implies(_positive(e), body))


def members_continuous(fam: DefinableFamily) -> bool:
    return decide(members_continuous_sentence(fam))


def pointwise_bounded_sentence(fam: DefinableFamily) -> Formula:
    nm = fam.names()
    n = nm("N")
    bounded = _forall_in(fam.ps, fam.in_params(fam.ps),
                         fam.value_near(fam.xs, fam.ps, AffineTerm.constant(0), n))
    return _forall_in(fam.xs, fam.in_domain(fam.xs), exists(n, conj(_positive(n), bounded)))


def pointwise_bounded(fam: DefinableFamily) -> bool:
    return decide(pointwise_bounded_sentence(fam))


def _one_param(fam: DefinableFamily) -> str:
    if len(fam.ps) != 1:
        raise PreconditionError("convergence needs a single parameter t in ]0, s[")
    return fam.ps[0]


def convergence_sentence(fam: DefinableFamily, uniform: bool = False) -> Formula:
    t = _one_param(fam)
    nm = fam.names()
    e, s2, t2 = nm("eps"), nm("s_"), nm(t + "_2")
    near = conj(lt(0, t), lt(t, s2), lt(0, t2), lt(t2, s2), fam.in_params([t]), fam.in_params([t2]))
    close = _forall_in([t, t2], near, fam.values_close(fam.xs, [t], fam.xs, [t2], e))
    if uniform:
        body = exists(s2, conj(_positive(s2), _forall_in(fam.xs, fam.in_domain(fam.xs), close)))
        return forall(e, implies(_positive(e), body))
    body = _forall_in(fam.xs, fam.in_domain(fam.xs), exists(s2, conj(_positive(s2), close)))
    return forall(e, implies(_positive(e), body))


def pointwise_convergent(fam: DefinableFamily) -> bool:
    return decide(convergence_sentence(fam))


def uniformly_convergent(fam: DefinableFamily) -> bool:
    return decide(convergence_sentence(fam, uniform=True))


def trajectory_bounded_sentence(fam: DefinableFamily) -> Formula:
    """For each ``x`` some ``s' > 0`` makes ``{f_t(x) : 0 < t < s'}`` bounded."""
    t = _one_param(fam)
    nm = fam.names()
    s2, n = nm("s_"), nm("N")
    bounded = _forall_in([t], conj(lt(0, t), lt(t, s2), fam.in_params([t])),
                         fam.value_near(fam.xs, [t], AffineTerm.constant(0), n))
    return _forall_in(fam.xs, fam.in_domain(fam.xs),
                      exists([s2, n], conj(_positive(s2), _positive(n), bounded)))


def trajectory_bounded(fam: DefinableFamily) -> bool:
    return decide(trajectory_bounded_sentence(fam))


def limit_graph_formula(fam: DefinableFamily) -> Formula:
    t = _one_param(fam)
    nm = fam.names()
    y, e, d = fam.out_name, nm("eps"), nm("delta")
    near = _forall_in([t], conj(lt(0, t), lt(t, d), fam.in_params([t])),
                      fam.value_near(fam.xs, [t], AffineTerm.var(y), e))
    conv = forall(e, implies(_positive(e), exists(d, conj(_positive(d), near))))
    return conj(fam.in_domain(fam.xs), conv)


def limit_function(fam: DefinableFamily, check: bool = True) -> PiecewiseLinearFunction:
    """``x -> lim_{t -> +0} f_t(x)`` as pieces over ``C``."""
    if check and not pointwise_convergent(fam):
        raise PreconditionError("family is not pointwise convergent")
    graph = SemilinearSet(fam.xs + (fam.out_name,), eliminate(limit_graph_formula(fam)))
    return graph_to_plf(graph)


# ---------------------------------------------------------------------------
# moduli of continuity
# ---------------------------------------------------------------------------


def _good_delta(fam: DefinableFamily, nm: _Names, d: str, eps: Fraction) -> Formula:
    x2 = [nm(v + "_2") for v in fam.xs]
    e = AffineTerm.constant(eps)
    close = implies(dist_lt(fam.xs, x2, d), fam.values_close(fam.xs, fam.ps, x2, fam.ps, e))
    return _forall_in(fam.ps, fam.in_params(fam.ps), _forall_in(x2, fam.in_domain(x2), close))


def sup_formula(good: Formula, d: str, y: str, cap: Fraction) -> Formula:
    """``y = sup{0 < d < cap : good}`` with sup of the empty set read as 0.

    ``good`` must describe a down-set in ``d``: then the sup is ``y``
    exactly when every ``d`` below ``y`` is good and none above it is.
    """
    below = forall(d, implies(conj(lt(0, d), lt(d, y)), good))
    above = forall(d, implies(conj(lt(y, d), lt(d, cap)), neg(good)))
    none = forall(d, implies(conj(lt(0, d), lt(d, cap)), neg(good)))
    return disj(conj(lt(0, y), le(y, cap), below, above), conj(eq(y, 0), none))


def modulus_formula(fam: DefinableFamily, eps, cap=1) -> Formula:
    """Graph of ``x -> sup{0 < delta < cap : delta works at x}``."""
    eps, cap = as_rational(eps), as_rational(cap)
    if eps <= 0 or cap <= 0:
        raise PreconditionError("eps and cap must be positive")
    nm = fam.names()
    y, d = fam.out_name, nm("delta")
    # eliminated once: the sup formula uses it three times
    good = eliminate(_good_delta(fam, nm, d, eps))
    return conj(fam.in_domain(fam.xs), sup_formula(good, d, y, cap))


def modulus(fam: DefinableFamily, eps, cap=1) -> PiecewiseLinearFunction:
    graph = SemilinearSet(fam.xs + (fam.out_name,), eliminate(modulus_formula(fam, eps, cap)))
    return graph_to_plf(graph)


def inf_modulus(fam: DefinableFamily, eps, cap=1) -> tuple[Endpoint, bool]:
    """Infimum over ``C`` of the modulus, and whether it is attained."""
    y = fam.out_name
    values = union_intervals(formula_union(exists(list(fam.xs), modulus_formula(fam, eps, cap))), y)
    if values.is_empty():
        raise PreconditionError("empty domain")
    return values.inf()


# ---------------------------------------------------------------------------
# theorem-level checks
# ---------------------------------------------------------------------------


def is_closed_bounded(c: SemilinearSet) -> bool:
    if not closure(c).subset_of(c):
        return False
    nm = _Names(set(c.variables) | set(all_vars(c.formula)))
    r = nm("R")
    zeros = [AffineTerm.constant(0)] * c.ambient_dim
    return decide(exists(r, forall(list(c.variables), implies(c.formula, dist_lt(c.variables, zeros, r)))))


def ascoli_check(fam: DefinableFamily) -> dict:
    """Hypotheses and conclusion of the definable Arzela-Ascoli statement."""
    report = {"closed_bounded": is_closed_bounded(SemilinearSet(fam.xs, fam.domain))}
    report["equi_continuous"] = equi_continuous(fam)
    report["pointwise_convergent"] = pointwise_convergent(fam)
    report["uniformly_convergent"] = uniformly_convergent(fam)
    hyp = report["closed_bounded"] and report["equi_continuous"] and report["pointwise_convergent"]
    report["hypotheses"] = hyp
    report["conclusion_holds"] = report["uniformly_convergent"] if hyp else None
    return report


def curve_family(fam: DefinableFamily, p: Sequence) -> tuple[Fraction, PiecewiseLinearFunction, DefinableFamily]:
    """``g_t(x) = f(x, gamma(t))`` along a curve in ``P`` tending to ``p``.

    A point of ``P`` itself gets the constant curve on ``]0, 1[``.
    """
    p = tuple(as_rational(v) for v in p)
    pset = SemilinearSet(fam.ps, fam.params)
    if not equi_continuous(fam) or not pointwise_bounded(fam):
        raise PreconditionError("family must be equi-continuous and pointwise bounded")
    nm = fam.names()
    t = nm("t")
    if pset.member(p):
        eps = Fraction(1)
        gamma = PiecewiseLinearFunction((t,), (Piece(conj(lt(0, t), lt(t, 1)),
                                                     tuple(AffineTerm.constant(v) for v in p)),))
    else:
        if not decide(substitute_all(closure_formula(pset), dict(zip(fam.ps, p)))):
            raise PreconditionError("point is not in the closure of P")
        eps, raw = curve_selection(pset, p)
        gamma = PiecewiseLinearFunction(
            (t,), tuple(Piece(substitute_all(g.region, {raw.variables[0]: AffineTerm.var(t)}),
                              tuple(v.substitute(raw.variables[0], AffineTerm.var(t)) for v in g.values))
                        for g in raw.pieces))
    pieces = []
    for g in gamma.pieces:
        sub = dict(zip(fam.ps, g.values))
        for pc in fam.pieces:
            region = conj(g.region, substitute_all(pc.region, sub))
            if not formula_union(region):
                continue
            v = pc.value
            for name, val in sub.items():
                v = v.substitute(name, val)
            pieces.append(Piece(eliminate(region), (v,)))
    window = conj(lt(0, t), lt(t, eps))
    g_fam = DefinableFamily(fam.xs, (t,), fam.domain, window, tuple(pieces), check=False)
    return eps, gamma, g_fam


@dataclass(frozen=True)
class ProjectionReport:
    discontinuities: SemilinearSet
    dim_projection: int
    dim_params: int

    @property
    def passed(self) -> bool:
        return self.dim_projection < self.dim_params


def discontinuity_projection_check(fam: DefinableFamily, check: bool = True) -> ProjectionReport:
    if check:
        if not is_closed_bounded(SemilinearSet(fam.xs, fam.domain)):
            raise PreconditionError("C must be closed and bounded")
        if not equi_continuous(fam):
            raise PreconditionError("family is not equi-continuous")
    d = discontinuity_set(fam.graph, check=False)
    return ProjectionReport(d, dimension(projection(d, fam.ps)), dimension(SemilinearSet(fam.ps, fam.params)))


# ---------------------------------------------------------------------------
# monotonicity partition of unary functions
# ---------------------------------------------------------------------------

DISCRETE, CONSTANT, INCREASING, DECREASING = "discrete", "constant", "increasing", "decreasing"
_PARTS = (DISCRETE, CONSTANT, INCREASING, DECREASING)


@dataclass(frozen=True)
class MonotonicityPartition:
    discrete: IntervalUnion1D | PeriodicSet1D
    constant: IntervalUnion1D | PeriodicSet1D
    increasing: IntervalUnion1D | PeriodicSet1D
    decreasing: IntervalUnion1D | PeriodicSet1D

    def parts(self) -> dict:
        return {k: getattr(self, k) for k in _PARTS}

    def classify(self, x) -> str:
        x = as_rational(x)
        hits = [k for k, v in self.parts().items()
                if (v.member(x) if isinstance(v, PeriodicSet1D) else v.contains(x))]
        if len(hits) != 1:
            raise PreconditionError(f"point {x} lies in {len(hits)} parts")
        return hits[0]


def _slope_class(a: Fraction) -> str:
    return INCREASING if a > 0 else DECREASING if a < 0 else CONSTANT


def _segments(f: PiecewiseLinearFunction, lo: Endpoint, hi: Endpoint) -> tuple[list[Fraction], list]:
    """Breakpoints strictly inside ``]lo, hi[`` and the owning piece per gap."""
    (v,) = f.variables
    cuts = set()
    for iu in f.intervals():
        for comp in iu:
            for e in (comp.lo, comp.hi):
                if e not in (INF, -INF) and lo < e < hi:
                    cuts.add(Fraction(e))
    cuts = sorted(cuts)
    bounds = [lo] + cuts + [hi]
    gaps = []
    for a, b in zip(bounds, bounds[1:]):
        m = Interval(a, b).sample()
        idx = f.owner({v: m})
        if idx is None:
            raise PreconditionError(f"function undefined at {m}")
        gaps.append((Interval(a, b), f.pieces[idx].value))
    return cuts, gaps


def _value_at(t: AffineTerm, var: str, x: Fraction) -> Fraction:
    return t.evaluate({var: x})


def mono_partition(f: PiecewiseLinearFunction, interval: Interval | None = None) -> MonotonicityPartition:
    """Split the domain interval into the discrete, constant, increasing and
    decreasing parts from the slopes of the pieces and the behaviour at the
    breakpoints. Periodic functions give periodic parts."""
    if f.arity != 1 or f.out_dim != 1:
        raise PreconditionError("mono_partition needs a unary real-valued function")
    (v,) = f.variables
    if f.period is not None:
        return _mono_periodic(f)
    iv = interval if interval is not None else Interval(-INF, INF)
    cuts, gaps = _segments(f, iv.lo, iv.hi)
    out: dict[str, list[Interval]] = {k: [] for k in _PARTS}
    for g, val in gaps:
        out[_slope_class(val.coeff(v))].append(g)
    for i, b in enumerate(cuts):
        (_, left), (_, right) = gaps[i], gaps[i + 1]
        out[_point_class(f, v, b, left, right)].append(Interval.point(b))
    for end, closed in ((iv.lo, iv.lo_closed), (iv.hi, iv.hi_closed)):
        if closed:
            f({v: end})  # must be defined there
            out[DISCRETE].append(Interval.point(end))
    return MonotonicityPartition(*(IntervalUnion1D(out[k]) for k in _PARTS))


def _point_class(f: PiecewiseLinearFunction, v: str, b: Fraction, left: AffineTerm, right: AffineTerm) -> str:
    fb = f({v: b})
    lc, rc = _slope_class(left.coeff(v)), _slope_class(right.coeff(v))
    continuous = _value_at(left, v, b) == fb == _value_at(right, v, b)
    return lc if continuous and lc == rc else DISCRETE


def _mono_periodic(f: PiecewiseLinearFunction) -> MonotonicityPartition:
    (v,) = f.variables
    p = f.period
    cuts, gaps = _segments(f, Fraction(0), p)
    out: dict[str, list[Interval]] = {k: [] for k in _PARTS}
    for g, val in gaps:
        out[_slope_class(val.coeff(v))].append(g)
    for i, b in enumerate(cuts):
        out[_point_class(f, v, b, gaps[i][1], gaps[i + 1][1])].append(Interval.point(b))
    # 0 sits between the last gap (read at p) and the first gap
    last, first = gaps[-1][1], gaps[0][1]
    f0 = f({v: Fraction(0)})
    lc, rc = _slope_class(last.coeff(v)), _slope_class(first.coeff(v))
    cont = _value_at(last, v, p) == f0 == _value_at(first, v, Fraction(0))
    out[lc if cont and lc == rc else DISCRETE].append(Interval.point(0))
    empty = IntervalUnion1D()
    return MonotonicityPartition(*(PeriodicSet1D(empty, IntervalUnion1D(out[k]), p) for k in _PARTS))


def check_partition(mp: MonotonicityPartition, interval: Interval | None = None) -> bool:
    """Parts are disjoint, cover the interval, ``X_d`` is discrete and closed
    and the other parts are open (for interval-union parts)."""
    parts = list(mp.parts().values())
    if all(isinstance(x, IntervalUnion1D) for x in parts):
        whole = IntervalUnion1D([interval if interval is not None else Interval(-INF, INF)])
        acc = IntervalUnion1D()
        for x in parts:
            if not acc.intersection(x).is_empty():
                return False
            acc = acc.union(x)
        if acc != whole:
            return False
        return mp.discrete.is_discrete_closed() and all(x.is_open() for x in parts[1:])
    p = parts[0].period
    base_acc = IntervalUnion1D()
    for x in parts:
        if not base_acc.intersection(x.base).is_empty():
            return False
        base_acc = base_acc.union(x.base)
    window = IntervalUnion1D([Interval(Fraction(0), p, True, False)])
    if base_acc != window:
        return False
    if not mp.discrete.is_discrete_closed():
        return False
    # open parts: the carrier of each base, folded over one period, is open
    for x in parts[1:]:
        if not x.window(-p, 2 * p).is_open():
            return False
    return True
