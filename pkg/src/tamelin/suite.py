"""The seeded acceptance suite: nine property checks over generated corpora.

Every check draws from its own ``random.Random`` seeded by the suite seed
and the check number, so checks are independent and a run is a pure
function of the seed. Reports contain no timings and are byte-identical
across runs.
"""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import analysis as an
from . import corpus as cp
from . import tietze as tz
from .cells import Box, cells_inside, decompose, verify_decomposition
from .choice import (choose_element, curve_limit, curve_selection, limit_sentence, reparametrize,
                     skolem_section)
from .dim import dimension, discontinuity_set, hull_dimension, plf_discontinuity_set, projection
from .intervals import INF, Interval, IntervalUnion1D
from .lang import TRUE, conj, disj, eq, evaluate, free_vars, le
from .oracle import witness_truth
from .qe import decide, eliminate
from .sets import PeriodicSet1D, PiecewiseLinearFunction, SemilinearSet, frontier, inf_sup_1d, interior, plf_graph

MAX_REPORTED = 5


@dataclass
class CheckResult:
    number: int
    name: str
    instances: int = 0
    failures: list[str] = field(default_factory=list)
    notes: dict[str, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, msg: str) -> None:
        self.failures.append(msg)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        notes = ", ".join(f"{k}={v}" for k, v in self.notes.items())
        text = f"[{status}] {self.number:2d} {self.name}: {self.instances} instances"
        text += f", {len(self.failures)} failures"
        return text + (f" ({notes})" if notes else "")

    def to_json(self) -> dict:
        return {"number": self.number, "name": self.name, "passed": self.passed,
                "instances": self.instances, "failures": self.failures[:MAX_REPORTED],
                "failure_count": len(self.failures), "notes": {k: str(v) for k, v in self.notes.items()}}


def _rng(seed: int, number: int) -> random.Random:
    return random.Random(f"{seed}:{number}")


# ---------------------------------------------------------------------------
# 1. elimination agrees with the witness oracle
# ---------------------------------------------------------------------------


def check_qe(seed: int, formulas: int = 500, points: int = 200) -> CheckResult:
    res = CheckResult(1, "qe-soundness")
    rng = _rng(seed, 1)
    for _ in range(formulas):
        f = cp.random_formula(rng)
        g = eliminate(f)
        names = sorted(free_vars(f))
        res.instances += 1
        for _ in range(points):
            pt = cp.random_point(rng, names)
            if evaluate(g, pt) != witness_truth(f, pt):
                res.fail(f"{f} at {pt}")
                break
    res.notes["points_per_formula"] = points
    return res


# ---------------------------------------------------------------------------
# 2. cell decompositions
# ---------------------------------------------------------------------------

NAMES = ("x", "y", "z")


def _grid_point(rng: random.Random, names, span: int = 3) -> dict:
    return {n: Fraction(rng.randint(-4 * span, 4 * span), 4) for n in names}


def check_decomposition(seed: int, families: int = 50, points: int = 1000) -> CheckResult:
    res = CheckResult(2, "cell-decomposition")
    rng = _rng(seed, 2)
    sampled = 0
    for _ in range(families):
        n = rng.randint(1, 3)
        names = NAMES[:n]
        fam = [SemilinearSet(names, cp.random_qf_set(rng, names, 2, 2 if n == 3 else 3))
               for _ in range(rng.randint(1, 2))]
        span = 3
        if rng.random() < 0.3:
            span = 2
            box = Box.of(names, [Interval(Fraction(-2), Fraction(2)) for _ in names])
        else:
            box = Box.whole(names)
        d = decompose(box, fam)
        res.instances += 1
        if not verify_decomposition(d, fam):
            res.fail(f"verification failed for {[str(s) for s in fam]}")
            continue
        for _ in range(points):
            pt = _grid_point(rng, names, span)
            if not box.contains(pt):
                # the open box misses its boundary; nudge inwards
                pt = {v: q - Fraction(1, 8) if q == span else q + Fraction(1, 8) if q == -span else q
                      for v, q in pt.items()}
            cell = d.locate(pt)
            sampled += 1
            if cell is None:
                res.fail(f"{pt} lies in no cell")
                break
            here = tuple(s.member(tuple(pt[v] for v in names)) for s in fam)
            there = tuple(s.member(cell.sample) for s in fam)
            if here != there:
                res.fail(f"{pt} and the sample of its cell disagree on membership")
                break
    res.notes["points_checked"] = sampled
    return res


# ---------------------------------------------------------------------------
# 3. dimension theory
# ---------------------------------------------------------------------------


def check_dimension(seed: int, instances: int = 300) -> CheckResult:
    res = CheckResult(3, "dimension-properties")
    rng = _rng(seed, 3)
    both_routes = 0
    for i in range(instances):
        n = rng.randint(1, 2)
        names = NAMES[:n]
        x = SemilinearSet(names, cp.random_qf_set(rng, names))
        y = SemilinearSet(names, cp.random_qf_set(rng, names))
        dx, dy = dimension(x), dimension(y)
        res.instances += 1
        if dx != hull_dimension(x):
            res.fail(f"#{i}: cell and hull dimensions differ for {x}")
        sub = x.intersection(y)
        if dimension(sub) > dx:
            res.fail(f"#{i}: subset has larger dimension")
        if (dx == n) != (not interior(x).is_empty()):
            res.fail(f"#{i}: full dimension and nonempty interior disagree for {x}")
        if dimension(x.union_with(y)) != max(dx, dy):
            res.fail(f"#{i}: union dimension is not the max")
        if dx >= 0 and dimension(frontier(x)) >= dx:
            res.fail(f"#{i}: frontier not smaller for {x}")
        f = cp.random_total_plf(rng, names)
        domain = x if dx >= 0 else SemilinearSet.full(names)
        disc = plf_discontinuity_set(f, domain.formula)
        if dimension(disc) >= dimension(domain):
            res.fail(f"#{i}: discontinuities of full dimension for {f}")
        if n == 1 or len(f.pieces) <= 3:
            both_routes += 1
            g = plf_graph(f, "v")
            graph = SemilinearSet(g.variables, conj(domain.formula, g.formula))
            if not discontinuity_set(graph, check=False).same_set(disc):
                res.fail(f"#{i}: the two discontinuity routes disagree for {f}")
    res.notes["discontinuity_routes_compared"] = both_routes
    return res


# ---------------------------------------------------------------------------
# 4. infima of discrete closed sets
# ---------------------------------------------------------------------------


def _random_discrete(rng: random.Random, kind: int):
    """A nonempty discrete closed 1-D set bounded below."""
    if kind == 0:
        return IntervalUnion1D.points(Fraction(rng.randint(-20, 20), rng.choice([1, 2, 3]))
                                      for _ in range(rng.randint(1, 5)))
    if kind == 1:
        p = rng.choice([Fraction(1), Fraction(2), Fraction(1, 2), Fraction(3, 2)])
        grid = [p * Fraction(k, 4) for k in range(4)]
        base = IntervalUnion1D.points(rng.sample(grid, rng.randint(1, 3)))
        finite = IntervalUnion1D.points(Fraction(rng.randint(-20, 20), 2) for _ in range(rng.randint(0, 2)))
        return PeriodicSet1D(finite, base, p, Fraction(rng.randint(-10, 10), 2))
    xs = [Fraction(rng.randint(-10, 10), 2) for _ in range(rng.randint(1, 4))]
    body = disj([eq("x", v) for v in xs])
    lo = Fraction(rng.randint(-6, 6), 2)
    if rng.random() < 0.5 and any(v >= lo for v in xs):
        return SemilinearSet(("x",), conj(body, le(lo, "x")))
    return SemilinearSet(("x",), body)


def check_discrete_inf(seed: int, instances: int = 100) -> CheckResult:
    res = CheckResult(4, "discrete-infimum")
    rng = _rng(seed, 4)
    kinds = [0, 0, 0, 0]
    for i in range(instances):
        kind = i % 3
        s = _random_discrete(rng, kind)
        if isinstance(s, SemilinearSet):
            u = s.interval_union()
            member = u.contains
            discrete = u.is_discrete_closed()
            value, attained = inf_sup_1d(s, "inf")
            below_empty = u.intersection(IntervalUnion1D([Interval(-INF, value)])).is_empty() \
                if value != -INF else False
        elif isinstance(s, PeriodicSet1D):
            member = s.member
            discrete = s.is_discrete_closed()
            value, attained = s.inf()
            lows = [s.threshold] + ([s.finite_part.inf()[0]] if not s.finite_part.is_empty() else [])
            lower = min(lows) - 1
            below_empty = value != -INF and (lower >= value or s.window(lower, value).is_empty())
        else:
            member = s.contains
            discrete = s.is_discrete_closed()
            value, attained = s.inf()
            below_empty = s.intersection(IntervalUnion1D([Interval(-INF, value)])).is_empty()
        kinds[kind] += 1
        res.instances += 1
        if not discrete:
            res.fail(f"#{i}: generated set {s} is not discrete and closed")
        elif not (attained and member(value) and below_empty):
            res.fail(f"#{i}: inf {value} of {s} not attained")
    res.notes["finite"], res.notes["periodic"], res.notes["formula"] = kinds[:3]
    return res


# ---------------------------------------------------------------------------
# 5. definable choice and curve selection
# ---------------------------------------------------------------------------


def _points_in(s: SemilinearSet, rng: random.Random, k: int) -> list[tuple]:
    d = decompose(Box.whole(s.variables), [s])
    pts = sorted({c.sample for c in cells_inside(d, s)})
    rng.shuffle(pts)
    return pts[:k]


def check_choice(seed: int, unions: int = 1000, sections: int = 200, curves: int = 50) -> CheckResult:
    res = CheckResult(5, "choice-and-curves")
    rng = _rng(seed, 5)
    for i in range(unions):
        j = cp.random_interval_union(rng)
        e = choose_element(j)
        res.instances += 1
        if not (j.contains(e) and evaluate(j.to_formula("x"), {"x": e})):
            res.fail(f"choice {e} not in {j}")
    checked = 0
    while checked < sections:
        n_all = rng.randint(2, 3)
        names = NAMES[:n_all]
        x = SemilinearSet(names, cp.random_qf_set(rng, names))
        if x.is_empty():
            continue
        keep = rng.randint(1, n_all - 1)
        kept = names[n_all - keep:]
        proj = projection(x, kept)
        phi = skolem_section(x, keep)
        for p in _points_in(proj, rng, 6):
            if checked >= sections:
                break
            checked += 1
            res.instances += 1
            q = phi(p)
            q = q if isinstance(q, tuple) else (q,)
            if tuple(q[n_all - keep:]) != tuple(p) or not x.member(q):
                res.fail(f"section of {x} at {p} gave {q}")
    done = 0
    while done < curves:
        n = rng.randint(1, 2)
        names = NAMES[:n]
        x = SemilinearSet(names, cp.random_qf_set(rng, names))
        fr = frontier(x)
        if fr.is_empty():
            continue
        pts = _points_in(fr, rng, 1)
        a = pts[0]
        done += 1
        res.instances += 1
        eps, gamma = curve_selection(x, a)
        bad = None
        for k in range(1, 10):
            t = eps * Fraction(k, 10)
            g = gamma((t,))
            g = g if isinstance(g, tuple) else (g,)
            if not x.member(g) or max(abs(gi - ai) for gi, ai in zip(g, a)) != t:
                bad = f"gamma({t}) = {g}"
                break
        if bad is None and curve_limit(gamma) != a:
            bad = f"limit {curve_limit(gamma)} != {a}"
        if bad is None and not decide(limit_sentence(gamma, a)):
            bad = "limit sentence fails"
        if bad is None and curve_limit(reparametrize(gamma, Fraction(1, 2))) != a:
            bad = "reparametrized limit differs"
        if bad:
            res.fail(f"curve into {x} at {a}: {bad}")
    res.notes["sections"], res.notes["curves"] = checked, done
    return res


# ---------------------------------------------------------------------------
# 6. monotonicity partition
# ---------------------------------------------------------------------------

SAMPLES = 1001


def _component_grid(comp: Interval, clip: Fraction = Fraction(10)) -> list[Fraction]:
    lo = comp.lo if comp.lo != -INF else min(-clip, comp.hi - 1)
    hi = comp.hi if comp.hi != INF else max(clip, lo + 1)
    return [lo + (hi - lo) * Fraction(k, SAMPLES + 1) for k in range(1, SAMPLES + 1)]


def _tag_ok(f, tag: str, comp: Interval) -> bool:
    vals = [f((x,)) for x in _component_grid(comp)]
    pairs = list(zip(vals, vals[1:]))
    if tag == an.INCREASING:
        return all(a < b for a, b in pairs)
    if tag == an.DECREASING:
        return all(a > b for a, b in pairs)
    return all(a == b for a, b in pairs)


def _is_globally_increasing(f, iv: Interval) -> bool:
    """Piece analysis: positive slopes on every gap and continuity at every
    breakpoint inside the interval."""
    (v,) = f.variables
    cuts, gaps = an._segments(f, iv.lo, iv.hi)
    if any(t.coeff(v) <= 0 for _, t in gaps):
        return False
    for k, b in enumerate(cuts):
        left, right = gaps[k][1], gaps[k + 1][1]
        if not left.evaluate({v: b}) == f((b,)) == right.evaluate({v: b}):
            return False
    return True


def check_monotonicity(seed: int, instances: int = 200) -> CheckResult:
    res = CheckResult(6, "monotonicity-partition")
    rng = _rng(seed, 6)
    whole_increasing = 0
    for i in range(instances):
        if i == 0:
            f, iv = PiecewiseLinearFunction.unary(
                "x", [(Interval(Fraction(0), Fraction(1), True, False), "x")], 1), None
        else:
            f, iv = cp.random_unary_plf(rng)
        res.instances += 1
        mp = an.mono_partition(f, iv)
        if not an.check_partition(mp, iv):
            res.fail(f"#{i}: malformed partition for {f}")
            continue
        if i == 0 and (mp.discrete != PeriodicSet1D.integers()
                       or mp.increasing.base != IntervalUnion1D([Interval(Fraction(0), Fraction(1))])):
            res.fail("sawtooth: discrete part is not the integers")
        for tag in (an.CONSTANT, an.INCREASING, an.DECREASING):
            part = getattr(mp, tag)
            comps = part.window(-f.period, 2 * f.period) if isinstance(part, PeriodicSet1D) else part
            for comp in comps:
                if not _tag_ok(f, tag, comp):
                    res.fail(f"#{i}: {tag} tag fails on {comp} for {f}")
        if iv is not None and not iv.lo_closed and not iv.hi_closed \
                and mp.increasing == IntervalUnion1D([iv]):
            whole_increasing += 1
            if not (_is_globally_increasing(f, iv) and _tag_ok(f, an.INCREASING, iv)):
                res.fail(f"#{i}: locally increasing on {iv} but not globally")
    res.notes["whole_interval_increasing"] = whole_increasing
    return res


# ---------------------------------------------------------------------------
# 7. families of functions
# ---------------------------------------------------------------------------


def check_families(seed: int, families: int = 100, functions: int = 100) -> CheckResult:
    """Families are drawn until each theorem has met its hypotheses ``families`` times."""
    res = CheckResult(7, "function-families")
    rng = _rng(seed, 7)
    counts = {"ascoli_hypotheses": 0, "limit_continuity_hypotheses": 0, "projection_hypotheses": 0}
    i = -1
    while min(counts.values()) < families:
        i += 1
        fam = cp.random_family(rng, cp.FAMILY_KINDS[i % len(cp.FAMILY_KINDS)])
        res.instances += 1
        cb = an.is_closed_bounded(SemilinearSet(fam.xs, fam.domain))
        ec = an.equi_continuous(fam)
        if cb and ec != an.uniformly_equi_continuous(fam):
            res.fail(f"#{i}: equi-continuity and its uniform version differ")
        pc, pb = an.pointwise_convergent(fam), an.pointwise_bounded(fam)
        if pc and not an.trajectory_bounded(fam):
            res.fail(f"#{i}: convergent but some trajectory unbounded")
        if pb and not pc:
            res.fail(f"#{i}: pointwise bounded but not convergent")
        uc = an.uniformly_convergent(fam)
        if uc and an.members_continuous(fam):
            counts["limit_continuity_hypotheses"] += 1
            lim = an.limit_function(fam, check=False)
            if not discontinuity_set(plf_graph(lim, "v"), check=False).is_empty():
                res.fail(f"#{i}: uniform limit of continuous maps is discontinuous")
        if cb and ec and pc:
            counts["ascoli_hypotheses"] += 1
            if not uc:
                res.fail(f"#{i}: hypotheses hold but convergence is not uniform")
        if cb and ec:
            counts["projection_hypotheses"] += 1
            if not an.discontinuity_projection_check(fam, check=False).passed:
                res.fail(f"#{i}: discontinuities project onto a full-dimensional set")
    res.notes["families"] = i + 1
    unit = conj(le(0, "x"), le("x", 1))
    for i in range(functions):
        f = cp.continuous_unary_plf(rng)
        single = an.DefinableFamily(("x",), (), unit, TRUE, f.pieces, check=False)
        res.instances += 1
        if not an.members_continuous(single):
            res.fail(f"fn #{i}: generated function is not continuous")
            continue
        for eps in (Fraction(1), Fraction(1, 2), Fraction(1, 10)):
            value, _ = an.inf_modulus(single, eps)
            if not value > 0:
                res.fail(f"fn #{i}: modulus infimum {value} at eps={eps}")
    res.notes.update(counts)
    return res


# ---------------------------------------------------------------------------
# 8. no continuous semilinear extension of the strip gadgets
# ---------------------------------------------------------------------------


def check_extension(seed: int, candidates: int = 200) -> CheckResult:
    res = CheckResult(8, "extension-obstruction")
    rng = _rng(seed, 8)
    kinds = {tz.DISCONTINUOUS: 0, tz.MISMATCH: 0, tz.UNEXPECTED: 0}
    for i in range(candidates):
        c = rng.choice([Fraction(1), Fraction(1, 2), Fraction(2)])
        cand = cp.random_candidate(rng, c)
        res.instances += 1
        for variant in tz.VARIANTS:
            v = tz.extension_obstruction(cand, variant)
            kinds[v.kind] += 1
            if v.kind == tz.UNEXPECTED:
                res.fail(f"#{i} ({variant}): no obstruction found")
            elif v.kind == tz.MISMATCH and not tz.verify_mismatch(cand, v, variant):
                res.fail(f"#{i} ({variant}): mismatch witness does not re-verify")
            elif v.kind == tz.DISCONTINUOUS and not tz.seam_discontinuities(cand).member(v.witness):
                res.fail(f"#{i} ({variant}): discontinuity witness not a seam point")
    res.notes.update(kinds)
    return res


# ---------------------------------------------------------------------------
# 9. numeric interval homeomorphisms
# ---------------------------------------------------------------------------

ROUND_TRIP, LIMIT = 1e-9, 1e-6


def _geometric_to(lo: float, hi: float, towards_hi: bool, k: int = 40) -> list[float]:
    if towards_hi:
        return [hi - (hi - lo) * 2.0 ** -j for j in range(1, k)]
    return [lo + (hi - lo) * 2.0 ** -j for j in range(1, k)]


def _homeo_checks(res: CheckResult, label: str, h: tz.OpaqueHomeo, lo_limit: float, hi_limit: float) -> None:
    lo, hi = h.domain
    pts = h.samples(1001)
    res.instances += 1
    if not h.is_strictly_monotone(pts):
        res.fail(f"{label}: not strictly monotone")
    if h.round_trip_error(pts) > ROUND_TRIP:
        res.fail(f"{label}: round trip error {h.round_trip_error(pts):.3e}")
    for limit, seq in ((lo_limit, _geometric_to(lo, hi, False)), (hi_limit, _geometric_to(lo, hi, True))):
        tail = h(seq[-1])
        ok = tail > 1 / LIMIT if limit == math.inf else tail < -1 / LIMIT if limit == -math.inf \
            else abs(tail - limit) < LIMIT
        if not ok:
            res.fail(f"{label}: endpoint limit {limit} not reached ({tail})")


def check_homeomorphisms(seed: int) -> CheckResult:
    res = CheckResult(9, "interval-homeomorphisms")
    h = tz.standard_ray(1.0)
    for v in (0.25, 0.5, 1.0, 2.0, 3.5):
        _homeo_checks(res, f"ray v={v}", tz.interval_to_ray(h, v), 0.0, math.inf)
    line = tz.interval_to_line(h)
    _homeo_checks(res, "line", line, -math.inf, math.inf)
    if line(0.5) != 0.0:
        res.fail("line: glue point value is not 0")
    psi = tz.transfer_map(tz.standard_decreasing(1.0))
    xs = [10.0 * k / 100 for k in range(1, 101)]
    ys = [k / 101 for k in range(1, 101)]
    for y in ys:
        res.instances += 1
        vals = [psi(x, y) for x in xs]
        if not all(0 < w < 1 and w < y for w in vals):
            res.fail(f"transfer map leaves ]0, y[ at y={y}")
        if not all(a > b for a, b in zip(vals, vals[1:])):
            res.fail(f"transfer map not decreasing in x at y={y}")
        if abs(psi(2.0 ** -40, y) - y) > LIMIT:
            res.fail(f"transfer map does not tend to y={y} as x -> 0")
    return res


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------

CHECKS: list[tuple[int, str, Callable[[int], CheckResult]]] = [
    (1, "structure", check_qe),
    (2, "structure", check_decomposition),
    (3, "structure", check_dimension),
    (4, "structure", check_discrete_inf),
    (5, "choice", check_choice),
    (6, "structure", check_monotonicity),
    (7, "families", check_families),
    (8, "extension", check_extension),
    (9, "extension", check_homeomorphisms),
]

SECTIONS = {"2": "structure", "3": "choice", "4": "families", "5": "extension"}


def section_of(name: str) -> str:
    return SECTIONS.get(name, name)


def run_suite(seed: int = 0, section: str | None = None, only: set[int] | None = None,
              on_done: Callable[[CheckResult, float], None] | None = None) -> list[CheckResult]:
    """Run the selected checks in order; ``on_done`` gets each result and its wall time."""
    wanted = section_of(section) if section else None
    if wanted is not None and wanted not in SECTIONS.values():
        raise ValueError(f"unknown section {section!r}")
    out = []
    for number, group, fn in CHECKS:
        if (wanted is None or group == wanted) and (only is None or number in only):
            start = time.perf_counter()
            out.append(fn(seed))
            if on_done is not None:
                on_done(out[-1], time.perf_counter() - start)
    return out


def format_text(results: list[CheckResult]) -> str:
    lines = []
    for r in results:
        lines.append(r.line())
        for msg in r.failures[:MAX_REPORTED]:
            lines.append(f"     - {msg}")
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} checks passed")
    return "\n".join(lines)
