from __future__ import annotations

import dataclasses
from fractions import Fraction

from hypothesis import given, settings

from conftest import rng_of, seeds
from tamelin import corpus as cp
from tamelin.cells import (BAND, CONSTANT, DECREASING, INCREASING, NON_OPEN_ROOF, NOT_ROOF, OPEN_ROOF, Box,
                           cells_inside, classify_roofs, decompose, monotone_fiber_partition,
                           verify_decomposition)
from tamelin.intervals import Interval
from tamelin.sets import SemilinearSet

PLANE = ("x", "y")


def test_band_graph_band_over_open_square():
    box = Box.of(PLANE, [Interval.open(-1, 2), Interval.open(-1, 2)])
    fam = [SemilinearSet.parse(PLANE, "y > x")]
    d = decompose(box, fam)
    assert [c.signature for c in d] == [(1, 1), (1, 0), (1, 1)]
    assert verify_decomposition(d, fam)
    assert [bool(cells_inside(d, fam[0])) and c in cells_inside(d, fam[0]) for c in d] == [False, False, True]


def test_empty_family_keeps_the_box():
    box = Box.of(PLANE, [Interval.open(-1, 2), Interval.open(-1, 2)])
    assert [c.signature for c in decompose(box, [])] == [(1, 1)]


def test_point_splits_the_line():
    d = decompose(Box.whole(("x",)), [SemilinearSet.parse("x", "x = 0")])
    assert [c.signature for c in d] == [(1,), (0,), (1,)]
    assert [c.sample for c in d][1] == (0,)


def test_verify_rejects_overlap_and_gaps():
    d = decompose(Box.whole(("x",)), [SemilinearSet.parse("x", "x = 0")])
    left, point, right = d.cells
    overlapping = dataclasses.replace(left, upper=right.lower + 1)
    assert not verify_decomposition(dataclasses.replace(d, cells=(overlapping, point, right)))
    assert not verify_decomposition(dataclasses.replace(d, cells=(left, right)))


def _fibre_tag(f, x, y0, lo, hi):
    ys = [y0 + (hi - lo) * Fraction(k, 40) for k in range(-3, 4)]
    ys = [y for y in ys if lo < y < hi]
    vals = [f(x, y) for y in ys]
    pairs = list(zip(vals, vals[1:]))
    if all(a < b for a, b in pairs):
        return INCREASING
    if all(a > b for a, b in pairs):
        return DECREASING
    assert all(a == b for a, b in pairs)
    return CONSTANT


def _check_tags(graph, f):
    d = monotone_fiber_partition(graph, 0, 1)
    for c, tag in zip(d.cells, d.tags):
        if c.kind != BAND:
            continue
        x = c.base.sample[0]
        lo = c.lower.evaluate({"x": x}) if c.lower is not None else c.sample[1] - 4
        hi = c.upper.evaluate({"x": x}) if c.upper is not None else c.sample[1] + 4
        assert _fibre_tag(f, x, c.sample[1], lo, hi) == tag
    return d


def test_distance_to_diagonal_fibres():
    g = SemilinearSet.parse("x y z", "(z = y - x and y >= x) or (z = x - y and y < x)")
    d = _check_tags(g, lambda x, y: abs(y - x))
    inner = {(str(c.lower), str(c.upper)): t for c, t in zip(d.cells, d.tags)
             if c.kind == BAND and c.base.signature == (1,)}
    assert inner[("0", "x")] == DECREASING and inner[("x", "None")] == INCREASING
    assert all(c.lower is not None or c.upper is not None for c in d.cells)


def test_identity_and_zero_fibres():
    d = _check_tags(SemilinearSet.parse("x y z", "z = y"), lambda x, y: y)
    assert {t for c, t in zip(d.cells, d.tags) if c.kind == BAND} == {INCREASING}
    d = _check_tags(SemilinearSet.parse("x y z", "z = 0"), lambda x, y: 0)
    assert set(d.tags) == {CONSTANT}


def test_roof_classification():
    box = Box.of(PLANE, [Interval.closed(0, 1), None])
    fam = [SemilinearSet.parse(PLANE, "y > 0 and 0 < x and x < 1"), SemilinearSet.parse(PLANE, "y > 0 and x = 0"),
           SemilinearSet.parse(PLANE, "0 < y and y < 1")]
    d = decompose(box, fam)
    tags = dict(zip((str(c) for c in d), classify_roofs(d)))
    assert tags["(1,1)-cell [1 < y < +inf] over (1)-cell [0 < x < 1]"] == OPEN_ROOF
    assert tags["(0,1)-cell [1 < y < +inf] over (0)-cell [x = 0]"] == NON_OPEN_ROOF
    assert tags["(1,1)-cell [0 < y < 1] over (1)-cell [0 < x < 1]"] == NOT_ROOF


@settings(max_examples=15)
@given(seeds)
def test_decompositions_verify_and_are_sign_invariant(seed):
    rng = rng_of(seed)
    n = rng.choice([1, 2, 2, 3])
    names = ("x", "y", "z")[:n]
    fam = [SemilinearSet(names, cp.random_qf_set(rng, names)) for _ in range(rng.choice([1, 2]))]
    d = decompose(Box.whole(names), fam)
    assert verify_decomposition(d, fam)
    for _ in range(25):
        p = cp.random_point(rng, names, span=3)
        hits = [c for c in d if c.contains(p)]
        assert len(hits) == 1
        ref = hits[0].sample_map()
        for s in fam:
            assert s.member(tuple(p[v] for v in names)) == s.member(tuple(ref[v] for v in names))
