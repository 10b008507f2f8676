from __future__ import annotations

from fractions import Fraction

import pytest

from tamelin.errors import FormulaSyntaxError
from tamelin.intervals import INF, Interval, IntervalUnion1D
from tamelin.literals import parse_blocks, parse_periodic, parse_plf, parse_set_1d, parse_union
from tamelin.sets import PeriodicSet1D, plf_eval


def test_union_literals():
    assert parse_union("{0} U ]1, 2[") == IntervalUnion1D([Interval.point(0), Interval.open(1, 2)])
    assert parse_union("(1, +inf)") == IntervalUnion1D([Interval(1, INF)])
    assert parse_union("[0, 1) U [1, 2]") == IntervalUnion1D([Interval.closed(0, 2)])
    assert parse_union("{}").is_empty()


def test_periodic_literal():
    z = parse_periodic("periodic(base={0}; p=1)")
    assert z == PeriodicSet1D.integers()
    s = parse_periodic("{-5} U periodic(base=]0, 1/2[; p=1; m=0)")
    assert s.member(-5) and s.member(Fraction(9, 4)) and not s.member(Fraction(-3, 4))


def test_set_literal_from_formula():
    assert parse_set_1d("x = 0 or (1 < x and x < 2)") == parse_union("{0} U ]1, 2[")


def test_plf_literal():
    f = parse_plf("plf{ [0,1): x; [1,2]: 2 - x; var=x }")
    assert plf_eval(f, Fraction(1, 2)) == Fraction(1, 2) and plf_eval(f, 2) == 0
    g = parse_plf("plf{[0,1): x; period=1}")
    assert plf_eval(g, Fraction(7, 3)) == Fraction(1, 3)


@pytest.mark.parametrize("text", ["]1, 2", "[a, b]", "periodic(p=1)", "plf{[0,1): x; nonsense}"])
def test_bad_literals(text):
    with pytest.raises(FormulaSyntaxError):
        parse_set_1d(text) if not text.startswith("plf") else parse_plf(text)


def test_block_parsing():
    (b,) = parse_blocks("# comment\nfamily f1\n  C: 0 <= x\n  piece: true => x\n  piece: x < 0 => 1\nend\n")
    assert (b.kind, b.name) == ("family", "f1")
    assert b.get("C") == "0 <= x" and b.all("piece") == ["true => x", "x < 0 => 1"]
    with pytest.raises(FormulaSyntaxError):
        parse_blocks("family f\n piece: true => x\n")
