"""Finite unions of intervals of M, kept as sorted maximal components."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Union

from .lang import FALSE, AffineTerm, Atom, Formula, as_rational, conj, disj, format_rational, le

INF = math.inf
Endpoint = Union[Fraction, float]  # float only for +/-inf


def fmt_endpoint(v: Endpoint) -> str:
    if v == INF:
        return "+inf"
    if v == -INF:
        return "-inf"
    return format_rational(v)


def parse_endpoint(s: str) -> Endpoint:
    s = s.strip()
    if s in ("+inf", "inf", "+oo", "oo"):
        return INF
    if s in ("-inf", "-oo"):
        return -INF
    return as_rational(s)


@dataclass(frozen=True)
class Interval:
    """A nonempty connected subset of M with endpoint flags."""

    lo: Endpoint
    hi: Endpoint
    lo_closed: bool = False
    hi_closed: bool = False

    def __post_init__(self) -> None:
        lo, hi = self.lo, self.hi
        if lo in (INF, -INF) and self.lo_closed or hi in (INF, -INF) and self.hi_closed:
            raise ValueError("infinite endpoints are always open")
        if lo > hi or (lo == hi and not (self.lo_closed and self.hi_closed)):
            raise ValueError(f"empty interval ({fmt_endpoint(lo)}, {fmt_endpoint(hi)})")

    @classmethod
    def point(cls, a) -> Interval:
        a = as_rational(a)
        return cls(a, a, True, True)

    @classmethod
    def open(cls, a, b) -> Interval:
        return cls(_coerce(a), _coerce(b), False, False)

    @classmethod
    def closed(cls, a, b) -> Interval:
        return cls(_coerce(a), _coerce(b), True, True)

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    @property
    def bounded(self) -> bool:
        return self.lo != -INF and self.hi != INF

    def contains(self, x) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True

    def sample(self) -> Fraction:
        """A deterministic interior point (midpoint when bounded)."""
        if self.is_point:
            return Fraction(self.lo)
        if self.bounded:
            return (Fraction(self.lo) + Fraction(self.hi)) / 2
        if self.lo == -INF and self.hi == INF:
            return Fraction(0)
        if self.lo == -INF:
            return Fraction(self.hi) - 1
        return Fraction(self.lo) + 1

    def to_formula(self, var: str) -> Formula:
        x = AffineTerm.var(var)
        if self.is_point:
            return Atom(x - self.lo, "=")
        parts = []
        if self.lo != -INF:
            parts.append(le(self.lo, x) if self.lo_closed else Atom(self.lo - x, "<"))
        if self.hi != INF:
            parts.append(le(x, self.hi) if self.hi_closed else Atom(x - self.hi, "<"))
        return conj(parts)

    def __str__(self) -> str:
        if self.is_point:
            return "{" + fmt_endpoint(self.lo) + "}"
        left = "[" if self.lo_closed else "]"
        right = "]" if self.hi_closed else "["
        return f"{left}{fmt_endpoint(self.lo)}, {fmt_endpoint(self.hi)}{right}"

    def to_json(self) -> dict:
        return {"lo": fmt_endpoint(self.lo), "hi": fmt_endpoint(self.hi),
                "lo_closed": self.lo_closed, "hi_closed": self.hi_closed}


def _coerce(v) -> Endpoint:
    if isinstance(v, float):
        if v in (INF, -INF):
            return v
        raise TypeError("finite endpoints must be exact rationals")
    if isinstance(v, str):
        return parse_endpoint(v)
    return as_rational(v)


def _touching(a: Interval, b: Interval) -> bool:
    """``a`` starts no later than ``b``; is ``a | b`` connected?"""
    if b.lo < a.hi:
        return True
    return b.lo == a.hi and (a.hi_closed or b.lo_closed)


class IntervalUnion1D:
    """Sorted, pairwise disjoint, maximal components (the connected
    components of the set). :meth:`cells` gives the point / open-interval
    normal form."""

    __slots__ = ("components",)

    def __init__(self, components: Iterable[Interval] = ()) -> None:
        items = sorted(components, key=lambda i: (i.lo, not i.lo_closed))
        merged: list[Interval] = []
        for iv in items:
            if merged and _touching(merged[-1], iv):
                cur = merged[-1]
                if iv.hi > cur.hi:
                    hi, hi_closed = iv.hi, iv.hi_closed
                elif iv.hi < cur.hi:
                    hi, hi_closed = cur.hi, cur.hi_closed
                else:
                    hi, hi_closed = cur.hi, cur.hi_closed or iv.hi_closed
                lo_closed = cur.lo_closed or (iv.lo == cur.lo and iv.lo_closed)
                merged[-1] = Interval(cur.lo, hi, lo_closed, hi_closed)
            else:
                merged.append(iv)
        self.components: tuple[Interval, ...] = tuple(merged)

    # constructors
    @classmethod
    def empty(cls) -> IntervalUnion1D:
        return cls()

    @classmethod
    def full(cls) -> IntervalUnion1D:
        return cls([Interval(-INF, INF)])

    @classmethod
    def points(cls, values: Iterable) -> IntervalUnion1D:
        return cls(Interval.point(v) for v in values)

    # container protocol
    def __iter__(self) -> Iterator[Interval]:
        return iter(self.components)

    def __len__(self) -> int:
        return len(self.components)

    def __bool__(self) -> bool:
        return bool(self.components)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, IntervalUnion1D) and self.components == other.components

    def __hash__(self) -> int:
        return hash(self.components)

    def __contains__(self, x) -> bool:
        return self.contains(x)

    def contains(self, x) -> bool:
        x = as_rational(x)
        return any(c.contains(x) for c in self.components)

    def is_empty(self) -> bool:
        return not self.components

    def is_full(self) -> bool:
        return self.components == (Interval(-INF, INF),)

    # algebra
    def union(self, other: IntervalUnion1D) -> IntervalUnion1D:
        return IntervalUnion1D(self.components + other.components)

    def complement(self) -> IntervalUnion1D:
        out: list[Interval] = []
        lo, lo_closed = -INF, False
        for c in self.components:
            if c.lo > lo or (c.lo == lo and lo_closed and not c.lo_closed):
                out.append(Interval(lo, c.lo, lo_closed, not c.lo_closed))
            lo, lo_closed = c.hi, not c.hi_closed
        if lo != INF:
            out.append(Interval(lo, INF, lo_closed, False))
        return IntervalUnion1D(out)

    def intersection(self, other: IntervalUnion1D) -> IntervalUnion1D:
        out: list[Interval] = []
        for a in self.components:
            for b in other.components:
                iv = _meet(a, b)
                if iv is not None:
                    out.append(iv)
        return IntervalUnion1D(out)

    def difference(self, other: IntervalUnion1D) -> IntervalUnion1D:
        return self.intersection(other.complement())

    def shift(self, d: Fraction) -> IntervalUnion1D:
        return IntervalUnion1D(
            Interval(c.lo + d, c.hi + d, c.lo_closed, c.hi_closed) for c in self.components)

    # topology
    def closure(self) -> IntervalUnion1D:
        return IntervalUnion1D(
            Interval(c.lo, c.hi, c.lo != -INF, c.hi != INF) for c in self.components)

    def interior(self) -> IntervalUnion1D:
        return IntervalUnion1D(
            Interval(c.lo, c.hi) for c in self.components if not c.is_point)

    def boundary_points(self) -> list[Fraction]:
        pts: list[Fraction] = []
        for c in self.components:
            for v in (c.lo, c.hi):
                if v not in (INF, -INF) and (not pts or pts[-1] != v):
                    pts.append(v)
        return pts

    def is_closed(self) -> bool:
        return all((c.lo == -INF or c.lo_closed) and (c.hi == INF or c.hi_closed)
                   for c in self.components)

    def is_open(self) -> bool:
        return all(not c.lo_closed and not c.hi_closed for c in self.components)

    def is_discrete_closed(self) -> bool:
        return all(c.is_point for c in self.components)

    def bounded_below(self) -> bool:
        return not self.components or self.components[0].lo != -INF

    def bounded_above(self) -> bool:
        return not self.components or self.components[-1].hi != INF

    def inf(self) -> tuple[Endpoint, bool]:
        c = self.components[0]
        return c.lo, c.lo_closed

    def sup(self) -> tuple[Endpoint, bool]:
        c = self.components[-1]
        return c.hi, c.hi_closed

    def cells(self) -> list[Interval]:
        """Points and open intervals whose disjoint union is the set."""
        out: list[Interval] = []
        for c in self.components:
            if c.is_point:
                out.append(c)
                continue
            if c.lo_closed:
                out.append(Interval.point(c.lo))
            out.append(Interval(c.lo, c.hi))
            if c.hi_closed:
                out.append(Interval.point(c.hi))
        return out

    def to_formula(self, var: str) -> Formula:
        if not self.components:
            return FALSE
        return disj([c.to_formula(var) for c in self.components])

    def to_json(self) -> list:
        return [c.to_json() for c in self.components]

    def __str__(self) -> str:
        if not self.components:
            return "{}"
        return " U ".join(str(c) for c in self.components)

    def __repr__(self) -> str:
        return f"IntervalUnion1D({self})"


def _meet(a: Interval, b: Interval) -> Interval | None:
    if a.lo > b.lo or (a.lo == b.lo and not a.lo_closed):
        lo, lo_closed = a.lo, a.lo_closed
    else:
        lo, lo_closed = b.lo, b.lo_closed
    if a.hi < b.hi or (a.hi == b.hi and not a.hi_closed):
        hi, hi_closed = a.hi, a.hi_closed
    else:
        hi, hi_closed = b.hi, b.hi_closed
    if lo > hi or (lo == hi and not (lo_closed and hi_closed)):
        return None
    return Interval(lo, hi, lo_closed, hi_closed)
