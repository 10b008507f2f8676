"""Exact NNC polyhedra and finite unions of them.

A constraint is ``sum(a_i * v_i) + b  REL  0`` with ``REL`` one of ``<``,
``<=``, ``=`` and integer data scaled to be primitive. A polyhedron is a
frozenset of constraints (a conjunction); a union is a tuple of
polyhedra (a disjunction). Every operation is exact.

Feasibility and projection are Fourier-Motzkin with equality substitution.
Strictness is carried through each combination, so open/closed
distinctions survive elimination.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import ResourceLimitError

LT, LE, EQ = 0, 1, 2
REL_SYMBOL = {LT: "<", LE: "<=", EQ: "="}


class Con(NamedTuple):
    coeffs: tuple[tuple[str, int], ...]
    const: int
    kind: int

    def coeff(self, name: str) -> int:
        for n, a in self.coeffs:
            if n == name:
                return a
        return 0

    @property
    def variables(self) -> frozenset[str]:
        return frozenset(n for n, _ in self.coeffs)

    def value(self, point: Mapping[str, Fraction]) -> Fraction:
        total = Fraction(self.const)
        for n, a in self.coeffs:
            total += a * point[n]
        return total

    def holds(self, point: Mapping[str, Fraction]) -> bool:
        v = self.value(point)
        if self.kind == LT:
            return v < 0
        if self.kind == LE:
            return v <= 0
        return v == 0

    def ground_truth(self) -> bool:
        if self.kind == LT:
            return self.const < 0
        if self.kind == LE:
            return self.const <= 0
        return self.const == 0

    def __repr__(self) -> str:
        parts = [f"{a}*{n}" for n, a in self.coeffs]
        parts.append(str(self.const))
        return f"{' + '.join(parts)} {REL_SYMBOL[self.kind]} 0"


Poly = frozenset  # frozenset[Con]
Union = tuple  # tuple[Poly, ...]

TOP: frozenset = frozenset()
EMPTY_UNION: tuple = ()
FULL_UNION: tuple = (TOP,)


def make_con(coeffs: Mapping[str, int | Fraction] | Iterable[tuple[str, int | Fraction]],
             const: int | Fraction, kind: int) -> Con:
    """Build a normalized constraint from rational data."""
    items = list(coeffs.items() if isinstance(coeffs, Mapping) else coeffs)
    den = 1
    for _, a in items:
        if isinstance(a, Fraction):
            den = den * a.denominator // gcd(den, a.denominator)
    if isinstance(const, Fraction):
        den = den * const.denominator // gcd(den, const.denominator)
    ints = [(n, int(a * den)) for n, a in items if a]
    c = int(const * den)
    return _normalize(ints, c, kind)


def _normalize(items: list[tuple[str, int]], const: int, kind: int) -> Con:
    items = sorted((n, a) for n, a in items if a)
    g = abs(const)
    for _, a in items:
        g = gcd(g, a)
    if g > 1:
        items = [(n, a // g) for n, a in items]
        const //= g
    if not items:
        # ground constraint; canonicalize to one of three shapes
        if kind == EQ:
            return Con((), 0 if const == 0 else 1, EQ)
        return Con((), -1 if const < 0 else (0 if const == 0 else 1), kind)
    if kind == EQ and items[0][1] < 0:
        items = [(n, -a) for n, a in items]
        const = -const
    return Con(tuple(items), const, kind)


def _comb(m1: int, c1: Con, m2: int, c2: Con, kind: int) -> Con:
    d: dict[str, int] = {}
    for n, a in c1.coeffs:
        d[n] = m1 * a
    for n, a in c2.coeffs:
        d[n] = d.get(n, 0) + m2 * a
    return _normalize(list(d.items()), m1 * c1.const + m2 * c2.const, kind)


def negate(c: Con) -> tuple[Con, ...]:
    """Constraints whose disjunction is the complement of ``c``."""
    neg = tuple((n, -a) for n, a in c.coeffs)
    if c.kind == LT:
        return (_normalize(list(neg), -c.const, LE),)
    if c.kind == LE:
        return (_normalize(list(neg), -c.const, LT),)
    return (_normalize(list(c.coeffs), c.const, LT), _normalize(list(neg), -c.const, LT))


# ---------------------------------------------------------------------------
# parallel-constraint tightening
# ---------------------------------------------------------------------------


def _key(c: Con) -> tuple[tuple[tuple[str, int], ...], int, int]:
    """Canonical direction, its sign and scale: c == sign*g*(key.x) + const."""
    g = 0
    for _, a in c.coeffs:
        g = gcd(g, a)
    sign = 1 if c.coeffs[0][1] > 0 else -1
    key = tuple((n, a // (g * sign)) for n, a in c.coeffs)
    return key, sign, g


class _Range:
    """Interval for the value of ``key . x`` accumulated from one key group."""

    __slots__ = ("lo", "lo_strict", "hi", "hi_strict")

    def __init__(self) -> None:
        self.lo: Fraction | None = None
        self.lo_strict = False
        self.hi: Fraction | None = None
        self.hi_strict = False

    def add_lower(self, v: Fraction, strict: bool) -> None:
        if self.lo is None or v > self.lo or (v == self.lo and strict):
            self.lo, self.lo_strict = v, strict

    def add_upper(self, v: Fraction, strict: bool) -> None:
        if self.hi is None or v < self.hi or (v == self.hi and strict):
            self.hi, self.hi_strict = v, strict

    def empty(self) -> bool:
        if self.lo is None or self.hi is None:
            return False
        if self.lo < self.hi:
            return False
        return self.lo > self.hi or self.lo_strict or self.hi_strict


def _range_of(c: Con, rng: _Range) -> None:
    _, sign, g = _key(c)
    # c: sign*g*y + const REL 0
    bound = Fraction(-c.const * sign, g)
    if c.kind == EQ:
        rng.add_lower(bound, False)
        rng.add_upper(bound, False)
    elif sign > 0:
        rng.add_upper(bound, c.kind == LT)
    else:
        rng.add_lower(bound, c.kind == LT)


def _range_cons(key, rng: _Range) -> list[Con]:
    out = []
    if rng.lo is not None and rng.hi is not None and rng.lo == rng.hi:
        out.append(make_con(key, -rng.lo, EQ))
        return out
    if rng.hi is not None:
        out.append(make_con(key, -rng.hi, LT if rng.hi_strict else LE))
    if rng.lo is not None:
        out.append(make_con([(n, -a) for n, a in key], rng.lo, LT if rng.lo_strict else LE))
    return out


def tighten(cons: Iterable[Con]) -> list[Con] | None:
    """Drop trivially true constraints and keep the tightest per direction.

    Returns ``None`` when a contradiction is detected.
    """
    groups: dict = {}
    order: list = []
    for c in cons:
        if not c.coeffs:
            if not c.ground_truth():
                return None
            continue
        key = _key(c)[0]
        g = groups.get(key)
        if g is None:
            g = groups[key] = []
            order.append(key)
        g.append(c)
    out: list[Con] = []
    for key in order:
        g = groups[key]
        if len(g) == 1:
            out.append(g[0])
            continue
        rng = _Range()
        for c in g:
            _range_of(c, rng)
        if rng.empty():
            return None
        out.extend(_range_cons(key, rng))
    return out


# ---------------------------------------------------------------------------
# Fourier-Motzkin
# ---------------------------------------------------------------------------


def _eliminate_var(cons: Sequence[Con], x: str) -> list[Con]:
    keep: list[Con] = []
    eqs: list[Con] = []
    lowers: list[Con] = []
    uppers: list[Con] = []
    for c in cons:
        a = c.coeff(x)
        if not a:
            keep.append(c)
        elif c.kind == EQ:
            eqs.append(c)
        elif a > 0:
            uppers.append(c)
        else:
            lowers.append(c)
    if eqs:
        e = min(eqs, key=lambda c: (abs(c.coeff(x)), len(c.coeffs), c))
        a = e.coeff(x)
        if a < 0:
            e = Con(tuple((n, -b) for n, b in e.coeffs), -e.const, EQ)
            a = -a
        for c in eqs:
            if c is not e:
                keep.append(_comb(a, c, -c.coeff(x), e, EQ))
        for c in lowers + uppers:
            keep.append(_comb(a, c, -c.coeff(x), e, c.kind))
        return keep
    for lo in lowers:
        al = -lo.coeff(x)
        for up in uppers:
            au = up.coeff(x)
            kind = LT if (lo.kind == LT or up.kind == LT) else LE
            keep.append(_comb(au, lo, al, up, kind))
    return keep


def _pick_var(cons: Sequence[Con]) -> str | None:
    stats: dict[str, list[int]] = {}
    for c in cons:
        for n, a in c.coeffs:
            s = stats.get(n)
            if s is None:
                s = stats[n] = [0, 0, 0]
            if c.kind == EQ:
                s[2] += 1
            elif a > 0:
                s[1] += 1
            else:
                s[0] += 1
    if not stats:
        return None
    best = None
    best_cost = None
    for n in sorted(stats):
        lo, up, e = stats[n]
        cost = -1 if e else lo * up - lo - up
        if best_cost is None or cost < best_cost:
            best, best_cost = n, cost
    return best


@lru_cache(maxsize=400_000)
def is_feasible(poly: frozenset) -> bool:
    """Exact satisfiability of a conjunction over the ordered divisible group."""
    cons = tighten(poly)
    while cons is not None:
        x = _pick_var(cons)
        if x is None:
            return True
        # a variable bounded on one side only can absorb its constraints
        has_lo = has_up = False
        for c in cons:
            a = c.coeff(x)
            if a and c.kind == EQ:
                has_lo = has_up = True
                break
            if a > 0:
                has_up = True
            elif a < 0:
                has_lo = True
        if not (has_lo and has_up):
            cons = [c for c in cons if not c.coeff(x)]
            continue
        cons = tighten(_eliminate_var(cons, x))
    return False


def implies(poly: frozenset, c: Con) -> bool:
    """Whether every point of ``poly`` satisfies ``c``."""
    return all(not is_feasible(poly | {n}) for n in negate(c))


def project(poly: frozenset, x: str) -> frozenset | None:
    """Exact shadow of ``poly`` along ``x`` (``None`` when infeasible)."""
    cons = tighten(poly)
    if cons is None:
        return None
    cons = tighten(_eliminate_var(cons, x))
    if cons is None:
        return None
    return frozenset(cons)


# ---------------------------------------------------------------------------
# canonical form of a single polyhedron
# ---------------------------------------------------------------------------


def _solve_equalities(cons: list[Con]) -> list[Con] | None:
    """Gauss-Jordan: every equality gets a pivot (its last variable) that
    appears in no other constraint."""
    eqs = [c for c in cons if c.kind == EQ]
    rest = [c for c in cons if c.kind != EQ]
    done: list[Con] = []
    while eqs:
        eqs.sort(key=lambda c: (c.coeffs[-1][0], len(c.coeffs), c))
        e = eqs.pop()
        pivot, a = e.coeffs[-1]
        if a < 0:
            e = Con(tuple((n, -b) for n, b in e.coeffs), -e.const, EQ)
            a = -a

        def sub(c: Con) -> Con:
            b = c.coeff(pivot)
            return _comb(a, c, -b, e, c.kind) if b else c

        eqs = [sub(c) for c in eqs]
        rest = [sub(c) for c in rest]
        done = [sub(c) for c in done]
        new_eqs = []
        for c in eqs:
            if not c.coeffs:
                if not c.ground_truth():
                    return None
            else:
                new_eqs.append(c)
        eqs = new_eqs
        done.append(e)
    tightened = tighten(rest)
    if tightened is None:
        return None
    return sorted(done) + tightened


def canonical(poly: Iterable[Con]) -> frozenset | None:
    """Irredundant form of a polyhedron, or ``None`` if it is empty.

    Equalities are reduced (Gauss-Jordan on name order), implicit equalities
    are made explicit and redundant inequalities removed. The result is a
    fixed point: ``canonical(canonical(p)) == canonical(p)``.
    """
    cons = tighten(poly)
    if cons is None or not is_feasible(frozenset(cons)):
        return None
    while True:
        cons = _solve_equalities(cons)
        if cons is None:
            return None
        full = frozenset(cons)
        promoted = False
        for c in sorted(cons):
            if c.kind == LE and not is_feasible(full - {c} | {Con(c.coeffs, c.const, LT)}):
                cons = [d for d in cons if d != c] + [make_con(c.coeffs, c.const, EQ)]
                promoted = True
                break
        if not promoted:
            break
    kept = sorted(cons, reverse=True)
    for c in list(kept):
        if c.kind == EQ:
            continue
        others = frozenset(d for d in kept if d != c)
        if implies(others, c):
            kept.remove(c)
    return frozenset(kept)


# ---------------------------------------------------------------------------
# unions
# ---------------------------------------------------------------------------


class Budget:
    """Atom-count guard shared by one elimination."""

    def __init__(self, limit: int) -> None:
        self.limit = limit

    def check(self, u: Sequence[frozenset]) -> None:
        n = sum(len(p) for p in u)
        if n > self.limit:
            raise ResourceLimitError(f"atom budget {self.limit} exceeded ({n} atoms)")


def _merge_pair(p: frozenset, q: frozenset) -> frozenset | None:
    """Single polyhedron equal to ``p | q`` when they differ in one direction."""
    dp, dq = p - q, q - p
    if not dp:
        return p  # every constraint of p is in q, so q is inside p
    if not dq:
        return q
    if len(dp) != 1 or len(dq) != 1:
        return None
    (c1,), (c2,) = dp, dq
    if not c1.coeffs or not c2.coeffs:
        return None
    k1, k2 = _key(c1)[0], _key(c2)[0]
    if k1 != k2:
        return None
    r1, r2 = _Range(), _Range()
    _range_of(c1, r1)
    _range_of(c2, r2)
    merged = _union_range(r1, r2)
    if merged is None:
        return None
    return frozenset((p & q) | set(_range_cons(k1, merged)))


def _union_range(a: _Range, b: _Range) -> _Range | None:
    """Union of two ranges when it is again expressible by at most one
    constraint (whole line, half-line or point); otherwise ``None``."""
    first, second = sorted((a, b), key=lambda r: (r.lo is not None, r.lo or 0, r.lo_strict))
    if first.hi is not None and second.lo is not None:
        if second.lo > first.hi:
            return None
        if second.lo == first.hi and first.hi_strict and second.lo_strict:
            return None
    out = _Range()
    if first.lo is not None:
        out.lo = first.lo
        out.lo_strict = first.lo_strict and not (second.lo == first.lo and not second.lo_strict)
    if first.hi is not None and second.hi is not None:
        if first.hi > second.hi:
            out.hi, out.hi_strict = first.hi, first.hi_strict
        elif second.hi > first.hi:
            out.hi, out.hi_strict = second.hi, second.hi_strict
        else:
            out.hi, out.hi_strict = first.hi, first.hi_strict and second.hi_strict
    if out.lo is not None and out.hi is not None and out.lo != out.hi:
        return None
    return out


@lru_cache(maxsize=100_000)
def sample_point(poly: frozenset) -> tuple[tuple[str, Fraction], ...] | None:
    """Some point of ``poly`` (``None`` when empty), by back-substitution
    through Fourier-Motzkin elimination. Unconstrained variables are 0."""
    cons = tighten(poly)
    stages = []
    while cons is not None:
        x = _pick_var(cons)
        if x is None:
            break
        stages.append((x, cons))
        cons = tighten(_eliminate_var(cons, x))
    if cons is None:
        return None
    point: dict[str, Fraction] = {}
    for x, cs in reversed(stages):
        lo = hi = None
        value = None
        for c in cs:
            a = c.coeff(x)
            if not a:
                continue
            rest = c.const + sum(b * point.setdefault(n, Fraction(0)) for n, b in c.coeffs if n != x)
            bound = Fraction(-rest, a)
            if c.kind == EQ:
                value = bound
            elif a > 0:
                hi = bound if hi is None else min(hi, bound)
            else:
                lo = bound if lo is None else max(lo, bound)
        if value is None:
            if lo is not None and hi is not None:
                value = (lo + hi) / 2
            elif lo is not None:
                value = lo + 1
            else:
                value = hi - 1 if hi is not None else Fraction(0)
        point[x] = value
    return tuple(sorted(point.items()))


@lru_cache(maxsize=100_000)
def _scaled_sample(poly: frozenset) -> tuple[int, dict[str, int]] | None:
    """``sample_point`` times a common denominator, for integer evaluation."""
    pt = sample_point(poly)
    if pt is None:
        return None
    den = lcm(*(v.denominator for _, v in pt)) if pt else 1
    return den, {n: int(v * den) for n, v in pt}


def _holds_scaled(c: Con, den: int, point: dict[str, int]) -> bool:
    v = c.const * den + sum(a * point.get(n, 0) for n, a in c.coeffs)
    return v < 0 if c.kind == LT else (v <= 0 if c.kind == LE else v == 0)


def contains(big: frozenset, small: frozenset) -> bool:
    """``small`` subset of ``big`` (both feasible)."""
    if big <= small:
        return True
    scaled = _scaled_sample(small)
    if scaled is not None and not all(_holds_scaled(c, *scaled) for c in big):
        return False
    return all(implies(small, c) for c in big if c not in small)


def simplify(u: Iterable[frozenset], budget: Budget | None = None, subsume: bool = True) -> tuple:
    """Canonical pieces, merged where two differ in one constraint.

    ``subsume`` also drops pieces contained in another one; callers that
    know the pieces are disjoint skip it.
    """
    polys: list[frozenset] = []
    seen = set()
    for p in u:
        c = canonical(p)
        if c is not None and c not in seen:
            seen.add(c)
            polys.append(c)
    if budget is not None:
        budget.check(polys)
    if any(not p for p in polys):
        return FULL_UNION
    polys.sort(key=_poly_sort_key)
    changed = True
    while changed:
        changed = False
        i = 0
        while i < len(polys):
            j = i + 1
            while j < len(polys):
                m = _merge_pair(polys[i], polys[j])
                if m is None:
                    j += 1
                    continue
                m = canonical(m)
                del polys[j]
                if m is None or (m != polys[i] and m in polys):
                    del polys[i]
                    j = len(polys)
                else:
                    polys[i] = m
                    j = i + 1
                changed = True
            i += 1
        if any(not p for p in polys):
            return FULL_UNION
    polys.sort(key=_poly_sort_key)
    if not subsume:
        return tuple(polys)
    kept: list[frozenset] = []
    for i, p in enumerate(polys):
        if any(j != i and _dominated(p, q, i, j) for j, q in enumerate(polys)):
            continue
        kept.append(p)
    return tuple(kept)


def _dominated(p: frozenset, q: frozenset, i: int, j: int) -> bool:
    if not contains(q, p):
        return False
    if contains(p, q):
        return j < i  # equal sets: keep the first
    return True


def _poly_sort_key(p: frozenset):
    return (len(p), sorted(p))


def intersect(u: Sequence[frozenset], v: Sequence[frozenset], budget: Budget | None = None) -> tuple:
    out = []
    for p in u:
        for q in v:
            r = p | q
            if is_feasible(r):
                out.append(r)
    return simplify(out, budget)


def _sides(c: Con) -> tuple[Con, ...]:
    """The three sign conditions of the hyperplane of ``c``."""
    return (Con(c.coeffs, c.const, LT), Con(c.coeffs, c.const, EQ)) + negate(Con(c.coeffs, c.const, LE))


def _split_choice(live: list[frozenset]) -> Con:
    """A constraint of the smallest piece, preferring hyperplanes shared by many pieces."""
    counts: dict = {}
    for p in live:
        for c in p:
            counts[(c.coeffs, c.const)] = counts.get((c.coeffs, c.const), 0) + 1
    smallest = min(live, key=_poly_sort_key)
    return max(sorted(smallest), key=lambda c: counts[(c.coeffs, c.const)])


def complement(u: Sequence[frozenset], budget: Budget | None = None) -> tuple:
    return difference(FULL_UNION, u, budget)


def difference(base: Sequence[frozenset], u: Sequence[frozenset], budget: Budget | None = None) -> tuple:
    """``base`` minus ``u`` by recursive splitting along the hyperplanes of ``u``.

    A region is dropped once a piece covers it and kept once no piece meets
    it, so the leaves split each base polyhedron into disjoint parts.
    """
    out: list[frozenset] = []

    def split(region: frozenset, polys: list[frozenset]) -> None:
        live = []
        for p in polys:
            if not is_feasible(region | p):
                continue
            rest = frozenset(c for c in p if c not in region and not implies(region, c))
            if not rest:
                return
            live.append(rest)
        if not live:
            out.append(region)
            if budget is not None:
                budget.check(out)
            return
        c = _split_choice(live)
        for side in _sides(c):
            r = canonical(region | {side})
            if r is not None:
                split(r, live)

    for region in base:
        split(region, list(u))
    return simplify(out, budget, subsume=False)


def project_union(u: Sequence[frozenset], x: str, budget: Budget | None = None) -> tuple:
    out = []
    for p in u:
        q = project(p, x)
        if q is not None:
            out.append(q)
    return simplify(out, budget)


def closure_union(u: Sequence[frozenset]) -> tuple:
    """Closure of a union: each nonempty polyhedron loses its strictness."""
    out = []
    for p in u:
        if is_feasible(p):
            out.append(frozenset(Con(c.coeffs, c.const, LE) if c.kind == LT else c for c in p))
    return simplify(out)


def union_vars(u: Iterable[frozenset]) -> frozenset[str]:
    out: set[str] = set()
    for p in u:
        for c in p:
            out.update(n for n, _ in c.coeffs)
    return frozenset(out)


def union_contains(u: Iterable[frozenset], point: Mapping[str, Fraction]) -> bool:
    return any(all(c.holds(point) for c in p) for p in u)
