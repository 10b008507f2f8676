"""Seeded generators for the property suites.

Every generator takes a :class:`random.Random` so that a run is a pure
function of its seed. Coefficients are kept small; elimination cost grows
quickly with coefficient size and atom count.
"""
from __future__ import annotations

import random
from fractions import Fraction

from .analysis import DefinableFamily
from .intervals import INF, Interval, IntervalUnion1D
from .lang import AffineTerm, And, Atom, Exists, Forall, Formula, Implies, Not, Or, conj, eq, le, lt
from .qe import formula_union
from .sets import Piece, PiecewiseLinearFunction
from .tietze import ExtensionCandidate, build_gadget, strip_formula

FREE_NAMES = ("a", "b", "c")
BOUND_NAMES = ("x", "y", "z")


def rational(rng: random.Random, span: int = 3, dens: tuple[int, ...] = (1, 1, 2, 3)) -> Fraction:
    q = rng.choice(dens)
    return Fraction(rng.randint(-span * q, span * q), q)


def affine(rng: random.Random, names, max_vars: int = 2, coef: int = 2) -> AffineTerm:
    k = rng.randint(1, min(max_vars, len(names)))
    chosen = rng.sample(list(names), k)
    coeffs = {}
    for n in chosen:
        a = 0
        while a == 0:
            a = rng.randint(-coef, coef)
        coeffs[n] = a
    return AffineTerm.make(coeffs, rng.randint(-2, 2))


def random_atom(rng: random.Random, names) -> Formula:
    t = affine(rng, names, max_vars=3)
    r = rng.random()
    if r < 0.55:
        return Atom(t, "<")
    if r < 0.8:
        return le(t, 0)
    return Atom(t, "=")


def random_formula(rng: random.Random, max_atoms: int = 8, max_quants: int = 3) -> Formula:
    """A formula with at most ``max_atoms`` atoms and ``max_quants`` quantifiers."""
    n_q = rng.randint(1, max_quants)
    bound = list(BOUND_NAMES[:n_q])
    n_free = rng.randint(1, 3)
    free = list(FREE_NAMES[:n_free])
    n_atoms = rng.randint(max(1, n_q), max_atoms)

    def build(n: int, scope: list[str], quants: list[str]) -> Formula:
        # quants: bound names still to introduce inside this subtree
        if quants and (n == 1 or rng.random() < 0.7):
            v = quants[0]
            body = build(n, scope + [v], quants[1:])
            return (Exists if rng.random() < 0.6 else Forall)(v, body)
        if n == 1:
            names = scope if scope else list(FREE_NAMES[:1])
            atom = random_atom(rng, names)
            return Not(atom) if rng.random() < 0.15 else atom
        k = rng.randint(1, n - 1)
        split = rng.randint(0, len(quants))
        left = build(k, scope, quants[:split])
        right = build(n - k, scope, quants[split:])
        r = rng.random()
        if r < 0.45:
            return And((left, right))
        if r < 0.85:
            return Or((left, right))
        return Implies(left, right)

    while True:
        f = build(n_atoms, free, bound)
        if isinstance(f, (Exists, Forall)) or any(isinstance(f, t) for t in (And, Or, Implies)):
            return f


def random_point(rng: random.Random, names, span: int = 4) -> dict[str, Fraction]:
    return {n: Fraction(rng.randint(-4 * span, 4 * span), 4) for n in sorted(names)}



# ---------------------------------------------------------------------------
# sets, functions and families
# ---------------------------------------------------------------------------


def small_rational(rng: random.Random, span: int = 2) -> Fraction:
    return Fraction(rng.randint(-2 * span, 2 * span), 2)


def random_qf_set(rng: random.Random, names, max_disjuncts: int = 2, max_atoms: int = 3) -> Formula:
    """A quantifier-free DNF with small coefficients over ``names``."""
    parts = []
    for _ in range(rng.randint(1, max_disjuncts)):
        atoms = []
        for _ in range(rng.randint(1, max_atoms)):
            t = affine(rng, names, max_vars=len(names), coef=1)
            r = rng.random()
            atoms.append(Atom(t, "<") if r < 0.5 else le(t, 0) if r < 0.8 else Atom(t, "="))
        parts.append(And(tuple(atoms)) if len(atoms) > 1 else atoms[0])
    return Or(tuple(parts)) if len(parts) > 1 else parts[0]


def sorted_cuts(rng: random.Random, k: int, lo: Fraction, hi: Fraction, den: int = 4) -> list[Fraction]:
    """``k`` distinct grid points strictly inside ``]lo, hi[``."""
    grid = [lo + Fraction(i, den) for i in range(1, int((hi - lo) * den))]
    return sorted(rng.sample(grid, min(k, len(grid))))


def random_interval_union(rng: random.Random, max_components: int = 4):

    comps = []
    for _ in range(rng.randint(1, max_components)):
        a = Fraction(rng.randint(-12, 12), 2)
        r = rng.random()
        if r < 0.3:
            comps.append(Interval.point(a))
            continue
        b = a + Fraction(rng.randint(1, 6), 2)
        lo, hi = (-INF if rng.random() < 0.1 else a), (INF if rng.random() < 0.1 else b)
        comps.append(Interval(lo, hi, lo != -INF and rng.random() < 0.5, hi != INF and rng.random() < 0.5))
    return IntervalUnion1D(comps)


def random_unary_plf(rng: random.Random, periodic: bool | None = None):
    """``(f, I)``: a unary piecewise-affine function and the interval it lives on.

    Breakpoints carry either the left limit, the right limit or a fresh
    value, so continuous and jump points both occur. A third of the
    non-periodic instances are continuous and piecewise increasing.
    """

    if periodic is None:
        periodic = rng.random() < 0.25
    if periodic:
        p = rng.choice([Fraction(1), Fraction(2), Fraction(1, 2)])
        cuts = sorted_cuts(rng, rng.randint(0, 2), Fraction(0), p, den=8)
        bounds = [Fraction(0)] + cuts + [p]
        pieces = []
        for i, (a, b) in enumerate(zip(bounds, bounds[1:])):
            val = affine(rng, ["x"], coef=2) if rng.random() < 0.8 else AffineTerm.constant(rational(rng))
            pieces.append((Interval(a, b, True, False), val))
        return PiecewiseLinearFunction.unary("x", pieces, p), None
    lo = Fraction(rng.randint(-4, 0))
    hi = lo + rng.randint(1, 4)
    kind = rng.random()
    iv = Interval(-INF if kind < 0.2 else lo, INF if rng.random() < 0.2 else hi,
                  kind >= 0.2 and rng.random() < 0.5, False)
    if iv.hi != INF and rng.random() < 0.5:
        iv = Interval(iv.lo, iv.hi, iv.lo_closed, True)
    a_ = iv.lo if iv.lo != -INF else lo - 2
    b_ = iv.hi if iv.hi != INF else hi + 2
    cuts = sorted_cuts(rng, rng.randint(0, 3), a_, b_)
    increasing = rng.random() < 1 / 3
    bounds = [iv.lo] + cuts + [iv.hi]
    terms = []
    start = rational(rng)
    for a, b in zip(bounds, bounds[1:]):
        if increasing:
            slope = Fraction(rng.randint(1, 3))
            x0 = a if a != -INF else (b if b != INF else Fraction(0))
            t = AffineTerm.make({"x": slope}, start - slope * x0)
            start = t.evaluate({"x": b}) if b != INF else start
        else:
            t = affine(rng, ["x"], coef=2) if rng.random() < 0.7 else AffineTerm.constant(rational(rng))
        terms.append(t)
    pieces = []
    for i, (a, b) in enumerate(zip(bounds, bounds[1:])):
        pieces.append((Interval(a, b), terms[i]))
        if i + 1 < len(terms):
            r = rng.random()
            if increasing or r < 0.4:
                val = AffineTerm.constant(terms[i].evaluate({"x": b}))
            elif r < 0.7:
                val = AffineTerm.constant(terms[i + 1].evaluate({"x": b}))
            else:
                val = AffineTerm.constant(rational(rng))
            pieces.append((Interval.point(b), val))
    if iv.lo_closed:
        pieces.append((Interval.point(iv.lo), AffineTerm.constant(terms[0].evaluate({"x": iv.lo}))))
    if iv.hi_closed:
        pieces.append((Interval.point(iv.hi), AffineTerm.constant(rational(rng))))
    return PiecewiseLinearFunction.unary("x", pieces), iv


def random_total_plf(rng: random.Random, names):
    """A total piecewise-affine function on ``M^n``: pieces are the sign
    regions of one or two affine forms, each carrying a random affine value."""

    forms = [affine(rng, names, max_vars=len(names), coef=1) for _ in range(rng.randint(1, 2))]
    regions = [None]
    for form in forms:
        signs = (lt(form, 0), eq(form, 0), lt(0, form))
        regions = [s if r is None else conj(r, s) for r in regions for s in signs]
    pieces = [Piece(r, (affine(rng, names, max_vars=len(names), coef=2),)) for r in regions]
    return PiecewiseLinearFunction(tuple(names), tuple(pieces))


def continuous_unary_plf(rng: random.Random, lo: Fraction = Fraction(0), hi: Fraction = Fraction(1)):
    """Linear interpolation of random node values on ``[lo, hi]``, one
    half-open segment per piece (the last one closed)."""
    nodes = [lo] + sorted_cuts(rng, rng.randint(0, 3), lo, hi, den=8) + [hi]
    vals = [rational(rng) for _ in nodes]
    pieces = []
    for i, (a, b) in enumerate(zip(nodes, nodes[1:])):
        slope = (vals[i + 1] - vals[i]) / (b - a)
        pieces.append((Interval(a, b, True, b == hi), AffineTerm.make({"x": slope}, vals[i] - slope * a)))
    return PiecewiseLinearFunction.unary("x", pieces)


FAMILY_KINDS = ("envelope", "seam", "x_jump", "t_jump", "plain")


def random_family(rng: random.Random, kind: str | None = None):
    """A family ``f(x, t)`` on ``C x ]0, s[`` with ``C`` a closed interval.

    ``envelope``: max or min of affine maps (continuous); ``seam``: values
    switch across a random line in ``(x, t)``; ``x_jump``: a jump in ``x``
    independent of ``t``; ``t_jump``: values switch at a fixed ``t``;
    ``plain``: one affine map.
    """

    kind = kind or rng.choice(FAMILY_KINDS)
    a = Fraction(rng.randint(-2, 0))
    b = a + rng.choice([Fraction(1), Fraction(2), Fraction(1, 2)])
    s = rng.choice([Fraction(1), Fraction(1, 2), Fraction(2)])
    domain = conj(le(a, "x"), le("x", b))
    params = conj(lt(0, "t"), lt("t", s))

    def term_xt() -> AffineTerm:
        return AffineTerm.make({"x": rng.randint(-2, 2), "t": rng.randint(-2, 2)}, rng.randint(-2, 2))

    if kind == "plain":
        pieces = [Piece(le(0, 0), (term_xt(),))]
    elif kind == "envelope":
        terms = [term_xt() for _ in range(rng.randint(2, 3))]
        sign = 1 if rng.random() < 0.5 else -1
        pieces = []
        for i, ti in enumerate(terms):
            conds = [lt(sign * (tj - ti), 0) if j < i else le(sign * (tj - ti), 0)
                     for j, tj in enumerate(terms) if j != i]
            pieces.append(Piece(conj(conds), (ti,)))
    else:
        if kind == "seam":
            form = AffineTerm.make({"x": rng.choice([-1, 1]), "t": rng.choice([-1, 1])}, 0)
        elif kind == "x_jump":
            form = AffineTerm.make({"x": 1}, -(a + (b - a) / 2))
        else:
            form = AffineTerm.make({"t": 1}, -s / 2)
        lower, upper = term_xt(), term_xt()
        pieces = [Piece(le(form, 0), (lower,)), Piece(lt(0, form), (upper,))]
    return DefinableFamily(("x",), ("t",), domain, params, tuple(pieces), check=False)


def random_candidate(rng: random.Random, c: Fraction, max_pieces: int = 6):
    """A piecewise-affine candidate on the strip ``[0, c] x M``."""

    def val() -> AffineTerm:
        return AffineTerm.make({"x": rng.randint(-3, 3), "y": rng.randint(-2, 2)}, rng.randint(-2, 2))

    strip = strip_formula(c)
    kind = rng.random()
    if kind < 0.4:
        terms = [val() for _ in range(rng.randint(1, min(4, max_pieces)))]
        sign = 1 if rng.random() < 0.5 else -1
        pieces = []
        for i, ti in enumerate(terms):
            conds = [lt(sign * (tj - ti), 0) if j < i else le(sign * (tj - ti), 0)
                     for j, tj in enumerate(terms) if j != i]
            pieces.append(Piece(conj([strip] + conds), (ti,)))
    elif kind < 0.7:
        axis = rng.choice(["x", "y"])
        if axis == "x":
            cuts = sorted_cuts(rng, rng.randint(1, max_pieces - 1), Fraction(0), c)
            bounds = [None] + cuts + [None]
        else:
            cuts = sorted(rng.sample(range(-3, 4), rng.randint(1, max_pieces - 1)))
            bounds = [None] + [Fraction(v) for v in cuts] + [None]
        pieces = []
        for i, (lo, hi) in enumerate(zip(bounds, bounds[1:])):
            conds = [strip]
            if lo is not None:
                conds.append(le(lo, axis))
            if hi is not None:
                conds.append(lt(axis, hi))
            pieces.append(Piece(conj(conds), (val(),)))
    else:

        variant = rng.choice(["sec5", "appendix"])
        _, f = build_gadget(c, variant)
        pieces = [Piece(Atom(AffineTerm.var("x"), "="), (f.pieces[0].value,)),
                  Piece(conj(lt(0, "x"), lt("x", c)), (val(),)),
                  Piece(Atom(AffineTerm.make({"x": 1}, -c), "="), (f.pieces[1].value,))]
    pieces = [p for p in pieces if _nonempty(p.region)]
    return ExtensionCandidate(c, tuple(pieces))


def _nonempty(f: Formula) -> bool:

    return bool(formula_union(f))
