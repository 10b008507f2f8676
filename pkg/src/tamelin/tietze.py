"""Interval homeomorphism combinators and the obstruction to continuous
semilinear extensions of the two strip gadgets."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from . import polyhedra as ph
from .analysis import DefinableFamily, graph_to_plf, sup_formula
from .dim import local_dim_point, plf_discontinuity_set
from .errors import PreconditionError
from .intervals import Endpoint
from .lang import (TRUE, AffineTerm, Formula, as_rational, conj, disj, dist_lt, exists, forall, implies, le,
                   lt)
from .qe import eliminate, formula_union, union_intervals
from .sets import Piece, PiecewiseLinearFunction, SemilinearSet

# ---------------------------------------------------------------------------
# numeric homeomorphisms between intervals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OpaqueHomeo:
    """A strictly monotone homeomorphism ``]lo, hi[ -> ]lo', hi'[`` given by
    float callables; endpoints may be infinite."""

    forward: Callable[[float], float]
    inverse: Callable[[float], float]
    domain: tuple[float, float]
    codomain: tuple[float, float]
    increasing: bool = True

    def __call__(self, t: float) -> float:
        lo, hi = self.domain
        if not lo < t < hi:
            raise PreconditionError(f"{t} outside ]{lo}, {hi}[")
        return self.forward(t)

    def inv(self, s: float) -> float:
        lo, hi = self.codomain
        if not lo < s < hi:
            raise PreconditionError(f"{s} outside ]{lo}, {hi}[")
        return self.inverse(s)

    def samples(self, n: int = 1000) -> list[float]:
        """``n`` increasing points of the domain, denser near infinite ends."""
        lo, hi = self.domain
        out = []
        for k in range(1, n + 1):
            q = k / (n + 1)
            if math.isinf(lo) and math.isinf(hi):
                out.append(math.tan(math.pi * (q - 0.5)))
            elif math.isinf(hi):
                out.append(lo + q / (1 - q))
            elif math.isinf(lo):
                out.append(hi - (1 - q) / q)
            else:
                out.append(lo + q * (hi - lo))
        return out

    def is_strictly_monotone(self, points: Sequence[float] | None = None) -> bool:
        pts = sorted(points if points is not None else self.samples())
        vals = [self(t) for t in pts]
        pairs = zip(vals, vals[1:])
        return all(a < b for a, b in pairs) if self.increasing else all(a > b for a, b in pairs)

    def round_trip_error(self, points: Sequence[float] | None = None) -> float:
        """Largest ``|inv(f(t)) - t|`` relative to ``max(1, |t|)``."""
        pts = points if points is not None else self.samples()
        return max(abs(self.inv(self(t)) - t) / max(1.0, abs(t)) for t in pts)


def standard_ray(u: float = 1.0) -> OpaqueHomeo:
    """``t -> t / (u - t)``, increasing from ``]0, u[`` onto ``]0, inf[``."""
    return OpaqueHomeo(lambda t: t / (u - t), lambda s: u * s / (1 + s), (0.0, u), (0.0, math.inf), True)


def standard_decreasing(u: float = 1.0) -> OpaqueHomeo:
    """``t -> (u - t) / t``, decreasing from ``]0, u[`` onto ``]0, inf[``."""
    return OpaqueHomeo(lambda t: (u - t) / t, lambda s: u / (1 + s), (0.0, u), (0.0, math.inf), False)


def _check_ray(h: OpaqueHomeo, increasing: bool) -> float:
    lo, u = h.domain
    if lo != 0 or not 0 < u < math.inf or h.codomain != (0.0, math.inf) or h.increasing != increasing:
        direction = "increasing" if increasing else "decreasing"
        raise PreconditionError(f"expected an {direction} homeomorphism ]0, u[ -> ]0, inf[")
    return u


def interval_to_ray(h: OpaqueHomeo, v: float) -> OpaqueHomeo:
    """From an increasing ``h: ]0, u[ -> ]0, inf[`` build one on ``]0, v[``."""
    u = _check_ray(h, True)
    if v <= 0:
        raise PreconditionError("v must be positive")
    if v == u:
        return h
    if v < u:
        shift = u - v
        base = h.forward(shift)
        return OpaqueHomeo(lambda t: h.forward(t + shift) - base,
                           lambda s: h.inverse(s + base) - shift, (0.0, v), h.codomain, True)
    gap = v - u

    def fwd(t: float) -> float:
        return t if t <= gap else h.forward(t - gap) + gap

    def back(s: float) -> float:
        return s if s <= gap else h.inverse(s - gap) + gap

    return OpaqueHomeo(fwd, back, (0.0, v), h.codomain, True)


def interval_to_line(h: OpaqueHomeo) -> OpaqueHomeo:
    """From an increasing ``h: ]0, u[ -> ]0, inf[`` build an increasing
    homeomorphism ``]0, u[ -> M`` by gluing two rays at ``u/2``."""
    u = _check_ray(h, True)
    half = u / 2
    ray = interval_to_ray(h, half)

    def fwd(t: float) -> float:
        if t < half:
            return -ray.forward(half - t)
        if t > half:
            return ray.forward(t - half)
        return 0.0

    def back(s: float) -> float:
        if s < 0:
            return half - ray.inverse(-s)
        if s > 0:
            return half + ray.inverse(s)
        return half

    return OpaqueHomeo(fwd, back, (0.0, u), (-math.inf, math.inf), True)


def transfer_map(phi: OpaqueHomeo) -> Callable[[float, float], float]:
    """``(x, y) -> phi^-1(x + phi(y))`` for a decreasing ``phi: ]0, u[ -> ]0, inf[``."""
    u = _check_ray(phi, False)

    def psi(x: float, y: float) -> float:
        if not x > 0 or not 0 < y < u:
            raise PreconditionError("transfer map needs x > 0 and 0 < y < u")
        return phi.inverse(x + phi.forward(y))

    return psi


# ---------------------------------------------------------------------------
# gadgets and extension candidates
# ---------------------------------------------------------------------------

SEC5, APPENDIX = "sec5", "appendix"
VARIANTS = (SEC5, APPENDIX)
X, Y = "x", "y"


def build_gadget(c, variant: str = SEC5) -> tuple[SemilinearSet, PiecewiseLinearFunction]:
    """The closed set ``{x <= 0} u {x >= c}`` and its boundary function:
    ``-y`` / ``y`` on the two sides, or ``0`` / ``y`` for the other variant."""
    c = as_rational(c)
    if c <= 0:
        raise PreconditionError("c must be positive")
    if variant not in VARIANTS:
        raise PreconditionError(f"unknown gadget variant {variant!r}")
    left, right = le(X, 0), le(c, X)
    a = SemilinearSet((X, Y), disj(left, right))
    low = -AffineTerm.var(Y) if variant == SEC5 else AffineTerm.constant(0)
    f = PiecewiseLinearFunction((X, Y), (Piece(left, (low,)), Piece(right, (AffineTerm.var(Y),))))
    return a, f


def strip_formula(c: Fraction) -> Formula:
    return conj(le(0, X), le(X, c))


@dataclass(frozen=True)
class ExtensionCandidate:
    """A piecewise-affine ``F(x, y)`` on the strip ``[0, c] x M``."""

    c: Fraction
    pieces: tuple[Piece, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "c", as_rational(self.c))
        object.__setattr__(self, "pieces", tuple(self.pieces))
        if self.c <= 0:
            raise PreconditionError("c must be positive")
        strip = formula_union(strip_formula(self.c))
        regions = [formula_union(pc.region) for pc in self.pieces]
        for pc in self.pieces:
            if len(pc.values) != 1 or not pc.value.variables <= {X, Y}:
                raise PreconditionError(f"piece value {pc.values} is not an affine map of (x, y)")
        outside = ph.complement(strip)
        for i, r in enumerate(regions):
            if ph.intersect(r, outside):
                raise PreconditionError(f"piece {i} leaves the strip")
            for j in range(i):
                if ph.intersect(r, regions[j]):
                    raise PreconditionError(f"pieces {j} and {i} overlap")
        covered = ()
        for r in regions:
            covered = ph.simplify(covered + tuple(r))
        if ph.intersect(strip, ph.complement(covered)):
            raise PreconditionError("pieces do not cover the strip")

    @property
    def plf(self) -> PiecewiseLinearFunction:
        return PiecewiseLinearFunction((X, Y), self.pieces)

    def __call__(self, x, y) -> Fraction:
        return self.plf((as_rational(x), as_rational(y)))

    @property
    def x_slope_bound(self) -> Fraction:
        return max(abs(pc.value.coeff(X)) for pc in self.pieces)


def seam_discontinuities(cand: ExtensionCandidate) -> SemilinearSet:
    """Points of the strip where ``F`` is discontinuous."""
    return plf_discontinuity_set(cand.plf, strip_formula(cand.c))


@dataclass(frozen=True)
class Verdict:
    kind: str  # discontinuous | boundary_mismatch | unexpected_extension
    witness: tuple[Fraction, ...] = ()
    details: dict = field(default_factory=dict, compare=False)


DISCONTINUOUS, MISMATCH, UNEXPECTED = "discontinuous", "boundary_mismatch", "unexpected_extension"


def obstruction_height(cand: ExtensionCandidate, variant: str = SEC5) -> Fraction:
    """A height ``y*`` where the boundary gap beats the Lipschitz bound.

    On each horizontal line ``F`` moves by at most ``L * c`` across the
    strip, while the gadget asks for a jump of ``2y`` (or ``y``).
    """
    per_unit = 2 if variant == SEC5 else 1
    return cand.x_slope_bound * cand.c / per_unit + 1


def extension_obstruction(cand: ExtensionCandidate, variant: str = SEC5) -> Verdict:
    """Show that ``cand`` does not continuously extend the gadget function."""
    _, f = build_gadget(cand.c, variant)
    seams = seam_discontinuities(cand)
    if not seams.is_empty():
        return Verdict(DISCONTINUOUS, local_dim_point(seams), {"set": str(seams)})
    c = cand.c
    ys = obstruction_height(cand, variant)
    lipschitz = cand.x_slope_bound * c
    details = {"y": ys, "slope_bound": cand.x_slope_bound,
               "moved": abs(cand(c, ys) - cand(0, ys)), "lipschitz_bound": lipschitz}
    for x0 in (Fraction(0), c):
        want, got = f((x0, ys)), cand(x0, ys)
        if want != got:
            details.update(x=x0, expected=want, actual=got)
            return Verdict(MISMATCH, (x0, ys), details)
    return Verdict(UNEXPECTED, (), details)


def verify_mismatch(cand: ExtensionCandidate, verdict: Verdict, variant: str = SEC5) -> bool:
    """Re-check a mismatch verdict by direct evaluation."""
    if verdict.kind != MISMATCH:
        return False
    x0, ys = verdict.witness
    _, f = build_gadget(cand.c, variant)
    moved = abs(cand(cand.c, ys) - cand(0, ys))
    gap = abs(f((cand.c, ys)) - f((Fraction(0), ys)))
    return cand(x0, ys) != f((x0, ys)) and moved <= cand.x_slope_bound * cand.c < gap


# ---------------------------------------------------------------------------
# the y-indexed modulus of continuity across the strip
# ---------------------------------------------------------------------------


def tietze_modulus_formula(cand: ExtensionCandidate, eps, out: str = "m") -> Formula:
    eps = as_rational(eps)
    if eps <= 0:
        raise PreconditionError("eps must be positive")
    fam = DefinableFamily((X,), (Y,), strip_formula(cand.c), TRUE, cand.pieces, check=False)
    x2, d = "x_2", "delta"
    close = fam.values_close([X], [Y], [x2], [Y], AffineTerm.constant(eps))
    good = forall([X, x2], implies(conj(strip_formula(cand.c), le(0, x2), le(x2, cand.c),
                                        dist_lt([X], [x2], d)), close))
    return sup_formula(eliminate(good), d, out, cand.c)


def tietze_modulus(cand: ExtensionCandidate, eps) -> PiecewiseLinearFunction:
    """``y -> sup{0 < delta <= c : |x - x'| < delta => |F(x, y) - F(x', y)| < eps}``."""
    g = SemilinearSet((Y, "m"), eliminate(tietze_modulus_formula(cand, eps)))
    return graph_to_plf(g)


def tietze_modulus_inf(cand: ExtensionCandidate, eps, d) -> tuple[Endpoint, bool]:
    """Infimum of the modulus over ``y > d`` and whether it is attained."""
    body = conj(lt(as_rational(d), Y), tietze_modulus_formula(cand, eps))
    return union_intervals(formula_union(exists(Y, body)), "m").inf()
