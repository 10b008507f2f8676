from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import rng_of, seeds
from tamelin import corpus as cp
from tamelin.errors import PreconditionError
from tamelin.lang import parse_formula, parse_term
from tamelin.sets import Piece
from tamelin.tietze import (APPENDIX, DISCONTINUOUS, MISMATCH, SEC5, UNEXPECTED, VARIANTS, ExtensionCandidate,
                            build_gadget, extension_obstruction, interval_to_line, interval_to_ray,
                            obstruction_height, seam_discontinuities, standard_decreasing, standard_ray,
                            tietze_modulus, tietze_modulus_inf, transfer_map, verify_mismatch)

H = Fraction(1, 2)


def test_interval_to_ray_cases():
    h = standard_ray()
    assert interval_to_ray(h, 0.5)(0.25) == pytest.approx(2.0, abs=1e-12)
    assert interval_to_ray(h, 1.0) is h
    assert interval_to_ray(h, 2.0)(0.5) == 0.5
    with pytest.raises(PreconditionError):
        interval_to_ray(h, 0.0)


@pytest.mark.parametrize("v", [0.25, 0.5, 1.0, 3.0])
def test_interval_to_ray_is_a_homeomorphism(v):
    r = interval_to_ray(standard_ray(), v)
    assert r.is_strictly_monotone() and r.round_trip_error() < 1e-9
    assert r(v * 1e-9) < 1e-6 and r(v * (1 - 1e-9)) > 1e6


def test_interval_to_line():
    line = interval_to_line(standard_ray())
    assert line(0.5) == 0
    assert line.is_strictly_monotone() and line.round_trip_error() < 1e-9
    assert line(1e-9) < -1e6 and line(1 - 1e-9) > 1e6


def test_transfer_map():
    psi = transfer_map(standard_decreasing())
    assert psi(1, 0.5) == pytest.approx(1 / 3, abs=1e-12)
    for y in (0.1, 0.5, 0.9):
        xs = [10.0 ** -k for k in range(8, -3, -1)]
        vals = [psi(x, y) for x in xs]
        assert all(0 < v < y for v in vals)
        assert all(a > b for a, b in zip(vals, vals[1:]))
        assert abs(psi(1e-12, y) - y) < 1e-6
    with pytest.raises(PreconditionError):
        psi(-1, 0.5)
    with pytest.raises(PreconditionError):
        transfer_map(standard_ray())


def test_gadget_values():
    a, f = build_gadget(1, SEC5)
    assert f((0, 3)) == -3 and f((1, 3)) == 3
    assert not a.member((H, 0)) and a.member((-5, 0)) and a.member((1, 0))
    _, g = build_gadget(1, APPENDIX)
    assert g((-2, 7)) == 0 and g((1, 7)) == 7


STRIP = "0 <= x and x <= 1"


def candidate(*pieces, c=1):
    strip = f"0 <= x and x <= {c}"
    return ExtensionCandidate(c, tuple(Piece(parse_formula(f"{strip} and {r}" if r else strip), (parse_term(v),))
                                       for r, v in pieces))


def test_single_affine_piece_mismatches_at_height_one():
    cand = candidate(("", "-y"))
    assert obstruction_height(cand) == 1
    v = extension_obstruction(cand)
    assert v.kind == MISMATCH and v.witness[1] == 1
    assert verify_mismatch(cand, v)


def test_lipschitz_witness_height():
    cand = candidate(("y <= 0", "3*x"), ("y > 0", "3*x + y"))
    v = extension_obstruction(cand)
    assert v.kind == MISMATCH and v.witness[1] == Fraction(5, 2)
    assert v.details["moved"] <= 3 < 2 * v.witness[1]
    assert verify_mismatch(cand, v)


def test_seam_is_reported_as_discontinuity():
    cand = candidate(("y <= x", "0"), ("y > x", "1"))
    v = extension_obstruction(cand)
    assert v.kind == DISCONTINUOUS
    x, y = v.witness
    assert x == y and seam_discontinuities(cand).member(v.witness)


def test_candidate_must_partition_the_strip():
    with pytest.raises(PreconditionError):
        candidate(("y < 0", "0"))
    with pytest.raises(PreconditionError):
        candidate(("y <= 0", "0"), ("y >= 0", "1"))


def test_moduli_across_the_strip():
    (piece,) = tietze_modulus(candidate(("", "y")), 1).pieces
    assert piece.value == parse_term("1")
    for c in (Fraction(1), Fraction(1, 4)):
        cand = candidate(("", "2*x + y"), c=c)
        (piece,) = tietze_modulus(cand, 1).pieces
        assert piece.value == parse_term(str(min(c, H)))
        assert tietze_modulus_inf(cand, 1, 1)[0] > 0


@settings(max_examples=15)
@given(seeds)
def test_corpus_candidates_are_obstructed(seed):
    rng = rng_of(seed)
    cand = cp.random_candidate(rng, rng.choice([Fraction(1), H]))
    for variant in VARIANTS:
        v = extension_obstruction(cand, variant)
        assert v.kind != UNEXPECTED
        if v.kind == MISMATCH:
            assert verify_mismatch(cand, v, variant)
        else:
            assert seam_discontinuities(cand).member(v.witness)
