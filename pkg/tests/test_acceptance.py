"""Acceptance criteria, each reported as one PASS/FAIL line.

The full suite runs twice as a subprocess: criteria 1-9 read the JSON of the
first run and the per-check wall times it writes to stderr, and criterion 10
compares the two stdout streams byte for byte.
"""

from __future__ import annotations

import json
import re
import subprocess
import sys

import pytest

SEED = "0"
COMMAND = [sys.executable, "-m", "tamelin", "suite", "--seed", SEED, "--format", "json", "--timings"]


def _run() -> tuple[bytes, dict[int, float], int]:
    proc = subprocess.run(COMMAND, capture_output=True, timeout=3600)
    timings = {int(n): float(s) for n, s in re.findall(rb"check (\d+): ([0-9.]+)s", proc.stderr)}
    return proc.stdout, timings, proc.returncode


@pytest.fixture(scope="module")
def runs():
    return _run(), _run()


@pytest.fixture(scope="module")
def report(runs):
    (stdout, timings, code), _ = runs
    data = json.loads(stdout)
    return {c["number"]: c for c in data["checks"]}, timings, code


def _verdict(capsys, number: int, ok: bool, detail: str) -> None:
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")
    assert ok, detail


def _check(report, number: int) -> tuple[dict, float]:
    checks, timings, _ = report
    return checks[number], timings.get(number, float("inf"))


def test_criterion_01_qe_soundness(report, capsys):
    c, secs = _check(report, 1)
    ok = c["passed"] and c["instances"] == 500 and c["notes"]["points_per_formula"] == "200" and secs < 300
    _verdict(capsys, 1, ok, f"{c['instances']} formulas x 200 points, {c['failure_count']} disagreements, {secs:.1f}s")


def test_criterion_02_decomposition(report, capsys):
    c, secs = _check(report, 2)
    points = int(c["notes"]["points_checked"])
    ok = c["passed"] and c["instances"] == 50 and points == 50 * 1000 and secs < 300
    _verdict(capsys, 2, ok, f"{c['instances']} families, {points} sampled points, "
                            f"{c['failure_count']} failures, {secs:.1f}s")


def test_criterion_03_dimension(report, capsys):
    c, _ = _check(report, 3)
    ok = c["passed"] and c["instances"] == 300
    _verdict(capsys, 3, ok, f"{c['instances']} instances, {c['failure_count']} violations, "
                            f"{c['notes']['discontinuity_routes_compared']} dual-route comparisons")


def test_criterion_04_discrete_inf(report, capsys):
    c, _ = _check(report, 4)
    ok = c["passed"] and c["instances"] == 100 and int(c["notes"]["periodic"]) > 0
    _verdict(capsys, 4, ok, f"{c['instances']} sets ({c['notes']['periodic']} periodic), "
                            f"{c['failure_count']} violations")


def test_criterion_05_choice(report, capsys):
    c, _ = _check(report, 5)
    sections, curves = int(c["notes"]["sections"]), int(c["notes"]["curves"])
    ok = c["passed"] and c["instances"] == 1000 + 200 + 50 and sections == 200 and curves == 50
    _verdict(capsys, 5, ok, f"1000 unions, {sections} sections, {curves} curves, {c['failure_count']} failures")


def test_criterion_06_monotonicity(report, capsys):
    c, _ = _check(report, 6)
    ok = c["passed"] and c["instances"] == 200
    _verdict(capsys, 6, ok, f"{c['instances']} functions (sawtooth included), {c['failure_count']} failures, "
                            f"{c['notes']['whole_interval_increasing']} whole-interval increasing")


def test_criterion_07_families(report, capsys):
    c, secs = _check(report, 7)
    met = [int(v) for k, v in c["notes"].items() if k.endswith("_hypotheses")]
    families = int(c["notes"]["families"])
    ok = c["passed"] and len(met) == 3 and min(met) >= 100 and c["instances"] == families + 100 and secs < 900
    notes = ", ".join(f"{k}={v}" for k, v in sorted(c["notes"].items()))
    _verdict(capsys, 7, ok, f"{c['instances']} instances ({notes}), {c['failure_count']} violations, {secs:.1f}s")


def test_criterion_08_extension(report, capsys):
    c, _ = _check(report, 8)
    notes = c["notes"]
    ok = c["passed"] and c["instances"] == 200 and notes.get("unexpected_extension") == "0"
    _verdict(capsys, 8, ok, f"{c['instances']} candidates x 2 variants, verdicts {dict(sorted(notes.items()))}")


def test_criterion_09_homeomorphisms(report, capsys):
    c, _ = _check(report, 9)
    ok = c["passed"] and c["instances"] >= 100
    _verdict(capsys, 9, ok, f"{c['instances']} homeomorphism and grid checks, {c['failure_count']} failures")


def test_criterion_10_determinism(runs, capsys):
    (first, _, code1), (second, _, code2) = runs
    ok = first == second and code1 == code2 and len(first) > 0
    _verdict(capsys, 10, ok, f"two runs with seed {SEED}: {len(first)} and {len(second)} bytes, "
                             f"{'identical' if first == second else 'different'}")
