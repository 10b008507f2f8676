from __future__ import annotations

import io
import json
from pathlib import Path

import pytest

from tamelin import suite as st
from tamelin.cli import OK, PROPERTY_FAILED, RESOURCE, SCHEMA, USAGE, run

FIXTURES = Path(__file__).parent / "fixtures"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, _ = call(*argv, "--format", "json")
    body = json.loads(out)
    assert body["schema"] == SCHEMA and body["exit_code"] == code
    return code, body


def test_decide_example():
    assert call("decide", "exists x. 0<x and x<1") == (OK, "true\n", "")
    assert call("decide", "exists x. x<x")[:2] == (OK, "false\n")


def test_dim_example():
    assert call("dim", "0<x and x<1 and 0<y and y<x")[:2] == (OK, "2\n")


def test_qe_json():
    code, body = call_json("qe", "exists x. a < x and x < b")
    assert code == OK and body["command"] == "qe" and body["result"] == "a - b < 0"


def test_rationals_and_infinities_are_strings():
    code, body = call_json("choice", "]1, +inf)", "--selector-c", "1/2")
    assert code == OK and body["element"] == "3/2"
    code, body = call_json("decompose", "x > 0")
    assert body["cells"][0]["bounds"]["lower"] == "-inf"
    assert body["inside"] == [2]


def test_choice_section_and_curve():
    code, out, _ = call("choice", "0 < t and t < y", "--vars", "t,y", "--keep", "1")
    assert code == OK and "1/2*y" in out
    code, body = call_json("curve", "0 < y and y < x", "--point", "0,0")
    assert code == OK and body["limit"] == ["0", "0"] and body["eps"] == "1"


def test_mono_periodic():
    code, body = call_json("mono", "plf{[0,1): x; period=1}")
    assert code == OK and body["check"] is True
    assert body["parts"]["discrete"] == "periodic(base={0}; p=1; m=-inf)"


def test_family_report():
    code, body = call_json("family", str(FIXTURES / "families.txt"))
    assert code == OK
    ramp, step = body["families"]
    assert ramp["family_id"] == "ramp" and ramp["checks"]["conclusion_holds"] is True
    assert ramp["dims"] == {"params": 1, "discontinuities": -1, "projection": -1, "passed": True}
    assert step["checks"]["equi_continuous"] is False and step["dims"]["passed"] is None


@pytest.mark.parametrize("variant", ["sec5", "appendix"])
def test_tietze_report(variant):
    code, body = call_json("tietze", str(FIXTURES / "candidates.txt"), "--variant", variant)
    assert code == OK
    assert [c["verdict"] for c in body["candidates"]] == ["boundary_mismatch", "discontinuous"]
    assert all(c["verified"] for c in body["candidates"])


@pytest.mark.parametrize("argv,expected", [
    (("decide", "x <"), USAGE),
    (("decide", "x < 1"), USAGE),
    (("dim", "x < 1", "--bogus"), USAGE),
    (("frobnicate",), USAGE),
    ((), USAGE),
    (("qe", "exists x. x < 1", "--budget", "0"), USAGE),
    (("choice", "]1, 2[", "--selector-c", "-1"), USAGE),
    (("choice", "x < x"), USAGE),
    (("curve", "0 < x", "--point", "5"), USAGE),
    (("curve", "0 < x", "--point", "a,b"), USAGE),
    (("mono", "plf{oops}"), USAGE),
    (("family", str(FIXTURES / "unclosed.txt")), USAGE),
    (("family", str(FIXTURES / "missing.txt")), USAGE),
    (("tietze", str(FIXTURES / "families.txt")), USAGE),
    (("suite", "--section", "nowhere"), USAGE),
    (("suite", "--only", "x"), USAGE),
    (("qe", "exists x. exists y. (x < y and y < a) or (x > b and y > x)", "--budget", "1"), RESOURCE),
])
def test_exit_codes(argv, expected):
    code, out, err = call(*argv)
    assert code == expected
    if expected != OK and argv:
        assert out == ""


def test_property_failure_exits_one(monkeypatch):
    def failing(seed):
        res = st.CheckResult(4, "discrete-infimum", instances=1)
        res.fail("forced")
        return res

    monkeypatch.setattr(st, "CHECKS", [(4, "structure", failing)])
    code, out, _ = call("suite")
    assert code == PROPERTY_FAILED
    assert "[FAIL]" in out and "forced" in out


def test_suite_section_alias_and_determinism():
    first = call("suite", "--section", "extension", "--only", "9")
    second = call("suite", "--section", "5", "--only", "9")
    assert first == second and first[0] == OK
    assert "interval-homeomorphisms" in first[1]


def test_repeated_runs_are_byte_identical():
    argv = ("decompose", "(0 < x and x < y) or y = 2", "--format", "json")
    assert call(*argv) == call(*argv)
