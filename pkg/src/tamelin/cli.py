"""Command-line front end.

Exit codes: 0 success, 1 a checked property failed, 2 usage, parse or
precondition error, 3 atom budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import analysis as an
from . import suite as st
from . import tietze as tz
from .cells import Box, cells_inside, decompose
from .choice import Selector, choose_element, curve_limit, curve_selection, skolem_section
from .dim import dimension, format_point
from .errors import ResourceLimitError, TameError
from .intervals import INF, IntervalUnion1D, fmt_endpoint
from .lang import as_rational, format_formula, free_vars, parse_formula
from .literals import (candidate_from_block, family_from_block, parse_blocks, parse_interval, parse_plf,
                       parse_set, parse_union, read_formula_arg)
from .qe import atom_budget, decide, eliminate
from .sets import PeriodicSet1D, PiecewiseLinearFunction, SemilinearSet

SCHEMA = "1"
OK, PROPERTY_FAILED, USAGE, RESOURCE = 0, 1, 2, 3


class UsageError(TameError):
    pass


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def jsonable(v):
    """Rationals as ``p/q`` strings, infinities as ``+inf``/``-inf``."""
    if isinstance(v, bool) or v is None or isinstance(v, (int, str)):
        return v
    if isinstance(v, Fraction):
        return fmt_endpoint(v)
    if isinstance(v, float) and v in (INF, -INF):
        return fmt_endpoint(v)
    if isinstance(v, dict):
        return {str(k): jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    if isinstance(v, (IntervalUnion1D, PeriodicSet1D)):
        return str(v)
    if isinstance(v, PiecewiseLinearFunction):
        return plf_json(v)
    return str(v)


def plf_json(f: PiecewiseLinearFunction) -> dict:
    out = {"variables": list(f.variables),
           "pieces": [{"region": format_formula(p.region), "values": [str(t) for t in p.values]}
                      for p in f.pieces]}
    if f.period is not None:
        out["period"] = f.period
    return out


def plf_text(f: PiecewiseLinearFunction) -> str:
    head = "(" + ", ".join(f.variables) + ")"
    lines = []
    for p in f.pieces:
        vals = ", ".join(str(t) for t in p.values)
        lines.append(f"  {format_formula(p.region)}  =>  {vals}")
    if f.period is not None:
        lines.append(f"  period {fmt_endpoint(f.period)}")
    return f"function of {head}:\n" + "\n".join(lines)


def _text(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "n/a"
    if isinstance(v, (Fraction, float)):
        return fmt_endpoint(v)
    return str(v)


# ---------------------------------------------------------------------------
# commands; each returns (exit code, report dict, text)
# ---------------------------------------------------------------------------


def _vars(args) -> list[str] | None:
    if not args.vars:
        return None
    return [v.strip() for v in args.vars.replace(",", " ").split()]


def _set(args):
    return parse_set(read_formula_arg(args.set), _vars(args))


def _point(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(as_rational(p) for p in text.replace(",", " ").split())
    except (TypeError, ValueError, ZeroDivisionError):
        raise UsageError(f"bad point {text!r}") from None


def cmd_qe(args):
    f = parse_formula(read_formula_arg(args.formula))
    out = eliminate(f)
    text = format_formula(out)
    return OK, {"input": format_formula(f), "result": text}, text


def cmd_decide(args):
    f = parse_formula(read_formula_arg(args.sentence))
    names = sorted(free_vars(f))
    if names:
        raise UsageError(f"not a sentence: free variables {names}")
    value = decide(f)
    return OK, {"input": format_formula(f), "result": value}, _text(value)


def cmd_dim(args):
    s = _set(args)
    d = dimension(s)
    return OK, {"variables": list(s.variables), "set": format_formula(s.formula), "dimension": d}, str(d)


def cmd_decompose(args):
    s = _set(args)
    d = decompose(Box.whole(s.variables), [s])
    inside = {id(c) for c in cells_inside(d, s)}
    report = d.to_json()
    report["inside"] = [i for i, c in enumerate(d.cells) if id(c) in inside]
    lines = [f"{len(d.cells)} cells over ({', '.join(s.variables)}), {len(inside)} inside the set"]
    for i, c in enumerate(d.cells):
        lines.append(f"  {i:3d} {'*' if id(c) in inside else ' '} {c}")
    return OK, report, "\n".join(lines)


def cmd_choice(args, sel: Selector):
    text = read_formula_arg(args.set).strip()
    if text[:1] in "[](){":
        union = parse_union(text)
        value = choose_element(union, sel)
        return OK, {"set": str(union), "element": value}, fmt_endpoint(value)
    s = parse_set(text, _vars(args))
    if s.ambient_dim == 1 and args.keep == 0:
        value = choose_element(s, sel)
        return OK, {"set": format_formula(s.formula), "element": value}, fmt_endpoint(value)
    if not 0 <= args.keep < s.ambient_dim:
        raise UsageError(f"--keep must be between 0 and {s.ambient_dim - 1}")
    f = skolem_section(s, args.keep, sel)
    report = {"variables": list(s.variables), "keep": list(s.variables[s.ambient_dim - args.keep:]),
              "section": plf_json(f)}
    return OK, report, plf_text(f)


def cmd_curve(args, sel: Selector):
    s = _set(args)
    a = _point(args.point)
    eps, gamma = curve_selection(s, a, sel)
    limit = curve_limit(gamma)
    report = {"variables": list(s.variables), "point": list(a), "eps": eps, "curve": plf_json(gamma),
              "limit": list(limit)}
    text = f"eps = {fmt_endpoint(eps)}\n{plf_text(gamma)}\nlimit ({', '.join(format_point(limit))})"
    return (OK if tuple(limit) == a else PROPERTY_FAILED), report, text


def cmd_mono(args):
    f = parse_plf(read_formula_arg(args.function))
    iv = None
    if args.interval:
        comps = parse_interval(args.interval)
        if len(comps) != 1:
            raise UsageError("--interval takes one interval")
        iv = comps[0]
    mp = an.mono_partition(f, iv)
    ok = an.check_partition(mp, iv)
    parts = {k: str(v) for k, v in mp.parts().items()}
    report = {"parts": parts, "check": ok}
    text = "\n".join(f"{k:10s} {v}" for k, v in parts.items()) + f"\ncheck {_text(ok)}"
    return (OK if ok else PROPERTY_FAILED), report, text


def family_report(block) -> tuple[dict, bool]:
    """Report for one family block and whether every applicable check held."""
    fam = family_from_block(block)
    checks = dict(an.ascoli_check(fam))
    checks["members_continuous"] = an.members_continuous(fam)
    checks["pointwise_bounded"] = an.pointwise_bounded(fam)
    checks["uniformly_equi_continuous"] = an.uniformly_equi_continuous(fam)
    ok = checks["conclusion_holds"] is not False
    dims: dict = {"params": dimension(SemilinearSet(fam.ps, fam.params))}
    if checks["closed_bounded"] and checks["equi_continuous"]:
        rep = an.discontinuity_projection_check(fam, check=False)
        dims.update(discontinuities=dimension(rep.discontinuities), projection=rep.dim_projection,
                    passed=rep.passed)
        ok = ok and rep.passed
    else:
        dims.update(discontinuities=None, projection=None, passed=None)
    return {"family_id": block.name, "checks": checks, "dims": dims}, ok


def cmd_family(args):
    blocks = [b for b in parse_blocks(read_formula_arg("@" + args.file)) if b.kind == "family"]
    if not blocks:
        raise UsageError("no 'family' blocks in the input")
    reports, all_ok, lines = [], True, []
    for b in blocks:
        rep, ok = family_report(b)
        reports.append(rep)
        all_ok = all_ok and ok
        lines.append(f"family {b.name}: {'ok' if ok else 'FAILED'}")
        for k, v in rep["checks"].items():
            lines.append(f"  {k:26s} {_text(v)}")
        for k, v in rep["dims"].items():
            lines.append(f"  dim {k:22s} {_text(v)}")
    return (OK if all_ok else PROPERTY_FAILED), {"families": reports}, "\n".join(lines)


def cmd_tietze(args):
    blocks = [b for b in parse_blocks(read_formula_arg("@" + args.file)) if b.kind == "candidate"]
    if not blocks:
        raise UsageError("no 'candidate' blocks in the input")
    reports, all_ok, lines = [], True, []
    for b in blocks:
        cand = candidate_from_block(b)
        v = tz.extension_obstruction(cand, args.variant)
        ok = v.kind == tz.DISCONTINUOUS or (v.kind == tz.MISMATCH and tz.verify_mismatch(cand, v, args.variant))
        all_ok = all_ok and ok
        reports.append({"candidate_id": b.name, "c": cand.c, "verdict": v.kind, "witness": list(v.witness),
                        "details": v.details, "verified": ok})
        lines.append(f"candidate {b.name}: {v.kind} at ({', '.join(format_point(v.witness))})"
                     f"{'' if ok else '  FAILED'}")
    return (OK if all_ok else PROPERTY_FAILED), {"variant": args.variant, "candidates": reports}, "\n".join(lines)


def _report_timing(result, seconds: float) -> None:
    # stderr only, so that stdout stays byte-identical between runs
    print(f"check {result.number}: {seconds:.2f}s", file=sys.stderr, flush=True)


def cmd_suite(args):
    only = None
    if args.only:
        only = {int(n) for n in args.only.replace(",", " ").split()}
    try:
        results = st.run_suite(args.seed, args.section, only, _report_timing if args.timings else None)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    ok = all(r.passed for r in results)
    report = {"seed": args.seed, "section": args.section, "checks": [r.to_json() for r in results]}
    return (OK if ok else PROPERTY_FAILED), report, st.format_text(results)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return n


def _positive_rational(text: str) -> Fraction:
    try:
        q = as_rational(text)
    except (TypeError, ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None
    if q <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return q


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=_positive_int, default=None, help="atom budget per elimination")
    common.add_argument("--selector-c", type=_positive_rational, default=Fraction(1),
                        help="offset used when choosing from an unbounded component (default 1)")
    common.add_argument("--format", choices=("text", "json"), default="text")

    p = argparse.ArgumentParser(prog="tamelin", description="Exact definable-set computations over "
                                "ordered groups: elimination, dimension, choice and family checks.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text, description=help_text)

    s = add("qe", "eliminate quantifiers from a formula")
    s.add_argument("formula", help="formula text or @file")
    s = add("decide", "decide a sentence")
    s.add_argument("sentence", help="sentence text or @file")
    for name, help_text in (("dim", "dimension of a set"), ("decompose", "cell decomposition adapted to a set")):
        s = add(name, help_text)
        s.add_argument("set", help="formula text or @file")
        s.add_argument("--vars", help="coordinate order, e.g. x,y (default: sorted free variables)")
    s = add("choice", "canonical element of a 1-D set or a section of a projection")
    s.add_argument("set", help="interval union, formula text or @file")
    s.add_argument("--vars", help="coordinate order (default: sorted free variables)")
    s.add_argument("--keep", type=int, default=0, help="number of trailing coordinates the section is a function of")
    s = add("curve", "curve selection towards a point of the closure")
    s.add_argument("set", help="formula text or @file")
    s.add_argument("--point", required=True, help="target point, e.g. 0,0")
    s.add_argument("--vars", help="coordinate order (default: sorted free variables)")
    s = add("mono", "monotonicity partition of a unary function")
    s.add_argument("function", help="plf{...} literal or @file")
    s.add_argument("--interval", help="restrict to this interval, e.g. [0,3]")
    s = add("family", "equi-continuity, convergence and projection checks for families")
    s.add_argument("file", help="file of 'family <id>' blocks")
    s = add("tietze", "extension obstruction for candidate extensions")
    s.add_argument("file", help="file of 'candidate <id>' blocks")
    s.add_argument("--variant", choices=tz.VARIANTS, default=tz.SEC5)
    s = add("suite", "run the property suite")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--section", help="structure, choice, families or extension (aliases 2-5)")
    s.add_argument("--only", help="comma-separated check numbers")
    s.add_argument("--timings", action="store_true", help="write per-check wall times to stderr")
    return p


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    sel = Selector(args.selector_c)
    handlers = {"qe": cmd_qe, "decide": cmd_decide, "dim": cmd_dim, "decompose": cmd_decompose,
                "choice": lambda a: cmd_choice(a, sel), "curve": lambda a: cmd_curve(a, sel),
                "mono": cmd_mono, "family": cmd_family, "tietze": cmd_tietze, "suite": cmd_suite}
    try:
        if args.budget is not None:
            with atom_budget(args.budget):
                code, report, text = handlers[args.command](args)
        else:
            code, report, text = handlers[args.command](args)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=err)
        return RESOURCE
    except (TameError, ValueError, TypeError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=err)
        return USAGE
    if args.format == "json":
        body = {"schema": SCHEMA, "command": args.command, "exit_code": code}
        body.update(jsonable(report))
        print(json.dumps(body, indent=2, sort_keys=True), file=out)
    else:
        print(text, file=out)
    return code


def main() -> None:
    sys.exit(run())
