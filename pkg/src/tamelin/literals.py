"""Text literals for 1-D sets, periodic sets, unary piecewise functions and
the block files that describe families and extension candidates.

Interval ends use either bracket style: ``]a, b[`` and ``(a, b)`` are open,
``[a, b]`` closed, mixed forms such as ``[a, b)`` are allowed. Points are
written ``{a}`` or ``{a, b, c}`` and components are joined with ``U``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .analysis import DefinableFamily
from .errors import FormulaSyntaxError
from .intervals import Interval, IntervalUnion1D, parse_endpoint
from .lang import as_rational, free_vars, parse_formula, parse_term
from .qe import to_interval_union
from .sets import Piece, PeriodicSet1D, PiecewiseLinearFunction, SemilinearSet
from .tietze import ExtensionCandidate

_INTERVAL_RE = re.compile(r"\s*([\[\]\(])\s*([^,\[\]\(\)]+?)\s*,\s*([^,\[\]\(\)]+?)\s*([\[\]\)])\s*$")


def _syntax(msg: str) -> FormulaSyntaxError:
    return FormulaSyntaxError(msg, 1, 1)


def _endpoint(text: str):
    try:
        return parse_endpoint(text)
    except (ValueError, ZeroDivisionError):
        raise _syntax(f"bad endpoint {text!r}") from None


def parse_interval(text: str) -> list[Interval]:
    """One component: an interval or a brace list of points."""
    text = text.strip()
    if text.startswith("{") and text.endswith("}"):
        inner = text[1:-1].strip()
        return [Interval.point(_endpoint(p)) for p in inner.split(",")] if inner else []
    m = _INTERVAL_RE.match(text)
    if not m:
        raise _syntax(f"bad interval {text!r}")
    left, lo, hi, right = m.groups()
    try:
        return [Interval(_endpoint(lo), _endpoint(hi), left == "[", right == "]")]
    except ValueError as exc:
        raise _syntax(f"bad interval {text!r}: {exc}") from None


def parse_union(text: str) -> IntervalUnion1D:
    """``{0} U ]1, 2[`` style unions; ``{}`` is empty."""
    comps: list[Interval] = []
    for part in re.split(r"\s+U\s+", text.strip()):
        if part.strip():
            comps.extend(parse_interval(part))
    return IntervalUnion1D(comps)


def parse_periodic(text: str) -> PeriodicSet1D:
    """``[finite U] periodic(base=...; p=...; m=...)``."""
    text = text.strip()
    idx = text.find("periodic(")
    if idx < 0 or not text.endswith(")"):
        raise _syntax(f"bad periodic literal {text!r}")
    finite = IntervalUnion1D()
    head = text[:idx].strip()
    if head:
        if not head.endswith("U"):
            raise _syntax("finite part must be joined with U")
        finite = parse_union(head[:-1])
    fields = {}
    for item in text[idx + len("periodic("):-1].split(";"):
        if not item.strip():
            continue
        key, sep, value = item.partition("=")
        if not sep:
            raise _syntax(f"expected key=value in {item!r}")
        fields[key.strip()] = value.strip()
    if "base" not in fields or "p" not in fields:
        raise _syntax("periodic literal needs base= and p=")
    m = _endpoint(fields.get("m", "-inf"))
    return PeriodicSet1D(finite, parse_union(fields["base"]), _endpoint(fields["p"]), m)


def parse_set_1d(text: str, var: str | None = None) -> IntervalUnion1D | PeriodicSet1D:
    """A 1-D set given as a periodic literal, an interval union or a formula."""
    text = text.strip()
    if "periodic(" in text:
        return parse_periodic(text)
    if text[:1] in "[](){":
        return parse_union(text)
    f = parse_formula(text)
    names = sorted(free_vars(f))
    if len(names) > 1:
        raise _syntax(f"a 1-D set must have one free variable, got {names}")
    return to_interval_union(f, var or (names[0] if names else "x"))


_PIECE_RE = re.compile(r"^\s*(\{[^}]*\}|[\[\]\(][^:]*?[\[\]\)])\s*:\s*(.+)$")


def parse_plf(text: str) -> PiecewiseLinearFunction:
    """``plf{ [0,1): x; [1,2]: 2 - x; period=2; var=x }``."""
    text = text.strip()
    if not (text.startswith("plf{") and text.endswith("}")):
        raise _syntax(f"bad function literal {text!r}")
    var, period, pieces = "x", None, []
    for item in text[4:-1].split(";"):
        item = item.strip()
        if not item:
            continue
        m = _PIECE_RE.match(item)
        if m:
            pieces.append((m.group(1), m.group(2)))
            continue
        key, sep, value = item.partition("=")
        if sep and key.strip() == "period":
            period = as_rational(value.strip())
        elif sep and key.strip() == "var":
            var = value.strip()
        else:
            raise _syntax(f"bad function piece {item!r}")
    out = []
    for iv_text, val in pieces:
        for iv in parse_interval(iv_text):
            out.append((iv, parse_term(val)))
    return PiecewiseLinearFunction.unary(var, out, period)


def parse_set(text: str, variables: list[str] | None = None) -> SemilinearSet:
    """A formula read as a set; coordinates default to its sorted free variables."""
    f = parse_formula(text)
    names = variables if variables else sorted(free_vars(f))
    return SemilinearSet(tuple(names), f)


# ---------------------------------------------------------------------------
# block files
# ---------------------------------------------------------------------------


@dataclass
class Block:
    kind: str
    name: str
    entries: list[tuple[str, str]] = field(default_factory=list)
    line: int = 1

    def get(self, key: str, default: str | None = None) -> str | None:
        for k, v in self.entries:
            if k == key:
                return v
        return default

    def all(self, key: str) -> list[str]:
        return [v for k, v in self.entries if k == key]


def parse_blocks(text: str) -> list[Block]:
    """Blocks ``<kind> <name>`` ... ``end`` holding ``key: value`` lines."""
    blocks: list[Block] = []
    cur: Block | None = None
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if cur is None:
            words = line.split()
            if len(words) != 2:
                raise FormulaSyntaxError(f"expected '<kind> <name>', got {line!r}", n, 1)
            cur = Block(words[0], words[1], line=n)
            continue
        if line == "end":
            blocks.append(cur)
            cur = None
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise FormulaSyntaxError(f"expected 'key: value', got {line!r}", n, 1)
        cur.entries.append((key.strip(), value.strip()))
    if cur is not None:
        raise FormulaSyntaxError(f"block {cur.name!r} is not closed with 'end'", cur.line, 1)
    return blocks


def _names(text: str | None) -> tuple[str, ...]:
    return tuple(v.strip() for v in (text or "").replace(",", " ").split())


def block_pieces(block: Block) -> list[Piece]:
    pieces = []
    for entry in block.all("piece"):
        region, sep, value = entry.partition("=>")
        if not sep:
            raise _syntax(f"piece needs 'region => value', got {entry!r}")
        pieces.append(Piece(parse_formula(region), (parse_term(value),)))
    return pieces


def family_from_block(block: Block, check: bool = True):
    """``family <id>`` with keys ``x``, ``p``, ``C``, ``P`` and ``piece``."""
    xs, ps = _names(block.get("x", "x")), _names(block.get("p", "t"))
    domain = parse_formula(block.get("C", "true"))
    params = parse_formula(block.get("P", "true"))
    pieces = block_pieces(block)
    if not pieces:
        raise _syntax(f"family {block.name!r} has no pieces")
    return DefinableFamily(xs, ps, domain, params, tuple(pieces), check=check)


def candidate_from_block(block: Block):
    """``candidate <id>`` with keys ``c`` and ``piece`` over ``(x, y)``."""
    return ExtensionCandidate(as_rational(block.get("c", "1")), tuple(block_pieces(block)))


def read_formula_arg(arg: str) -> str:
    """``@path`` reads a UTF-8 file; anything else is literal text."""
    if arg.startswith("@"):
        with open(arg[1:], encoding="utf-8") as fh:
            return fh.read()
    return arg

