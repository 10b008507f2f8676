"""Exact scalars, affine terms and first-order formulas over (M, <, +, 0).

Scalars are :class:`fractions.Fraction` values (exported as ``Rational``).
Atoms are normalized to ``t < 0`` and ``t = 0``; the relations ``<=``,
``>=``, ``>`` and ``!=`` are surface sugar that the parser desugars and the
printer re-sugars, so that ``parse_formula(format_formula(f)) == f``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

from .errors import FormulaSyntaxError, UnassignedVariableError

Rational = Fraction
Scalar = Union[int, Fraction]

KEYWORDS = frozenset({"exists", "forall", "and", "or", "not", "implies", "true", "false"})


def as_rational(value: Scalar | str) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"not an exact rational: {value!r}")


def format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# Affine terms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AffineTerm:
    """``sum(q_i * x_i) + q_0`` with the zero coefficients dropped.

    ``coeffs`` is kept sorted by variable name so that structural equality is
    semantic equality.
    """

    coeffs: tuple[tuple[str, Fraction], ...] = ()
    const: Fraction = Fraction(0)

    @classmethod
    def make(cls, mapping: Mapping[str, Scalar] | None = None, const: Scalar = 0) -> AffineTerm:
        items = []
        for name, c in (mapping or {}).items():
            c = as_rational(c)
            if c:
                items.append((name, c))
        items.sort()
        return cls(tuple(items), as_rational(const))

    @classmethod
    def var(cls, name: str, coeff: Scalar = 1) -> AffineTerm:
        return cls.make({name: coeff})

    @classmethod
    def constant(cls, value: Scalar) -> AffineTerm:
        return cls((), as_rational(value))

    @property
    def variables(self) -> frozenset[str]:
        return frozenset(name for name, _ in self.coeffs)

    def coeff(self, name: str) -> Fraction:
        for n, c in self.coeffs:
            if n == name:
                return c
        return Fraction(0)

    def as_dict(self) -> dict[str, Fraction]:
        return dict(self.coeffs)

    def is_constant(self) -> bool:
        return not self.coeffs

    def __add__(self, other: AffineTerm | Scalar) -> AffineTerm:
        if not isinstance(other, AffineTerm):
            return AffineTerm(self.coeffs, self.const + as_rational(other))
        d = dict(self.coeffs)
        for n, c in other.coeffs:
            d[n] = d.get(n, 0) + c
        return AffineTerm.make(d, self.const + other.const)

    __radd__ = __add__

    def __neg__(self) -> AffineTerm:
        return AffineTerm(tuple((n, -c) for n, c in self.coeffs), -self.const)

    def __sub__(self, other: AffineTerm | Scalar) -> AffineTerm:
        return self + (-other)

    def __rsub__(self, other: Scalar) -> AffineTerm:
        return (-self) + other

    def __mul__(self, k: Scalar) -> AffineTerm:
        if isinstance(k, AffineTerm):
            if k.is_constant():
                k = k.const
            elif self.is_constant():
                return k * self.const
            else:
                raise TypeError("product of two non-constant affine terms")
        k = as_rational(k)
        if not k:
            return AffineTerm()
        return AffineTerm(tuple((n, c * k) for n, c in self.coeffs), self.const * k)

    __rmul__ = __mul__

    def __truediv__(self, k: Scalar) -> AffineTerm:
        return self * (1 / as_rational(k))

    def evaluate(self, point: Mapping[str, Scalar]) -> Fraction:
        total = self.const
        for n, c in self.coeffs:
            try:
                total += c * point[n]
            except KeyError:
                raise UnassignedVariableError(n) from None
        return Fraction(total)

    def substitute(self, name: str, term: AffineTerm) -> AffineTerm:
        c = self.coeff(name)
        if not c:
            return self
        rest = AffineTerm(tuple(p for p in self.coeffs if p[0] != name), self.const)
        return rest + term * c

    def rename(self, mapping: Mapping[str, str]) -> AffineTerm:
        return AffineTerm.make({mapping.get(n, n): c for n, c in self.coeffs}, self.const)

    def linear_str(self) -> str:
        """The non-constant part, e.g. ``x - 1/2*y`` (empty if constant)."""
        parts: list[str] = []
        for name, c in self.coeffs:
            mag = abs(c)
            body = name if mag == 1 else f"{format_rational(mag)}*{name}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    def __str__(self) -> str:
        lin = self.linear_str()
        if not lin:
            return format_rational(self.const)
        if self.const > 0:
            return f"{lin} + {format_rational(self.const)}"
        if self.const < 0:
            return f"{lin} - {format_rational(-self.const)}"
        return lin


def term(value: AffineTerm | Scalar | str) -> AffineTerm:
    """Coerce a variable name, scalar or term to an :class:`AffineTerm`."""
    if isinstance(value, AffineTerm):
        return value
    if isinstance(value, str) and re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", value):
        return AffineTerm.var(value)
    return AffineTerm.constant(as_rational(value))


# ---------------------------------------------------------------------------
# Formulas
# ---------------------------------------------------------------------------


class Formula:
    """Base class of the formula AST. All nodes are immutable."""

    __slots__ = ()

    def __and__(self, other: Formula) -> Formula:
        return And((self, other))

    def __or__(self, other: Formula) -> Formula:
        return Or((self, other))

    def __invert__(self) -> Formula:
        return Not(self)

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True, slots=True)
class Const(Formula):
    value: bool


TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True, slots=True)
class Atom(Formula):
    """``term < 0`` (op ``"<"``) or ``term = 0`` (op ``"="``)."""

    term: AffineTerm
    op: str

    def __post_init__(self) -> None:
        if self.op not in ("<", "="):
            raise ValueError(f"atom relation must be '<' or '=', got {self.op!r}")


@dataclass(frozen=True, slots=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True, slots=True)
class And(Formula):
    args: tuple[Formula, ...]


@dataclass(frozen=True, slots=True)
class Or(Formula):
    args: tuple[Formula, ...]


@dataclass(frozen=True, slots=True)
class Implies(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True, slots=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True, slots=True)
class Forall(Formula):
    var: str
    body: Formula


Quantifier = (Exists, Forall)


# smart constructors -------------------------------------------------------


def lt(a, b) -> Formula:
    return Atom(term(a) - term(b), "<")


def gt(a, b) -> Formula:
    return Atom(term(b) - term(a), "<")


def eq(a, b) -> Formula:
    return Atom(term(a) - term(b), "=")


def le(a, b) -> Formula:
    d = term(a) - term(b)
    return Or((Atom(d, "<"), Atom(d, "=")))


def ge(a, b) -> Formula:
    return le(b, a)


def ne(a, b) -> Formula:
    return Not(eq(a, b))


def conj(*fs: Formula | Iterable[Formula]) -> Formula:
    """Conjunction with unit/zero simplification and flattening of one level."""
    out: list[Formula] = []
    for f in _flatten_args(fs):
        if f == TRUE:
            continue
        if f == FALSE:
            return FALSE
        out.extend(f.args if isinstance(f, And) else (f,))
    if not out:
        return TRUE
    return out[0] if len(out) == 1 else And(tuple(out))


def disj(*fs: Formula | Iterable[Formula]) -> Formula:
    out: list[Formula] = []
    for f in _flatten_args(fs):
        if f == FALSE:
            continue
        if f == TRUE:
            return TRUE
        out.extend(f.args if isinstance(f, Or) and not _is_le_sugar(f) else (f,))
    if not out:
        return FALSE
    return out[0] if len(out) == 1 else Or(tuple(out))


def _flatten_args(fs) -> Iterator[Formula]:
    for f in fs:
        if isinstance(f, Formula):
            yield f
        else:
            yield from f


def neg(f: Formula) -> Formula:
    if f == TRUE:
        return FALSE
    if f == FALSE:
        return TRUE
    if isinstance(f, Not):
        return f.arg
    return Not(f)


def implies(a: Formula, b: Formula) -> Formula:
    return Implies(a, b)


def exists(variables: str | Iterable[str], body: Formula) -> Formula:
    names = [variables] if isinstance(variables, str) else list(variables)
    for v in reversed(names):
        body = Exists(v, body)
    return body


def forall(variables: str | Iterable[str], body: Formula) -> Formula:
    names = [variables] if isinstance(variables, str) else list(variables)
    for v in reversed(names):
        body = Forall(v, body)
    return body


def abs_lt(a, bound) -> Formula:
    """``|a| < bound`` expanded into two atoms."""
    a, bound = term(a), term(bound)
    return And((Atom(a - bound, "<"), Atom(-a - bound, "<")))


def dist_lt(xs: Iterable, ys: Iterable, bound) -> Formula:
    """Max-norm ``|xs - ys| < bound`` as a coordinate conjunction."""
    parts = [abs_lt(term(x) - term(y), bound) for x, y in zip(xs, ys)]
    return conj(parts)


# structural queries --------------------------------------------------------


def free_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, Atom):
        return f.term.variables
    if isinstance(f, Const):
        return frozenset()
    if isinstance(f, Not):
        return free_vars(f.arg)
    if isinstance(f, (And, Or)):
        out: frozenset[str] = frozenset()
        for a in f.args:
            out |= free_vars(a)
        return out
    if isinstance(f, Implies):
        return free_vars(f.lhs) | free_vars(f.rhs)
    if isinstance(f, Quantifier):
        return free_vars(f.body) - {f.var}
    raise TypeError(f"not a formula: {f!r}")


def all_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, Atom):
        return f.term.variables
    if isinstance(f, Const):
        return frozenset()
    if isinstance(f, Not):
        return all_vars(f.arg)
    if isinstance(f, (And, Or)):
        out: frozenset[str] = frozenset()
        for a in f.args:
            out |= all_vars(a)
        return out
    if isinstance(f, Implies):
        return all_vars(f.lhs) | all_vars(f.rhs)
    return all_vars(f.body) | {f.var}


def is_quantifier_free(f: Formula) -> bool:
    if isinstance(f, (Atom, Const)):
        return True
    if isinstance(f, Not):
        return is_quantifier_free(f.arg)
    if isinstance(f, (And, Or)):
        return all(is_quantifier_free(a) for a in f.args)
    if isinstance(f, Implies):
        return is_quantifier_free(f.lhs) and is_quantifier_free(f.rhs)
    return False


def atoms(f: Formula) -> Iterator[Atom]:
    if isinstance(f, Atom):
        yield f
    elif isinstance(f, Not):
        yield from atoms(f.arg)
    elif isinstance(f, (And, Or)):
        for a in f.args:
            yield from atoms(a)
    elif isinstance(f, Implies):
        yield from atoms(f.lhs)
        yield from atoms(f.rhs)
    elif isinstance(f, Quantifier):
        yield from atoms(f.body)


def quantifier_count(f: Formula) -> int:
    if isinstance(f, (Atom, Const)):
        return 0
    if isinstance(f, Not):
        return quantifier_count(f.arg)
    if isinstance(f, (And, Or)):
        return sum(quantifier_count(a) for a in f.args)
    if isinstance(f, Implies):
        return quantifier_count(f.lhs) + quantifier_count(f.rhs)
    return 1 + quantifier_count(f.body)


def fresh_name(base: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    stem = base.rstrip("0123456789").rstrip("_") or "v"
    i = 1
    while f"{stem}_{i}" in taken:
        i += 1
    return f"{stem}_{i}"


# evaluation and substitution -------------------------------------------------


def evaluate(f: Formula, point: Mapping[str, Scalar]) -> bool:
    """Truth value of a quantifier-free formula at an exact point."""
    if isinstance(f, Atom):
        v = f.term.evaluate(point)
        return v < 0 if f.op == "<" else v == 0
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Not):
        return not evaluate(f.arg, point)
    if isinstance(f, And):
        return all(evaluate(a, point) for a in f.args)
    if isinstance(f, Or):
        return any(evaluate(a, point) for a in f.args)
    if isinstance(f, Implies):
        return (not evaluate(f.lhs, point)) or evaluate(f.rhs, point)
    raise ValueError("evaluate requires a quantifier-free formula; eliminate quantifiers first")


def substitute(f: Formula, var: str, t: AffineTerm | Scalar | str) -> Formula:
    """Capture-avoiding substitution ``f[var := t]``."""
    t = term(t)
    if isinstance(f, Atom):
        return Atom(f.term.substitute(var, t), f.op)
    if isinstance(f, Const):
        return f
    if isinstance(f, Not):
        return Not(substitute(f.arg, var, t))
    if isinstance(f, And):
        return And(tuple(substitute(a, var, t) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(substitute(a, var, t) for a in f.args))
    if isinstance(f, Implies):
        return Implies(substitute(f.lhs, var, t), substitute(f.rhs, var, t))
    if isinstance(f, Quantifier):
        if f.var == var or var not in free_vars(f.body):
            return f
        bound, body = f.var, f.body
        if bound in t.variables:
            new = fresh_name(bound, all_vars(body) | t.variables | {var})
            body = rename_free(body, bound, new)
            bound = new
        return type(f)(bound, substitute(body, var, t))
    raise TypeError(f"not a formula: {f!r}")


def substitute_all(f: Formula, mapping: Mapping[str, AffineTerm | Scalar]) -> Formula:
    """Simultaneous substitution; values must not mention the replaced names."""
    for name, value in mapping.items():
        f = substitute(f, name, term(value))
    return f


def rename_free(f: Formula, old: str, new: str) -> Formula:
    return substitute(f, old, AffineTerm.var(new))


def normalize(f: Formula, _scope: frozenset[str] | None = None, _taken: set[str] | None = None) -> Formula:
    """Rename bound variables so none shadows an enclosing binder or a free variable."""
    if _taken is None:
        _taken = set(all_vars(f))
        _scope = free_vars(f)
    assert _scope is not None
    if isinstance(f, (Atom, Const)):
        return f
    if isinstance(f, Not):
        return Not(normalize(f.arg, _scope, _taken))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(normalize(a, _scope, _taken) for a in f.args))
    if isinstance(f, Implies):
        return Implies(normalize(f.lhs, _scope, _taken), normalize(f.rhs, _scope, _taken))
    bound, body = f.var, f.body
    if bound in _scope:
        new = fresh_name(bound, _taken)
        _taken.add(new)
        body = rename_free(body, bound, new)
        bound = new
    return type(f)(bound, normalize(body, _scope | {bound}, _taken))


# ---------------------------------------------------------------------------
# Printer
# ---------------------------------------------------------------------------


def _is_le_sugar(f: Formula) -> bool:
    return (
        isinstance(f, Or)
        and len(f.args) == 2
        and isinstance(f.args[0], Atom)
        and isinstance(f.args[1], Atom)
        and f.args[0].op == "<"
        and f.args[1].op == "="
        and f.args[0].term == f.args[1].term
    )


def _is_ne_sugar(f: Formula) -> bool:
    return isinstance(f, Not) and isinstance(f.arg, Atom) and f.arg.op == "="


def _relation(t: AffineTerm, op: str) -> str:
    lin = t.linear_str()
    if not lin:
        return f"{format_rational(t.const)} {op} 0"
    return f"{lin} {op} {format_rational(-t.const)}"


def _is_simple(f: Formula) -> bool:
    return isinstance(f, (Atom, Const, Not)) or _is_le_sugar(f)


def format_formula(f: Formula) -> str:
    """Canonical ASCII rendering; inverse of :func:`parse_formula`."""
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Atom):
        return _relation(f.term, f.op)
    if _is_le_sugar(f):
        return _relation(f.args[0].term, "<=")
    if _is_ne_sugar(f):
        return _relation(f.arg.term, "!=")
    if isinstance(f, Not):
        return "not " + _wrap(f.arg)
    if isinstance(f, And):
        return " and ".join(_wrap(a) for a in f.args)
    if isinstance(f, Or):
        return " or ".join(_wrap(a) for a in f.args)
    if isinstance(f, Implies):
        return f"{_wrap(f.lhs)} implies {_wrap(f.rhs)}"
    if isinstance(f, Exists):
        return f"exists {f.var}. {format_formula(f.body)}"
    if isinstance(f, Forall):
        return f"forall {f.var}. {format_formula(f.body)}"
    raise TypeError(f"not a formula: {f!r}")


def _wrap(f: Formula) -> str:
    s = format_formula(f)
    return s if _is_simple(f) else f"({s})"


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<num>\d+(?:\.\d+)?(?:/\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op><=|>=|!=|->|[<>=+\-*/().,])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True, slots=True)
class Token:
    kind: str  # num, ident, kw, op, eof
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise FormulaSyntaxError(f"unknown symbol {text[pos]!r}", line, col)
        kind = m.lastgroup
        s = m.group()
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "ident":
            tokens.append(Token("kw" if s in KEYWORDS else "ident", s, line, col))
        elif kind in ("num", "op"):
            tokens.append(Token(kind, s, line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, len(text) - line_start + 1))
    return tokens


_RELOPS = ("<", "<=", "=", "!=", ">=", ">")


class _Parser:
    def __init__(self, text: str) -> None:
        self.tokens = tokenize(text)
        self.i = 0
        self.furthest: FormulaSyntaxError | None = None

    # token helpers
    def peek(self, k: int = 0) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def error(self, message: str, tok: Token | None = None) -> FormulaSyntaxError:
        tok = tok or self.peek()
        err = FormulaSyntaxError(message, tok.line, tok.col)
        best = self.furthest
        if best is None or (tok.line, tok.col) >= (best.line, best.column):
            self.furthest = err
        return err

    def fail(self, message: str, tok: Token | None = None) -> FormulaSyntaxError:
        """The error to raise: the one reached furthest into the input."""
        self.error(message, tok)
        assert self.furthest is not None
        return self.furthest

    def accept(self, text: str) -> bool:
        tok = self.peek()
        if tok.kind in ("op", "kw") and tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok.kind in ("op", "kw") and tok.text == text:
            self.i += 1
            return tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise self.fail(f"expected {text!r}, found {found}", tok)

    # grammar
    def parse(self) -> Formula:
        f = self.formula()
        if self.peek().kind != "eof":
            tok = self.peek()
            raise self.fail(f"unexpected {tok.text!r}", tok)
        return f

    def formula(self) -> Formula:
        lhs = self.disjunction()
        if self.accept("implies") or self.accept("->"):
            return Implies(lhs, self.formula())
        return lhs

    def disjunction(self) -> Formula:
        args = [self.conjunction()]
        while self.accept("or"):
            args.append(self.conjunction())
        return args[0] if len(args) == 1 else Or(tuple(args))

    def conjunction(self) -> Formula:
        args = [self.unary()]
        while self.accept("and"):
            args.append(self.unary())
        return args[0] if len(args) == 1 else And(tuple(args))

    def unary(self) -> Formula:
        tok = self.peek()
        if self.accept("not"):
            return Not(self.unary())
        if tok.kind == "kw" and tok.text in ("exists", "forall"):
            self.i += 1
            names = [self.ident()]
            while self.accept(","):
                names.append(self.ident())
            self.expect(".")
            body = self.formula()
            return exists(names, body) if tok.text == "exists" else forall(names, body)
        if self.accept("true"):
            return TRUE
        if self.accept("false"):
            return FALSE
        if tok.kind == "op" and tok.text == "(":
            start = self.i
            try:
                return self.comparison()
            except FormulaSyntaxError:
                self.i = start
            self.expect("(")
            f = self.formula()
            self.expect(")")
            return f
        return self.comparison()

    def ident(self) -> str:
        tok = self.peek()
        if tok.kind != "ident":
            raise self.fail("expected a variable name", tok)
        self.i += 1
        return tok.text

    def comparison(self) -> Formula:
        terms = [self.term()]
        ops: list[str] = []
        while self.peek().kind == "op" and self.peek().text in _RELOPS:
            ops.append(self.peek().text)
            self.i += 1
            terms.append(self.term())
        if not ops:
            tok = self.peek()
            found = "end of input" if tok.kind == "eof" else repr(tok.text)
            raise self.fail(f"expected a relation, found {found}", tok)
        parts = [_relate(a, op, b) for a, op, b in zip(terms, ops, terms[1:])]
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def term(self) -> AffineTerm:
        sign = 1
        if self.accept("-"):
            sign = -1
        else:
            self.accept("+")
        total = self.summand() * sign
        while True:
            if self.accept("+"):
                total = total + self.summand()
            elif self.accept("-"):
                total = total - self.summand()
            else:
                return total

    def summand(self) -> AffineTerm:
        value = self.factor()
        while True:
            tok = self.peek()
            if self.accept("*"):
                rhs = self.factor()
                if not value.is_constant() and not rhs.is_constant():
                    raise self.fail("product of variables is not linear", tok)
                value = value * rhs
            elif self.accept("/"):
                rhs = self.factor()
                if not rhs.is_constant() or rhs.const == 0:
                    raise self.fail("division only by a nonzero rational literal", tok)
                value = value / rhs.const
            else:
                return value

    def factor(self) -> AffineTerm:
        tok = self.peek()
        if tok.kind == "num":
            self.i += 1
            return AffineTerm.constant(Fraction(tok.text))
        if tok.kind == "ident":
            self.i += 1
            return AffineTerm.var(tok.text)
        if self.accept("-"):
            return -self.factor()
        if self.accept("("):
            t = self.term()
            self.expect(")")
            return t
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise self.fail(f"expected a term, found {found}", tok)


def _relate(a: AffineTerm, op: str, b: AffineTerm) -> Formula:
    if op == "<":
        return Atom(a - b, "<")
    if op == ">":
        return Atom(b - a, "<")
    if op == "=":
        return Atom(a - b, "=")
    if op == "<=":
        d = a - b
        return Or((Atom(d, "<"), Atom(d, "=")))
    if op == ">=":
        d = b - a
        return Or((Atom(d, "<"), Atom(d, "=")))
    return Not(Atom(a - b, "="))


def parse_formula(text: str) -> Formula:
    """Parse formula text. Raises :class:`FormulaSyntaxError` with position."""
    return _Parser(text).parse()


def parse_term(text: str) -> AffineTerm:
    p = _Parser(text)
    t = p.term()
    if p.peek().kind != "eof":
        raise p.fail(f"unexpected {p.peek().text!r}")
    return t


def as_formula(f: Formula | str) -> Formula:
    return parse_formula(f) if isinstance(f, str) else f
