"""A small expression language for scheme interpretations.

Grammar (lowest to highest precedence)::

    expr  := iff
    iff   := imp ('<->' imp)*          left-associative
    imp   := or ('->' imp)?            right-associative
    or    := and ('|' and)*
    and   := unary ('&' unary)*
    unary := '!' unary | atom
    atom  := 'p'INT | 'e'INT | 'c' | NUMBER
           | 'min(' expr (',' expr)* ')' | 'max(' expr (',' expr)* ')'
           | 'wavg(' NUMBER ':' expr (',' NUMBER ':' expr)* ')'
           | '(' expr ')'

``pN`` is the N-th premise, ``eN`` the N-th exception and ``c`` the claim.
Numbers are decimals (``0.25``) or fractions (``1/4``).  Binary connectives
are Łukasiewicz; ``min``/``max`` are the lattice operations and ``wavg`` is a
convex combination rounded back onto the grid.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .fuzzy import OffGridError, TruthGrid, TruthValue, n_and, n_iff, n_implies, n_neg, n_or

__all__ = [
    "SchemeError",
    "SchemeSyntaxError",
    "SlotArityError",
    "WeightError",
    "Span",
    "Const",
    "Premise",
    "Exc",
    "Claim",
    "Not",
    "And",
    "Or",
    "Implies",
    "Iff",
    "Min",
    "Max",
    "WAvg",
    "parse",
    "to_text",
    "evaluate",
    "evaluate_array",
    "exception_guard",
    "slot_usage",
    "check_arity",
    "constants",
    "off_grid_constants",
    "BUILTIN_SCHEMES",
]


class SchemeError(ValueError):
    """Base class for errors in scheme expressions."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class SchemeSyntaxError(SchemeError):
    pass


class SlotArityError(SchemeError):
    pass


class WeightError(SchemeError):
    pass


@dataclass(frozen=True)
class Span:
    start: int
    end: int


def _span():
    return field(default=None, compare=False, repr=False)


class Expr:
    """Base of all AST nodes."""

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True, eq=True)
class Const(Expr):
    value: Fraction
    span: Span | None = _span()


@dataclass(frozen=True)
class Premise(Expr):
    index: int
    span: Span | None = _span()


@dataclass(frozen=True)
class Exc(Expr):
    index: int
    span: Span | None = _span()


@dataclass(frozen=True)
class Claim(Expr):
    span: Span | None = _span()


@dataclass(frozen=True)
class Not(Expr):
    operand: Expr
    span: Span | None = _span()


@dataclass(frozen=True)
class And(Expr):
    left: Expr
    right: Expr
    span: Span | None = _span()


@dataclass(frozen=True)
class Or(Expr):
    left: Expr
    right: Expr
    span: Span | None = _span()


@dataclass(frozen=True)
class Implies(Expr):
    left: Expr
    right: Expr
    span: Span | None = _span()


@dataclass(frozen=True)
class Iff(Expr):
    left: Expr
    right: Expr
    span: Span | None = _span()


@dataclass(frozen=True)
class Min(Expr):
    args: tuple[Expr, ...]
    span: Span | None = _span()


@dataclass(frozen=True)
class Max(Expr):
    args: tuple[Expr, ...]
    span: Span | None = _span()


@dataclass(frozen=True)
class WAvg(Expr):
    weights: tuple[Fraction, ...]
    args: tuple[Expr, ...]
    span: Span | None = _span()


# --------------------------------------------------------------------------
# Lexer / parser

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<number>\d+(?:\.\d+)?(?:/\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op><->|->|[!&|(),:])
""", re.VERBOSE)

_SLOT_RE = re.compile(r"([pe])(\d+)$")


@dataclass
class _Token:
    kind: str
    text: str
    pos: int


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = self._lex(text)
        self.i = 0

    def _where(self, pos: int) -> tuple[int, int]:
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def error(self, message: str, pos: int, cls=SchemeSyntaxError):
        return cls(message, *self._where(pos))

    def _lex(self, text: str) -> list[_Token]:
        out = []
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if m is None:
                raise self.error(f"unexpected character {text[pos]!r}", pos)
            if m.lastgroup != "ws":
                out.append(_Token(m.lastgroup, m.group(), pos))
            pos = m.end()
        out.append(_Token("eof", "", len(text)))
        return out

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def accept(self, text: str) -> _Token | None:
        if self.tok.kind == "op" and self.tok.text == text:
            t = self.tok
            self.i += 1
            return t
        return None

    def expect(self, text: str) -> _Token:
        t = self.accept(text)
        if t is None:
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}", self.tok.pos)
        return t

    def parse(self) -> Expr:
        e = self.iff()
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}", self.tok.pos)
        return e

    def iff(self) -> Expr:
        start = self.tok.pos
        left = self.imp()
        while self.accept("<->"):
            right = self.imp()
            left = Iff(left, right, Span(start, self._end()))
        return left

    def imp(self) -> Expr:
        start = self.tok.pos
        left = self.or_()
        if self.accept("->"):
            right = self.imp()
            return Implies(left, right, Span(start, self._end()))
        return left

    def or_(self) -> Expr:
        start = self.tok.pos
        left = self.and_()
        while self.accept("|"):
            left = Or(left, self.and_(), Span(start, self._end()))
        return left

    def and_(self) -> Expr:
        start = self.tok.pos
        left = self.unary()
        while self.accept("&"):
            left = And(left, self.unary(), Span(start, self._end()))
        return left

    def unary(self) -> Expr:
        start = self.tok.pos
        if self.accept("!"):
            return Not(self.unary(), Span(start, self._end()))
        return self.atom()

    def _end(self) -> int:
        prev = self.tokens[self.i - 1]
        return prev.pos + len(prev.text)

    def _number(self) -> Fraction:
        t = self.tok
        if t.kind != "number":
            found = t.text or "end of input"
            raise self.error(f"expected a number, found {found!r}", t.pos)
        self.i += 1
        try:
            return Fraction(t.text)
        except ZeroDivisionError:
            raise self.error("zero denominator", t.pos) from None

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "number":
            value = self._number()
            if value > 1:
                raise self.error(f"constant {t.text} is outside [0, 1]", t.pos)
            return Const(value, Span(t.pos, t.pos + len(t.text)))
        if t.kind == "name":
            self.i += 1
            span = Span(t.pos, t.pos + len(t.text))
            if t.text == "c":
                return Claim(span)
            m = _SLOT_RE.match(t.text)
            if m:
                idx = int(m.group(2))
                if idx < 1:
                    raise self.error(f"slot indices start at 1: {t.text}", t.pos, SlotArityError)
                return (Premise if m.group(1) == "p" else Exc)(idx, span)
            if t.text in ("min", "max"):
                self.expect("(")
                args = [self.iff()]
                while self.accept(","):
                    args.append(self.iff())
                self.expect(")")
                cls = Min if t.text == "min" else Max
                return cls(tuple(args), Span(t.pos, self._end()))
            if t.text == "wavg":
                return self._wavg(t)
            raise self.error(f"unknown name {t.text!r}", t.pos)
        if self.accept("("):
            e = self.iff()
            self.expect(")")
            return e
        found = t.text or "end of input"
        raise self.error(f"expected an operand, found {found!r}", t.pos)

    def _wavg(self, head: _Token) -> Expr:
        self.expect("(")
        weights, args = [], []
        while True:
            weights.append(self._number())
            self.expect(":")
            args.append(self.iff())
            if not self.accept(","):
                break
        self.expect(")")
        if sum(weights) != 1:
            raise self.error(f"wavg weights sum to {sum(weights)}, not 1", head.pos, WeightError)
        return WAvg(tuple(weights), tuple(args), Span(head.pos, self._end()))


def parse(text: str, arity: int | None = None, exception_arity: int | None = None) -> Expr:
    """Parse ``text`` into an AST.

    When ``arity``/``exception_arity`` are given, slot references beyond them
    raise :class:`SlotArityError`.
    """
    p = _Parser(text)
    expr = p.parse()
    for node, message in _arity_violations(expr, arity, exception_arity):
        raise p.error(message, node.span.start if node.span else 0, SlotArityError)
    return expr


def _walk(expr: Expr):
    yield expr
    if isinstance(expr, Not):
        yield from _walk(expr.operand)
    elif isinstance(expr, (And, Or, Implies, Iff)):
        yield from _walk(expr.left)
        yield from _walk(expr.right)
    elif isinstance(expr, (Min, Max, WAvg)):
        for a in expr.args:
            yield from _walk(a)


def slot_usage(expr: Expr) -> tuple[int, int]:
    """Highest premise and exception index referenced (0 when unused)."""
    p = e = 0
    for node in _walk(expr):
        if isinstance(node, Premise):
            p = max(p, node.index)
        elif isinstance(node, Exc):
            e = max(e, node.index)
    return p, e


def constants(expr: Expr) -> list[Fraction]:
    return [n.value for n in _walk(expr) if isinstance(n, Const)]


def _arity_violations(expr: Expr, arity: int | None, exception_arity: int | None):
    for node in _walk(expr):
        if isinstance(node, Premise) and arity is not None and node.index > arity:
            yield node, f"p{node.index} exceeds premise arity {arity}"
        if isinstance(node, Exc) and exception_arity is not None and node.index > exception_arity:
            yield node, f"e{node.index} exceeds exception arity {exception_arity}"


def check_arity(expr: Expr, arity: int | None, exception_arity: int | None) -> None:
    for _, message in _arity_violations(expr, arity, exception_arity):
        raise SlotArityError(message)


# --------------------------------------------------------------------------
# Printing

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4, Not: 5}
_SYM = {Iff: "<->", Implies: "->", Or: "|", And: "&"}


def _fmt_number(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def to_text(expr: Expr) -> str:
    """Render ``expr`` with the minimal parentheses needed to re-parse it."""
    if isinstance(expr, Const):
        return _fmt_number(expr.value)
    if isinstance(expr, Premise):
        return f"p{expr.index}"
    if isinstance(expr, Exc):
        return f"e{expr.index}"
    if isinstance(expr, Claim):
        return "c"
    if isinstance(expr, Not):
        inner = to_text(expr.operand)
        if type(expr.operand) in _SYM:
            inner = f"({inner})"
        return "!" + inner
    if isinstance(expr, (Min, Max)):
        name = "min" if isinstance(expr, Min) else "max"
        return f"{name}({', '.join(to_text(a) for a in expr.args)})"
    if isinstance(expr, WAvg):
        parts = ", ".join(f"{_fmt_number(w)}:{to_text(a)}" for w, a in zip(expr.weights, expr.args))
        return f"wavg({parts})"
    op = type(expr)
    prec = _PREC[op]
    right_assoc = op is Implies

    def side(child: Expr, is_left: bool) -> str:
        s = to_text(child)
        cp = _PREC.get(type(child), 99)
        if cp < prec or (cp == prec and is_left == right_assoc):
            return f"({s})"
        return s

    return f"{side(expr.left, True)} {_SYM[op]} {side(expr.right, False)}"


# --------------------------------------------------------------------------
# Evaluation

def _const_numerator(value: Fraction, k: int) -> int:
    scaled = value * k
    if scaled.denominator != 1:
        raise OffGridError(f"constant {value} is not on the grid with resolution {k}")
    return int(scaled)


def evaluate_array(expr: Expr, premises: Sequence, exceptions: Sequence, claim, k: int):
    """Evaluate on grid numerators.

    ``premises``/``exceptions`` are sequences of ints or broadcast-compatible
    integer arrays in ``[0, k]``; the result has the broadcast shape.
    """
    def ev(e):
        if isinstance(e, Premise):
            return premises[e.index - 1]
        if isinstance(e, Exc):
            return exceptions[e.index - 1]
        if isinstance(e, Claim):
            return claim
        if isinstance(e, Const):
            return _const_numerator(e.value, k)
        if isinstance(e, Not):
            return n_neg(ev(e.operand), k)
        if isinstance(e, And):
            return n_and(ev(e.left), ev(e.right), k)
        if isinstance(e, Or):
            return n_or(ev(e.left), ev(e.right), k)
        if isinstance(e, Implies):
            return n_implies(ev(e.left), ev(e.right), k)
        if isinstance(e, Iff):
            return n_iff(ev(e.left), ev(e.right), k)
        if isinstance(e, Min):
            out = ev(e.args[0])
            for a in e.args[1:]:
                out = np.minimum(out, ev(a))
            return out
        if isinstance(e, Max):
            out = ev(e.args[0])
            for a in e.args[1:]:
                out = np.maximum(out, ev(a))
            return out
        if isinstance(e, WAvg):
            den = 1
            for w in e.weights:
                den = den * w.denominator // _gcd(den, w.denominator)
            total = 0
            for w, a in zip(e.weights, e.args):
                total = total + int(w * den) * np.asarray(ev(a), dtype=np.int64)
            # nearest grid point, ties toward the lower one
            return (2 * total + den - 1) // (2 * den)
        raise TypeError(f"not a scheme expression: {e!r}")

    return ev(expr)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def evaluate(expr: Expr, premises: Sequence[TruthValue], exceptions: Sequence[TruthValue],
             claim: TruthValue, arity: int | None = None,
             exception_arity: int | None = None) -> TruthValue:
    """Evaluate ``expr`` on exact truth values.

    Raises ``ValueError`` when the vectors disagree with the declared arities
    (or, if none are declared, with the slots the expression uses).
    """
    if arity is None or exception_arity is None:
        used_p, used_e = slot_usage(expr)
        arity = used_p if arity is None else arity
        exception_arity = used_e if exception_arity is None else exception_arity
    if len(premises) != arity:
        raise ValueError(f"expected {arity} premise values, got {len(premises)}")
    if len(exceptions) != exception_arity:
        raise ValueError(f"expected {exception_arity} exception values, got {len(exceptions)}")
    k = claim.denominator
    for v in (*premises, *exceptions):
        claim._check(v)
    out = evaluate_array(expr, [p.numerator for p in premises],
                         [e.numerator for e in exceptions], claim.numerator, k)
    return TruthValue(int(out), k)


def exception_guard(expr: Expr, exception_arity: int) -> Expr:
    """``(e1 | ... | em) | expr``: a fully accepted exception makes the predicate 1."""
    if exception_arity < 1:
        raise ValueError("exception_guard needs at least one exception slot")
    guard: Expr = Exc(1)
    for i in range(2, exception_arity + 1):
        guard = Or(guard, Exc(i))
    return Or(guard, expr)


# name -> (kind, arity, interpretation)
BUILTIN_SCHEMES: dict[str, tuple[str, int, str]] = {
    "deductive-support": ("support", 1, "p1 -> c"),
    "necessary-support": ("support", 1, "!p1 -> !c"),
    "inhibiting-attack": ("attack", 1, "p1 -> !c"),
    "disjunctive-support": ("support", 1, "!p1 -> c"),
    "mutual-exclusion-attack": ("attack", 1, "!(p1 & c)"),
    "default-inference": ("support", 1, "p1 -> c"),
    "position-to-know": ("support", 3, "((p1 & p2) & p3) -> c"),
}


def off_grid_constants(expr: Expr, grid: TruthGrid) -> list[Fraction]:
    """Constants of ``expr`` that are off ``grid``."""
    return [v for v in constants(expr) if (v * grid.k).denominator != 1]
