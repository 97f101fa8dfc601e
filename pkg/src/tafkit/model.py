"""Trichotomic argumentation frameworks: propositions, schemes, applications, beliefs."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import dsl
from .fuzzy import TruthGrid, TruthValue, n_and, n_implies, parse_fraction

__all__ = [
    "ILLOCUTION",
    "ENTITY",
    "ATTACK",
    "SUPPORT",
    "Proposition",
    "Scheme",
    "SchemeApplication",
    "BeliefPredicate",
    "TAF",
    "Violation",
    "ComplexSchemeApplication",
    "CompositionError",
    "builtin_scheme",
    "validate",
    "monotonicity_degree",
    "compose",
    "enumerate_complex",
]

ILLOCUTION = "illocution"
ENTITY = "entity"
ATTACK = "attack"
SUPPORT = "support"


@dataclass(frozen=True)
class Proposition:
    id: str
    kind: str = ILLOCUTION
    label: str = ""


@dataclass(frozen=True)
class Scheme:
    id: str
    kind: str
    arity: int
    exception_arity: int
    interpretation: dsl.Expr
    builtin: bool = False

    @classmethod
    def from_text(cls, id: str, kind: str, arity: int, exception_arity: int,
                  interpretation: str, builtin: bool = False) -> "Scheme":
        expr = dsl.parse(interpretation, arity, exception_arity)
        return cls(id, kind, arity, exception_arity, expr, builtin)

    @property
    def sigma(self) -> dsl.Expr:
        """The interpretation actually evaluated: exceptions wired in by a disjunctive guard."""
        if self.exception_arity:
            return dsl.exception_guard(self.interpretation, self.exception_arity)
        return self.interpretation

    def evaluate(self, premises: Sequence[TruthValue], exceptions: Sequence[TruthValue],
                 claim: TruthValue) -> TruthValue:
        return dsl.evaluate(self.sigma, premises, exceptions, claim,
                            self.arity, self.exception_arity)

    def evaluate_array(self, premises, exceptions, claim, k: int):
        return dsl.evaluate_array(self.sigma, premises, exceptions, claim, k)


def builtin_scheme(name: str, id: str | None = None) -> Scheme:
    """One of the shipped schemes, e.g. ``builtin_scheme("deductive-support")``."""
    try:
        kind, arity, text = dsl.BUILTIN_SCHEMES[name]
    except KeyError:
        raise KeyError(f"unknown built-in scheme {name!r}; "
                       f"choose from {sorted(dsl.BUILTIN_SCHEMES)}") from None
    return Scheme.from_text(id or name, kind, arity, 0, text, builtin=True)


@dataclass(frozen=True)
class SchemeApplication:
    scheme: str
    premises: tuple[str, ...]
    conclusion: str
    exceptions: tuple[str, ...] = ()
    id: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "premises", tuple(self.premises))
        object.__setattr__(self, "exceptions", tuple(self.exceptions))


@dataclass(frozen=True)
class BeliefPredicate:
    """A fuzzy predicate over truth degrees describing what an actor holds.

    ``tent`` peaks at ``param``; ``at-least``/``at-most`` are the residua
    ``param -> t`` and ``t -> param``; ``table`` maps every grid point.
    """

    shape: str = "no-opinion"
    param: Fraction | None = None
    table: tuple[tuple[Fraction, Fraction], ...] | None = None

    SHAPES = ("no-opinion", "tent", "at-least", "at-most", "table")

    def __post_init__(self):
        if self.shape not in self.SHAPES:
            raise ValueError(f"unknown belief shape {self.shape!r}")
        if self.shape in ("tent", "at-least", "at-most"):
            if self.param is None:
                raise ValueError(f"{self.shape} belief needs a parameter")
            object.__setattr__(self, "param", parse_fraction(self.param))
            if not 0 <= self.param <= 1:
                raise ValueError(f"belief parameter {self.param} outside [0, 1]")
        if self.shape == "table":
            if not self.table:
                raise ValueError("table belief needs entries")
            entries = tuple(sorted((parse_fraction(a), parse_fraction(b))
                                   for a, b in dict(self.table).items()))
            object.__setattr__(self, "table", entries)

    @classmethod
    def no_opinion(cls) -> "BeliefPredicate":
        return cls()

    @classmethod
    def tent(cls, peak) -> "BeliefPredicate":
        return cls("tent", parse_fraction(peak))

    @classmethod
    def at_least(cls, threshold) -> "BeliefPredicate":
        return cls("at-least", parse_fraction(threshold))

    @classmethod
    def at_most(cls, threshold) -> "BeliefPredicate":
        return cls("at-most", parse_fraction(threshold))

    @classmethod
    def from_table(cls, mapping: Mapping) -> "BeliefPredicate":
        return cls("table", table=tuple(mapping.items()))

    def row(self, grid: TruthGrid) -> np.ndarray:
        """Predicate values (numerators) at each grid point ``0..k``."""
        k = grid.k
        t = np.arange(k + 1, dtype=np.int64)
        if self.shape == "no-opinion":
            return np.full(k + 1, k, dtype=np.int64)
        if self.shape == "table":
            table = dict(self.table)
            out = []
            for v in grid.values:
                if v.fraction not in table:
                    raise ValueError(f"belief table has no entry for {v}")
                out.append(grid.value(table[v.fraction]).numerator)
            return np.array(out, dtype=np.int64)
        w = grid.value(self.param).numerator
        if self.shape == "tent":
            return k - np.abs(t - w)
        if self.shape == "at-least":
            return n_implies(w, t, k)
        return n_implies(t, w, k)

    def __call__(self, t: TruthValue) -> TruthValue:
        return TruthValue(int(self.row(t.grid)[t.numerator]), t.denominator)

    def to_json(self) -> dict:
        if self.shape == "no-opinion":
            return {"shape": self.shape}
        if self.shape == "table":
            return {"shape": "table",
                    "table": {_frac_str(a): _frac_str(b) for a, b in self.table}}
        return {"shape": self.shape, "value": _frac_str(self.param)}


def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Violation:
    rule: str
    element: str
    message: str
    severity: str = "error"

    def __str__(self):
        return f"{self.severity}: {self.rule} at {self.element}: {self.message}"


@dataclass(frozen=True)
class TAF:
    propositions: tuple[Proposition, ...]
    schemes: tuple[Scheme, ...]
    applications: tuple[SchemeApplication, ...]
    beliefs: Mapping[tuple[str, str], BeliefPredicate] = field(default_factory=dict)
    grid: TruthGrid = TruthGrid(4)

    def __post_init__(self):
        object.__setattr__(self, "propositions", tuple(self.propositions))
        object.__setattr__(self, "schemes", tuple(self.schemes))
        object.__setattr__(self, "applications", tuple(self.applications))
        object.__setattr__(self, "beliefs", dict(self.beliefs))
        if isinstance(self.grid, int):
            object.__setattr__(self, "grid", TruthGrid(self.grid))

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(p.id for p in self.propositions)

    @property
    def index(self) -> dict[str, int]:
        return {p.id: i for i, p in enumerate(self.propositions)}

    @property
    def illocutions(self) -> tuple[str, ...]:
        return tuple(p.id for p in self.propositions if p.kind == ILLOCUTION)

    @property
    def entities(self) -> tuple[str, ...]:
        return tuple(p.id for p in self.propositions if p.kind == ENTITY)

    @property
    def scheme_map(self) -> dict[str, Scheme]:
        return {s.id: s for s in self.schemes}

    def scheme(self, id: str) -> Scheme:
        return self.scheme_map[id]

    def belief(self, entity: str, proposition: str) -> BeliefPredicate:
        return self.beliefs.get((entity, proposition), BeliefPredicate())

    def belief_rows(self, entity: str) -> np.ndarray:
        """``(|P|, k+1)`` array: the belief of ``entity`` on each proposition."""
        rows = np.full((len(self.propositions), self.grid.size), self.grid.k, dtype=np.int64)
        for i, pid in enumerate(self.ids):
            b = self.beliefs.get((entity, pid))
            if b is not None:
                rows[i] = b.row(self.grid)
        return rows

    def with_grid(self, grid: TruthGrid | int) -> "TAF":
        return TAF(self.propositions, self.schemes, self.applications, self.beliefs, grid)


def validate(taf: TAF) -> list[Violation]:
    """All broken invariants of ``taf``; empty when the framework is well formed.

    Non-monotone user schemes are reported with severity ``"warning"``;
    everything else is an error.
    """
    out: list[Violation] = []
    seen: set[str] = set()
    for p in taf.propositions:
        if p.id in seen:
            out.append(Violation("DuplicateId", p.id, "proposition id used twice"))
        seen.add(p.id)
        if p.kind not in (ILLOCUTION, ENTITY):
            out.append(Violation("BadPropositionKind", p.id, f"kind {p.kind!r}"))
    kinds = {p.id: p.kind for p in taf.propositions}

    schemes: dict[str, Scheme] = {}
    for s in taf.schemes:
        where = f"scheme {s.id}"
        if s.id in schemes:
            out.append(Violation("DuplicateId", where, "scheme id used twice"))
        schemes[s.id] = s
        if s.kind not in (ATTACK, SUPPORT):
            out.append(Violation("BadSchemeKind", where, f"kind {s.kind!r}"))
            continue
        if s.arity < 1:
            out.append(Violation("NullaryScheme", where, "schemes need at least one premise"))
            continue
        if s.exception_arity < 0:
            out.append(Violation("BadExceptionArity", where, "negative exception arity"))
            continue
        try:
            dsl.check_arity(s.interpretation, s.arity, s.exception_arity)
        except dsl.SlotArityError as err:
            out.append(Violation("SlotArity", where, str(err)))
            continue
        off = dsl.off_grid_constants(s.interpretation, taf.grid)
        if off:
            out.append(Violation("OffGridConstant", where,
                                 f"constants {[str(x) for x in off]} not on grid {taf.grid.k}"))
            continue
        degree = monotonicity_degree(s, taf.grid)
        if degree != taf.grid.top:
            out.append(Violation(
                "NonMonotoneScheme", where,
                f"{s.kind} monotonicity holds only to degree {degree}",
                "error" if s.builtin else "warning"))

    for n, a in enumerate(taf.applications):
        where = f"application {a.id or n}"
        s = schemes.get(a.scheme)
        if s is None:
            out.append(Violation("UnknownScheme", where, f"no scheme {a.scheme!r}"))
        else:
            if len(a.premises) != s.arity:
                out.append(Violation("ArityMismatch", where,
                                     f"{len(a.premises)} premises for arity {s.arity}"))
            if len(a.exceptions) != s.exception_arity:
                out.append(Violation("ExceptionArityMismatch", where,
                                     f"{len(a.exceptions)} exceptions for exception arity "
                                     f"{s.exception_arity}"))
        for pid in (*a.premises, *a.exceptions, a.conclusion):
            if pid not in kinds:
                out.append(Violation("DanglingId", where, f"unknown proposition {pid!r}"))

    for (x, p) in taf.beliefs:
        where = f"belief ({x}, {p})"
        if kinds.get(x) != ENTITY:
            out.append(Violation("BeliefOnNonEntity", where,
                                 f"{x!r} is not an entity" if x in kinds else f"unknown entity {x!r}"))
        if p not in kinds:
            out.append(Violation("DanglingId", where, f"unknown proposition {p!r}"))
        try:
            taf.beliefs[(x, p)].row(taf.grid)
        except ValueError as err:
            out.append(Violation("OffGridBelief", where, str(err)))
    return out


def monotonicity_degree(scheme: Scheme, grid: TruthGrid) -> TruthValue:
    """Degree to which ``scheme`` behaves like its kind, exceptions all false.

    Support: raising the premises never forces the claim down.  Attack:
    raising the premises never forces the claim up.  The order ``x <= y`` on
    degrees is read as the Łukasiewicz implication ``x -> y`` (pointwise
    minimum for premise vectors); quantifiers are inf/sup over the grid.
    """
    k, size, n = grid.k, grid.size, scheme.arity
    # all premise vectors, one row each
    vecs = np.array(np.meshgrid(*[np.arange(size)] * n, indexing="ij")).reshape(n, -1).T
    c = np.arange(size)
    zeros = [0] * scheme.exception_arity
    sig = scheme.evaluate_array([vecs[:, j, None] for j in range(n)], zeros, c[None, :], k)
    sig = np.broadcast_to(sig, (len(vecs), size)).astype(np.int64)

    # claim order term: c <= c' (support) or c' <= c (attack), indexed [c, c']
    if scheme.kind == SUPPORT:
        claim_ok = n_implies(c[:, None], c[None, :], k)
    else:
        claim_ok = n_implies(c[None, :], c[:, None], k)

    worst = k
    for i in range(len(vecs)):
        leq = np.min(n_implies(vecs[i][None, :], vecs, k), axis=1)           # [q]
        # sigma(p, c) <= sigma(q, c') for all q, c, c'
        cmp = n_implies(sig[i][None, :, None], sig[:, None, :], k)          # [q, c, c']
        inner = np.max(n_and(claim_ok[None, :, :], cmp, k), axis=2)         # [q, c]
        term = n_implies(leq[:, None], inner, k)
        worst = min(worst, int(term.min()))
        if worst == 0:
            break
    return TruthValue(worst, k)


# --------------------------------------------------------------------------
# Composite schemes

class CompositionError(ValueError):
    pass


@dataclass(frozen=True)
class ComplexSchemeApplication:
    """An atomic application, or ``inner ;_index outer`` built by :func:`compose`."""

    kind: str
    premises: tuple[str, ...]
    exceptions: tuple[str, ...]
    conclusion: str
    depth: int
    scheme: Scheme | None = None
    application: SchemeApplication | None = None
    inner: "ComplexSchemeApplication | None" = None
    outer: "ComplexSchemeApplication | None" = None
    index: int | None = None

    @classmethod
    def atomic(cls, application: SchemeApplication, scheme: Scheme) -> "ComplexSchemeApplication":
        return cls(scheme.kind, application.premises, application.exceptions,
                   application.conclusion, 0, scheme=scheme, application=application)

    @property
    def arity(self) -> int:
        return len(self.premises)

    @property
    def exception_arity(self) -> int:
        return len(self.exceptions)

    @property
    def is_atomic(self) -> bool:
        return self.inner is None

    def signature(self) -> str:
        if self.is_atomic:
            return self.application.id or self.scheme.id
        return f"({self.inner.signature()};{self.index} {self.outer.signature()})"

    def evaluate_array(self, premises, exceptions, claim, k: int):
        """Interpretation on grid numerators (broadcasting like :func:`dsl.evaluate_array`)."""
        if self.is_atomic:
            return self.scheme.evaluate_array(premises, exceptions, claim, k)
        s, t, i = self.inner, self.outer, self.index
        v = premises[i - 1:i - 1 + s.arity]
        u_head = premises[:i - 1]
        u_tail = premises[i - 1 + s.arity:]
        e = exceptions[:s.exception_arity]
        f = exceptions[s.exception_arity:]
        best = None
        for b in range(k + 1):
            left = s.evaluate_array(v, e, b, k)
            right = t.evaluate_array([*u_head, b, *u_tail], f, claim, k)
            val = n_and(left, right, k)
            best = val if best is None else np.maximum(best, val)
        return best

    def evaluate(self, premises: Sequence[TruthValue], exceptions: Sequence[TruthValue],
                 claim: TruthValue) -> TruthValue:
        if len(premises) != self.arity or len(exceptions) != self.exception_arity:
            raise ValueError(f"expected {self.arity} premises and {self.exception_arity} "
                             f"exceptions, got {len(premises)} and {len(exceptions)}")
        k = claim.denominator
        out = self.evaluate_array([p.numerator for p in premises],
                                  [e.numerator for e in exceptions], claim.numerator, k)
        return TruthValue(int(out), k)


def compose(s: ComplexSchemeApplication, i: int, t: ComplexSchemeApplication) -> ComplexSchemeApplication:
    """Plug support ``s`` into premise slot ``i`` (1-based) of ``t``.

    The conclusion of ``s`` must be the very proposition at slot ``i`` of ``t``.
    The result has ``t``'s kind.
    """
    if s.kind != SUPPORT:
        raise CompositionError("only supports can be composed into another scheme")
    if not 1 <= i <= t.arity:
        raise CompositionError(f"premise slot {i} out of range 1..{t.arity}")
    if s.conclusion != t.premises[i - 1]:
        raise CompositionError(
            f"conclusion {s.conclusion!r} does not match premise {i} ({t.premises[i - 1]!r})")
    premises = t.premises[:i - 1] + s.premises + t.premises[i:]
    return ComplexSchemeApplication(
        t.kind, premises, s.exceptions + t.exceptions, t.conclusion,
        s.depth + t.depth + 1, inner=s, outer=t, index=i)


def atomic_applications(taf: TAF) -> list[ComplexSchemeApplication]:
    schemes = taf.scheme_map
    return [ComplexSchemeApplication.atomic(a, schemes[a.scheme]) for a in taf.applications]


def enumerate_complex(taf: TAF, max_depth: int) -> list[ComplexSchemeApplication]:
    """Atomic applications plus every composite built with at most ``max_depth`` compositions.

    Composites are grown by plugging an atomic support into an existing
    (complex) application; nesting supports on the inner side yields the same
    premise/exception/conclusion tuples, so nothing is lost.
    """
    if max_depth < 0:
        raise ValueError("max_depth must be >= 0")
    atoms = atomic_applications(taf)
    supports = [a for a in atoms if a.kind == SUPPORT]
    out = list(atoms)
    level = atoms
    for _ in range(max_depth):
        nxt = []
        for t in level:
            for i, prem in enumerate(t.premises, start=1):
                for s in supports:
                    if s.conclusion == prem:
                        nxt.append(compose(s, i, t))
        out.extend(nxt)
        level = nxt
    return out
