"""Fuzzy labelling semantics over a T-AF.

Every predicate has a batched form operating on an ``(N, |P|)`` integer
array of grid numerators (one labelling per row).  The public functions
taking a single :class:`Labelling` are thin wrappers around those.

Labellings are enumerated in lexicographic order over the proposition order
of the framework, digit ``0..k`` per proposition.  Work over the labelling
space is split into fixed-size chunks; chunks may run on a thread pool but
results are always reassembled in chunk order.
"""
from __future__ import annotations

import os
from collections.abc import Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .fuzzy import TruthGrid, TruthValue, n_and, n_implies, n_or
from .model import ATTACK, SUPPORT, TAF, enumerate_complex, validate

__all__ = [
    "BudgetExceededError",
    "Labelling",
    "EvalContext",
    "PROPERTIES",
    "att",
    "sup",
    "defense",
    "consistency",
    "admissible",
    "stable",
    "preferred",
    "complete",
    "grounded",
    "evaluate_property",
    "best_labellings",
]

DEFAULT_BUDGET = 10**7
CHUNK = 1 << 15

PROPERTIES = ("admissible", "stable", "preferred", "complete", "grounded", "consistency")


class BudgetExceededError(RuntimeError):
    def __init__(self, needed: int, budget: int, what: str = "labelling evaluations"):
        self.needed = needed
        self.budget = budget
        super().__init__(
            f"{what} needed: {needed} exceeds the enumeration budget of {budget}; "
            f"lower the grid resolution k or raise the budget")


class Labelling(Mapping):
    """An immutable total map from proposition ids to truth values."""

    def __init__(self, values: Mapping[str, TruthValue]):
        self._values = dict(values)

    @classmethod
    def from_values(cls, taf: TAF, values: Mapping) -> "Labelling":
        """Build from any degree spellings (``"3/4"``, ``0.75`` ...); must be total on the grid."""
        missing = [p for p in taf.ids if p not in values]
        if missing:
            raise ValueError(f"labelling is missing propositions: {missing}")
        extra = [p for p in values if p not in taf.index]
        if extra:
            raise ValueError(f"labelling mentions unknown propositions: {extra}")
        return cls({p: taf.grid.value(values[p]) for p in taf.ids})

    @classmethod
    def from_row(cls, taf: TAF, row) -> "Labelling":
        k = taf.grid.k
        return cls({p: TruthValue(int(v), k) for p, v in zip(taf.ids, row)})

    def row(self, taf: TAF) -> np.ndarray:
        return np.array([self._values[p].numerator for p in taf.ids], dtype=np.int64)

    def __getitem__(self, key):
        return self._values[key]

    def __iter__(self):
        return iter(self._values)

    def __len__(self):
        return len(self._values)

    def __eq__(self, other):
        if isinstance(other, Labelling):
            return self._values == other._values
        return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted((k, v.numerator, v.denominator) for k, v in self._values.items())))

    def __repr__(self):
        inner = ", ".join(f"{k}: {v}" for k, v in self._values.items())
        return f"Labelling({{{inner}}})"

    def to_json(self) -> dict[str, str]:
        return {p: str(v) for p, v in self._values.items()}


@dataclass(frozen=True)
class _Edge:
    premises: np.ndarray
    exceptions: np.ndarray
    conclusion: int


class EvalContext:
    """A validated framework plus everything precomputed for evaluating it."""

    def __init__(self, taf: TAF, composition_depth: int = 2, budget: int = DEFAULT_BUDGET,
                 threads: int | None = None):
        if composition_depth < 0:
            raise ValueError("composition_depth must be >= 0")
        errors = [v for v in validate(taf) if v.severity == "error"]
        if errors:
            raise ValueError("invalid framework:\n" + "\n".join(str(v) for v in errors))
        self.taf = taf
        self.grid: TruthGrid = taf.grid
        self.k = taf.grid.k
        self.n = len(taf.propositions)
        self.composition_depth = composition_depth
        self.budget = budget
        self.threads = max(1, threads or 1)
        index = taf.index
        self.complex = enumerate_complex(taf, composition_depth)

        def edge(a):
            return _Edge(np.array([index[p] for p in a.premises], dtype=np.intp),
                         np.array([index[e] for e in a.exceptions], dtype=np.intp),
                         index[a.conclusion])

        self.attacks = [edge(a) for a in self.complex if a.kind == ATTACK]
        self.supports = [edge(a) for a in self.complex if a.kind == SUPPORT]
        schemes = taf.scheme_map
        self.atomic = [(schemes[a.scheme], edge(a)) for a in taf.applications]

    @property
    def space_size(self) -> int:
        return self.grid.size ** self.n

    def check_budget(self, needed: int | None = None) -> None:
        needed = self.space_size if needed is None else needed
        if needed > self.budget:
            raise BudgetExceededError(needed, self.budget)

    # -- labelling space --------------------------------------------------

    def rows(self, start: int, stop: int) -> np.ndarray:
        """Labellings ``start..stop-1`` of the lexicographic enumeration."""
        idx = np.arange(start, stop, dtype=np.int64)
        base = self.grid.size
        powers = base ** np.arange(self.n - 1, -1, -1, dtype=np.int64)
        return (idx[:, None] // powers[None, :]) % base

    def row_index(self, row) -> int:
        out = 0
        for v in row:
            out = out * self.grid.size + int(v)
        return out

    def map_space(self, fn) -> np.ndarray:
        """Apply ``fn`` to every chunk of the labelling space; concatenate in order."""
        self.check_budget()
        total = self.space_size
        bounds = [(s, min(s + CHUNK, total)) for s in range(0, total, CHUNK)]

        def work(b):
            return fn(self.rows(*b))

        if self.threads > 1 and len(bounds) > 1:
            with ThreadPoolExecutor(self.threads) as pool:
                parts = list(pool.map(work, bounds))
        else:
            parts = [work(b) for b in bounds]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)

    # -- batched predicates -----------------------------------------------

    def _flow(self, L: np.ndarray, edges) -> np.ndarray:
        k = self.k
        out = np.zeros(L.shape, dtype=np.int64)
        for e in edges:
            given = L[:, e.premises].min(axis=1)
            if len(e.exceptions):
                given = n_and(given, k - L[:, e.exceptions].max(axis=1), k)
            np.maximum(out[:, e.conclusion], given, out=out[:, e.conclusion])
        return out

    def att_batch(self, L):
        return self._flow(L, self.attacks)

    def sup_batch(self, L):
        return self._flow(L, self.supports)

    def def_batch(self, L, att=None):
        k = self.k
        att = self.att_batch(L) if att is None else att
        sup = self.sup_batch(L) if any(len(e.exceptions) for e in self.attacks) else None
        out = np.full(L.shape, k, dtype=np.int64)
        for e in self.attacks:
            defeat = att[:, e.premises].max(axis=1)
            if len(e.exceptions):
                defeat = n_or(defeat, sup[:, e.exceptions].max(axis=1), k)
            np.minimum(out[:, e.conclusion], defeat, out=out[:, e.conclusion])
        return out

    def co_batch(self, L):
        out = np.full(len(L), self.k, dtype=np.int64)
        for scheme, e in self.atomic:
            val = scheme.evaluate_array([L[:, j] for j in e.premises],
                                        [L[:, j] for j in e.exceptions],
                                        L[:, e.conclusion], self.k)
            np.minimum(out, val, out=out)
        return out

    def al_batch(self, L, att=None):
        k = self.k
        d = self.def_batch(L, att)
        return n_and(self.co_batch(L), n_implies(L, d, k).min(axis=1, initial=k), k)

    def sl_batch(self, L):
        k = self.k
        a = self.att_batch(L)
        return n_and(self.co_batch(L), n_implies(k - L, a, k).min(axis=1, initial=k), k)

    def cl_batch(self, L):
        k = self.k
        a = self.att_batch(L)
        d = self.def_batch(L, a)
        al = n_and(self.co_batch(L), n_implies(L, d, k).min(axis=1, initial=k), k)
        return n_and(al, n_implies(d, L, k).min(axis=1, initial=k), k)

    # -- whole-space tables -------------------------------------------------

    @cached_property
    def co_all(self) -> np.ndarray:
        return self.map_space(self.co_batch)

    @cached_property
    def al_all(self) -> np.ndarray:
        return self.map_space(self.al_batch)

    @cached_property
    def cl_all(self) -> np.ndarray:
        return self.map_space(self.cl_batch)

    @cached_property
    def _grounded_slack(self) -> np.ndarray:
        # per proposition: min over l' of l'(p) - Cl(l')
        n, k = self.n, self.k
        cl = self.cl_all
        if self.n == 0:
            return np.zeros(0, dtype=np.int64)
        out = np.full(n, 2 * k, dtype=np.int64)
        total = self.space_size
        for s in range(0, total, CHUNK):
            rows = self.rows(s, min(s + CHUNK, total))
            diff = rows - cl[s:s + len(rows), None]
            np.minimum(out, diff.min(axis=0), out=out)
        return out

    def gl_batch(self, L):
        """Least complete: ``Cl(l) & inf_{l'} (Cl(l') -> inf_p (l(p) -> l'(p)))``.

        The inner infimum separates per proposition, so it reduces to one pass
        over the space: ``min(1, 2 - l(p) + min_{l'} (l'(p) - Cl(l')))``.
        """
        k = self.k
        slack = self._grounded_slack
        bound = np.minimum(k, 2 * k - L + slack[None, :]).min(axis=1, initial=k)
        return n_and(self.cl_batch(L), bound, k)

    @cached_property
    def _admissible_support(self) -> tuple[np.ndarray, np.ndarray]:
        al = self.al_all
        idx = np.nonzero(al > 0)[0]
        return self.rows_at(idx), al[idx]

    def rows_at(self, idx: np.ndarray) -> np.ndarray:
        base = self.grid.size
        powers = base ** np.arange(self.n - 1, -1, -1, dtype=np.int64)
        return (np.asarray(idx, dtype=np.int64)[:, None] // powers[None, :]) % base

    def pl_single(self, row: np.ndarray, al: int | None = None) -> int:
        """Maximal admissible, for one labelling.

        ``Al(l) & inf_{l'} (Al(l') -> ((inf_p l(p) -> l'(p)) -> inf_p l'(p) -> l(p)))``;
        labellings with ``Al(l') = 0`` contribute 1 and are skipped.
        """
        k = self.k
        if al is None:
            al = int(self.al_batch(row[None, :])[0])
        if al == 0:
            return 0
        others, al_o = self._admissible_support
        if len(others) == 0:
            return al
        below = n_implies(row[None, :], others, k).min(axis=1, initial=k)
        above = n_implies(others, row[None, :], k).min(axis=1, initial=k)
        term = n_implies(al_o, n_implies(below, above, k), k)
        return int(n_and(al, int(term.min()), k))

    def pl_batch(self, L):
        al = self.al_batch(L)
        others, _ = self._admissible_support
        self.check_budget(len(L) * max(len(others), 1))
        return np.array([self.pl_single(r, int(a)) for r, a in zip(L, al)], dtype=np.int64)

    def batch(self, prop: str, L: np.ndarray) -> np.ndarray:
        if prop == "consistency":
            return self.co_batch(L)
        if prop == "admissible":
            return self.al_batch(L)
        if prop == "stable":
            return self.sl_batch(L)
        if prop == "complete":
            return self.cl_batch(L)
        if prop == "grounded":
            return self.gl_batch(L)
        if prop == "preferred":
            return self.pl_batch(L)
        raise ValueError(f"unknown property {prop!r}; choose from {PROPERTIES}")


# --------------------------------------------------------------------------
# Single-labelling API

def _row(ctx: EvalContext, l: Labelling) -> np.ndarray:
    if not isinstance(l, Labelling):
        l = Labelling.from_values(ctx.taf, l)
    for p in ctx.taf.ids:
        if p not in l:
            raise ValueError(f"labelling is not total: missing {p!r}")
        if l[p].denominator != ctx.k:
            raise ValueError(f"label of {p!r} is on grid {l[p].denominator}, expected {ctx.k}")
    return l.row(ctx.taf)[None, :]


def _tv(ctx: EvalContext, x) -> TruthValue:
    return TruthValue(int(x), ctx.k)


def _per_prop(ctx, l, p, fn):
    try:
        j = ctx.taf.index[p]
    except KeyError:
        raise KeyError(f"unknown proposition {p!r}") from None
    return _tv(ctx, fn(_row(ctx, l))[0, j])


def att(ctx: EvalContext, l: Labelling, p: str) -> TruthValue:
    return _per_prop(ctx, l, p, ctx.att_batch)


def sup(ctx: EvalContext, l: Labelling, p: str) -> TruthValue:
    return _per_prop(ctx, l, p, ctx.sup_batch)


def defense(ctx: EvalContext, l: Labelling, p: str) -> TruthValue:
    return _per_prop(ctx, l, p, ctx.def_batch)


def consistency(ctx: EvalContext, l: Labelling) -> TruthValue:
    return _tv(ctx, ctx.co_batch(_row(ctx, l))[0])


def admissible(ctx: EvalContext, l: Labelling) -> TruthValue:
    return _tv(ctx, ctx.al_batch(_row(ctx, l))[0])


def stable(ctx: EvalContext, l: Labelling) -> TruthValue:
    return _tv(ctx, ctx.sl_batch(_row(ctx, l))[0])


def complete(ctx: EvalContext, l: Labelling) -> TruthValue:
    return _tv(ctx, ctx.cl_batch(_row(ctx, l))[0])


def preferred(ctx: EvalContext, l: Labelling) -> TruthValue:
    return _tv(ctx, ctx.pl_single(_row(ctx, l)[0]))


def grounded(ctx: EvalContext, l: Labelling) -> TruthValue:
    return _tv(ctx, ctx.gl_batch(_row(ctx, l))[0])


def evaluate_property(ctx: EvalContext, l: Labelling, prop: str) -> TruthValue:
    fns = {"consistency": consistency, "admissible": admissible, "stable": stable,
           "complete": complete, "preferred": preferred, "grounded": grounded}
    if prop not in fns:
        raise ValueError(f"unknown property {prop!r}; choose from {PROPERTIES}")
    return fns[prop](ctx, l)


def _top(degrees: np.ndarray, top_n: int) -> np.ndarray:
    # descending degree, ascending enumeration index on ties
    order = np.lexsort((np.arange(len(degrees)), -degrees))
    return order[:top_n]


def best_labellings(ctx: EvalContext, prop: str, top_n: int = 5) -> list[tuple[Labelling, TruthValue]]:
    """The ``top_n`` labellings with highest degree for ``prop`` (exhaustive search).

    Ties are broken by lexicographic labelling order.  Preferred search only
    scores labellings whose admissibility degree can still reach the current
    cut-off, which never changes the result.
    """
    if prop not in PROPERTIES:
        raise ValueError(f"unknown property {prop!r}; choose from {PROPERTIES}")
    if top_n < 1:
        return []
    ctx.check_budget()
    taf = ctx.taf
    if prop == "preferred":
        al = ctx.al_all
        others, _ = ctx._admissible_support
        positives: list[tuple[int, int]] = []  # (degree, index)
        evaluated = 0
        for idx in _top(al, int(np.count_nonzero(al))):
            a = int(al[idx])
            if len(positives) >= top_n and a < positives[top_n - 1][0]:
                break
            evaluated += max(len(others), 1)
            ctx.check_budget(evaluated)
            d = ctx.pl_single(ctx.rows_at(np.array([idx]))[0], a)
            if d > 0:
                positives.append((d, int(idx)))
                positives.sort(key=lambda x: (-x[0], x[1]))
        picks = positives[:top_n]
        if len(picks) < top_n:
            # everything else scores 0; take the lowest enumeration indices
            taken = {i for _, i in picks}
            idx = 0
            while len(picks) < top_n and idx < ctx.space_size:
                if idx not in taken:
                    picks.append((0, idx))
                idx += 1
        return [(Labelling.from_row(taf, ctx.rows_at(np.array([i]))[0]), _tv(ctx, d))
                for d, i in picks]
    table = {"consistency": lambda: ctx.co_all, "admissible": lambda: ctx.al_all,
             "complete": lambda: ctx.cl_all}
    degrees = table[prop]() if prop in table else ctx.map_space(lambda L: ctx.batch(prop, L))
    picks = _top(degrees, top_n)
    rows = ctx.rows_at(picks)
    return [(Labelling.from_row(taf, r), _tv(ctx, degrees[i])) for r, i in zip(rows, picks)]


def default_threads() -> int:
    env = os.environ.get("TAF_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1
