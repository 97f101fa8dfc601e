"""Ethos and pathos predicates over the entities of a T-AF."""
from __future__ import annotations

import numpy as np

from .fuzzy import TruthValue, n_and, n_iff, n_implies
from .model import ENTITY
from .semantics import EvalContext, Labelling, _row

__all__ = ["similarity", "agreement", "rationality", "justified_trust",
           "trust_compliance", "actor_report"]


def _entity(ctx: EvalContext, x: str) -> int:
    taf = ctx.taf
    j = taf.index.get(x)
    if j is None or taf.propositions[j].kind != ENTITY:
        raise KeyError(f"unknown entity {x!r}")
    return j


def _observer(ctx: EvalContext, x: str) -> None:
    # an id outside P is an observer with no voiced beliefs; a non-entity proposition is not
    j = ctx.taf.index.get(x)
    if j is not None and ctx.taf.propositions[j].kind != ENTITY:
        raise KeyError(f"{x!r} is a proposition, not an entity")


def _tv(ctx, v) -> TruthValue:
    return TruthValue(int(v), ctx.k)


def _agreement_batch(ctx: EvalContext, L: np.ndarray, rows: np.ndarray) -> np.ndarray:
    # rows[p, t]: belief on proposition p at grid point t
    if ctx.n == 0:
        return np.full(len(L), ctx.k, dtype=np.int64)
    vals = rows[np.arange(ctx.n)[None, :], L]
    return vals.min(axis=1)


def similarity(ctx: EvalContext, x: str, y: str) -> TruthValue:
    """Infimum over propositions and grid points of ``O_x(p, t) <-> O_y(p, t)``."""
    _entity(ctx, x)
    _entity(ctx, y)
    bx, by = ctx.taf.belief_rows(x), ctx.taf.belief_rows(y)
    return _tv(ctx, n_iff(bx, by, ctx.k).min(initial=ctx.k))


def agreement(ctx: EvalContext, l: Labelling, x: str) -> TruthValue:
    _entity(ctx, x)
    L = _row(ctx, l)
    return _tv(ctx, _agreement_batch(ctx, L, ctx.taf.belief_rows(x))[0])


def rationality(ctx: EvalContext, x: str) -> TruthValue:
    """Best consistent labelling that ``x`` agrees with: ``sup_l Co(l) & Ag(l, x)``."""
    _entity(ctx, x)
    rows = ctx.taf.belief_rows(x)
    co = ctx.co_all
    ag = ctx.map_space(lambda L: _agreement_batch(ctx, L, rows))
    return _tv(ctx, n_and(co, ag, ctx.k).max(initial=0))


def _trusted_agree_batch(ctx: EvalContext, L: np.ndarray, x: str) -> np.ndarray:
    k = ctx.k
    taf = ctx.taf
    bx = taf.belief_rows(x)
    out = np.full(len(L), k, dtype=np.int64)
    for y in taf.entities:
        jy = taf.index[y]
        ly = L[:, jy]
        trust = n_and(bx[jy][ly], ly, k)
        ag_y = _agreement_batch(ctx, L, taf.belief_rows(y))
        np.minimum(out, n_implies(trust, ag_y, k), out=out)
    return out


def justified_trust(ctx: EvalContext, x: str) -> TruthValue:
    """``sup_l Co(l) & inf_y ((O_x(y, l(y)) & l(y)) -> Ag(l, y))``."""
    _entity(ctx, x)
    co = ctx.co_all
    guard = ctx.map_space(lambda L: _trusted_agree_batch(ctx, L, x))
    return _tv(ctx, n_and(co, guard, ctx.k).max(initial=0))


def trust_compliance(ctx: EvalContext, l: Labelling, x: str) -> TruthValue:
    """``inf_{p illocution} sup_y O_x(y, l(y)) & l(y) & O_y(p, l(p))``.

    ``x`` may also be an id outside the framework: an observer who voices no
    beliefs, which keeps the empty-entity case well defined.
    """
    _observer(ctx, x)
    k = ctx.k
    taf = ctx.taf
    row = _row(ctx, l)[0]
    bx = taf.belief_rows(x)
    worst = k
    for p in taf.illocutions:
        jp = taf.index[p]
        best = 0
        for y in taf.entities:
            jy = taf.index[y]
            by = taf.belief_rows(y)
            val = n_and(n_and(int(bx[jy][row[jy]]), int(row[jy]), k), int(by[jp][row[jp]]), k)
            best = max(best, int(val))
        worst = min(worst, best)
    return _tv(ctx, worst)


def actor_report(ctx: EvalContext, labellings: dict[str, Labelling] | None = None) -> dict:
    """Per-actor profile: similarity matrix, rationality, justified trust,
    and trust compliance for each supplied labelling."""
    ents = ctx.taf.entities
    report = {
        "grid": ctx.k,
        "entities": list(ents),
        "similarity": {x: {y: str(similarity(ctx, x, y)) for y in ents} for x in ents},
        "actors": {},
    }
    for x in ents:
        entry = {
            "rationality": str(rationality(ctx, x)),
            "justified_trust": str(justified_trust(ctx, x)),
        }
        if labellings:
            entry["trust_compliance"] = {
                name: str(trust_compliance(ctx, l, x)) for name, l in labellings.items()}
        report["actors"][x] = entry
    return report
