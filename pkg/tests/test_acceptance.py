"""Acceptance suite: one test per criterion, summarised as PASS/FAIL lines at the end of the run."""
import itertools
import json
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from oracles import grid as frac_grid, l_and, l_imp, mutual_exclusion
from tafkit import actors, cli, dung, graph, semantics
from tafkit.fuzzy import TruthGrid, TruthValue, luk_iff, luk_implies
from tafkit.model import (TAF, BeliefPredicate, ComplexSchemeApplication, Proposition, Scheme,
                          SchemeApplication, builtin_scheme, compose, monotonicity_degree, validate)
from tafkit.semantics import EvalContext, Labelling
from conftest import GOLDEN

KINDS = ("admissible", "stable", "complete", "preferred", "grounded")


def dung_corpus():
    """Every AAF over at most 3 arguments, then 200 seeded random AAFs over at most 6."""
    corpus = []
    for n in range(4):
        args = "abc"[:n]
        pairs = list(itertools.product(args, repeat=2))
        for mask in range(1 << len(pairs)):
            corpus.append(dung.DungAF(args, [pr for i, pr in enumerate(pairs) if mask >> i & 1]))
    rng = random.Random(2024)
    for _ in range(200):
        n = rng.randint(1, 6)
        args = [f"a{i}" for i in range(n)]
        p = rng.random() * 0.5
        corpus.append(dung.DungAF(args, [(a, b) for a in args for b in args if rng.random() < p]))
    return corpus


CORPUS = dung_corpus()


def correspondence_report(threads):
    """Per AAF and kind: the accepted sets whose crisp labelling scores 1, as JSON text."""
    lines = []
    for af in CORPUS:
        ctx = EvalContext(dung.embed(af), threads=threads)
        rows = ctx.rows(0, ctx.space_size)
        entry = {"af": af.to_json()}
        for kind in KINDS:
            deg = ctx.map_space(lambda L: ctx.batch(kind, L))
            entry[kind] = [[a for a, v in zip(af.arguments, rows[i]) if v]
                           for i in np.nonzero(deg == 1)[0]]
        lines.append(json.dumps(entry, sort_keys=True))
    return "\n".join(lines)


@pytest.mark.criterion("1 Lukasiewicz algebra")
def test_lukasiewicz_algebra():
    start = time.perf_counter()
    k = 20
    vals = TruthGrid(k).values
    assert len(vals) ** 2 == 441
    for a, b in itertools.product(vals, repeat=2):
        assert ~(a & b) == (~a | ~b)
        assert ~(a | b) == (~a & ~b)
        assert ~~a == a
        assert luk_implies(a, b) == (~a | b)
        assert luk_iff(a, b).fraction == 1 - abs(a.fraction - b.fraction)
    assert time.perf_counter() - start < 1.0


@pytest.mark.criterion("2 Dung correspondence")
def test_dung_correspondence():
    start = time.perf_counter()
    assert sum(1 for af in CORPUS[:-200] if len(af.arguments) == 3) == 512
    report = correspondence_report(threads=1)
    for af, line in zip(CORPUS, report.splitlines()):
        entry = json.loads(line)
        for kind in KINDS:
            want = sorted(sorted(e) for e in dung.extensions(af, kind))
            assert sorted(sorted(s) for s in entry[kind]) == want, (af, kind)
    assert time.perf_counter() - start < 120


@pytest.mark.criterion("3 inclusion chain")
def test_inclusion_chain():
    for af in CORPUS:
        st, pr, co, ad = (set(dung.extensions(af, k))
                          for k in ("stable", "preferred", "complete", "admissible"))
        assert st <= pr <= co <= ad, af
        assert dung.extensions(af, "grounded") == [dung.grounded_fixpoint(af)]


@pytest.mark.criterion("4 scheme monotonicity")
def test_monotonicity():
    from tafkit.dsl import BUILTIN_SCHEMES
    for k in (2, 4):
        for name in BUILTIN_SCHEMES:
            assert monotonicity_degree(builtin_scheme(name), TruthGrid(k)).numerator == k, name
        bad = Scheme.from_text("decreasing", "support", 1, 0, "!p1")
        assert monotonicity_degree(bad, TruthGrid(k)).numerator < k


def _atom(scheme, premises, conclusion, exceptions=()):
    return ComplexSchemeApplication.atomic(
        SchemeApplication(scheme.id, premises, conclusion, exceptions), scheme)


@pytest.mark.criterion("5 composite schemes")
def test_composites():
    k = 4
    ded = builtin_scheme("deductive-support")
    comp = compose(_atom(ded, ["a"], "b"), 1, _atom(ded, ["b"], "c"))
    g = frac_grid(k)
    for a, c in itertools.product(range(k + 1), repeat=2):
        want = max(l_and(l_imp(Fraction(a, k), b), l_imp(b, Fraction(c, k))) for b in g)
        assert comp.evaluate([TruthValue(a, k)], [], TruthValue(c, k)).fraction == want

    rng = random.Random(5)
    for _ in range(100):
        s = Scheme.from_text("s", "support", rng.randint(1, 3), rng.randint(0, 2), "p1 -> c")
        t = Scheme.from_text("t", rng.choice(["support", "attack"]), rng.randint(1, 3),
                             rng.randint(0, 2), "p1 -> c" if rng.random() < .5 else "p1 -> !c")
        i = rng.randint(1, t.arity)
        tp = [f"u{j}" for j in range(t.arity)]
        inner = _atom(s, [f"v{j}" for j in range(s.arity)], tp[i - 1],
                      [f"e{j}" for j in range(s.exception_arity)])
        outer = _atom(t, tp, "x", [f"f{j}" for j in range(t.exception_arity)])
        out = compose(inner, i, outer)
        assert out.arity == s.arity + t.arity - 1
        assert out.exception_arity == s.exception_arity + t.exception_arity
        assert out.kind == t.kind


@pytest.mark.criterion("6 actor suite")
def test_actors(brexit_graph):
    taf = graph.project(brexit_graph, graph.ProjectionConfig(grid=10))
    ctx = EvalContext(taf, composition_depth=0)
    for x, y in itertools.product(taf.entities, repeat=2):
        assert actors.similarity(ctx, x, y) == actors.similarity(ctx, y, x)
        if x == y:
            assert actors.similarity(ctx, x, y).numerator == 10

    mex = builtin_scheme("mutual-exclusion-attack")
    two = TAF([Proposition("p", "illocution"), Proposition("q", "illocution"),
               Proposition("x", "entity")], [mex], [SchemeApplication(mex.id, ["q"], "p")],
              {("x", "p"): BeliefPredicate.tent(1), ("x", "q"): BeliefPredicate.tent(1)},
              TruthGrid(2))
    exhaustive = max(l_and(mutual_exclusion(q, p), min(p, q))
                     for p, q in itertools.product(frac_grid(2), repeat=2))
    r = actors.rationality(EvalContext(two), "x").fraction
    assert r == exhaustive and r <= Fraction(1, 2)

    no_ills = TAF([Proposition("x", "entity")], [], [], {}, TruthGrid(2))
    l = Labelling.from_values(no_ills, {"x": 1})
    assert actors.trust_compliance(EvalContext(no_ills), l, "x").numerator == 2
    no_ents = TAF([Proposition("p", "illocution")], [], [], {}, TruthGrid(2))
    l = Labelling.from_values(no_ents, {"p": 1})
    assert actors.trust_compliance(EvalContext(no_ents), l, "observer").numerator == 0


def brexit_search(path, threads, capsys):
    code = cli.main(["search", str(path), "--property", "consistency", "--grid", "2",
                     "--depth", "1", "--format", "json", "--threads", str(threads)])
    assert code == 0
    return capsys.readouterr().out


@pytest.mark.criterion("7 Brexit end to end")
def test_brexit_end_to_end(brexit_path, capsys):
    start = time.perf_counter()
    g = graph.load(brexit_path)
    taf = graph.project(g, graph.ProjectionConfig(grid=2, composition_depth=1))
    assert validate(taf) == []
    out = brexit_search(brexit_path, 1, capsys)
    assert out == (GOLDEN / "brexit_search_consistency_k2.json").read_text(encoding="utf-8")
    assert time.perf_counter() - start < 60


@pytest.mark.criterion("8 determinism")
def test_determinism(brexit_path, capsys, monkeypatch):
    # small chunks so every framework is split across several workers
    monkeypatch.setattr(semantics, "CHUNK", 8)
    assert correspondence_report(1) == correspondence_report(4)
    monkeypatch.setattr(semantics, "CHUNK", 1 << 12)
    assert brexit_search(brexit_path, 1, capsys) == brexit_search(brexit_path, 4, capsys)
