import itertools
import random

import pytest

from tafkit import dsl, graph
from tafkit.fuzzy import TruthGrid, TruthValue
from tafkit.model import (TAF, BeliefPredicate, ComplexSchemeApplication, CompositionError,
                          Proposition, Scheme, SchemeApplication, builtin_scheme, compose,
                          enumerate_complex, monotonicity_degree, validate)


def props(*ids, kind="illocution"):
    return [Proposition(i, kind, i) for i in ids]


def chain_taf(k=4):
    """a supports b, b supports c."""
    s = builtin_scheme("deductive-support")
    return TAF(props("a", "b", "c"), [s],
               [SchemeApplication(s.id, ["a"], "b", id="ab"),
                SchemeApplication(s.id, ["b"], "c", id="bc")], {}, TruthGrid(k))


def test_brexit_fixture_validates(brexit_graph):
    assert validate(graph.project(brexit_graph)) == []


def test_arity_mismatch():
    s = Scheme.from_text("s3", "support", 3, 0, "p1 & p2 & p3 -> c")
    taf = TAF(props("a", "b", "c"), [s], [SchemeApplication("s3", ["a", "b"], "c")])
    assert [v.rule for v in validate(taf)] == ["ArityMismatch"]


def test_belief_on_illocution():
    taf = TAF(props("a", "b"), [], [], {("a", "b"): BeliefPredicate.tent("1/2")})
    assert [v.rule for v in validate(taf)] == ["BeliefOnNonEntity"]


def test_other_violations():
    s = builtin_scheme("deductive-support")
    taf = TAF(props("a", "a"), [s, Scheme.from_text("z", "support", 1, 0, "p1 & 1/3 -> c")],
              [SchemeApplication("nope", ["a"], "b"), SchemeApplication(s.id, ["a"], "ghost")])
    rules = {v.rule for v in validate(taf)}
    assert {"DuplicateId", "UnknownScheme", "DanglingId", "OffGridConstant"} <= rules


def test_user_non_monotone_scheme_is_only_a_warning():
    bad = Scheme.from_text("bad", "support", 1, 0, "!p1")
    taf = TAF(props("a", "b"), [bad], [SchemeApplication("bad", ["a"], "b")])
    (v,) = validate(taf)
    assert v.rule == "NonMonotoneScheme" and v.severity == "warning"


@pytest.mark.parametrize("name", sorted(dsl.BUILTIN_SCHEMES))
@pytest.mark.parametrize("k", [2, 4])
def test_builtins_monotone(name, k):
    assert monotonicity_degree(builtin_scheme(name), TruthGrid(k)) == TruthGrid(k).top


def _brute_monotonicity(scheme, k):
    """Direct transcription of the support/attack constraint with Fractions."""
    from oracles import l_and, l_imp, grid
    g = grid(k)
    sig = {}
    for p in itertools.product(g, repeat=scheme.arity):
        for c in g:
            sig[p, c] = dsl.evaluate(scheme.sigma, [TruthValue(int(x * k), k) for x in p],
                                     [TruthValue(0, k)] * scheme.exception_arity,
                                     TruthValue(int(c * k), k)).fraction
    worst = 1
    for p, q in itertools.product(itertools.product(g, repeat=scheme.arity), repeat=2):
        leq = min(l_imp(a, b) for a, b in zip(p, q))
        for c in g:
            if scheme.kind == "support":
                inner = max(l_and(l_imp(c, c2), l_imp(sig[p, c], sig[q, c2])) for c2 in g)
            else:
                inner = max(l_and(l_imp(c2, c), l_imp(sig[p, c], sig[q, c2])) for c2 in g)
            worst = min(worst, l_imp(leq, inner))
    return worst


def test_non_monotone_table_scheme():
    # one premise, interpretation decreasing in the premise
    bad = Scheme.from_text("decreasing", "support", 1, 0, "!p1")
    deg = monotonicity_degree(bad, TruthGrid(4))
    assert deg < TruthGrid(4).top
    assert deg.fraction == _brute_monotonicity(bad, 4)


@pytest.mark.parametrize("text,kind,arity", [
    ("wavg(1/2:p1, 1/2:p2) -> c", "support", 2),
    ("p1 & 1/2 -> !c", "attack", 1),
    ("p1 <-> c", "support", 1),
    ("min(p1, !p2) -> c", "support", 2),
])
def test_monotonicity_matches_brute_force(text, kind, arity):
    s = Scheme.from_text("s", kind, arity, 1, text)
    assert monotonicity_degree(s, TruthGrid(4)).fraction == _brute_monotonicity(s, 4)


# composition -------------------------------------------------------------------

def _atom(scheme, premises, conclusion, exceptions=()):
    return ComplexSchemeApplication.atomic(
        SchemeApplication(scheme.id, premises, conclusion, exceptions), scheme)


def test_compose_arity_example():
    s = Scheme.from_text("s", "support", 2, 1, "p1 & p2 -> c")
    t = Scheme.from_text("t", "attack", 3, 0, "!(p1 & p2 & p3 & c)")
    inner = _atom(s, ["v1", "v2"], "u2", ["e1"])
    outer = _atom(t, ["u1", "u2", "u3"], "x")
    comp = compose(inner, 2, outer)
    assert (comp.arity, comp.exception_arity) == (4, 1)
    assert comp.premises == ("u1", "v1", "v2", "u3")
    assert comp.kind == "attack"


def test_unary_support_preserves_arity():
    s = builtin_scheme("deductive-support")
    t = Scheme.from_text("t", "support", 3, 2, "p1 & p2 & p3 -> c")
    comp = compose(_atom(s, ["z"], "b"), 2, _atom(t, ["a", "b", "c"], "x", ["f", "g"]))
    assert comp.arity == 3 and comp.exception_arity == 2


def test_compose_rejects_attack_inner_and_mismatch():
    att = builtin_scheme("mutual-exclusion-attack")
    sup = builtin_scheme("deductive-support")
    with pytest.raises(CompositionError):
        compose(_atom(att, ["a"], "b"), 1, _atom(sup, ["b"], "c"))
    with pytest.raises(CompositionError):
        compose(_atom(sup, ["a"], "q"), 1, _atom(sup, ["b"], "c"))
    with pytest.raises(CompositionError):
        compose(_atom(sup, ["a"], "b"), 2, _atom(sup, ["b"], "c"))


def test_composite_interpretation_brute_force():
    # sup_b (a -> b) & (b -> c), every argument tuple on k=4
    from oracles import l_and, l_imp, grid
    k = 4
    sup = builtin_scheme("deductive-support")
    comp = compose(_atom(sup, ["a"], "b"), 1, _atom(sup, ["b"], "c"))
    for a, c in itertools.product(range(k + 1), repeat=2):
        expected = max(l_and(l_imp(a / k if False else __import__("fractions").Fraction(a, k), b),
                             l_imp(b, __import__("fractions").Fraction(c, k))) for b in grid(k))
        got = comp.evaluate([TruthValue(a, k)], [], TruthValue(c, k))
        assert got.fraction == expected


def _random_scheme(rng, kind, name):
    arity = rng.randint(1, 3)
    exc = rng.randint(0, 2)
    return Scheme.from_text(name, kind, arity, exc, "p1 -> c")


def test_arity_laws_random():
    rng = random.Random(7)
    for n in range(100):
        s = _random_scheme(rng, "support", "s")
        t = _random_scheme(rng, rng.choice(["support", "attack"]), "t")
        i = rng.randint(1, t.arity)
        tp = [f"u{j}" for j in range(t.arity)]
        inner = _atom(s, [f"v{j}" for j in range(s.arity)], tp[i - 1],
                      [f"e{j}" for j in range(s.exception_arity)])
        outer = _atom(t, tp, "x", [f"f{j}" for j in range(t.exception_arity)])
        comp = compose(inner, i, outer)
        assert comp.arity == s.arity + t.arity - 1
        assert comp.exception_arity == s.exception_arity + t.exception_arity
        assert comp.kind == t.kind
        assert comp.exceptions == inner.exceptions + outer.exceptions


def test_enumerate_chain():
    taf = chain_taf()
    assert len(enumerate_complex(taf, 0)) == 2
    out = enumerate_complex(taf, 1)
    assert len(out) == 3
    (comp,) = [c for c in out if not c.is_atomic]
    assert comp.premises == ("a",) and comp.conclusion == "c"
    assert enumerate_complex(taf, 5) == out


def test_enumerate_self_loop_terminates():
    s = builtin_scheme("deductive-support")
    taf = TAF(props("p"), [s], [SchemeApplication(s.id, ["p"], "p")])
    out = enumerate_complex(taf, 3)
    assert sorted(c.depth for c in out if not c.is_atomic) == [1, 2, 3]


def test_enumerate_monotone_and_stable(brexit_graph):
    taf = graph.project(brexit_graph)
    prev = []
    for d in range(4):
        cur = enumerate_complex(taf, d)
        assert cur[:len(prev)] == prev
        assert [c.signature() for c in cur] == [c.signature() for c in enumerate_complex(taf, d)]
        prev = cur


def test_belief_shapes():
    g = TruthGrid(4)
    t = [TruthValue(i, 4) for i in range(5)]
    assert [b.numerator for b in map(BeliefPredicate.tent("3/4"), t)] == [1, 2, 3, 4, 3]
    assert [b.numerator for b in map(BeliefPredicate.at_least("1/2"), t)] == [2, 3, 4, 4, 4]
    assert [b.numerator for b in map(BeliefPredicate.at_most("1/2"), t)] == [4, 4, 4, 3, 2]
    assert [b.numerator for b in map(BeliefPredicate(), t)] == [4] * 5
    table = BeliefPredicate.from_table({v.fraction: "1/4" for v in g.values})
    assert list(table.row(g)) == [1] * 5
