import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tafkit.fuzzy import (GridMismatchError, OffGridError, TruthGrid, TruthValue, big_and,
                          big_or, luk_and, luk_iff, luk_implies, luk_neg, luk_or)


def tv(s, k=10):
    return TruthGrid(k).value(s)


def test_and_example():
    assert luk_and(tv("0.7"), tv("0.6")) == tv("0.3")


def test_implies_and_iff_examples():
    assert luk_implies(tv("0.9"), tv("0.5")) == tv("0.6")
    assert luk_iff(tv("0.8"), tv("0.3")) == tv("0.5")


@pytest.mark.parametrize("k", [1, 2, 4, 7])
def test_identity_and_annihilator(k):
    g = TruthGrid(k)
    for x in g:
        assert luk_and(g.top, x) == x
        assert luk_and(g.bottom, x) == g.bottom
        assert luk_neg(luk_neg(x)) == x


def test_mismatched_grids_rejected():
    with pytest.raises(GridMismatchError):
        luk_and(TruthValue(1, 2), TruthValue(1, 4))
    with pytest.raises(GridMismatchError):
        TruthValue(1, 2) < TruthValue(1, 4)


def test_big_operators():
    vals = [tv("0.2"), tv("0.9"), tv("0.5")]
    assert big_and(vals) == tv("0.2")
    assert big_or(vals) == tv("0.9")
    assert big_and([]) == TruthGrid(1).top
    assert big_or([]) == TruthGrid(1).bottom
    assert big_and([], TruthGrid(4)) == TruthValue(4, 4)
    assert big_or([tv("0.4")]) == tv("0.4")


def test_grid_shape():
    g = TruthGrid(5)
    assert len(g.values) == 6
    assert [v.fraction for v in g.values] == sorted(v.fraction for v in g.values)
    assert g.values[0].fraction == 0 and g.values[-1].fraction == 1


def test_value_parsing():
    g = TruthGrid(4)
    assert g.value("3/4") == g.value("0.75") == g.value(0.75) == g.value(Fraction(3, 4))
    with pytest.raises(OffGridError):
        g.value("1/3")
    with pytest.raises(OffGridError):
        TruthValue(5, 4)


def test_round_ties_down():
    g = TruthGrid(4)
    assert g.round("1/8") == TruthValue(0, 4)
    assert g.round("3/8") == TruthValue(1, 4)
    assert g.round("0.3") == TruthValue(1, 4)
    assert g.round("0.2") == TruthValue(1, 4)
    assert g.round(1) == g.top


def test_grid_closure_exhaustive():
    k = 6
    g = TruthGrid(k)
    for a, b in itertools.product(g, repeat=2):
        for op in (luk_and, luk_or, luk_implies, luk_iff):
            assert op(a, b).denominator == k


def test_monotonicity_exhaustive():
    g = TruthGrid(5)
    for a, a2, b in itertools.product(g, repeat=3):
        if a <= a2:
            assert luk_and(a, b) <= luk_and(a2, b)
            assert luk_or(a, b) <= luk_or(a2, b)
            assert luk_implies(a2, b) <= luk_implies(a, b)
            assert luk_implies(b, a) <= luk_implies(b, a2)


grids = st.integers(1, 30).flatmap(
    lambda k: st.lists(st.integers(0, k), min_size=2, max_size=6).map(
        lambda ns: [TruthValue(n, k) for n in ns]))


@given(grids)
def test_big_ops_permutation_invariant(vals):
    assert big_and(vals) == big_and(reversed(vals))
    assert big_or(vals) == big_or(sorted(vals))


@given(grids)
def test_de_morgan_and_implication(vals):
    a, b = vals[0], vals[1]
    assert luk_neg(luk_and(a, b)) == luk_or(luk_neg(a), luk_neg(b))
    assert luk_implies(a, b) == luk_or(luk_neg(a), b)
    assert (a & b) == luk_and(a, b) and ~a == luk_neg(a)
