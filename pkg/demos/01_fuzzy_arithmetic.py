"""
Exact Łukasiewicz arithmetic on a finite grid
=============================================

Truth degrees live on the grid 0, 1/k, ..., 1 and are stored as integer
numerators, so nothing is ever rounded behind your back.
"""
import numpy as np

from tafkit import TruthGrid, luk_iff, luk_implies

g = TruthGrid(4)
a, b = g.value("3/4"), g.value(0.5)
print("a & b =", a & b, "  a | b =", a | b, "  ~a =", ~a)
print("a -> b =", luk_implies(a, b), "  a <-> b =", luk_iff(a, b))

# off-grid input is an error unless you ask for rounding (ties go down)
print("round(0.6) on k=4:", g.round(0.6), "  round(5/8):", g.round("5/8"))

# the whole implication table, as numerators
from tafkit.fuzzy import n_implies
x = np.arange(g.size)
print(n_implies(x[:, None], x[None, :], g.k))
