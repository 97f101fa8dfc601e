"""
Who is rational, who is trusted
===============================

Actors are propositions too.  Their beliefs come from commitment and trust
weights in the graph file.
"""
from tafkit import EvalContext, actors, fixture_path, graph

g = graph.load(fixture_path())
taf = graph.project(g, graph.ProjectionConfig(grid=2, composition_depth=1))
ctx = EvalContext(taf, composition_depth=1)

print("similarity(A, B) =", actors.similarity(ctx, "A", "B"))
for x in taf.entities:
    print(x, "rationality", actors.rationality(ctx, x),
          " justified trust", actors.justified_trust(ctx, x))

# a witness for B's rationality: the first labelling reaching the supremum
import numpy as np
from tafkit import Labelling
from tafkit.fuzzy import n_and

# belief table: rows[p, t] is B's belief in proposition p at grid point t
rows = taf.belief_rows("B")
ag = ctx.map_space(lambda L: rows[np.arange(ctx.n), L].min(axis=1))
score = n_and(ctx.co_all, ag, ctx.k)
w = Labelling.from_row(taf, ctx.rows_at(np.array([score.argmax()]))[0])
print("witness:", {p: str(v) for p, v in w.items() if v.numerator})
