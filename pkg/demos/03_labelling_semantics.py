"""
Grading labellings
==================

Every labelling of a framework gets a degree for consistency, admissibility,
stability, completeness, preference and groundedness.  Search is exhaustive.
"""
import numpy as np

from tafkit import TAF, EvalContext, Labelling, Proposition, SchemeApplication, TruthGrid
from tafkit import best_labellings, builtin_scheme, semantics

ded, mex = builtin_scheme("deductive-support"), builtin_scheme("mutual-exclusion-attack")
props = [Proposition(p, "illocution", p) for p in ("rain", "wet", "dry")]
apps = [SchemeApplication(ded.id, ["rain"], "wet"), SchemeApplication(mex.id, ["wet"], "dry")]
taf = TAF(props, [ded, mex], apps, {}, TruthGrid(2))
ctx = EvalContext(taf)

l = Labelling.from_values(taf, {"rain": 1, "wet": 1, "dry": 0})
for prop in semantics.PROPERTIES:
    print(f"{prop:12}", semantics.evaluate_property(ctx, l, prop))

print("\ntop grounded labellings:")
for lab, deg in best_labellings(ctx, "grounded", 3):
    print(" ", deg, dict(lab.to_json()))

# consistency over the whole space, 27 labellings on k=2
print("\nconsistency histogram:", np.bincount(ctx.co_all, minlength=3))
