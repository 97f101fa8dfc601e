"""
Classical Dung frameworks and their crisp embedding
===================================================
"""
from tafkit import EvalContext, dung

af = dung.DungAF("abcd", [("a", "b"), ("b", "c"), ("c", "a"), ("c", "d")])
for kind in dung.KINDS:
    print(f"{kind:14}", [sorted(e) for e in dung.extensions(af, kind)])

print("grounded by fixpoint:", sorted(dung.grounded_fixpoint(af)))

# at k=1 the fuzzy semantics give degree 1 exactly on the extensions
ctx = EvalContext(dung.embed(af))
rows = ctx.rows(0, ctx.space_size)
deg = ctx.map_space(lambda L: ctx.batch("complete", L))
print("complete, fuzzy:", [[a for a, v in zip(af.arguments, rows[i]) if v]
                           for i in range(len(deg)) if deg[i] == 1])
