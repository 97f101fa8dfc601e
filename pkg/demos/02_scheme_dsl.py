"""
Writing scheme interpretations
==============================

A scheme interpretation is a small formula over premise slots p1.., exception
slots e1.. and the claim c.
"""
from tafkit import Scheme, TruthGrid, dsl, monotonicity_degree

g = TruthGrid(4)
expr = dsl.parse("p1 & p2 -> c", arity=2)
print(dsl.to_text(expr), "=", dsl.evaluate(expr, [g.value(1), g.value("3/4")], [], g.value("1/2")))

# weighted average, then exceptions: e1 being true switches the rule off
pos = Scheme.from_text("position-to-know", "support", 2, 1, "wavg(1/2:p1, 1/2:p2) -> c")
print("guarded form:", dsl.to_text(pos.sigma))
one, half, zero = g.value(1), g.value("1/2"), g.value(0)
print(pos.evaluate([one, half], [zero], half), pos.evaluate([one, half], [one], zero))

# errors point at the offending column
try:
    dsl.parse("p1 -> (c & p3", arity=2)
except dsl.SchemeError as err:
    print("error:", err)

# a support whose output falls as its premise rises is not monotone
for text in ["p1 -> c", "!p1"]:
    s = Scheme.from_text("s", "support", 1, 0, text)
    print(f"{text!r:10} monotonicity on k=4:", monotonicity_degree(s, TruthGrid(4)))
