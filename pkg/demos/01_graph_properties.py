"""
Domination, graph properties and product decompositions
=======================================================

Start with a graph, read off its domination classes, test (B1), (B2) and
(NL), and split A_Γ into free and abelian factors when (B) holds.
"""
from raagtool.graphs import (
    Graph,
    check_properties,
    complete,
    compute_domination,
    decompose,
    discrete,
    find_indicability_witness,
    join,
    path,
)

# A vertex w beside two triangles.  w has empty link, so w sits below everyone.
g = Graph(
    ["w", "a1", "a2", "a3", "b1", "b2", "b3"],
    [("a1", "a2"), ("a1", "a3"), ("a2", "a3"), ("b1", "b2"), ("b1", "b3"), ("b2", "b3")],
)
dom = compute_domination(g)
print("classes in ascending order:", [sorted(c) for c in dom.classes])
print("arrows between classes:", sorted((j, i) for j, i in dom.arrows if j != i))

rep = check_properties(g)
print("B1", rep.b1, "B2", rep.b2, "NL", rep.nl, "witness", rep.nl_witness)

# w is minimal and Γ − st(w) falls apart into the two triangles.
print("indicability witness:", find_indicability_witness(g))

# The join of a triangle with three isolated vertices satisfies (B).
h = join(complete(3, "k"), discrete(3))
print("join:", decompose(h))

# Paths: P7 has a witness at its centre, P5 does not.
for n in (5, 7):
    print(f"P{n}:", find_indicability_witness(path(n)))
