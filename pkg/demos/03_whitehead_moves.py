"""
Generators of Aut(A_Γ) and Whitehead moves
==========================================

Transvections, partial conjugations and τ-maps are built from their
definitions.  Type (2) Whitehead moves are enumerated and filtered by the
relator test.
"""
import numpy as np

from raagtool.autos import (
    abelianize,
    compose,
    enumerate_whitehead,
    make_generator,
    sym0,
)
from raagtool.graphs import Graph, discrete

g = Graph(
    ["w", "a1", "a2", "a3", "b1", "b2", "b3"],
    [("a1", "a2"), ("a1", "a3"), ("a2", "a3"), ("b1", "b2"), ("b1", "b3"), ("b2", "b3")],
)
c = make_generator(g, "pconj w {a1,a2,a3}")
print(c.name(), c.image_strings())
print("acts trivially on homology:", np.array_equal(abelianize(c), np.eye(7, dtype=int)))

moves = enumerate_whitehead(g)
print(len(moves), "Whitehead moves;", sum(1 for m in moves if m.kind[2] == 1), "with multiplier w")
print("class-preserving graph symmetries:", len(sym0(g)))

d = discrete(2)
t = make_generator(d, "trans v1 v2")
print("t t:", compose(t, t).image_strings())
print("abelianized:\n", abelianize(t))
