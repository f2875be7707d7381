"""
Solving the word problem in A_Γ
===============================

Normal forms make equality a string comparison.  A breadth-first search
over elementary moves serves as the independent check.
"""
from raagtool.graphs import Graph, path
from raagtool.words import (
    brute_force_equal,
    commutator,
    format_word,
    normal_form,
    parse_word,
    words_equal,
)

g = path(4)  # v1 - v2 - v3 - v4
w = parse_word(g, "v3 v1 v2 v2^-1 v4 v3^-1 v1")
nf = normal_form(g, w)
print(format_word(g, w), "->", format_word(g, nf))

# v1 and v2 are adjacent and commute; v1 and v3 are not.
a, b = parse_word(g, "v1 v3"), parse_word(g, "v3 v1")
print("v1 v3 == v3 v1:", words_equal(g, a, b), brute_force_equal(g, a, b, radius=2))
a, b = parse_word(g, "v1 v2"), parse_word(g, "v2 v1")
print("v1 v2 == v2 v1:", words_equal(g, a, b))

free = Graph(["x", "y"])
print("[x, y] =", format_word(free, commutator(free, (1,), (2,))))
