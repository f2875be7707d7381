"""
The transvection matrix group and property (T)
==============================================

Property (T) is decided by (B2).  When it fails with singleton classes a
character on the matrix generators is produced; on SL(2, Z) the naive
character is refuted by a short identity word.
"""
import numpy as np

from raagtool.graphs import discrete, path
from raagtool.matrices import (
    congruence_clear_offdiagonal,
    decide_property_T,
    elementary,
    falsify_character,
    h_generators,
    structure_report,
)
from raagtool.relations import ZCharacter

for g, name in ((path(4), "P4"), (discrete(3), "D3"), (discrete(2), "D2")):
    d = decide_property_T(g)
    print(name, d.has_T, d.diagnostic, d.b2_witness_pair)

g = path(4)
h = h_generators(g)
print("structure:", structure_report(h))

d2 = discrete(2)
naive = ZCharacter(d2, {("T", 0, 1): 1}, "H")
cx = falsify_character(d2, naive, budget=12)
print("counterexample:", cx.text(h_generators(d2)), "sum", cx.total)

m = np.eye(4, dtype=np.int64).astype(object)
s, t = h.gens[0]
m[s, t] = 6
factors = congruence_clear_offdiagonal(h, m, 3)
print("clearing factors:", factors)
acc = m
for s, t, k in factors:
    acc = elementary(4, s, t, k).dot(acc)
print("cleared to identity:", np.array_equal(acc, np.eye(4, dtype=int)))
