"""
Checking group identities under every convention
=================================================

Each identity is evaluated under both ways of reading a written product
and both commutator conventions.  Only one combination passes everywhere.
"""
import itertools

from raagtool.graphs import complete, discrete
from raagtool.relations import (
    check_crossed_lantern,
    check_m_transvection,
    check_tau_identity,
    convention_report,
)

d3 = discrete(3)
for m in range(4):
    print("crossed lantern, m =", m, check_crossed_lantern(d3, "v1", "v2", m).passing)

print("tau identity:", check_tau_identity(d3, "v1", "v2", "v3").passing)

for g, name in ((d3, "D3"), (complete(3), "K3")):
    for v, u, w in itertools.permutations(g.vertices, 3):
        res = check_m_transvection(g, v, u, w, 2)
        print(name, (v, u, w), "m=2:", res.holds)
        break

print("relation failures per reading:", convention_report(d3))
