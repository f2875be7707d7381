"""
A surjection onto Z with a relation certificate
================================================

On a graph with a minimal vertex w whose star complement is disconnected,
π = π_Y − π_Z is checked against every enumerated relation instance.
"""
import time

from raagtool.graphs import find_indicability_witness, path
from raagtool.relations import build_surjection, check_inner_kernel

g = path(7)
w, Y, Z = find_indicability_witness(g)
start = time.perf_counter()
pi = build_surjection(g, w, Y, Z)
print(f"{sum(pi.certificate_counts.values())} instances in {time.perf_counter() - start:.2f}s")
print("per type:", pi.certificate_counts)
print("nonzero values:", pi.named_values())
print("vanishes on inner automorphisms:", check_inner_kernel(g, pi))
