"""
Isolated vertices in G(n, N) and property (NL)
==============================================

With N = n ln n / 2 + c n edges the isolated-vertex count is close to
Poisson(e^{-2c}).  Three isolated vertices already give property (NL).
"""
from raagtool.randomgraphs import ExperimentConfig, run_experiment

res = run_experiment(ExperimentConfig(n=200, c=0, samples=500, seed=7))
print("N =", res.N)
for k, count in res.isolated_histogram.items():
    print(f"{k:2d} isolated: {count / 500:.3f}  (Poisson {res.poisson_reference[k]:.3f})")
print(f"TV distance {res.tv_distance:.4f}")
print(f"NL frequency {res.empirical_nl_frequency:.3f}, bound {res.nl_lower_bound:.4f}")
