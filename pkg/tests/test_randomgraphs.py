import math
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import chisquare

from raagtool.graphs import check_properties
from raagtool.randomgraphs import (
    ExperimentConfig,
    edge_count,
    isolated_distribution,
    nl_frequency,
    run_experiment,
    sample_gnN,
)


def test_edge_count():
    assert edge_count(500, 0) == round(250 * math.log(500))
    assert edge_count(500, 0) == 1554
    assert edge_count(10, -100) == 0
    assert edge_count(4, 100) == 6
    assert edge_count(0, 1) == 0


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(n=0)
    with pytest.raises(ValueError):
        ExperimentConfig(n=5, samples=0)
    with pytest.raises(ValueError):
        ExperimentConfig(n=4, N=7)
    assert ExperimentConfig(n=4, N=3).edges == 3


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 30), st.data())
def test_sample_has_exact_edge_count(n, data):
    N = data.draw(st.integers(0, n * (n - 1) // 2))
    g = sample_gnN(n, N, seed=data.draw(st.integers(0, 1000)))
    assert len(g.edges()) == N and g.n == n


def test_sample_is_seeded():
    assert sample_gnN(20, 30, 5).edges() == sample_gnN(20, 30, 5).edges()
    assert sample_gnN(20, 30, 5).edges() != sample_gnN(20, 30, 6).edges()
    with pytest.raises(ValueError):
        sample_gnN(3, 4, 0)


def test_uniform_over_edge_sets():
    # n=4, N=2: fifteen equally likely edge pairs
    counts = Counter(tuple(sample_gnN(4, 2, s).edges()) for s in range(3000))
    assert len(counts) == 15
    assert chisquare(list(counts.values())).pvalue > 0.001


def test_experiment_reproducible():
    cfg = ExperimentConfig(n=60, c=0.5, samples=200, seed=11)
    a, b = run_experiment(cfg), run_experiment(cfg)
    assert a.as_dict() == b.as_dict()
    assert sum(a.isolated_histogram.values()) == 200


def test_poisson_reference():
    res = isolated_distribution(ExperimentConfig(n=80, c=0, samples=100, seed=1))
    assert res.lambda_ == pytest.approx(1.0)
    assert res.poisson_reference[0] == pytest.approx(math.exp(-1))
    assert 0 <= res.tv_distance <= 1
    assert res.empirical_nl_frequency is None


def test_nl_bound_and_frequency():
    res = nl_frequency(ExperimentConfig(n=100, c=0, samples=200, seed=3))
    assert res.nl_lower_bound == pytest.approx(math.exp(-1) / 6)
    assert 0 <= res.empirical_nl_frequency <= 1
    assert "empirical_nl_frequency" in res.as_dict()


def test_three_isolated_vertices_give_nl():
    for s in range(200):
        g = sample_gnN(12, 6, s)
        if sum(1 for a in g.adj if not a) >= 3:
            assert check_properties(g).nl


def test_tv_of_point_mass_counts_the_tail():
    # complete graphs never have isolated vertices; TV to Poisson(1) is then 1 - e^-1
    res = isolated_distribution(ExperimentConfig(n=6, N=15, samples=10, seed=0))
    assert res.isolated_histogram == {0: 10}
    assert res.tv_distance == pytest.approx(1 - math.exp(-1), abs=1e-12)
