import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import example_graph
from raagtool.graphs import Graph, all_graphs, check_properties, complete, discrete, path
from raagtool.matrices import (
    commutator_signs,
    congruence_clear_offdiagonal,
    decide_property_T,
    elementary,
    falsify_character,
    h_generators,
    mat_commutator,
    perfectness_witness,
    random_product,
    structure_report,
    verify_block_structure,
)
from raagtool.relations import ZCharacter
from raagtool.autos import abelianize, transvection


def w_k3():
    return Graph(["w", "a1", "a2", "a3"], [("a1", "a2"), ("a1", "a3"), ("a2", "a3")])


def test_generators_examples():
    h = h_generators(discrete(2))
    assert set(h.gens) == {(0, 1), (1, 0)} and h.blocks == ((0, 1),)
    g = example_graph()
    h = h_generators(g)
    assert h.blocks[0] == (0,)
    assert len(h.gens) == 18
    assert sum(1 for s, t in h.gens if t == 0) == 6
    assert h_generators(discrete(1)).gens == ()


def test_matrix_matches_abelianize():
    g = Graph("vw")
    h = h_generators(g)
    # t_vw adds v's image to w's row: I + E_{w,v}
    assert np.array_equal(abelianize(transvection(g, "v", "w")), h.matrix(1, 0))


@pytest.mark.parametrize("n", range(1, 6))
def test_generators_respect_arrows(n):
    for g in all_graphs(n):
        h = h_generators(g)
        for s, t in h.gens:
            assert h.admissible(s, t)
            assert verify_block_structure(h, h.matrix(s, t))


def test_block_structure_examples():
    g = example_graph()
    h = h_generators(g)
    assert verify_block_structure(h, np.eye(7, dtype=int))
    rng = np.random.default_rng(0)
    assert verify_block_structure(h, random_product(h, 20, rng))
    assert not verify_block_structure(h, elementary(7, 0, 1))
    with pytest.raises(ValueError):
        verify_block_structure(h, np.eye(3, dtype=int))


def test_admissible_block_pairs_transitive():
    for g in [example_graph(), path(5), w_k3(), Graph("xyz", [("x", "y")])]:
        arrows = h_generators(g).arrows
        for (a, b), (c, d) in itertools.product(arrows, repeat=2):
            if b == c:
                assert (a, d) in arrows


def test_perfectness_examples():
    h = h_generators(complete(3))
    for s, t in h.gens:
        l = perfectness_witness(h, s, t)
        assert l not in (None, s, t)
    g = example_graph()
    h = h_generators(g)
    l = perfectness_witness(h, 1, 0)
    assert l in (2, 3)
    assert np.array_equal(mat_commutator(h.matrix(1, l), h.matrix(l, 0)), h.matrix(1, 0))
    assert perfectness_witness(h_generators(discrete(2)), 0, 1) is None


def test_both_commutator_styles_are_positive():
    h = h_generators(complete(3))
    assert commutator_signs(h, 0, 1, 2) == {"a^-1 b^-1 a b": 1, "a b a^-1 b^-1": 1}


def test_decide_examples():
    assert decide_property_T(example_graph()).has_T
    d = decide_property_T(discrete(2))
    assert not d.has_T and d.character is None
    assert d.diagnostic == "two-element-class witness"
    assert d.b2_witness_pair == ("v1", "v2")
    assert decide_property_T(w_k3()).has_T
    # v1 ~ v3 on the path, and no third vertex sits between them
    d = decide_property_T(path(3))
    assert not d.has_T and d.b2_witness_pair == ("v1", "v3")


def test_singleton_witness_character():
    g = path(4)
    d = decide_property_T(g)
    assert not d.has_T and d.witness_class_sizes == (1, 1)
    v, w = d.b2_witness_pair
    assert d.character(("T", g.idx(w), g.idx(v))) == 1


@pytest.mark.parametrize("n", range(0, 6))
def test_has_t_is_b2(n):
    for g in all_graphs(n):
        assert decide_property_T(g).has_T == check_properties(g).b2


def test_falsify_examples():
    g = example_graph()
    assert falsify_character(g, ZCharacter(g, {}), budget=8) is None
    d2 = discrete(2)
    naive = ZCharacter(d2, {("T", 0, 1): 1}, "H")
    cx = falsify_character(d2, naive, budget=12)
    assert cx is not None and cx.total != 0
    assert "T_v1,v2" in cx.text(h_generators(d2))


def test_falsify_is_deterministic():
    d2 = discrete(2)
    naive = ZCharacter(d2, {("T", 0, 1): 1}, "H")
    assert falsify_character(d2, naive, budget=12, seed=4) == falsify_character(d2, naive, budget=12, seed=4)


def test_commutator_identity_word_sums_to_zero():
    h = h_generators(complete(3))
    word = [h.matrix(0, 1, -1), h.matrix(1, 2, -1), h.matrix(0, 1), h.matrix(1, 2), h.matrix(0, 2, -1)]
    m = np.eye(3, dtype=np.int64).astype(object)
    for x in word:
        m = m.dot(x)
    assert np.array_equal(m, np.eye(3, dtype=int))


def test_clearing_examples():
    g = example_graph()
    h = h_generators(g)
    m = elementary(7, 1, 0, 3)
    assert congruence_clear_offdiagonal(h, m, 3) == [(1, 0, -3)]
    m = np.eye(7, dtype=np.int64).astype(object)
    m[1, 0], m[4, 0] = 2, 4
    f = congruence_clear_offdiagonal(h, m, 2)
    assert len(f) == 2
    acc = m
    for s, t, k in f:
        acc = elementary(7, s, t, k).dot(acc)
    assert np.array_equal(acc, np.eye(7, dtype=int))


def test_clearing_errors():
    h = h_generators(example_graph())
    with pytest.raises(ValueError, match="arrow"):
        congruence_clear_offdiagonal(h, elementary(7, 0, 1, 2), 2)
    with pytest.raises(ValueError, match="divisible"):
        congruence_clear_offdiagonal(h, elementary(7, 1, 0, 3), 2)
    with pytest.raises(ValueError, match="diagonal"):
        congruence_clear_offdiagonal(h, elementary(7, 1, 2, 2), 2)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3, 5]))
def test_clearing_round_trip(seed, level):
    h = h_generators(path(5))
    rng = np.random.default_rng(seed)
    m = np.eye(h.n, dtype=np.int64).astype(object)
    for j, i in h.arrows:
        if i != j:
            for r in h.blocks[i]:
                for c in h.blocks[j]:
                    m[r, c] = level * int(rng.integers(-4, 5))
    acc = m
    for s, t, k in congruence_clear_offdiagonal(h, m, level):
        assert h.admissible(s, t) and k % level == 0
        acc = elementary(h.n, s, t, k).dot(acc)
    assert np.array_equal(acc, np.eye(h.n, dtype=int))


def test_structure_examples():
    r = structure_report(h_generators(w_k3()))
    assert r["class_sizes"] == [1, 3]
    assert r["case_ii"] and r["m_case_ii"] == 1
    r = structure_report(h_generators(complete(3)))
    assert r["case_i"] and r["case_ii"]
    h = h_generators(complete(3))
    assert set(r["N1"]) == set(h.gens) == set(r["N2"])


def test_structure_corner():
    # P4: v1 <= v3 with singleton classes first and last, arrow between them
    h = h_generators(path(4))
    r = structure_report(h)
    assert h.blocks[0] == (0,) and h.blocks[-1] == (2,)
    assert r["C"] == (2, 0)
    assert r["C"] in r["N1"] and r["C"] in r["N2"]
    assert not r["case_i"] and not r["case_ii"]
