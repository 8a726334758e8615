from __future__ import annotations

import random
from fractions import Fraction

import pytest

from homaloidal import linalg
from homaloidal.covar import (
    cofactor_sum_explicit, concentration_at, nonedge_ones_minors, rank_constraint_minors,
    rank_constraint_minors_labeled, rk_generators, rk_generators_labeled, sample_model_point,
    sample_model_points, sigma_ring, sigma_var, verify_vanishing,
)
from homaloidal.errors import IndexOutOfRange
from homaloidal.graph import DIAMOND_GRAPH, Graph
from homaloidal.poly import parse

from oracles import atlas_corpus

DIAMOND_K1 = parse("s_2_4*s_3_3 - s_2_3*s_3_4")
DIAMOND_K2 = parse("s_1_3^2 - s_1_3*s_1_4 - s_1_1*s_3_3 + s_1_4*s_3_3 + s_1_1*s_3_4 - s_1_3*s_3_4")


def same_up_to_sign(p, q):
    return p == q or p == -q


def test_sigma_names():
    assert sigma_var(3, 1) == "s_1_3"
    assert sigma_ring(DIAMOND_GRAPH, 2).variables == ("s_1_1", "s_1_3", "s_1_4", "s_3_3", "s_3_4", "s_4_4")


def test_diamond_k1_generator():
    gens = rk_generators(DIAMOND_GRAPH, 1)
    assert any(same_up_to_sign(g, DIAMOND_K1) for g in gens)


def test_diamond_k2_cofactor_sum():
    gens = rk_generators_labeled(DIAMOND_GRAPH, 2)
    sums = [g for g in gens if g.family == "cofactor_sum"]
    assert [g.rows_removed for g in sums] == [(4,)]
    assert same_up_to_sign(sums[0].poly, DIAMOND_K2)
    assert sums[0].poly == cofactor_sum_explicit(DIAMOND_GRAPH, 2, 4)


def test_diamond_k2_neighbour_minor():
    labeled = rank_constraint_minors_labeled(DIAMOND_GRAPH, 2)
    neigh = [p for kind, _, p in labeled if kind == "neighbours"]
    assert any(same_up_to_sign(p, DIAMOND_K2) for p in neigh)


def test_c4_ones_row_minors_need_the_hypothesis():
    # both 2 and 4 neighbour 1, so the non-edge {2, 4} yields no constraint
    c4 = Graph.cycle(4)
    sample = sample_model_point(c4, 1, seed=3)
    forced = nonedge_ones_minors(c4, 1, 2, 4) + nonedge_ones_minors(c4, 1, 4, 2)
    assert not verify_vanishing(forced, [sample]).all_zero
    assert len(rank_constraint_minors(c4, 1)) == 1


def test_sample_inverts_concentration():
    g = Graph.from_pairs(5, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1), (2, 5)])
    s = sample_model_point(g, 3, seed=11)
    K = concentration_at(g, 3, s.x)
    prod = linalg.matmul(K, s.sigma)
    assert prod == linalg.identity(len(K))
    assert all(1 <= w <= 1000 for w in s.x.values())


def test_samples_are_reproducible():
    a = sample_model_points(DIAMOND_GRAPH, 1, 5, seed=7)
    b = sample_model_points(DIAMOND_GRAPH, 1, 5, seed=7)
    assert [s.x for s in a] == [s.x for s in b]
    assert a[0].x != sample_model_points(DIAMOND_GRAPH, 1, 1, seed=8)[0].x


@pytest.mark.parametrize("g", atlas_corpus(5)[::3], ids=lambda g: f"n{g.n}m{len(g.edges)}")
def test_generators_vanish_on_model(g):
    samples_by_k = {k: sample_model_points(g, k, 10, seed=k) for k in g.vertices}
    for k in g.vertices:
        polys = rk_generators(g, k) + rank_constraint_minors(g, k)
        report = verify_vanishing(polys, samples_by_k[k])
        assert report.all_zero, report.to_json()


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_generators_are_not_trivial(k):
    # a generic symmetric matrix is not in the model
    rng = random.Random(k)
    ring = sigma_ring(DIAMOND_GRAPH, k)
    pt = {v: Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for v in ring.variables}
    polys = rk_generators(DIAMOND_GRAPH, k) + rank_constraint_minors(DIAMOND_GRAPH, k)
    if polys:
        assert any(p.eval(pt) != 0 for p in polys)


def test_complete_graph_has_no_generators():
    assert rk_generators(Graph.complete(4), 2) == []


def test_vanishing_report_counts_violations():
    s = sample_model_point(DIAMOND_GRAPH, 1, seed=0)
    report = verify_vanishing([parse("s_2_2")], [s])
    assert report.n_violations == 1 and not report.all_zero


def test_vertex_out_of_range():
    with pytest.raises(IndexOutOfRange):
        rk_generators(DIAMOND_GRAPH, 9)


@pytest.mark.parametrize("g, k", [(DIAMOND_GRAPH, 1), (Graph.cycle(5), 1), (Graph.path(5), 3),
                                  (Graph.from_pairs(5, [(1, 2), (2, 3), (3, 4), (4, 5), (1, 3), (2, 5)]), 2)])
def test_minor_family_vanishes_on_graphical_model(g, k):
    # Sigma = K^{-1} with K positive definite and zero on non-edges of G - k
    rng = random.Random(k)
    ring = sigma_ring(g, k)
    labels = ring.labels
    m = len(labels)
    K = [[Fraction(0)] * m for _ in range(m)]
    for a in range(m):
        for b in range(a + 1, m):
            if g.has_edge(labels[a], labels[b]):
                K[a][b] = K[b][a] = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    for a in range(m):
        K[a][a] = Fraction(10 * m + rng.randint(0, 9))
    S = linalg.inverse(K)
    pt = {sigma_var(labels[a], labels[b]): S[a][b] for a in range(m) for b in range(a, m)}
    minors = [gen.poly for gen in rk_generators_labeled(g, k) if gen.family == "minor"]
    assert all(p.eval(pt) == 0 for p in minors)
