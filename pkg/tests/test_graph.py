from __future__ import annotations

import json
import random
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from homaloidal import linalg
from homaloidal.errors import DisconnectedGraph, IndexOutOfRange, InvalidGraph, ParseError
from homaloidal.graph import (
    DIAMOND_GRAPH, Graph, is_chordal, is_perfect_elimination_ordering, laplacian,
    ml_degree_certificate, principal_minor, spanning_tree_poly, spanning_trees, symbolic_det,
)
from homaloidal.poly import parse

from oracles import atlas_corpus, brute_spanning_trees, has_chordless_cycle

SMALL = atlas_corpus(5)


@st.composite
def random_graphs(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_pairs(n, chosen)


def test_diamond_laplacian():
    L = laplacian(DIAMOND_GRAPH)
    assert L[0, 0] == parse("x_A + x_D + x_E")
    assert L[0, 1] == parse("-x_A")
    assert L[1, 3] == parse("0")
    assert L.is_symmetric()


def test_diamond_spanning_tree_poly():
    P = spanning_tree_poly(DIAMOND_GRAPH)
    assert len(P) == 8
    assert P.is_homogeneous() and P.total_degree() == 3
    assert P.coefficient({"x_A": 1, "x_B": 1, "x_C": 1}) == 1
    assert P.coefficient({"x_A": 1, "x_B": 1, "x_E": 1}) == 0


@pytest.mark.parametrize("g", SMALL, ids=lambda g: f"n{g.n}m{len(g.edges)}")
def test_spanning_trees_match_brute_force(g):
    assert set(spanning_trees(g)) == brute_spanning_trees(g)


@pytest.mark.parametrize("g", SMALL[::5], ids=lambda g: f"n{g.n}m{len(g.edges)}")
def test_matrix_tree_every_k(g):
    P = spanning_tree_poly(g)
    for k in g.vertices:
        assert symbolic_det(principal_minor(laplacian(g), k)) == P


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_cayley_count(n):
    assert len(spanning_trees(Graph.complete(n))) == n ** (n - 2)


@given(random_graphs(), st.data())
@settings(max_examples=40, deadline=None)
def test_laplacian_rows_sum_to_zero(g, data):
    pt = {v: data.draw(st.integers(-9, 9)) for v in g.edge_vars()}
    L = laplacian(g).evaluate(pt)
    assert all(sum(row) == 0 for row in L)


@given(random_graphs(5))
@settings(max_examples=40, deadline=None)
def test_tree_count_matches_kirchhoff(g):
    if g.n < 2 or not g.is_connected():
        return
    L = nx.laplacian_matrix(nx.Graph([(i, j) for i, j, _ in g.edges])).toarray()
    count = round(np.linalg.det(L[1:, 1:].astype(float)))
    assert spanning_tree_poly(g).eval({v: 1 for v in g.edge_vars()}) == count


def test_disconnected_graph():
    g = Graph.from_pairs(4, [(1, 2), (3, 4)])
    with pytest.raises(DisconnectedGraph):
        spanning_tree_poly(g)
    assert spanning_trees(g) == []


@pytest.mark.parametrize("edges", [
    [(1, 1)], [(1, 5)], [(1, 2), (2, 1)], [(1, 2, "a"), (2, 3, "a")],
])
def test_invalid_graphs(edges):
    with pytest.raises(InvalidGraph):
        Graph(3, tuple(edges))


def test_principal_minor_range():
    with pytest.raises(IndexOutOfRange):
        principal_minor(laplacian(DIAMOND_GRAPH), 5)


@pytest.mark.parametrize("g", SMALL + atlas_corpus(6)[len(SMALL):][::7], ids=lambda g: f"n{g.n}m{len(g.edges)}")
def test_chordal_matches_brute_force(g):
    chordal, peo = is_chordal(g)
    assert chordal == (not has_chordless_cycle(g))
    if chordal:
        assert is_perfect_elimination_ordering(g, peo)


@given(random_graphs())
@settings(max_examples=60, deadline=None)
def test_chordal_matches_networkx(g):
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from((i, j) for i, j, _ in g.edges)
    assert is_chordal(g)[0] == nx.is_chordal(h)


@pytest.mark.parametrize("g, expected", [
    (Graph.cycle(4), False), (DIAMOND_GRAPH, True), (Graph.cycle(3), True),
    (Graph.complete(5), True), (Graph.path(5), True), (Graph.cycle(6), False),
])
def test_chordal_examples(g, expected):
    assert is_chordal(g)[0] is expected


def test_certificates():
    assert ml_degree_certificate(DIAMOND_GRAPH).ml_degree == 1
    c5 = ml_degree_certificate(Graph.cycle(5))
    assert (c5.kind, c5.ml_degree) == ("cycle_eulerian", 11)
    assert ml_degree_certificate(Graph.cycle(3)).ml_degree == 1
    bowtie_free = Graph.from_pairs(5, [(1, 2), (2, 3), (3, 4), (4, 1), (4, 5)])
    assert ml_degree_certificate(bowtie_free).kind == "unknown"
    for k in DIAMOND_GRAPH.vertices:
        assert ml_degree_certificate(DIAMOND_GRAPH, k) == ml_degree_certificate(DIAMOND_GRAPH)


@given(random_graphs())
@settings(max_examples=40)
def test_json_round_trip(g):
    assert Graph.from_json(json.loads(json.dumps(g.to_json()))) == g


def test_text_format(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("4  # vertices\n1 2 x_A\n2 3\n3 4; 4 1\n")
    g = Graph.load(str(path))
    assert g.n == 4 and len(g.edges) == 4 and g.edge_name(1, 2) == "x_A"
    with pytest.raises(ParseError):
        Graph.from_text("four\n1 2\n")


@pytest.mark.parametrize("g", atlas_corpus(6)[::4], ids=lambda g: f"n{g.n}m{len(g.edges)}")
def test_spanning_tree_poly_shape(g):
    P = spanning_tree_poly(g)
    assert all(e <= 1 for exp in P.terms for e in exp)
    assert P.is_homogeneous() and P.total_degree() == g.n - 1


@pytest.mark.slow
def test_matrix_tree_seven_vertices():
    for h in nx.graph_atlas_g():
        if h.number_of_nodes() != 7 or not nx.is_connected(h):
            continue
        g = Graph.from_pairs(7, [(a + 1, b + 1) for a, b in h.edges()])
        P, L = spanning_tree_poly(g), laplacian(g)
        for k in g.vertices:
            assert symbolic_det(principal_minor(L, k)) == P


@given(st.integers(0, 10 ** 6), st.integers(1, 3), st.integers(1, 2), st.integers(1, 3))
@settings(max_examples=40)
def test_zero_block_inverse_identity(seed, ni, nj, nk):
    # K with K[I, K] = 0 has inverse N with N[I, K] = N[I, J] N[J, J]^{-1} N[J, K]
    rng = random.Random(seed)
    n = ni + nj + nk
    I, J, Kb = range(ni), range(ni, ni + nj), range(ni + nj, n)
    B = [[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(n)] for _ in range(n)]
    K = [[sum(B[a][c] * B[b][c] for c in range(n)) for b in range(n)] for a in range(n)]
    for a in I:
        for b in Kb:
            K[a][b] = K[b][a] = Fraction(0)
    for a in range(n):
        K[a][a] += n * 20  # diagonal dominance keeps K positive definite
    N = linalg.inverse(K)
    NJJ_inv = linalg.inverse(linalg.submatrix(N, J, J))
    rhs = linalg.matmul(linalg.matmul(linalg.submatrix(N, I, J), NJJ_inv), linalg.submatrix(N, J, Kb))
    assert linalg.submatrix(N, I, Kb) == rhs
