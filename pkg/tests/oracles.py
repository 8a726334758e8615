"""Brute-force reference implementations used only by the tests."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import networkx as nx

from homaloidal.graph import DIAMOND_GRAPH, Graph


def atlas_corpus(max_n: int = 6):
    """Connected graphs on 1..max_n vertices, one per isomorphism class."""
    out = []
    for h in nx.graph_atlas_g():
        n = h.number_of_nodes()
        if n < 1 or n > max_n or not nx.is_connected(h):
            continue
        out.append(Graph.from_pairs(n, [(a + 1, b + 1) for a, b in h.edges()]))
    return out


def acceptance_corpus():
    return atlas_corpus(6) + [DIAMOND_GRAPH]


def _find(parent, v):
    while parent[v] != v:
        parent[v] = parent[parent[v]]
        v = parent[v]
    return v


def brute_spanning_trees(g: Graph):
    """Every (n-1)-edge subset without a cycle, as a set of edge names."""
    trees = set()
    for sub in combinations(g.edges, g.n - 1):
        parent = {v: v for v in g.vertices}
        ok = True
        for a, b, _ in sub:
            ra, rb = _find(parent, a), _find(parent, b)
            if ra == rb:
                ok = False
                break
            parent[ra] = rb
        if ok:
            trees.add(frozenset(name for _, _, name in sub))
    return trees


def has_chordless_cycle(g: Graph) -> bool:
    """Search every vertex subset of size >= 4 for an induced cycle."""
    adj = g.adjacency()
    for size in range(4, g.n + 1):
        for sub in combinations(g.vertices, size):
            s = set(sub)
            if all(len(adj[v] & s) == 2 for v in sub):
                # 2-regular: a chordless cycle iff it is connected
                seen, stack = {sub[0]}, [sub[0]]
                while stack:
                    v = stack.pop()
                    for w in adj[v] & s:
                        if w not in seen:
                            seen.add(w)
                            stack.append(w)
                if len(seen) == size:
                    return True
    return False


def cofactor_det(M):
    """Determinant by first-row cofactor expansion."""
    n = len(M)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(M[0][0])
    total = Fraction(0)
    for j in range(n):
        if M[0][j] == 0:
            continue
        sub = [row[:j] + row[j + 1:] for row in M[1:]]
        total += (-1) ** j * Fraction(M[0][j]) * cofactor_det(sub)
    return total


def cycle_hessian_direct(x):
    """Hessian of sum_i prod_{j != i} x_j written out entrywise."""
    n = len(x)
    H = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for l in range(n):
            if i == l:
                continue
            total = Fraction(0)
            for m in range(n):
                if m in (i, l):
                    continue
                prod = Fraction(1)
                for j in range(n):
                    if j not in (i, l, m):
                        prod *= x[j]
                total += prod
            H[i][l] = total
    return H
