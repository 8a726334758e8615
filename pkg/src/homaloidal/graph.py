"""Graphs, symbolic Laplacians and spanning-tree polynomials.

Vertices are labeled ``1..n``.  Every edge carries a variable name, by
default ``x_{i}_{j}`` with ``i < j``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import DisconnectedGraph, IndexOutOfRange, InvalidGraph, ParseError
from .linalg import det_laplace
from .poly import MPoly, sort_vars

Edge = Tuple[int, int, str]


def edge_var(i: int, j: int) -> str:
    i, j = min(i, j), max(i, j)
    return f"x_{i}_{j}"


@dataclass(frozen=True)
class Graph:
    n: int
    edges: Tuple[Edge, ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise InvalidGraph("vertex count must be non-negative")
        norm = []
        seen_pairs = set()
        seen_names = set()
        for e in self.edges:
            if len(e) == 2:
                i, j = e
                name = edge_var(i, j)
            else:
                i, j, name = e
            i, j = int(i), int(j)
            if i == j:
                raise InvalidGraph(f"loop at vertex {i}")
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise InvalidGraph(f"edge {{{i},{j}}} outside vertex range 1..{self.n}")
            pair = frozenset((i, j))
            if pair in seen_pairs:
                raise InvalidGraph(f"duplicate edge {{{i},{j}}}")
            if name in seen_names:
                raise InvalidGraph(f"duplicate edge variable {name!r}")
            seen_pairs.add(pair)
            seen_names.add(name)
            norm.append((min(i, j), max(i, j), str(name)))
        object.__setattr__(self, "edges", tuple(norm))

    # -- basic queries ---------------------------------------------------

    @property
    def vertices(self) -> List[int]:
        return list(range(1, self.n + 1))

    def adjacency(self) -> Dict[int, set]:
        adj = {v: set() for v in self.vertices}
        for i, j, _ in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def neighbors(self, v: int) -> set:
        return self.adjacency()[v]

    def has_edge(self, i: int, j: int) -> bool:
        return frozenset((i, j)) in {frozenset((a, b)) for a, b, _ in self.edges}

    def edge_name(self, i: int, j: int) -> Optional[str]:
        for a, b, name in self.edges:
            if {a, b} == {i, j}:
                return name
        return None

    def edge_vars(self) -> Tuple[str, ...]:
        return tuple(name for _, _, name in self.edges)

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        adj = self.adjacency()
        seen = {1}
        stack = [1]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def is_cycle(self) -> bool:
        adj = self.adjacency()
        return self.n >= 3 and self.is_connected() and all(len(adj[v]) == 2 for v in adj)

    def induced(self, keep: Iterable[int]) -> "Graph":
        """Induced subgraph on ``keep``, relabeled 1..|keep| in sorted order."""
        keep = sorted(keep)
        pos = {v: i + 1 for i, v in enumerate(keep)}
        edges = [(pos[i], pos[j], name) for i, j, name in self.edges if i in pos and j in pos]
        return Graph(len(keep), tuple(edges))

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[Sequence]) -> "Graph":
        return cls(n, tuple(tuple(p) for p in pairs))

    @classmethod
    def cycle(cls, n: int, names: Optional[Sequence[str]] = None) -> "Graph":
        pairs = [(i, i % n + 1) for i in range(1, n + 1)]
        if names is not None:
            pairs = [(i, j, nm) for (i, j), nm in zip(pairs, names)]
        return cls.from_pairs(n, pairs)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls.from_pairs(n, combinations(range(1, n + 1), 2))

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_pairs(n, [(i, i + 1) for i in range(1, n)])

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [[i, j, name] for i, j, name in self.edges]}

    @classmethod
    def from_json(cls, data: Mapping) -> "Graph":
        if "graph" in data and "n" not in data:
            data = data["graph"]
        return cls(int(data["n"]), tuple(tuple(e) for e in data["edges"]))

    @classmethod
    def from_text(cls, text: str) -> "Graph":
        """Parse the edge-list format: a first line ``n`` then ``i j [name]`` lines.

        ``#`` starts a comment; a trailing ``;`` after ``n`` is allowed.
        """
        lines = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if line:
                lines.extend(s.strip() for s in line.split(";") if s.strip())
        if not lines:
            raise ParseError("empty graph description")
        try:
            n = int(lines[0])
        except ValueError:
            raise ParseError(f"first line must be the vertex count, got {lines[0]!r}") from None
        edges = []
        for line in lines[1:]:
            parts = line.split()
            if len(parts) not in (2, 3):
                raise ParseError(f"bad edge line {line!r}")
            try:
                i, j = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError(f"bad edge line {line!r}") from None
            edges.append((i, j, parts[2]) if len(parts) == 3 else (i, j))
        return cls(n, tuple(edges))

    @classmethod
    def load(cls, path: str) -> "Graph":
        with open(path) as fh:
            text = fh.read()
        if text.lstrip().startswith("{"):
            return cls.from_json(json.loads(text))
        return cls.from_text(text)

    def to_dot(self, name: str = "G") -> str:
        lines = [f"graph {name} {{"]
        for v in self.vertices:
            lines.append(f"  {v};")
        for i, j, nm in self.edges:
            lines.append(f'  {i} -- {j} [label="{nm}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


# diamond: 4-cycle 1-2-3-4 plus the chord 1-3, edges named A..E; chordal
DIAMOND_GRAPH = Graph(4, ((1, 2, "x_A"), (2, 3, "x_B"), (3, 4, "x_C"), (1, 4, "x_D"), (1, 3, "x_E")))


@dataclass
class SymMatrix:
    """Symmetric matrix of polynomials with row/column labels."""

    entries: List[List[MPoly]]
    labels: List[int] = field(default_factory=list)

    def __post_init__(self):
        if not self.labels:
            self.labels = list(range(1, len(self.entries) + 1))
        if len(self.labels) != len(self.entries):
            raise ValueError("label count does not match matrix size")
        for row in self.entries:
            if len(row) != len(self.entries):
                raise ValueError("matrix must be square")

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def is_symmetric(self) -> bool:
        n = self.dim
        return all(self.entries[i][j] == self.entries[j][i] for i in range(n) for j in range(i + 1, n))

    def evaluate(self, pt: Mapping[str, object]):
        return [[e.eval(pt) for e in row] for row in self.entries]


def laplacian(g: Graph) -> SymMatrix:
    universe = sort_vars(g.edge_vars())
    zero = MPoly.zero(universe)
    L = [[zero for _ in range(g.n)] for _ in range(g.n)]
    for i, j, name in g.edges:
        x = MPoly.var(name).with_vars(universe)
        a, b = i - 1, j - 1
        L[a][a] = L[a][a] + x
        L[b][b] = L[b][b] + x
        L[a][b] = L[a][b] - x
        L[b][a] = L[b][a] - x
    return SymMatrix(L, list(range(1, g.n + 1)))


def principal_minor(m: SymMatrix, k: int) -> SymMatrix:
    """Delete the row and column labeled ``k``."""
    if k not in m.labels:
        raise IndexOutOfRange(f"label {k} not among {m.labels}")
    idx = m.labels.index(k)
    entries = [row[:idx] + row[idx + 1:] for r, row in enumerate(m.entries) if r != idx]
    labels = m.labels[:idx] + m.labels[idx + 1:]
    return SymMatrix(entries, labels)


def symbolic_det(m) -> MPoly:
    entries = m.entries if isinstance(m, SymMatrix) else m
    universe = sort_vars(v for row in entries for e in row for v in e.vars)
    aligned = [[e.with_vars(universe) for e in row] for row in entries]
    return det_laplace(aligned, MPoly.zero(universe), MPoly.const(1, universe))


def spanning_trees(g: Graph) -> List[frozenset]:
    """All spanning trees as sets of edge variable names (deletion-contraction).

    Bridges are never deleted, which prunes every branch that would end in a
    disconnected graph.
    """
    if not g.is_connected():
        return []
    edges = [(i, j, name) for i, j, name in g.edges]
    return [frozenset(t) for t in _dc(frozenset(g.vertices), edges)]


def _connected_after_removal(verts, edges, skip):
    adj = {v: [] for v in verts}
    for idx, (a, b, _) in enumerate(edges):
        if idx != skip:
            adj[a].append(b)
            adj[b].append(a)
    start = next(iter(verts))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(verts)


def _dc(verts: frozenset, edges: list) -> List[tuple]:
    if len(verts) == 1:
        return [()]
    if not edges:
        return []
    a, b, name = edges[0]
    out = []
    # contraction: merge b into a, drop the resulting loops
    merged = []
    for u, v, nm in edges[1:]:
        u = a if u == b else u
        v = a if v == b else v
        if u != v:
            merged.append((u, v, nm))
    for t in _dc(verts - {b}, merged):
        out.append(t + (name,))
    if _connected_after_removal(verts, edges, 0):
        out.extend(_dc(verts, edges[1:]))
    return out


def spanning_tree_poly(g: Graph) -> MPoly:
    """Sum over spanning trees of the product of their edge variables."""
    if not g.is_connected():
        raise DisconnectedGraph("graph is disconnected; P_G would be zero")
    universe = sort_vars(g.edge_vars())
    pos = {v: i for i, v in enumerate(universe)}
    terms = {}
    for tree in spanning_trees(g):
        exp = [0] * len(universe)
        for name in tree:
            exp[pos[name]] = 1
        terms[tuple(exp)] = Fraction(1)
    return MPoly(universe, terms)


# -- chordality -----------------------------------------------------------------

def max_cardinality_search(g: Graph) -> List[int]:
    """Visit order of maximum cardinality search (ties broken by smallest label)."""
    adj = g.adjacency()
    weight = {v: 0 for v in g.vertices}
    order = []
    remaining = set(g.vertices)
    while remaining:
        v = max(sorted(remaining), key=lambda u: weight[u])
        order.append(v)
        remaining.discard(v)
        for w in adj[v]:
            if w in remaining:
                weight[w] += 1
    return order


def is_perfect_elimination_ordering(g: Graph, order: Sequence[int]) -> bool:
    """Each vertex's neighbors appearing later in ``order`` must form a clique."""
    if sorted(order) != g.vertices:
        return False
    adj = g.adjacency()
    pos = {v: i for i, v in enumerate(order)}
    for v in order:
        later = [w for w in adj[v] if pos[w] > pos[v]]
        for a, b in combinations(later, 2):
            if b not in adj[a]:
                return False
    return True


def is_chordal(g: Graph) -> Tuple[bool, Optional[List[int]]]:
    """Return ``(True, peo)`` for chordal graphs, ``(False, None)`` otherwise."""
    peo = list(reversed(max_cardinality_search(g)))
    if is_perfect_elimination_ordering(g, peo):
        return True, peo
    return False, None


# -- ML degree certificate ------------------------------------------------------

@dataclass(frozen=True)
class MLCertificate:
    kind: str  # "ml_degree_one" | "cycle_eulerian" | "unknown"
    ml_degree: Optional[int]
    chordal: bool
    peo: Optional[Tuple[int, ...]] = None
    note: str = ""

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "ml_degree": self.ml_degree,
            "chordal": self.chordal,
            "peo": list(self.peo) if self.peo is not None else None,
            "note": self.note,
        }


def ml_degree_certificate(g: Graph, k: Optional[int] = None) -> MLCertificate:
    """Certified ML degree of the spanning-tree model M(G, k).

    The value does not depend on ``k``; it is accepted for interface symmetry.
    """
    if not g.is_connected():
        raise DisconnectedGraph("ML degree certificate requires a connected graph")
    if k is not None and not 1 <= k <= g.n:
        raise IndexOutOfRange(f"vertex {k} not in 1..{g.n}")
    chordal, peo = is_chordal(g)
    if chordal:
        note = "chordal graph: spanning tree polynomial is homaloidal"
        if g.is_cycle():
            note += f"; agrees with Eulerian number 2^{g.n - 1} - {g.n} = {2 ** (g.n - 1) - g.n}"
        return MLCertificate("ml_degree_one", 1, True, tuple(peo), note)
    if g.is_cycle():
        return MLCertificate(
            "cycle_eulerian", 2 ** (g.n - 1) - g.n, False, None,
            f"cycle C_{g.n}: ML degree is the Eulerian number 2^{g.n - 1} - {g.n}",
        )
    return MLCertificate(
        "unknown", None, False, None,
        "not chordal and not a cycle; conjecturally the ML degree is greater than one",
    )
