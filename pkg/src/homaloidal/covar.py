"""Polynomials vanishing on the covariance side of the spanning-tree model ``M(G, k)``.

The concentration matrix of ``M(G, k)`` is the Laplacian ``L(G)`` with row and
column ``k`` removed.  Its inverse ``Sigma`` is indexed by the remaining
vertices in increasing order, and the entry ``Sigma[i][j]`` (``i <= j``) is
the variable ``s_i_j`` named by vertex labels.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import linalg
from .errors import IndexOutOfRange, SingularAfterRetries
from .graph import Graph, laplacian, principal_minor, symbolic_det
from .poly import MPoly

MAX_RETRIES = 100
WEIGHT_RANGE = (1, 1000)


def sigma_var(i: int, j: int) -> str:
    i, j = min(i, j), max(i, j)
    return f"s_{i}_{j}"


@dataclass(frozen=True)
class SigmaRing:
    labels: Tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def variables(self) -> Tuple[str, ...]:
        return tuple(sigma_var(a, b) for a, b in combinations_with_diag(self.labels))

    def matrix(self) -> List[List[MPoly]]:
        universe = self.variables
        return [[MPoly.var(sigma_var(a, b)).with_vars(universe) for b in self.labels] for a in self.labels]

    def ones(self) -> List[MPoly]:
        one = MPoly.const(1, self.variables)
        return [one] * self.n


def combinations_with_diag(labels: Sequence[int]):
    for p, a in enumerate(labels):
        for b in labels[p:]:
            yield a, b


def sigma_ring(g: Graph, k: int) -> SigmaRing:
    _check_vertex(g, k)
    return SigmaRing(tuple(v for v in g.vertices if v != k))


def _check_vertex(g: Graph, k: int):
    if not 1 <= k <= g.n:
        raise IndexOutOfRange(f"vertex {k} not in 1..{g.n}")


def _det(rows: List[List[MPoly]], universe) -> MPoly:
    if not rows:
        return MPoly.const(1, universe)
    return symbolic_det(rows).with_vars(universe)


@lru_cache(maxsize=None)
def sigma_minor(rows: Tuple[Optional[int], ...], cols: Tuple[int, ...]) -> MPoly:
    """``det`` of the symbolic Sigma block on vertex labels; a ``None`` row is all ones.

    Minors depend only on the labels, so they are shared across graphs and ``k``.
    """
    if not rows:
        return MPoly.const(1)
    M = [[MPoly.const(1) if r is None else MPoly.var(sigma_var(r, c)) for c in cols] for r in rows]
    return symbolic_det(M)


def _minor(rows, cols, universe) -> MPoly:
    return sigma_minor(tuple(rows), tuple(cols)).with_vars(universe)


@dataclass(frozen=True)
class Generator:
    family: str  # "minor" | "cofactor_sum"
    rows_removed: Tuple[int, ...]
    cols_removed: Tuple[int, ...]
    poly: MPoly

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "i": list(self.rows_removed),
            "j": list(self.cols_removed),
            "poly": str(self.poly),
        }


def rk_generators_labeled(g: Graph, k: int) -> List[Generator]:
    """Both generator families, tagged with the vertex labels they come from.

    ``minor``: ``det Sigma`` without row ``i`` and column ``j`` for each
    non-edge ``{i, j}`` avoiding ``k``.  ``cofactor_sum``: the sum of the
    cofactors along row ``j`` for each ``j`` not adjacent to ``k``, which is
    ``det Sigma`` with row ``j`` replaced by ones.  Cofactor signs use
    positions in the reduced matrix.
    """
    ring = sigma_ring(g, k)
    universe = ring.variables
    out = []
    for i, j in combinations(ring.labels, 2):
        if not g.has_edge(i, j):
            rows = [v for v in ring.labels if v != i]
            cols = [v for v in ring.labels if v != j]
            out.append(Generator("minor", (i,), (j,), _minor(rows, cols, universe)))
    for j in ring.labels:
        if not g.has_edge(j, k):
            rows = [None if v == j else v for v in ring.labels]
            out.append(Generator("cofactor_sum", (j,), (), _minor(rows, ring.labels, universe)))
    return out


def rk_generators(g: Graph, k: int) -> List[MPoly]:
    return [gen.poly for gen in rk_generators_labeled(g, k)]


def cofactor_sum_explicit(g: Graph, k: int, j: int) -> MPoly:
    """``sum_i (-1)^(i+j) det Sigma_{i^, j^}`` written out term by term (reference form)."""
    ring = sigma_ring(g, k)
    S = ring.matrix()
    universe = ring.variables
    pj = ring.labels.index(j)
    total = MPoly.zero(universe)
    for pi in range(ring.n):
        rows = [S[r][:pj] + S[r][pj + 1:] for r in range(ring.n) if r != pi]
        m = _det(rows, universe)
        total = total + m if (pi + pj) % 2 == 0 else total - m
    return total


def rank_constraint_minors_labeled(g: Graph, k: int) -> List[Tuple[str, tuple, MPoly]]:
    ring = sigma_ring(g, k)
    universe = ring.variables
    n1 = ring.n
    out = []
    # rows of Sigma at the neighbours of k, plus a row of ones, have rank #ne(k)
    ne = [v for v in ring.labels if g.has_edge(v, k)]
    if len(ne) < n1:
        for cols in combinations(ring.labels, len(ne) + 1):
            out.append(("neighbours", cols, _minor(ne + [None], cols, universe)))
    # Sigma without row i and column j, plus a row of ones, is rank deficient
    # when {i, j} is a non-edge and i is not adjacent to k
    for a, b in combinations(ring.labels, 2):
        if g.has_edge(a, b):
            continue
        for i, j in ((a, b), (b, a)):
            if g.has_edge(i, k):
                continue
            for drop, rows in enumerate(_ones_row_blocks(ring, i, j)):
                out.append(("nonedge", (i, j, drop), _minor(rows, [v for v in ring.labels if v != j], universe)))
    return out


def rank_constraint_minors(g: Graph, k: int) -> List[MPoly]:
    return [p for _, _, p in rank_constraint_minors_labeled(g, k)]


def nonedge_ones_minors(g: Graph, k: int, i: int, j: int) -> List[MPoly]:
    """The ones-row minors for the pair ``(i, j)`` regardless of whether the hypothesis holds."""
    ring = sigma_ring(g, k)
    cols = [v for v in ring.labels if v != j]
    return [_minor(rows, cols, ring.variables) for rows in _ones_row_blocks(ring, i, j)]


def _ones_row_blocks(ring: SigmaRing, i: int, j: int):
    # rows of Sigma without row i, then a ones row; yield each choice of all but one row
    M = [v for v in ring.labels if v != i] + [None]
    for drop in range(len(M)):
        yield M[:drop] + M[drop + 1:]


# -- model samples -----------------------------------------------------------------

@dataclass
class ModelSample:
    """A point of the model: ``sigma = adj / scale`` is the inverse of ``L(G)`` minus row and column ``k``.

    ``adj`` is an integer matrix, so homogeneous polynomials can be tested on
    it directly without rational arithmetic.
    """

    x: Dict[str, int]
    scale: int
    adj: List[List[int]]
    labels: Tuple[int, ...]
    k: int
    seed: Optional[int] = None
    attempts: int = 1
    _sigma: Optional[List[List[Fraction]]] = field(default=None, repr=False, compare=False)

    @property
    def sigma(self) -> List[List[Fraction]]:
        if self._sigma is None:
            self._sigma = [[Fraction(v, self.scale) for v in row] for row in self.adj]
        return self._sigma

    def _pairs(self):
        pos = {v: p for p, v in enumerate(self.labels)}
        return [(sigma_var(a, b), pos[a], pos[b]) for a, b in combinations_with_diag(self.labels)]

    def point(self) -> Dict[str, Fraction]:
        S = self.sigma
        return {name: S[i][j] for name, i, j in self._pairs()}

    def projective_point(self) -> Dict[str, int]:
        """Integer multiple of :meth:`point`; same zero set for homogeneous polynomials."""
        return {name: self.adj[i][j] for name, i, j in self._pairs()}

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "k": self.k,
            "labels": list(self.labels),
            "x": dict(self.x),
            "sigma": [[str(v) for v in row] for row in self.sigma],
        }


def concentration_at(g: Graph, k: int, x: Mapping[str, object]) -> List[List[Fraction]]:
    return principal_minor(laplacian(g), k).evaluate(x)


def _concentration_int(g: Graph, k: int, x: Mapping[str, int], labels) -> List[List[int]]:
    pos = {v: p for p, v in enumerate(labels)}
    K = [[0] * len(labels) for _ in labels]
    for i, j, name in g.edges:
        w = x[name]
        for a, b in ((i, j), (j, i)):
            if a in pos:
                K[pos[a]][pos[a]] += w
                if b in pos:
                    K[pos[a]][pos[b]] -= w
    return K


def sample_model_point(g: Graph, k: int, seed: int) -> ModelSample:
    _check_vertex(g, k)
    rng = random.Random(seed)
    labels = tuple(v for v in g.vertices if v != k)
    lo, hi = WEIGHT_RANGE
    for attempt in range(1, MAX_RETRIES + 1):
        x = {name: rng.randint(lo, hi) for name in g.edge_vars()}
        K = _concentration_int(g, k, x, labels)
        try:
            scale, adj = linalg.adjugate_int(K)
        except ZeroDivisionError:
            continue
        return ModelSample(x, scale, adj, labels, k, seed, attempt)
    raise SingularAfterRetries(f"concentration matrix singular in {MAX_RETRIES} draws (is the graph connected?)")


def sample_model_points(g: Graph, k: int, count: int, seed: int) -> List[ModelSample]:
    """``count`` samples with per-sample seeds derived from ``seed``."""
    master = random.Random(seed)
    return [sample_model_point(g, k, master.randrange(2 ** 63)) for _ in range(count)]


@dataclass
class VanishingReport:
    n_polys: int
    n_samples: int
    max_abs: Fraction
    violations: List[Tuple[int, int, Fraction]] = field(default_factory=list)
    note: str = (
        "sampling certifies that the polynomials vanish on the model; "
        "whether they generate the full vanishing ideal is not checked"
    )

    @property
    def all_zero(self) -> bool:
        return not self.violations

    @property
    def n_violations(self) -> int:
        return len(self.violations)

    def to_json(self) -> dict:
        return {
            "n_polys": self.n_polys,
            "n_samples": self.n_samples,
            "max_abs": str(self.max_abs),
            "all_zero": self.all_zero,
            "violations": [{"poly": p, "sample": s, "value": str(v)} for p, s, v in self.violations[:20]],
            "n_violations": self.n_violations,
            "note": self.note,
        }


def verify_vanishing(polys: Sequence[MPoly], samples: Sequence[ModelSample]) -> VanishingReport:
    """Evaluate every polynomial at every sample exactly.

    Polynomials equal up to sign are evaluated once.  Homogeneous ones are
    evaluated at the integer point ``scale * sigma``; reported values are
    always the values at ``sigma`` itself.
    """
    groups: Dict[MPoly, List[int]] = {}
    for pi, p in enumerate(polys):
        key = p.trim()
        if not key.is_zero() and key.sorted_terms()[0][1] < 0:
            key = -key
        groups.setdefault(key, []).append(pi)
    exact_pts = [None] * len(samples)
    int_pts = [None] * len(samples)
    worst = Fraction(0)
    bad = []
    for key, members in groups.items():
        if key.is_zero():
            continue
        homog = key.is_homogeneous()
        for si, s in enumerate(samples):
            if homog:
                if int_pts[si] is None:
                    int_pts[si] = s.projective_point()
                zero = key.eval(int_pts[si]) == 0
            else:
                zero = False
            if zero:
                continue
            if exact_pts[si] is None:
                exact_pts[si] = s.point()
            for pi in members:
                v = polys[pi].eval(exact_pts[si])
                if v != 0:
                    bad.append((pi, si, v))
                    worst = max(worst, abs(v))
    bad.sort()
    return VanishingReport(len(polys), len(samples), worst, bad)
