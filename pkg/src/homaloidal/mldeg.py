"""ML degree of cycle models via the fiber of the gradient map over the all-ones vector.

For the cycle ``C_n`` the spanning-tree polynomial is
``P = sum_i prod_{j != i} x_j``.  Its gradient map has ``2^(n-1) - n`` points
over ``(1, ..., 1)``: the all-ones point and, for each ``J`` in ``[n-1]`` with
``2 <= |J| <= n-2``, the point taking value ``b`` on ``J`` and ``a`` elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import linalg
from .errors import DomainError, SingularPencil, VerificationFailed
from .graph import Graph
from .pencil import SymPencil
from .poly import MPoly, gradient, hessian_at


def eulerian(n: int) -> int:
    if n < 3:
        raise DomainError(f"need n >= 3, got {n}")
    return 2 ** (n - 1) - n


def cycle_vars(n: int) -> List[str]:
    return [f"x_{i}" for i in range(1, n + 1)]


def cycle_graph(n: int) -> Graph:
    """``C_n`` with edge ``{i, i+1}`` (and ``{n, 1}``) named ``x_i``."""
    return Graph.cycle(n, cycle_vars(n))


def cycle_poly(n: int) -> MPoly:
    if n < 3:
        raise DomainError(f"need n >= 3, got {n}")
    names = cycle_vars(n)
    terms = {}
    for i in range(n):
        terms[tuple(0 if j == i else 1 for j in range(n))] = Fraction(1)
    return MPoly(names, terms)


@dataclass(frozen=True)
class FiberPoint:
    n: int
    J: Tuple[int, ...]
    a: Fraction
    b: Fraction

    def __post_init__(self):
        J = tuple(sorted(self.J))
        object.__setattr__(self, "J", J)
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if any(not 1 <= j <= self.n - 1 for j in J) or len(set(J)) != len(J):
            raise DomainError(f"J must be a subset of 1..{self.n - 1}, got {J}")
        if J and not 2 <= len(J) <= self.n - 2:
            raise DomainError(f"|J| must lie in 2..{self.n - 2}, got {len(J)}")
        if self.a == 0 or self.b == 0:
            raise DomainError("fiber coordinates must be nonzero")

    @property
    def I(self) -> Tuple[int, ...]:
        return tuple(i for i in range(1, self.n + 1) if i not in self.J)

    def coords(self) -> List[Fraction]:
        Js = set(self.J)
        return [self.b if i in Js else self.a for i in range(1, self.n + 1)]

    def point(self) -> Dict[str, Fraction]:
        return dict(zip(cycle_vars(self.n), self.coords()))

    def to_json(self) -> dict:
        return {"J": list(self.J), "a": str(self.a), "b": str(self.b)}


def fiber_ratio(n: int, size_i: int) -> Fraction:
    """``a/b`` for a fiber point whose ``I`` part has ``size_i`` elements."""
    return Fraction(size_i - 1, 1 - n + size_i)


def cycle_fiber(n: int) -> List[FiberPoint]:
    if n < 3:
        raise DomainError(f"need n >= 3, got {n}")
    pts = [FiberPoint(n, (), Fraction(1), Fraction(1))]
    for size in range(2, n - 1):
        a = fiber_ratio(n, n - size)
        for J in combinations(range(1, n), size):
            pts.append(FiberPoint(n, J, a, Fraction(1)))
    return pts


def _gradient_at(n: int, x: Sequence[Fraction]) -> List[Fraction]:
    # d/dx_i P = sum_{l != i} prod_{j != i, l} x_j, computed from prefix products
    g = []
    for i in range(n):
        rest = [x[j] for j in range(n) if j != i]
        total = Fraction(0)
        for l in range(len(rest)):
            prod = Fraction(1)
            for j, v in enumerate(rest):
                if j != l:
                    prod *= v
            total += prod
        g.append(total)
    return g


def gradient_at(n: int, x) -> List[Fraction]:
    if isinstance(x, FiberPoint):
        x = x.coords()
    x = [Fraction(v) for v in x]
    if len(x) != n:
        raise DomainError(f"expected {n} coordinates, got {len(x)}")
    return _gradient_at(n, x)


def verify_fiber_point(n: int, p) -> bool:
    """True iff every partial derivative of ``P_{C_n}`` agrees and is nonzero at ``p``."""
    g = gradient_at(n, p)
    return g[0] != 0 and all(v == g[0] for v in g)


def hessian_matrix(n: int, x) -> List[List[Fraction]]:
    if isinstance(x, FiberPoint):
        x = x.coords()
    return hessian_at(cycle_poly(n), dict(zip(cycle_vars(n), x)))


def hessian_det(n: int, x) -> Fraction:
    return linalg.det(hessian_matrix(n, x))


def block_constants(p: FiberPoint) -> Tuple[Fraction, Fraction]:
    """Off-diagonal values ``c`` (inside I) and ``d`` (inside J) of the Hessian at ``p``."""
    a, b = p.a, p.b
    ni, nj = len(p.I), len(p.J)

    def pw(base, e):
        # zero coefficient multiplies any negative power
        return base ** e if e >= 0 else Fraction(0)

    c = (ni - 2) * pw(a, ni - 3) * pw(b, nj) + nj * pw(a, ni - 2) * pw(b, nj - 1)
    d = ni * pw(a, ni - 1) * pw(b, nj - 2) + (nj - 2) * pw(a, ni) * pw(b, nj - 3)
    return c, d


def block_formula_det(p: FiberPoint) -> Fraction:
    """Hessian determinant predicted by the two-block structure."""
    c, d = block_constants(p)
    ni, nj = len(p.I), len(p.J)
    det = Fraction((-1) ** (ni - 1) * (ni - 1)) * c ** ni
    if nj:
        det *= (-1) ** (nj - 1) * (nj - 1) * d ** nj
    return det


def closed_form_hessian_det(n: int) -> int:
    return (-1) ** (n - 1) * (n - 1) * (n - 2) ** n


def hessian_det_at_ones(n: int) -> Fraction:
    return hessian_det(n, [Fraction(1)] * n)


def verify_regular_value(n: int, p: FiberPoint, cross_check: bool = True) -> bool:
    det = hessian_det(n, p)
    if det == 0:
        return False
    if cross_check and det != block_formula_det(p):
        raise VerificationFailed(
            f"Hessian determinant {det} at J={list(p.J)} disagrees with block formula {block_formula_det(p)}"
        )
    return True


def ml_degree_cycle(n: int, verify: bool = True) -> int:
    pts = cycle_fiber(n)
    if verify:
        for p in pts:
            if not verify_fiber_point(n, p):
                raise VerificationFailed(f"gradient not proportional to ones at J={list(p.J)}")
            if not verify_regular_value(n, p):
                raise VerificationFailed(f"singular Hessian at J={list(p.J)}")
    return len(pts)


# -- score equations -----------------------------------------------------------

@dataclass
class ScoreSystem:
    """``grad f / f = u`` for ``f = det K(x)`` and ``u_i = tr(S K_i)``."""

    f: MPoly
    u: Dict[str, Fraction]
    grad: Optional[List[MPoly]] = None

    def __post_init__(self):
        if self.f.is_zero():
            raise SingularPencil("determinant of the pencil is identically zero")
        names = tuple(self.u)
        self.f = self.f.with_vars(tuple(dict.fromkeys(self.f.vars + names)))
        if self.grad is None:
            self.grad = gradient(self.f)

    @property
    def variables(self) -> Tuple[str, ...]:
        return self.f.vars

    def score(self, x: Mapping[str, object]) -> Dict[str, Fraction]:
        fx = self.f.eval(x)
        if fx == 0:
            raise DomainError("f vanishes at the point; the score is undefined")
        return {v: g.eval(x) / fx for v, g in zip(self.f.vars, self.grad)}

    def residual(self, x: Mapping[str, object]) -> Dict[str, Fraction]:
        s = self.score(x)
        return {v: s[v] - self.u.get(v, 0) for v in self.f.vars}

    def is_critical(self, x: Mapping[str, object]) -> bool:
        return all(r == 0 for r in self.residual(x).values())

    def rescale(self, x: Mapping[str, object]) -> Dict[str, Fraction]:
        """Scale a point whose score is proportional to ``u`` onto a critical point.

        The score map is homogeneous of degree -1, so if ``score(x) = t*u``
        then ``score(t*x) = u``.
        """
        s = self.score(x)
        t = None
        for v in self.f.vars:
            uv = Fraction(self.u.get(v, 0))
            if uv == 0:
                if s[v] != 0:
                    raise DomainError("score is not proportional to u")
                continue
            ratio = s[v] / uv
            if t is None:
                t = ratio
            elif ratio != t:
                raise DomainError("score is not proportional to u")
        if t is None or t == 0:
            raise DomainError("cannot determine scale from a zero data vector")
        return {v: t * Fraction(x[v]) for v in self.f.vars}


def score_system(pencil: SymPencil, s) -> ScoreSystem:
    """Score equations of the linear concentration model spanned by ``pencil``.

    ``s`` is the sample covariance as a dense list of lists (or SymMatrix of constants).
    """
    if hasattr(s, "entries"):
        s = [[e.constant_term() if isinstance(e, MPoly) else e for e in row] for row in s.entries]
    S = [[Fraction(v) for v in row] for row in s]
    if len(S) != pencil.size or not linalg.is_symmetric(S):
        raise DomainError("S must be a symmetric matrix matching the pencil size")
    u = {}
    for name in pencil.variables:
        tr = Fraction(0)
        for (i, j), v in pencil.coeffs[name].items():
            tr += v * S[i][j] if i == j else 2 * v * S[i][j]
        u[name] = tr
    f = pencil.det_poly()
    return ScoreSystem(f, u)


def cycle_pencil(n: int, k: int = None) -> SymPencil:
    """``L(C_n)`` with row and column ``k`` removed (default ``k = n``) as a pencil."""
    from .graph import laplacian, principal_minor
    k = n if k is None else k
    m = principal_minor(laplacian(cycle_graph(n)), k)
    return SymPencil.from_poly_matrix(m.entries)


def ones_data(size: int) -> List[List[Fraction]]:
    """Sample covariance ``(I + 11^T) / 2``, whose cycle-model data vector is all ones."""
    return [[Fraction(2 if i == j else 1, 2) for j in range(size)] for i in range(size)]
