from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from homaloidal.errors import DomainError, SingularPencil
from homaloidal.graph import spanning_tree_poly
from homaloidal.mldeg import (
    FiberPoint, block_formula_det, closed_form_hessian_det, cycle_fiber, cycle_graph,
    cycle_pencil, cycle_poly, eulerian, gradient_at, hessian_det, hessian_det_at_ones,
    ml_degree_cycle, ones_data, score_system, verify_fiber_point, verify_regular_value,
)
from homaloidal.pencil import SymPencil

from oracles import cofactor_det, cycle_hessian_direct

nonzero = st.fractions(min_value=-6, max_value=6, max_denominator=5).filter(lambda v: v != 0)


@pytest.mark.parametrize("n, expected", [(3, 1), (4, 4), (5, 11), (6, 26), (7, 57), (8, 120)])
def test_eulerian(n, expected):
    assert eulerian(n) == expected
    assert len(cycle_fiber(n)) == expected


@pytest.mark.parametrize("n", [1, 2])
def test_small_n_rejected(n):
    with pytest.raises(DomainError):
        eulerian(n)


@pytest.mark.parametrize("n", range(3, 8))
def test_cycle_poly_is_spanning_tree_poly(n):
    assert cycle_poly(n) == spanning_tree_poly(cycle_graph(n))


def test_known_point_c4():
    assert gradient_at(4, [1, 1, -1, -1]) == [-1, -1, -1, -1]


@pytest.mark.parametrize("n", range(4, 8))
def test_fiber_points_are_regular(n):
    for p in cycle_fiber(n):
        assert verify_fiber_point(n, p)
        assert verify_regular_value(n, p)
        assert hessian_det(n, p) == block_formula_det(p)


@pytest.mark.parametrize("n", range(3, 7))
def test_hessian_against_direct_formula(n):
    for p in cycle_fiber(n)[:6]:
        assert hessian_det(n, p) == cofactor_det(cycle_hessian_direct(p.coords()))


@pytest.mark.parametrize("n", range(3, 9))
def test_hessian_at_ones(n):
    assert hessian_det_at_ones(n) == closed_form_hessian_det(n)


@pytest.mark.parametrize("n", [5, 6])
def test_fiber_is_complete(n):
    # brute force over points with coordinates a on I and 1 on J, for a in a small grid
    expected = {tuple(p.coords()) for p in cycle_fiber(n)}
    grid = [Fraction(a, b) for a in range(-6, 7) for b in range(1, 7) if a]
    found = set()
    for mask in range(2 ** (n - 1)):
        for a in set(grid):
            x = [Fraction(1) if mask >> i & 1 else a for i in range(n - 1)] + [a]
            if verify_fiber_point(n, x):
                # constant vectors are the all-ones point projectively
                found.add(tuple(x) if len(set(x)) > 1 else (Fraction(1),) * n)
    assert found == expected


@pytest.mark.parametrize("J, a", [((5,), 2), ((1,), 2), ((1, 2), 0)])
def test_fiber_point_validation(J, a):
    with pytest.raises(DomainError):
        FiberPoint(5, J, a, 1)


@given(st.lists(nonzero, min_size=4, max_size=4), nonzero)
@settings(max_examples=40, deadline=None)
def test_score_is_homogeneous_of_degree_minus_one(xs, lam):
    system = score_system(cycle_pencil(4), ones_data(3))
    x = dict(zip(system.variables, xs))
    assume(system.f.eval(x) != 0)
    scaled = {v: lam * c for v, c in x.items()}
    s, t = system.score(x), system.score(scaled)
    assert all(t[v] == s[v] / lam for v in s)


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_rescaled_fiber_points_are_critical(n):
    # fiber points with |I| = |J| lie on P = 0 and are not critical points for u = ones
    system = score_system(cycle_pencil(n), ones_data(n - 1))
    assert all(v == 1 for v in system.u.values())
    for p in cycle_fiber(n):
        on_hypersurface = cycle_poly(n).eval(p.point()) == 0
        assert on_hypersurface == (len(p.I) == len(p.J))
        if not on_hypersurface:
            assert system.is_critical(system.rescale(p.point()))


def test_singular_pencil_rejected():
    zero = SymPencil.from_dense([[0, 0], [0, 0]], {"x": [[1, 0], [0, 0]]})
    with pytest.raises(SingularPencil):
        score_system(zero, [[1, 0], [0, 1]])


def test_ml_degree_cycle_verified():
    assert ml_degree_cycle(6) == 26


@pytest.mark.parametrize("n", range(3, 13))
def test_fiber_count_and_distinctness(n):
    pts = cycle_fiber(n)
    assert len(pts) == eulerian(n)
    # projective classes: scale so the last coordinate is 1
    classes = {tuple(c / p.coords()[-1] for c in p.coords()) for p in pts}
    assert len(classes) == len(pts)
