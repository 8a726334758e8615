from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from homaloidal import linalg
from homaloidal.errors import NotSymmetric
from homaloidal.pd import (
    FEASIBLE, INCONCLUSIVE, NEVER_PD, diagonal_obstruction, eigen_pd, leading_minors,
    pd_feasibility_sample, quadric_diagonal_signs, sylvester_pd,
)
from homaloidal.pencil import SymPencil
from homaloidal.poly import parse
from homaloidal.sdr import PowerSumForm, example_quadric_pencil, power_sum_sdr


def random_symmetric(rng, n, exact):
    # B B^T shifted by a random multiple of I lands on both sides of the PD boundary
    B = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
    shift = rng.randint(-4, 4)
    M = [[sum(B[i][k] * B[j][k] for k in range(n)) - (shift if i == j else 0) for j in range(n)] for i in range(n)]
    if exact:
        return [[Fraction(v) for v in row] for row in M]
    return np.array(M, dtype=float) + 1e-3 * np.eye(n)


@given(st.integers(0, 10 ** 6), st.integers(1, 8), st.booleans())
@settings(max_examples=150, deadline=None)
def test_sylvester_matches_numpy(seed, n, exact):
    M = random_symmetric(random.Random(seed), n, exact)
    vals = np.linalg.eigvalsh(np.array(M, dtype=float))
    if abs(vals[0]) < 1e-9:
        return
    assert sylvester_pd(M) == (vals[0] > 0) == eigen_pd(M)


@given(st.integers(0, 10 ** 6), st.integers(1, 6))
@settings(max_examples=60)
def test_leading_minors_are_determinants(seed, n):
    M = random_symmetric(random.Random(seed), n, True)
    mins = leading_minors(M)
    assert mins == [linalg.det([row[:k] for row in M[:k]]) for k in range(1, n + 1)]


@pytest.mark.parametrize("M, expected", [
    ([[2, -1], [-1, 2]], True),
    ([[1, 2], [2, 1]], False),
    ([[0, 0], [0, 1]], False),
    ([[1, 0], [0, 0]], False),
    ([[Fraction(1, 3)]], True),
    ([], True),
])
def test_sylvester_examples(M, expected):
    assert sylvester_pd(M) is expected


def test_zero_leading_pivot_with_pd_tail_is_not_pd():
    assert not sylvester_pd([[0, 1], [1, 5]])


def test_not_symmetric():
    with pytest.raises(NotSymmetric):
        sylvester_pd([[1, 2], [3, 4]])
    with pytest.raises(NotSymmetric):
        sylvester_pd([[1, 2]])


def test_obstruction_example_pencil():
    report = diagonal_obstruction(example_quadric_pencil())
    assert report.verdict == NEVER_PD
    assert pd_feasibility_sample(example_quadric_pencil(), samples=10).verdict == NEVER_PD


@pytest.mark.parametrize("d", [3, 5, 6])
def test_obstruction_power_sums(d):
    p = PowerSumForm(d, [(1, "x + y"), (2, "x - y + 1")])
    assert diagonal_obstruction(power_sum_sdr(p)).verdict == NEVER_PD


def test_nonpositive_constant_diagonal():
    pencil = SymPencil.from_dense([[0, 0], [0, 1]], {"x": [[0, 1], [1, 0]]})
    report = diagonal_obstruction(pencil)
    assert report.verdict == NEVER_PD and report.details[0]["kind"] == "nonpositive_constant"


def test_feasible_point_found():
    pencil = SymPencil.from_dense([[0, 0], [0, 0]], {"x": [[1, 0], [0, 0]], "y": [[0, 0], [0, 1]]})
    report = pd_feasibility_sample(pencil, samples=200, seed=4)
    assert report.verdict == FEASIBLE
    assert all(v > 0 for v in report.witness.values())
    assert sylvester_pd(pencil.evaluate(report.witness))


def test_negative_determinant_everywhere_is_inconclusive():
    # det = -x^2 - 1 < 0 for every x, but no constant diagonal entry
    pencil = SymPencil.from_dense([[0, 1], [1, 0]], {"x": [[1, 0], [0, -1]]})
    report = pd_feasibility_sample(pencil, samples=50)
    assert report.verdict == INCONCLUSIVE
    assert report.negative_dets == 50


def test_sampling_is_seeded():
    pencil = SymPencil.from_dense([[0, 0], [0, 0]], {"x": [[1, 0], [0, 0]], "y": [[0, 0], [0, 1]]})
    a = pd_feasibility_sample(pencil, seed=9).to_json()
    assert a == pd_feasibility_sample(pencil, seed=9).to_json()


def test_quadric_signs():
    neg = quadric_diagonal_signs(parse("-x^2 - y^2 + 1"))
    assert neg["all_negative"] and neg["diagonal_positive"]
    mixed = quadric_diagonal_signs(parse("x^2 - y^2 + 1"))
    assert not mixed["diagonal_positive"]


@given(st.integers(0, 10 ** 6))
@settings(max_examples=60, deadline=None)
def test_obstruction_consistent_with_sampling(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)

    def sym():
        M = [[Fraction(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)]
        return [[M[max(i, j)][min(i, j)] for j in range(n)] for i in range(n)]

    coeff = sym()
    for i in range(n):
        if rng.random() < 0.4:
            for j in range(n):
                coeff[i][j] = coeff[j][i] = Fraction(0)
    pencil = SymPencil.from_dense(sym(), {"x": coeff})
    never = diagonal_obstruction(pencil).verdict == NEVER_PD
    for _ in range(40):
        if sylvester_pd(pencil.evaluate({"x": Fraction(rng.randint(-200, 200), 10)})):
            assert not never
