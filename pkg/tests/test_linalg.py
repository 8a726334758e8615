from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from homaloidal import linalg

from oracles import cofactor_det

PRIME = 2147483647


def int_matrix(seed, n, lo=-9, hi=9):
    rng = random.Random(seed)
    return [[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)]


@given(st.integers(0, 10 ** 6), st.integers(1, 6))
@settings(max_examples=60)
def test_bareiss_matches_cofactor_expansion(seed, n):
    M = int_matrix(seed, n)
    assert linalg.det(M) == cofactor_det(M)
    assert linalg.det_laplace([[Fraction(x) for x in row] for row in M]) == cofactor_det(M)


@given(st.integers(0, 10 ** 6), st.integers(1, 7))
@settings(max_examples=60)
def test_det_mod_p(seed, n):
    M = int_matrix(seed, n, -10 ** 6, 10 ** 6)
    assert linalg.det_mod_p(np.array(M), PRIME) == linalg.det(M) % PRIME


@given(st.integers(0, 10 ** 6), st.integers(1, 6))
@settings(max_examples=60)
def test_adjugate_int(seed, n):
    M = int_matrix(seed, n)
    if linalg.det(M) == 0:
        with pytest.raises(ZeroDivisionError):
            linalg.adjugate_int(M)
        return
    d, X = linalg.adjugate_int(M)
    inv = linalg.inverse(M)
    assert X == [[d * v for v in row] for row in inv]
    assert abs(d) == abs(linalg.det(M))


@given(st.integers(0, 10 ** 6), st.integers(1, 8))
@settings(max_examples=60)
def test_jacobi_matches_numpy(seed, n):
    rng = np.random.default_rng(seed)
    B = rng.normal(size=(n, n))
    A = (B + B.T) / 2
    vals, vecs = linalg.jacobi_eigh(A)
    assert np.allclose(vals, np.linalg.eigvalsh(A), atol=1e-10)
    assert np.allclose(vecs @ np.diag(vals) @ vecs.T, A, atol=1e-10)
    assert np.allclose(vecs.T @ vecs, np.eye(n), atol=1e-10)


def test_jacobi_tiny_off_diagonal():
    A = np.array([[1.0, 1e-200], [1e-200, 2.0]])
    vals, _ = linalg.jacobi_eigh(A)
    assert np.allclose(vals, [1.0, 2.0])


def test_frac_mod_p():
    assert linalg.frac_mod_p(Fraction(1, 2), 7) == 4
    with pytest.raises(ZeroDivisionError):
        linalg.frac_mod_p(Fraction(1, 7), 7)
