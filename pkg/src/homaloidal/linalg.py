"""Small dense linear algebra: exact rational routines plus a Jacobi eigensolver.

Matrices are plain lists of lists.  Everything except :func:`jacobi_eigh` and
:func:`det_mod_p` works over ``Fraction`` without rounding.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, List, Sequence, Tuple

import numpy as np

Matrix = List[List[Fraction]]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def to_fractions(M) -> Matrix:
    return [[Fraction(x) for x in row] for row in M]


def transpose(M):
    return [list(col) for col in zip(*M)]


def matmul(A, B):
    Bt = transpose(B)
    return [[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in Bt] for row in A]


def submatrix(M, rows: Sequence[int], cols: Sequence[int]):
    return [[M[i][j] for j in cols] for i in rows]


def delete_row_col(M, i: int, j: int):
    return [row[:j] + row[j + 1:] for r, row in enumerate(M) if r != i]


def is_symmetric(M) -> bool:
    n = len(M)
    return all(len(row) == n for row in M) and all(
        M[i][j] == M[j][i] for i in range(n) for j in range(i + 1, n)
    )


def det(M) -> Fraction:
    """Exact determinant by fraction-free (Bareiss) elimination.

    Rows are first scaled to integers; the scale factors are divided back out.
    """
    n = len(M)
    if n == 0:
        return Fraction(1)
    A = []
    scale = 1
    for row in M:
        row = [Fraction(x) for x in row]
        den = 1
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
        scale *= den
        A.append([int(x * den) for x in row])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k] != 0:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        piv = A[k][k]
        rowk = A[k]
        for i in range(k + 1, n):
            rowi = A[i]
            a = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (piv * rowi[j] - a * rowk[j]) // prev
            rowi[k] = 0
        prev = piv
    return Fraction(sign * A[n - 1][n - 1], scale)


def det_laplace(M, zero=Fraction(0), one=Fraction(1)):
    """Cofactor expansion along rows, memoized over the remaining column set.

    Works for any commutative ring whose elements support ``+``, ``-``, ``*``
    and truthiness-as-nonzero (``Fraction``, ``MPoly``).  Cost is
    O(n * 2^n) ring operations.
    """
    n = len(M)
    if n == 0:
        return one
    memo = {}

    def minor(mask: int):
        if mask == 0:
            return one
        hit = memo.get(mask)
        if hit is not None:
            return hit
        r = n - bin(mask).count("1")
        row = M[r]
        total = zero
        pos = 0
        for j in range(n):
            bit = 1 << j
            if mask & bit:
                entry = row[j]
                if entry:
                    term = entry * minor(mask ^ bit)
                    total = total + term if pos % 2 == 0 else total - term
                pos += 1
        memo[mask] = total
        return total

    return minor((1 << n) - 1)


def inverse(M) -> Matrix:
    """Exact inverse by Gauss-Jordan elimination; raises ZeroDivisionError if singular."""
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("matrix is singular")
        A[c], A[p] = A[p], A[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [row[n:] for row in A]


def adjugate_int(M) -> Tuple[int, List[List[int]]]:
    """Fraction-free Gauss-Jordan on an integer matrix.

    Returns ``(d, X)`` with ``X = d * M^{-1}``; ``d`` is ``det M`` up to sign.
    Raises ZeroDivisionError if ``M`` is singular.
    """
    n = len(M)
    A = [[int(x) for x in row] + [int(i == j) for j in range(n)] for i, row in enumerate(M)]
    prev = 1
    for k in range(n):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k] != 0:
                    A[k], A[r] = A[r], A[k]
                    break
            else:
                raise ZeroDivisionError("matrix is singular")
        piv = A[k][k]
        rowk = A[k]
        for i in range(n):
            if i == k:
                continue
            rowi = A[i]
            a = rowi[k]
            A[i] = [(piv * x - a * y) // prev for x, y in zip(rowi, rowk)]
        prev = piv
    d = A[n - 1][n - 1] if n else 1
    return d, [row[n:] for row in A]


def jacobi_eigh(A, tol: float = 1e-13, max_sweeps: int = 100) -> Tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Sweeps stop once the off-diagonal Frobenius norm drops below
    ``tol`` times the matrix norm.  Returns ``(values, vectors)`` with
    eigenvectors in the columns, sorted by ascending eigenvalue.
    """
    a = np.array(A, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    if n == 0:
        return np.zeros(0), v
    norm = max(np.linalg.norm(a), 1e-300)
    for _ in range(max_sweeps):
        off = math.sqrt(max(np.sum(a * a) - np.sum(np.diag(a) ** 2), 0.0))
        if off <= tol * norm:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta  # theta^2 would overflow
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # A <- J^T A J with J the (p, q) rotation
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    vals = np.diag(a).copy()
    order = np.argsort(vals, kind="stable")
    return vals[order], v[:, order]


def det_mod_p(A: np.ndarray, p: int) -> int:
    """Determinant of an integer matrix modulo a prime ``p < 2**31``."""
    A = np.array(A, dtype=np.int64) % p
    n = A.shape[0]
    result = 1
    for c in range(n):
        nz = np.nonzero(A[c:, c])[0]
        if nz.size == 0:
            return 0
        r = c + int(nz[0])
        if r != c:
            A[[c, r]] = A[[r, c]]
            result = -result
        piv = int(A[c, c])
        result = (result * piv) % p
        inv = pow(piv, p - 2, p)
        rows = c + 1 + np.nonzero(A[c + 1:, c])[0]
        if rows.size:
            # only rows with a nonzero in the pivot column change; pencils are sparse
            factors = (A[rows, c] * inv) % p
            A[rows, c:] = (A[rows, c:] - (factors[:, None] * A[c, c:][None, :]) % p) % p
    return result % p


def frac_mod_p(x: Fraction, p: int) -> int:
    """Image of a rational in Z/p; raises ZeroDivisionError if p divides the denominator."""
    d = x.denominator % p
    if d == 0:
        raise ZeroDivisionError(f"{p} divides denominator of {x}")
    return (x.numerator % p) * pow(d, p - 2, p) % p


def apply_elementwise(M, f: Callable):
    return [[f(x) for x in row] for row in M]
