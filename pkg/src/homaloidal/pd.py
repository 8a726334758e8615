"""Can an SDR pencil be positive definite somewhere?

A positive definite matrix has positive diagonal entries, so a constant
diagonal entry ``<= 0`` (in particular one of a pair ``c, -c``) rules it out
everywhere.  Otherwise the pencil is sampled on a box and each point is
tested with Sylvester's criterion.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional

import numpy as np

from . import linalg
from .errors import NotSymmetric
from .pencil import EXACT, SymPencil

NEVER_PD = "NeverPD"
OBSTRUCTION_FOUND = "ObstructionFound"
FEASIBLE = "FeasiblePointFound"
INCONCLUSIVE = "Inconclusive"

FLOAT_TOL = 1e-12


def _is_exact(m) -> bool:
    if isinstance(m, np.ndarray):
        return False
    return all(isinstance(x, (int, Fraction)) for row in m for x in row)


def leading_pivots(m) -> List:
    """Pivots of Gaussian elimination without row exchanges.

    The ``k``-th leading principal minor is the product of the first ``k``
    pivots; elimination stops at the first non-positive pivot.
    """
    exact = _is_exact(m)
    A = [[Fraction(x) for x in row] for row in m] if exact else np.array(m, dtype=float)
    n = len(A)
    pivots = []
    for c in range(n):
        piv = A[c][c]
        pivots.append(piv)
        if not (piv > (0 if exact else FLOAT_TOL)):
            break
        if exact:
            for r in range(c + 1, n):
                f = A[r][c] / piv
                if f:
                    A[r] = [a - f * b for a, b in zip(A[r], A[c])]
        else:
            A[c + 1:, :] -= np.outer(A[c + 1:, c] / piv, A[c, :])
    return pivots


def check_symmetric(m):
    n = len(m)
    if any(len(row) != n for row in m):
        raise NotSymmetric("matrix is not square")
    exact = _is_exact(m)
    for i in range(n):
        for j in range(i + 1, n):
            a, b = m[i][j], m[j][i]
            if exact:
                if a != b:
                    raise NotSymmetric(f"entries ({i}, {j}) and ({j}, {i}) differ")
            elif abs(float(a) - float(b)) > FLOAT_TOL * max(1.0, abs(float(a))):
                raise NotSymmetric(f"entries ({i}, {j}) and ({j}, {i}) differ")


def sylvester_pd(m) -> bool:
    """Positive definiteness by Sylvester's criterion.

    Rational input is decided exactly.  For floats each pivot (ratio of
    consecutive leading minors) must exceed ``1e-12``.
    """
    check_symmetric(m)
    n = len(m)
    if n == 0:
        return True
    pivots = leading_pivots(m)
    tol = 0 if _is_exact(m) else FLOAT_TOL
    return len(pivots) == n and all(p > tol for p in pivots)


def leading_minors(m) -> List:
    out = []
    acc = Fraction(1) if _is_exact(m) else 1.0
    for p in leading_pivots(m):
        acc = acc * p
        out.append(acc)
    n = len(m)
    # past a zero pivot the remaining minors need a full determinant
    for k in range(len(out) + 1, n + 1):
        sub = [row[:k] for row in m[:k]]
        out.append(linalg.det(sub) if _is_exact(m) else float(np.linalg.det(np.array(sub, dtype=float))))
    return out


def eigen_pd(m) -> bool:
    """Reference test: smallest Jacobi eigenvalue is positive."""
    vals, _ = linalg.jacobi_eigh([[float(x) for x in row] for row in m])
    return bool(len(vals) == 0 or vals[0] > 0)


@dataclass
class PDReport:
    verdict: str
    witness: Optional[Dict[str, object]] = None
    obstruction: Optional[str] = None
    samples: int = 0
    seed: Optional[int] = None
    box: Optional[object] = None
    negative_dets: int = 0
    note: str = ""
    details: List[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "witness": None if self.witness is None else {k: str(v) for k, v in self.witness.items()},
            "obstruction": self.obstruction,
            "samples": self.samples,
            "seed": self.seed,
            "box": None if self.box is None else str(self.box),
            "negative_dets": self.negative_dets,
            "note": self.note,
            "details": self.details,
        }


def diagonal_obstruction(pencil: SymPencil) -> PDReport:
    """Look for constant diagonal entries that rule out positive definiteness."""
    consts = {}
    for i in range(pencil.size):
        if pencil.diagonal_is_constant(i):
            consts[i] = pencil.constant.get((i, i), 0)
    details = []
    by_value: Dict[object, List[int]] = {}
    for i, c in consts.items():
        by_value.setdefault(c, []).append(i)
    for c, idx in sorted(by_value.items(), key=lambda kv: kv[1][0]):
        if c > 0 and -c in by_value:
            details.append({"kind": "opposite_pair", "value": str(c), "rows": [idx[0], by_value[-c][0]]})
    for i, c in consts.items():
        if c <= 0:
            details.append({"kind": "nonpositive_constant", "value": str(c), "row": i})
    if not details:
        return PDReport(INCONCLUSIVE, note="no constant non-positive diagonal entry")
    first = details[0]
    if first["kind"] == "opposite_pair":
        a, b = first["rows"]
        desc = f"diagonal entries {a} and {b} are the constants {first['value']} and -{first['value']}"
    else:
        desc = f"diagonal entry {first['row']} is the constant {first['value']}"
    return PDReport(NEVER_PD, obstruction=desc, details=details,
                    note="a positive definite matrix has a positive diagonal")


def _draw(rng: random.Random, names, box, exact: bool, grid: int = 1000):
    if exact:
        b = Fraction(box)
        scale = int(b * grid)
        return {v: Fraction(rng.randint(-scale, scale), grid) for v in names}
    return {v: rng.uniform(-float(box), float(box)) for v in names}


def pd_feasibility_sample(pencil: SymPencil, samples: int = 1000, seed: int = 0, box=10) -> PDReport:
    """Search a box for a point where the pencil is positive definite.

    Exact pencils are sampled on a rational grid of spacing 1/1000 and
    tested exactly.
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    obs = diagonal_obstruction(pencil)
    if obs.verdict == NEVER_PD:
        obs.seed, obs.box = seed, box
        obs.note += "; sampling skipped"
        return obs
    rng = random.Random(seed)
    exact = pencil.mode == EXACT
    names = pencil.variables
    negative = 0
    for s in range(1, samples + 1):
        pt = _draw(rng, names, box, exact)
        M = pencil.evaluate(pt)
        if sylvester_pd(M):
            diag = [M[i][i] for i in range(pencil.size)]
            if not all(d > 0 for d in diag):
                raise AssertionError("PD witness with a non-positive diagonal entry")
            return PDReport(FEASIBLE, witness=pt, samples=s, seed=seed, box=box, negative_dets=negative)
        d = linalg.det(M) if exact and not isinstance(M, np.ndarray) else float(np.linalg.det(np.asarray(M, dtype=float)))
        if d < 0:
            negative += 1
    note = "no positive definite point found"
    if negative == samples:
        note += "; the determinant was negative at every sample"
    return PDReport(INCONCLUSIVE, samples=samples, seed=seed, box=box, negative_dets=negative, note=note)


def quadric_diagonal_signs(q, corner: str = "constant") -> dict:
    """For a quadratic ``q + c``: eigenvalue signs of the coefficient matrix of ``q``
    and the signs of the bordered SDR's diagonal.
    """
    from .sdr import bordered_pencil, quadratic_decomposition

    dec = quadratic_decomposition(q, "jacobi", corner)
    pencil = bordered_pencil(dec)
    diag = [pencil.constant.get((i, i), 0.0) for i in range(pencil.size)]
    return {
        "eigenvalues": list(dec.lambdas),
        "all_negative": all(l < 0 for l in dec.lambdas),
        "diagonal": diag,
        "diagonal_positive": all(d > 0 for d in diag),
    }
