"""Symmetric affine pencils ``A_0 + sum_i x_i A_i``.

Matrices are stored sparsely as dicts keyed by ``(i, j)`` with ``i <= j``, so
symmetry holds by construction.  An exact pencil holds ``Fraction`` entries,
a float pencil holds Python floats.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

import numpy as np

from . import linalg
from .errors import NotSymmetric, SingularPencil
from .poly import MPoly, sort_vars

Sparse = Dict[Tuple[int, int], object]

EXACT = "exact"
FLOAT = "float"


def _key(i: int, j: int) -> Tuple[int, int]:
    return (i, j) if i <= j else (j, i)


def _parse_scalar(x, mode):
    if mode == FLOAT:
        if isinstance(x, str):
            return float(Fraction(x))
        return float(x)
    if isinstance(x, float):
        return Fraction(x)
    return Fraction(x)


def _fmt_scalar(x):
    if isinstance(x, Fraction):
        return str(x)
    return float(x)


class SymPencil:
    __slots__ = ("size", "constant", "coeffs", "mode", "_mod_cache")

    def __init__(self, size: int, constant: Optional[Sparse] = None,
                 coeffs: Optional[Mapping[str, Sparse]] = None, mode: str = EXACT):
        if mode not in (EXACT, FLOAT):
            raise ValueError(f"unknown mode {mode!r}")
        self.size = size
        self.mode = mode
        self.constant = self._clean(constant or {})
        self.coeffs = {}
        for name, mat in (coeffs or {}).items():
            mat = self._clean(mat)
            if mat:
                self.coeffs[name] = mat
        self._mod_cache = {}

    def _clean(self, mat: Mapping) -> Sparse:
        out = {}
        conv = float if self.mode == FLOAT else Fraction
        for (i, j), v in mat.items():
            if not (0 <= i < self.size and 0 <= j < self.size):
                raise IndexError(f"entry ({i}, {j}) outside a {self.size}x{self.size} pencil")
            if v:
                k = _key(i, j)
                out[k] = out.get(k, 0) + conv(v)
        return {k: v for k, v in out.items() if v}

    # -- construction ----------------------------------------------------

    @classmethod
    def from_dense(cls, constant, coeffs: Optional[Mapping[str, list]] = None, mode: str = EXACT) -> "SymPencil":
        size = len(constant)
        mats = {"": constant, **(coeffs or {})}
        sparse = {}
        for name, M in mats.items():
            if len(M) != size or any(len(row) != size for row in M):
                raise ValueError(f"matrix for {name or 'A0'!r} is not {size}x{size}")
            vals = [[_parse_scalar(x, mode) for x in row] for row in M]
            for i in range(size):
                for j in range(i + 1, size):
                    if vals[i][j] != vals[j][i]:
                        raise NotSymmetric(f"matrix for {name or 'A0'!r} differs at ({i}, {j})")
            sparse[name] = {(i, j): vals[i][j] for i in range(size) for j in range(i, size) if vals[i][j]}
        const = sparse.pop("")
        return cls(size, const, sparse, mode)

    @classmethod
    def scalar(cls, value, mode: str = EXACT) -> "SymPencil":
        return cls(1, {(0, 0): value}, {}, mode)

    @classmethod
    def from_poly_matrix(cls, M: List[List[MPoly]]) -> "SymPencil":
        """Build an exact pencil from a symmetric matrix of affine polynomials."""
        size = len(M)
        const = {}
        coeffs: Dict[str, Sparse] = {}
        for i in range(size):
            for j in range(i, size):
                e = M[i][j]
                if e != M[j][i]:
                    raise NotSymmetric(f"entries ({i}, {j}) and ({j}, {i}) differ")
                if e.total_degree() > 1:
                    raise ValueError(f"entry ({i}, {j}) is not affine: {e}")
                for exp, c in e.terms.items():
                    if not any(exp):
                        const[(i, j)] = c
                    else:
                        name = e.vars[exp.index(1)]
                        coeffs.setdefault(name, {})[(i, j)] = c
        return cls(size, const, coeffs, EXACT)

    # -- accessors -----------------------------------------------------------

    @property
    def variables(self) -> Tuple[str, ...]:
        return sort_vars(self.coeffs)

    def matrix(self, name: Optional[str] = None) -> Sparse:
        return self.constant if name is None else self.coeffs.get(name, {})

    def dense(self, name: Optional[str] = None) -> list:
        zero = 0.0 if self.mode == FLOAT else Fraction(0)
        M = [[zero] * self.size for _ in range(self.size)]
        for (i, j), v in self.matrix(name).items():
            M[i][j] = M[j][i] = v
        return M

    def entry(self, i: int, j: int) -> MPoly:
        if self.mode != EXACT:
            raise TypeError("symbolic entries are only available for exact pencils")
        k = _key(i, j)
        p = MPoly.const(self.constant.get(k, 0))
        for name, mat in self.coeffs.items():
            if k in mat:
                p = p + MPoly.var(name).scale(mat[k])
        return p

    def poly_matrix(self) -> List[List[MPoly]]:
        universe = self.variables
        rows = [[MPoly.zero(universe)] * self.size for _ in range(self.size)]
        for i in range(self.size):
            for j in range(i, self.size):
                e = self.entry(i, j).with_vars(universe)
                rows[i][j] = e
                rows[j][i] = e
        return rows

    def diagonal_is_constant(self, i: int) -> bool:
        return all((i, i) not in mat for mat in self.coeffs.values())

    def __repr__(self):
        return f"SymPencil(size={self.size}, vars={list(self.variables)}, mode={self.mode!r})"

    # -- evaluation ----------------------------------------------------------

    def _check_point(self, pt: Mapping[str, object]):
        missing = [v for v in self.coeffs if v not in pt]
        if missing:
            from .errors import MissingVariable
            raise MissingVariable(f"no value for pencil variables {missing}")

    def evaluate(self, pt: Mapping[str, object]):
        """Dense matrix at ``pt``: Fractions in exact mode, an ndarray otherwise."""
        self._check_point(pt)
        exact = self.mode == EXACT and all(isinstance(pt[v], (int, Fraction)) for v in self.coeffs)
        if exact:
            M = self.dense()
            for name, mat in self.coeffs.items():
                x = Fraction(pt[name])
                if x:
                    for (i, j), v in mat.items():
                        M[i][j] += x * v
                        if i != j:
                            M[j][i] += x * v
            return M
        M = np.zeros((self.size, self.size))
        for (i, j), v in self.constant.items():
            M[i, j] = M[j, i] = float(v)
        for name, mat in self.coeffs.items():
            x = float(pt[name])
            for (i, j), v in mat.items():
                M[i, j] += x * float(v)
                if i != j:
                    M[j, i] += x * float(v)
        return M

    def det_at(self, pt: Mapping[str, object]):
        M = self.evaluate(pt)
        if isinstance(M, np.ndarray):
            if self.size == 0:
                return 1.0
            sign, logdet = np.linalg.slogdet(M)
            return float(sign * math.exp(logdet)) if sign else 0.0
        return linalg.det(M)

    def _mod_tables(self, p: int):
        tables = self._mod_cache.get(p)
        if tables is None:
            def table(mat):
                if not mat:
                    return None
                keys = list(mat)
                rows = np.array([k[0] for k in keys], dtype=np.int64)
                cols = np.array([k[1] for k in keys], dtype=np.int64)
                vals = np.array([linalg.frac_mod_p(Fraction(mat[k]), p) for k in keys], dtype=np.int64)
                return rows, cols, vals
            tables = (table(self.constant), {n: table(m) for n, m in self.coeffs.items()})
            self._mod_cache[p] = tables
        return tables

    def det_mod(self, pt: Mapping[str, object], p: int) -> int:
        """Determinant at a rational point, reduced modulo the prime ``p``."""
        if self.mode != EXACT:
            raise TypeError("modular evaluation needs an exact pencil")
        self._check_point(pt)
        const, coeffs = self._mod_tables(p)
        M = np.zeros((self.size, self.size), dtype=np.int64)

        def add(table, scale):
            if table is None:
                return
            rows, cols, vals = table
            contrib = (vals * scale) % p
            np.add.at(M, (rows, cols), contrib)
            off = rows != cols
            np.add.at(M, (cols[off], rows[off]), contrib[off])

        add(const, 1)
        for name, table in coeffs.items():
            add(table, linalg.frac_mod_p(Fraction(pt[name]), p))
        return linalg.det_mod_p(M % p, p)

    def det_poly(self) -> MPoly:
        """Symbolic determinant; exact pencils only (cost grows like 2^size)."""
        from .graph import symbolic_det
        if self.size == 0:
            return MPoly.const(1)
        return symbolic_det(self.poly_matrix())

    # -- transformations -----------------------------------------------------

    def substitute_affine(self, mapping: Mapping[str, MPoly]) -> "SymPencil":
        """Replace variables by affine polynomials; the result is again a pencil."""
        const = dict(self.constant)
        coeffs = {n: dict(m) for n, m in self.coeffs.items() if n not in mapping}
        conv = float if self.mode == FLOAT else Fraction

        def acc(target, mat, scale):
            for k, v in mat.items():
                target[k] = target.get(k, 0) + conv(scale) * v

        for name, form in mapping.items():
            mat = self.coeffs.get(name)
            if not mat:
                continue
            if not isinstance(form, MPoly):
                form = MPoly.const(form)
            if form.total_degree() > 1:
                raise ValueError(f"substitute for {name!r} is not affine: {form}")
            for exp, c in form.terms.items():
                if not any(exp):
                    acc(const, mat, c)
                else:
                    v = form.vars[exp.index(1)]
                    acc(coeffs.setdefault(v, {}), mat, c)
        return SymPencil(self.size, const, coeffs, self.mode)

    def rename(self, mapping: Mapping[str, str]) -> "SymPencil":
        return self.substitute_affine({old: MPoly.var(new) for old, new in mapping.items()})

    def as_float(self) -> "SymPencil":
        if self.mode == FLOAT:
            return self
        return SymPencil(
            self.size,
            {k: float(v) for k, v in self.constant.items()},
            {n: {k: float(v) for k, v in m.items()} for n, m in self.coeffs.items()},
            FLOAT,
        )

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        def dense_json(name=None):
            return [[_fmt_scalar(x) if x else (0.0 if self.mode == FLOAT else "0") for x in row]
                    for row in self.dense(name)]
        return {
            "size": self.size,
            "mode": self.mode,
            "A0": dense_json(),
            "coeffs": {n: dense_json(n) for n in self.variables},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "SymPencil":
        if "pencil" in data and "A0" not in data:
            data = data["pencil"]
        mode = data.get("mode", EXACT)
        p = cls.from_dense(data["A0"], data.get("coeffs", {}), mode)
        if "size" in data and int(data["size"]) != p.size:
            raise ValueError(f"declared size {data['size']} but A0 is {p.size}x{p.size}")
        return p


def block_diag(a: SymPencil, b: SymPencil) -> SymPencil:
    mode = EXACT if a.mode == EXACT and b.mode == EXACT else FLOAT
    off = a.size

    def shift(mat):
        return {(i + off, j + off): v for (i, j), v in mat.items()}

    const = {**a.constant, **shift(b.constant)}
    coeffs = {n: dict(m) for n, m in a.coeffs.items()}
    for n, m in b.coeffs.items():
        coeffs.setdefault(n, {}).update(shift(m))
    out = SymPencil(a.size + b.size, const, coeffs, EXACT if mode == EXACT else FLOAT)
    return out


def linear_pencil(mats: Mapping[str, list], constant=None) -> SymPencil:
    """Exact pencil from dense coefficient matrices (constant defaults to zero)."""
    size = len(next(iter(mats.values()))) if mats else len(constant)
    if constant is None:
        constant = [[0] * size for _ in range(size)]
    return SymPencil.from_dense(constant, mats, EXACT)


def ensure_nonzero_det(p: SymPencil) -> MPoly:
    f = p.det_poly()
    if f.is_zero():
        raise SingularPencil("pencil determinant is identically zero")
    return f
