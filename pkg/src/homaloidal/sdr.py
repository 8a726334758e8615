"""Symmetric determinantal representations (SDRs).

The building blocks are

* substitution schedules that reach ``y^d`` from one variable through
  rounds of square (``u -> v^2``) and product (``u -> v*w``) substitutions,
* a Schur-complement expansion that turns an SDR of ``p`` into an SDR of
  ``p`` after such substitutions,
* the bordered construction for quadratics from a symmetric decomposition
  of the coefficient matrix, and
* block-diagonal products.
"""

from __future__ import annotations

import math
import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from . import linalg
from .errors import (
    BadShift,
    DegreeTooHigh,
    DomainError,
    RankDeficiencyWarning,
    SizeOverflow,
    VariableCollision,
)
from .pencil import EXACT, FLOAT, SymPencil, block_diag
from .poly import MPoly, parse, sort_vars

DEFAULT_MAX_SIZE = 50_000
PRIMES = (2147483647, 2147483629, 2147483587)


# -- substitution schedules -------------------------------------------------------

@dataclass(frozen=True)
class Square:
    """``u -> v^2``."""

    u: str
    v: str

    def to_json(self) -> dict:
        return {"square": [self.u, self.v]}


@dataclass(frozen=True)
class Product:
    """``u -> v * w``."""

    u: str
    v: str
    w: str

    def to_json(self) -> dict:
        return {"product": [self.u, self.v, self.w]}


Simple = Union[Square, Product]


def binary_exponents(d: int) -> List[int]:
    """Exponents ``p_1 > p_2 > ...`` with ``d = sum 2^p_l``."""
    return [p for p in range(d.bit_length() - 1, -1, -1) if d >> p & 1]


@dataclass
class SubstitutionSchedule:
    d: int
    rounds: List[List[Simple]]
    prefix: str = "u"

    @property
    def m(self) -> int:
        return self.d.bit_length()

    def variables(self) -> List[str]:
        names = [f"{self.prefix}1"]
        for rnd in self.rounds:
            for s in rnd:
                for v in ((s.v,) if isinstance(s, Square) else (s.v, s.w)):
                    if v not in names:
                        names.append(v)
        return names

    def replay(self) -> MPoly:
        """Apply every round to the start variable, without renaming."""
        q = MPoly.var(f"{self.prefix}1")
        for rnd in self.rounds:
            mapping = {}
            for s in rnd:
                if isinstance(s, Square):
                    mapping[s.u] = MPoly.var(s.v) ** 2
                else:
                    mapping[s.u] = MPoly.var(s.v) * MPoly.var(s.w)
            q = q.subst(mapping)
        return q.trim()

    def collapsed(self, target: str = "y") -> MPoly:
        """:meth:`replay` with every schedule variable renamed to ``target``."""
        q = self.replay()
        return q.subst({v: MPoly.var(target) for v in q.vars}).trim()

    def is_valid(self) -> bool:
        return all(
            len(rnd) <= i and sum(isinstance(s, Product) for s in rnd) <= 1
            for i, rnd in enumerate(self.rounds, start=1)
        )

    def counts(self) -> List[Tuple[int, int]]:
        return [(sum(isinstance(s, Square) for s in rnd), sum(isinstance(s, Product) for s in rnd))
                for rnd in self.rounds]

    def to_json(self) -> dict:
        return {"d": self.d, "rounds": [[s.to_json() for s in rnd] for rnd in self.rounds]}


def substitution_schedule(d: int, prefix: str = "u") -> SubstitutionSchedule:
    """Rounds of simple substitutions turning ``u1`` into a product of ``d`` factors.

    With ``d = sum_l 2^p_l`` (``M`` terms), round ``i`` applies, for
    ``j <= min(i, M)``: ``u_j -> u_j*u_{j+1}`` if ``j = i < M``;
    ``u_j -> u_j^2`` if ``j = M`` and ``p_M >= i - M + 1``; and
    ``u_j -> u_j^2`` if ``j < min(i, M)`` and ``p_j >= i - j``.
    Rounds that do nothing are dropped.
    """
    if d < 1:
        raise DomainError(f"degree must be positive, got {d}")
    p = binary_exponents(d)
    M = len(p)
    m = d.bit_length()

    def u(j):
        return f"{prefix}{j}"

    rounds = []
    for i in range(1, m + 1):
        rnd: List[Simple] = []
        for j in range(1, min(i, M) + 1):
            if j == i and M >= j + 1:
                rnd.append(Product(u(j), u(j), u(j + 1)))
            elif j == M and p[M - 1] >= i - M + 1:
                rnd.append(Square(u(j), u(j)))
            elif j < min(i, M) and p[j - 1] >= i - j:
                rnd.append(Square(u(j), u(j)))
        if rnd:
            rounds.append(rnd)
    return SubstitutionSchedule(d, rounds, prefix)


# -- Schur complement expansion ----------------------------------------------------

def _support(B: Mapping[Tuple[int, int], Fraction]) -> List[int]:
    return sorted({i for i, _ in B} | {j for _, j in B})


def _shifted(B, k: int, lam: Fraction):
    """Inverse and determinant of ``B - lam*I`` for a sparse symmetric ``B``.

    Rows outside the support of ``B`` contribute ``-1/lam`` on the diagonal
    of the inverse and ``(-lam)`` to the determinant.
    """
    S = _support(B)
    if lam == 0 and len(S) < k:
        raise ZeroDivisionError("singular")
    pos = {s: a for a, s in enumerate(S)}
    sub = [[Fraction(0)] * len(S) for _ in S]
    for (i, j), v in B.items():
        sub[pos[i]][pos[j]] = v
        sub[pos[j]][pos[i]] = v
    for a in range(len(S)):
        sub[a][a] -= lam
    det = linalg.det(sub) * (-lam) ** (k - len(S))
    if det == 0:
        raise ZeroDivisionError("singular")
    inv = linalg.inverse(sub)
    out = {}
    for a in range(len(S)):
        for b in range(a, len(S)):
            if inv[a][b]:
                out[(S[a], S[b])] = inv[a][b]
    if len(S) < k:
        neg = -1 / lam
        for i in range(k):
            if i not in pos:
                out[(i, i)] = neg
    return out, det


def choose_shift(B, k: int, shift=None, max_tries: int = 1000):
    """Pick the shift for a substituted variable; returns ``(shift, inverse, det)``.

    Without an explicit ``shift``, 0 is used when ``B`` is invertible and
    otherwise the first of 1, 2, 3, ... that is not an eigenvalue.
    """
    if shift is not None:
        shift = Fraction(shift)
        try:
            inv, det = _shifted(B, k, shift)
        except ZeroDivisionError:
            raise BadShift(f"shift {shift} makes the shifted block singular") from None
        return shift, inv, det
    for cand in range(0, max_tries):
        try:
            inv, det = _shifted(B, k, Fraction(cand))
        except ZeroDivisionError:
            continue
        return Fraction(cand), inv, det
    raise BadShift(f"no admissible shift among 0..{max_tries - 1}")


@dataclass
class Expansion:
    pencil: SymPencil
    shifts: Dict[str, Fraction]
    det_tilde: Fraction


def expansion_size(k: int, square_full: Sequence[bool], product_full: Sequence[bool]) -> int:
    """Size of the expanded pencil; ``*_full`` flags mark blocks needing a nonzero shift."""
    blocks = sum(2 if f else 1 for f in square_full) + sum(4 if f else 2 for f in product_full)
    return k * (1 + blocks) + 1


def expand_sdr_detailed(
    base: SymPencil,
    squares: Sequence[Tuple[str, str]] = (),
    products: Sequence[Tuple[str, str, str]] = (),
    shifts: Optional[Mapping[str, object]] = None,
    max_size: int = DEFAULT_MAX_SIZE,
) -> Expansion:
    if base.mode != EXACT:
        raise TypeError("expand_sdr needs an exact pencil")
    shifts = dict(shifts or {})
    k = base.size
    targets = [y for y, _ in squares] + [z for z, _, _ in products]
    if len(set(targets)) != len(targets):
        raise DomainError("a variable is substituted twice in one round")

    chosen = {}
    plans = []
    for y, _ in squares:
        chosen[y] = choose_shift(base.matrix(y), k, shifts.get(y))
    for z, _, _ in products:
        chosen[z] = choose_shift(base.matrix(z), k, shifts.get(z))
    size = expansion_size(
        k,
        [chosen[y][0] != 0 for y, _ in squares],
        [chosen[z][0] != 0 for z, _, _ in products],
    )
    if size > max_size:
        raise SizeOverflow(f"expanded pencil would have size {size} > {max_size}")

    const = dict(base.constant)
    coeffs: Dict[str, Dict[Tuple[int, int], Fraction]] = {
        n: dict(m) for n, m in base.coeffs.items() if n not in chosen
    }
    offset = k
    det_tilde = Fraction(1)
    half = Fraction(1, 2)

    def link(var: str, scale: Fraction, off: int):
        mat = coeffs.setdefault(var, {})
        for a in range(k):
            key = (a, off + a)
            v = mat.get(key, 0) + scale
            if v:
                mat[key] = v
            else:
                mat.pop(key, None)

    def diag_block(entries: Mapping[Tuple[int, int], Fraction], sign: int, off: int):
        for (i, j), v in entries.items():
            const[(off + i, off + j)] = sign * v

    def scalar_block(value: Fraction, off: int):
        for a in range(k):
            const[(off + a, off + a)] = value

    for y, u in squares:
        lam, inv, det = chosen[y]
        link(u, Fraction(1), offset)
        diag_block(inv, -1, offset)
        det_tilde *= Fraction((-1) ** k) / det
        offset += k
        if lam != 0:
            link(u, Fraction(1), offset)
            scalar_block(-1 / lam, offset)
            det_tilde *= (-1 / lam) ** k
            offset += k
    for z, v, w in products:
        gam, inv, det = chosen[z]
        for sign in (1, -1):
            link(v, half, offset)
            link(w, sign * half, offset)
            diag_block(inv, -sign, offset)
            det_tilde *= Fraction((-sign) ** k) / det
            offset += k
        if gam != 0:
            for sign in (1, -1):
                link(v, half, offset)
                link(w, sign * half, offset)
                scalar_block(-sign / gam, offset)
                det_tilde *= (-sign / gam) ** k
                offset += k
    const[(offset, offset)] = 1 / det_tilde
    assert offset + 1 == size
    pencil = SymPencil(size, const, coeffs, EXACT)
    return Expansion(pencil, {t: chosen[t][0] for t in targets}, det_tilde)


def expand_sdr(
    base: SymPencil,
    squares: Sequence[Tuple[str, str]] = (),
    products: Sequence[Tuple[str, str, str]] = (),
    shifts: Optional[Mapping[str, object]] = None,
    max_size: int = DEFAULT_MAX_SIZE,
) -> SymPencil:
    """SDR of ``p`` after ``y -> u^2`` for ``(y, u)`` in ``squares`` and
    ``z -> v*w`` for ``(z, v, w)`` in ``products``, given an SDR ``base`` of ``p``.

    Each substituted variable ``y`` with coefficient matrix ``B`` adds the
    block ``-(B - lam I)^{-1}`` linked to the top-left by ``u I``, plus a
    ``-1/lam I`` block when ``lam != 0``.  Products add the analogous four
    (or two) blocks with links ``(v +- w)/2 I``.  A final 1x1 entry
    ``1/det(M~)`` cancels the determinant of the constant diagonal part.
    """
    return expand_sdr_detailed(base, squares, products, shifts, max_size).pencil


# -- quadratics --------------------------------------------------------------------

@dataclass
class QuadraticDecomposition:
    """``q = corner + sum_i lambdas[i] * f_i^2`` with ``f_i = <weights[i], (x, 1)>``."""

    vars: Tuple[str, ...]
    corner: Fraction
    lambdas: list
    weights: list
    exact: bool

    @property
    def rank(self) -> int:
        return len(self.lambdas)

    def form(self, i: int) -> MPoly:
        if not self.exact:
            raise TypeError("float decompositions have no exact forms")
        w = self.weights[i]
        p = MPoly.const(w[-1], self.vars)
        for name, c in zip(self.vars, w[:-1]):
            p = p + MPoly.var(name).scale(c)
        return p

    def eval_forms(self, pt: Mapping[str, object]) -> list:
        out = []
        for w in self.weights:
            total = w[-1]
            for name, c in zip(self.vars, w[:-1]):
                total = total + c * (pt[name] if self.exact else float(pt[name]))
            out.append(total)
        return out

    def eval(self, pt: Mapping[str, object]):
        fs = self.eval_forms(pt)
        corner = self.corner if self.exact else float(self.corner)
        return corner + sum(l * f * f for l, f in zip(self.lambdas, fs))

    def to_power_sum(self) -> "PowerSumForm":
        if not self.exact:
            raise TypeError("float decompositions cannot be turned into exact power sums")
        return PowerSumForm(2, [(l, self.form(i)) for i, l in enumerate(self.lambdas)])


def coefficient_matrix(p: MPoly, vars: Sequence[str]) -> List[List[Fraction]]:
    """Symmetric ``(n+1) x (n+1)`` matrix ``T`` with ``p = (x,1) T (x,1)^T``."""
    n = len(vars)
    T = [[Fraction(0)] * (n + 1) for _ in range(n + 1)]
    p = p.with_vars(tuple(vars) + tuple(v for v in p.vars if v not in vars))
    for exp, c in p.terms.items():
        idx = [i for i, e in enumerate(exp) for _ in range(e)]
        if len(idx) == 0:
            T[n][n] += c
        elif len(idx) == 1:
            T[idx[0]][n] += c / 2
            T[n][idx[0]] += c / 2
        else:
            i, j = idx
            if i == j:
                T[i][i] += c
            else:
                T[i][j] += c / 2
                T[j][i] += c / 2
    return T


def _ldl_decompose(T: List[List[Fraction]]) -> Tuple[List[Fraction], List[List[Fraction]]]:
    """Exact Lagrange reduction ``T = sum lam_i w_i w_i^T``."""
    n = len(T)
    T = [row[:] for row in T]
    lams, ws = [], []
    while True:
        i = next((i for i in range(n) if T[i][i] != 0), None)
        if i is not None:
            lam = T[i][i]
            w = [x / lam for x in T[i]]
            lams.append(lam)
            ws.append(w)
            T = [[T[a][b] - lam * w[a] * w[b] for b in range(n)] for a in range(n)]
            continue
        pair = next(((i, j) for i in range(n) for j in range(i + 1, n) if T[i][j] != 0), None)
        if pair is None:
            break
        i, j = pair
        a = T[i][j]
        ai, aj = T[i][:], T[j][:]
        # (ai aj^T + aj ai^T)/a = ((ai+aj)(ai+aj)^T - (ai-aj)(ai-aj)^T) / (2a)
        for sign in (1, -1):
            lams.append(sign / (2 * a))
            ws.append([x + sign * y for x, y in zip(ai, aj)])
        T = [[T[r][c] - (ai[r] * aj[c] + aj[r] * ai[c]) / a for c in range(n)] for r in range(n)]
    return lams, ws


def quadratic_decomposition(q: MPoly, method: str = "jacobi", corner: str = "constant",
                            rank_tol: float = 1e-10) -> QuadraticDecomposition:
    """Write ``q - c`` as a weighted sum of squares of affine forms.

    ``corner="constant"`` takes ``c`` to be the constant term of ``q``;
    ``corner="one"`` takes ``c = 1``.  ``method="jacobi"`` uses the
    eigen-decomposition of the coefficient matrix (floats);
    ``method="ldl"`` uses exact rational reduction.
    """
    if q.total_degree() > 2:
        raise DegreeTooHigh(f"degree {q.total_degree()} > 2")
    q = q.trim()
    vars = q.vars
    if corner == "constant":
        c = q.constant_term()
    elif corner == "one":
        c = Fraction(1)
    else:
        raise ValueError(f"unknown corner {corner!r}")
    T = coefficient_matrix(q - c, vars)
    if method == "ldl":
        lams, ws = _ldl_decompose(T)
        return QuadraticDecomposition(vars, c, lams, ws, True)
    if method != "jacobi":
        raise ValueError(f"unknown method {method!r}")
    vals, vecs = linalg.jacobi_eigh(T)
    keep = [i for i, v in enumerate(vals) if abs(v) > rank_tol]
    lams = [float(vals[i]) for i in keep]
    ws = [[float(x) for x in vecs[:, i]] for i in keep]
    return QuadraticDecomposition(vars, c, lams, ws, False)


def bordered_pencil(dec: QuadraticDecomposition) -> SymPencil:
    """``[[c, f^T, 0], [f, -diag(1/lam), 0], [0, 0, (-1)^r prod(lam)]]``."""
    r = dec.rank
    mode = EXACT if dec.exact else FLOAT
    const = {(0, 0): dec.corner}
    coeffs: Dict[str, Dict[Tuple[int, int], object]] = {}
    prod = Fraction(1) if dec.exact else 1.0
    for i, (lam, w) in enumerate(zip(dec.lambdas, dec.weights), start=1):
        const[(0, i)] = w[-1]
        for name, c in zip(dec.vars, w[:-1]):
            coeffs.setdefault(name, {})[(0, i)] = c
        const[(i, i)] = -1 / lam
        prod *= lam
    const[(r + 1, r + 1)] = (-1) ** r * prod
    return SymPencil(r + 2, const, coeffs, mode)


def quadratic_sdr(q: MPoly, method: str = "jacobi", corner: str = "constant",
                  rank_tol: float = 1e-10) -> SymPencil:
    """``(r+2) x (r+2)`` SDR of a polynomial of degree at most 2."""
    dec = quadratic_decomposition(q, method, corner, rank_tol)
    n = len(dec.vars)
    if dec.rank < n + 1:
        warnings.warn(
            f"coefficient matrix has rank {dec.rank} < {n + 1}", RankDeficiencyWarning, stacklevel=2
        )
    return bordered_pencil(dec)


EXAMPLE_QUADRIC = "7/25*x^2 - y^2 - 48/25*x*z - 7/25*z^2"


def example_quadric() -> MPoly:
    return parse(EXAMPLE_QUADRIC)


def example_quadric_pencil() -> SymPencil:
    """The 5x5 bordered matrix displayed for the example quadric, entered verbatim."""
    forms = [parse("(9*x - 20*y + 12*z)/25"), parse("(12*x + 15*y + 16*z)/25"), parse("(-20*x + 15*z)/25")]
    z = MPoly.const(0)
    M = [[z] * 5 for _ in range(5)]
    for i, f in enumerate(forms, start=1):
        M[0][i] = M[i][0] = f
    M[1][1] = MPoly.const(1)
    M[2][2] = MPoly.const(1)
    M[3][3] = MPoly.const(-1)
    M[4][4] = MPoly.const(-1)
    return SymPencil.from_poly_matrix(M)


# -- power sums ----------------------------------------------------------------------

@dataclass
class PowerSumForm:
    """``sum_i lam_i * f_i^d`` with affine ``f_i``."""

    d: int
    terms: List[Tuple[Fraction, MPoly]]

    def __post_init__(self):
        if self.d < 1:
            raise DomainError(f"degree must be positive, got {self.d}")
        clean = []
        for lam, f in self.terms:
            if not isinstance(f, MPoly):
                f = parse(f) if isinstance(f, str) else MPoly.const(f)
            if f.total_degree() > 1:
                raise DomainError(f"form {f} is not affine")
            lam = Fraction(lam) if not isinstance(lam, Fraction) else lam
            clean.append((lam, f))
        self.terms = clean

    @property
    def r(self) -> int:
        return len(self.terms)

    @property
    def variables(self) -> Tuple[str, ...]:
        return sort_vars({v for _, f in self.terms for v in f.used_vars()})

    def to_poly(self) -> MPoly:
        total = MPoly.const(0)
        for lam, f in self.terms:
            total = total + (f ** self.d).scale(lam)
        return total.trim()

    def eval(self, pt: Mapping[str, object]):
        return sum(lam * f.eval(pt) ** self.d for lam, f in self.terms)

    def to_json(self) -> dict:
        return {"d": self.d, "terms": [{"lambda": str(l), "form": str(f)} for l, f in self.terms]}

    @classmethod
    def from_json(cls, data: Mapping) -> "PowerSumForm":
        terms = []
        for t in data["terms"]:
            lam = t.get("lambda", t.get("coeff", 1))
            lam = Fraction(lam) if not isinstance(lam, float) else Fraction(lam)
            terms.append((lam, parse(str(t["form"]))))
        return cls(int(data["d"]), terms)


def _leaf(i: int, name: str) -> str:
    return f"_{name}_{i}"


def power_sum_sdr(p: PowerSumForm, shifts: Optional[Mapping[str, object]] = None,
                  max_size: int = DEFAULT_MAX_SIZE) -> SymPencil:
    """SDR of ``sum lam_i f_i^d``.

    Starts from ``[sum lam_i u_i]``, runs the substitution schedule for ``d``
    on every ``u_i`` in parallel, then replaces all leaves of term ``i`` by
    ``f_i``.
    """
    if any(lam == 0 for lam, _ in p.terms):
        raise DomainError("all coefficients must be nonzero")
    if not p.terms:
        raise DomainError("empty power sum")
    internal = [v for v in p.variables if v.startswith("_")]
    if internal:
        raise VariableCollision(f"variables {internal} clash with internal names")
    sched = substitution_schedule(p.d)
    pencil = SymPencil(1, {}, {_leaf(i, f"{sched.prefix}1"): {(0, 0): lam} for i, (lam, _) in enumerate(p.terms)})
    for rnd in sched.rounds:
        squares, products = [], []
        for i in range(p.r):
            for s in rnd:
                if isinstance(s, Square):
                    squares.append((_leaf(i, s.u), _leaf(i, s.v)))
                else:
                    products.append((_leaf(i, s.u), _leaf(i, s.v), _leaf(i, s.w)))
        pencil = expand_sdr(pencil, squares, products, shifts, max_size)
    leaves = sched.variables()
    mapping = {}
    for i, (_, f) in enumerate(p.terms):
        for v in leaves:
            mapping[_leaf(i, v)] = f
    return pencil.substitute_affine(mapping)


def product_sdr(a: SymPencil, b: SymPencil) -> SymPencil:
    shared = set(a.variables) & set(b.variables)
    if shared:
        raise VariableCollision(f"pencils share variables {sorted(shared)}")
    return block_diag(a, b)


def size_bound(d: int, r: int) -> Tuple[int, Optional[int]]:
    if d < 1 or r < 1:
        raise DomainError("need d >= 1 and r >= 1")
    m = d.bit_length()
    general = 2 ** (m - 1) * r ** m * factorial(m + 2)
    pow2 = (2 * r + 2) ** (m - 1) if d == 2 ** (m - 1) else None
    return general, pow2


# -- verification --------------------------------------------------------------------

@dataclass
class SDRReport:
    passed: bool
    method: str
    trials: int
    max_deviation: float
    symbolic: Optional[bool] = None
    failures: List[dict] = field(default_factory=list)
    seed: Optional[int] = None
    size: int = 0

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "method": self.method,
            "size": self.size,
            "trials": self.trials,
            "seed": self.seed,
            "max_deviation": self.max_deviation,
            "symbolic": self.symbolic,
            "failures": self.failures[:10],
        }


EXACT_DET_LIMIT = 64
SYMBOLIC_LIMIT = 8


def random_point(rng: random.Random, names: Sequence[str], integer: bool = False) -> Dict[str, Fraction]:
    if integer:
        return {v: Fraction(rng.randint(-30, 30)) for v in names}
    return {v: Fraction(rng.randint(-20, 20), rng.randint(1, 7)) for v in names}


def verify_sdr(pencil: SymPencil, p: MPoly, trials: int = 20, seed: int = 0, tol: float = 1e-8,
               symbolic: Optional[bool] = None) -> SDRReport:
    """Check ``det(pencil) == p``.

    Exact pencils are compared symbolically when small (size <= 8 unless
    ``symbolic`` says otherwise), then at ``trials`` random rational points:
    by exact determinant up to size 64 and modulo three 31-bit primes above
    that.  Float pencils pass when ``|det - p| <= tol * max(|p|, 1)``.
    """
    rng = random.Random(seed)
    names = sort_vars(set(pencil.variables) | set(p.used_vars()))
    failures = []
    worst = 0.0
    sym_result = None
    if pencil.mode == EXACT:
        if symbolic is None:
            symbolic = pencil.size <= SYMBOLIC_LIMIT
        if symbolic:
            sym_result = pencil.det_poly() == p
            if not sym_result:
                failures.append({"symbolic": False})
        if pencil.size <= EXACT_DET_LIMIT:
            method = "exact"
            for _ in range(trials):
                pt = random_point(rng, names)
                lhs, rhs = pencil.det_at(pt), p.eval(pt)
                dev = abs(lhs - rhs)
                worst = max(worst, float(dev))
                if dev:
                    failures.append({"point": {k: str(v) for k, v in pt.items()}, "det": str(lhs), "poly": str(rhs)})
        else:
            method = "modular"
            for _ in range(trials):
                pt = random_point(rng, names, integer=True)
                rhs = p.eval(pt)
                for prime in PRIMES:
                    try:
                        want = linalg.frac_mod_p(rhs, prime)
                        got = pencil.det_mod(pt, prime)
                    except ZeroDivisionError:
                        continue
                    if got != want:
                        worst = max(worst, 1.0)
                        failures.append({"point": {k: str(v) for k, v in pt.items()}, "prime": prime,
                                         "det_mod": got, "poly_mod": want})
    else:
        method = "float"
        for _ in range(trials):
            pt = random_point(rng, names)
            lhs = pencil.det_at({k: float(v) for k, v in pt.items()})
            rhs = float(p.eval(pt))
            dev = abs(lhs - rhs) / max(abs(rhs), 1.0)
            worst = max(worst, dev)
            if not dev <= tol:
                failures.append({"point": {k: str(v) for k, v in pt.items()}, "det": lhs, "poly": rhs, "rel": dev})
    return SDRReport(not failures, method, trials, worst, sym_result, failures, seed, pencil.size)


def verify_power_sum(pencil: SymPencil, p: PowerSumForm, trials: int = 20, seed: int = 0) -> SDRReport:
    """Like :func:`verify_sdr` but evaluates the target as a power sum (no expansion)."""
    if pencil.size <= SYMBOLIC_LIMIT:
        return verify_sdr(pencil, p.to_poly(), trials, seed)

    class _Target:
        def used_vars(self):
            return p.variables

        def eval(self, pt):
            return Fraction(p.eval(pt))

    return verify_sdr(pencil, _Target(), trials, seed, symbolic=False)
