"""Exact sparse multivariate polynomials over the rationals.

An :class:`MPoly` stores an ordered tuple of variable names and a dict mapping
dense exponent tuples (one entry per variable) to nonzero ``Fraction``
coefficients.  Binary operations merge the two variable lists by a natural
sort of the names, so ``x_2`` sorts before ``x_10``.

    >>> p = parse("7/25*x^2 - y^2")
    >>> str(p * 2)
    '14/25*x^2 - 2*y^2'

Values are treated as immutable; every operation returns a new polynomial.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

from .errors import MissingVariable, ParseError

Exponent = Tuple[int, ...]
Scalar = Union[int, Fraction]

_NAT_SPLIT = re.compile(r"(\d+)")


def natural_key(name: str):
    """Sort key that orders embedded integers numerically."""
    return tuple(int(t) if t.isdigit() else t for t in _NAT_SPLIT.split(name))


def sort_vars(names: Iterable[str]) -> Tuple[str, ...]:
    return tuple(sorted(set(names), key=natural_key))


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"expected an exact rational, got {type(c).__name__}")


class MPoly:
    __slots__ = ("vars", "terms", "_int_view")

    def __init__(self, vars: Sequence[str] = (), terms: Mapping[Exponent, Scalar] | None = None):
        vars = tuple(vars)
        if len(set(vars)) != len(vars):
            raise ValueError(f"duplicate variable names in {vars}")
        clean: Dict[Exponent, Fraction] = {}
        if terms:
            n = len(vars)
            for exp, c in terms.items():
                exp = tuple(exp)
                if len(exp) != n:
                    raise ValueError(f"exponent {exp} does not match {n} variables")
                if any(e < 0 for e in exp):
                    raise ValueError(f"negative exponent in {exp}")
                c = _frac(c)
                if c:
                    clean[exp] = clean.get(exp, Fraction(0)) + c
            clean = {e: c for e, c in clean.items() if c}
        self.vars = vars
        self.terms = clean
        self._int_view = None

    @classmethod
    def _raw(cls, vars: Tuple[str, ...], terms: Dict[Exponent, Fraction]) -> "MPoly":
        # trusted constructor: terms already canonical
        obj = cls.__new__(cls)
        obj.vars = vars
        obj.terms = terms
        obj._int_view = None
        return obj

    # -- constructors ---------------------------------------------------

    @classmethod
    def const(cls, c: Scalar, vars: Sequence[str] = ()) -> "MPoly":
        vars = tuple(vars)
        c = _frac(c)
        return cls._raw(vars, {(0,) * len(vars): c} if c else {})

    @classmethod
    def var(cls, name: str) -> "MPoly":
        return cls._raw((name,), {(1,): Fraction(1)})

    @classmethod
    def zero(cls, vars: Sequence[str] = ()) -> "MPoly":
        return cls._raw(tuple(vars), {})

    @classmethod
    def monomial(cls, powers: Mapping[str, int], coeff: Scalar = 1) -> "MPoly":
        vs = sort_vars(powers)
        exp = tuple(powers[v] for v in vs)
        return cls(vs, {exp: coeff})

    # -- universe handling ----------------------------------------------

    def with_vars(self, vars: Sequence[str]) -> "MPoly":
        """Re-express over a superset ``vars`` of the variables in use."""
        vars = tuple(vars)
        if vars == self.vars:
            return self
        pos = {v: i for i, v in enumerate(vars)}
        used = self.used_vars()
        missing = [v for v in used if v not in pos]
        if missing:
            raise ValueError(f"variables {missing} not in target universe")
        idx = [pos.get(v) for v in self.vars]
        n = len(vars)
        out = {}
        for exp, c in self.terms.items():
            new = [0] * n
            for i, e in enumerate(exp):
                if e:
                    new[idx[i]] = e
            out[tuple(new)] = c
        return MPoly._raw(vars, out)

    def used_vars(self) -> Tuple[str, ...]:
        seen = [False] * len(self.vars)
        for exp in self.terms:
            for i, e in enumerate(exp):
                if e:
                    seen[i] = True
        return tuple(v for v, s in zip(self.vars, seen) if s)

    def trim(self) -> "MPoly":
        return self.with_vars(sort_vars(self.used_vars()))

    @staticmethod
    def align(a: "MPoly", b: "MPoly") -> Tuple["MPoly", "MPoly"]:
        if a.vars == b.vars:
            return a, b
        u = sort_vars(a.vars + b.vars)
        return a.with_vars(u), b.with_vars(u)

    # -- predicates and accessors -----------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def total_degree(self) -> int:
        """Total degree; the zero polynomial has degree -1."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, v: str) -> int:
        if v not in self.vars:
            return 0
        i = self.vars.index(v)
        return max((e[i] for e in self.terms), default=0)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def coefficient(self, powers: Mapping[str, int]) -> Fraction:
        for v, e in powers.items():
            if e and v not in self.vars:
                return Fraction(0)
        exp = tuple(powers.get(v, 0) for v in self.vars)
        return self.terms.get(exp, Fraction(0))

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            return other
        if isinstance(other, (int, Fraction, Rational)):
            return MPoly.const(other, self.vars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = MPoly.align(self, other)
        if not b.terms:
            return a
        out = dict(a.terms)
        for e, c in b.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s += c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return MPoly._raw(a.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def scale(self, c: Scalar) -> "MPoly":
        c = _frac(c)
        if not c:
            return MPoly.zero(self.vars)
        return MPoly._raw(self.vars, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Rational)) and not isinstance(other, MPoly):
            return self.scale(other)
        if not isinstance(other, MPoly):
            return NotImplemented
        a, b = MPoly.align(self, other)
        if not a.terms or not b.terms:
            return MPoly.zero(a.vars)
        if len(a.terms) < len(b.terms):
            a, b = b, a
        out: Dict[Exponent, Fraction] = {}
        bt = list(b.terms.items())
        for ea, ca in a.terms.items():
            for eb, cb in bt:
                e = tuple([x + y for x, y in zip(ea, eb)])
                c = ca * cb
                s = out.get(e)
                out[e] = c if s is None else s + c
        return MPoly._raw(a.vars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, Rational)):
            return self.scale(Fraction(1) / _frac(other))
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = MPoly.const(1, self.vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Rational)) and not isinstance(other, MPoly):
            other = MPoly.const(other, self.vars)
        if not isinstance(other, MPoly):
            return NotImplemented
        a, b = MPoly.align(self, other)
        return a.terms == b.terms

    def __hash__(self):
        t = self.trim()
        return hash((t.vars, frozenset(t.terms.items())))

    # -- calculus -----------------------------------------------------------

    def diff(self, v: str) -> "MPoly":
        if v not in self.vars:
            return MPoly.zero(self.vars)
        i = self.vars.index(v)
        out = {}
        for exp, c in self.terms.items():
            e = exp[i]
            if e:
                new = exp[:i] + (e - 1,) + exp[i + 1:]
                out[new] = c * e
        return MPoly._raw(self.vars, out)

    # -- evaluation ---------------------------------------------------------

    def _integer_view(self):
        # coefficients as integers over a common denominator, for fast eval
        if self._int_view is None:
            den = 1
            for c in self.terms.values():
                den = den * c.denominator // math.gcd(den, c.denominator)
            ints = [
                (tuple((i, k) for i, k in enumerate(e) if k), int(c * den), sum(e))
                for e, c in self.terms.items()
            ]
            self._int_view = (den, ints)
        return self._int_view

    def _values(self, pt: Mapping[str, object]) -> list:
        vals = []
        for i, v in enumerate(self.vars):
            if v in pt:
                vals.append(pt[v])
            elif any(exp[i] for exp in self.terms):
                raise MissingVariable(f"no value for variable {v!r}")
            else:
                vals.append(0)
        return vals

    def eval(self, pt: Mapping[str, object]):
        """Evaluate at ``pt``.

        Exact when every value is an int or Fraction; falls back to float or
        complex arithmetic when the point contains such values.
        """
        vals = self._values(pt)
        if all(type(x) is int for x in vals):
            return self._eval_int(vals)
        if all(isinstance(x, (int, Fraction)) for x in vals):
            return self._eval_exact([Fraction(x) for x in vals])
        total = 0
        for exp, c in self.terms.items():
            term = float(c)
            for x, e in zip(vals, exp):
                if e:
                    term *= x ** e
            total += term
        return total

    def _eval_int(self, nums: List[int]) -> Fraction:
        den, ints = self._integer_view()
        total = 0
        for support, c, _ in ints:
            t = c
            for i, e in support:
                x = nums[i]
                t *= x if e == 1 else x ** e
                if not t:
                    break
            total += t
        return Fraction(total, den)

    def _eval_exact(self, vals: List[Fraction]) -> Fraction:
        # put all values over a common denominator L, then sum integer
        # numerators grouped by total degree
        L = 1
        for x in vals:
            L = L * x.denominator // math.gcd(L, x.denominator)
        nums = [x.numerator * (L // x.denominator) for x in vals]
        den, ints = self._integer_view()
        acc: Dict[int, int] = {}
        for support, c, deg in ints:
            t = c
            for i, e in support:
                x = nums[i]
                t *= x if e == 1 else x ** e
                if not t:
                    break
            if t:
                acc[deg] = acc.get(deg, 0) + t
        if not acc:
            return Fraction(0)
        top = max(acc)
        num = sum(v * L ** (top - d) for d, v in acc.items())
        return Fraction(num, den * L ** top)

    def __call__(self, *args, **kwargs):
        if args:
            if len(args) == 1 and isinstance(args[0], Mapping):
                return self.eval(args[0])
            return self.eval(dict(zip(self.vars, args)))
        return self.eval(kwargs)

    def subst(self, mapping: Mapping[str, object]) -> "MPoly":
        """Simultaneous substitution of polynomials (or scalars) for variables."""
        if not mapping:
            return self
        repl = {}
        for v, q in mapping.items():
            repl[v] = q if isinstance(q, MPoly) else MPoly.const(q)
        keep = [v for v in self.vars if v not in repl]
        universe = sort_vars(list(keep) + [w for q in repl.values() for w in q.vars])
        keep_idx = [(i, universe.index(v)) for i, v in enumerate(self.vars) if v not in repl]
        sub_idx = [(i, repl[v].with_vars(universe)) for i, v in enumerate(self.vars) if v in repl]
        powers: Dict[Tuple[int, int], MPoly] = {}

        def power(i, q, e):
            key = (i, e)
            if key not in powers:
                powers[key] = q ** e
            return powers[key]

        n = len(universe)
        result: Dict[Exponent, Fraction] = {}
        for exp, c in self.terms.items():
            mono = [0] * n
            for i, j in keep_idx:
                mono[j] = exp[i]
            term = MPoly._raw(universe, {tuple(mono): c})
            for i, q in sub_idx:
                if exp[i]:
                    term = term * power(i, q, exp[i])
            for e, v in term.terms.items():
                s = result.get(e, 0) + v
                if s:
                    result[e] = s
                else:
                    result.pop(e, None)
        return MPoly._raw(universe, result)

    def rename(self, mapping: Mapping[str, str]) -> "MPoly":
        """Rename variables; names mapped together are merged."""
        return self.subst({old: MPoly.var(new) for old, new in mapping.items() if old in self.vars})

    # -- ordering and printing ---------------------------------------------

    def sorted_terms(self) -> List[Tuple[Exponent, Fraction]]:
        """Terms in graded lexicographic order (highest first)."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exp, c in self.sorted_terms():
            factors = []
            for v, e in zip(self.vars, exp):
                if e == 1:
                    factors.append(v)
                elif e:
                    factors.append(f"{v}^{e}")
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = str(mag) + "*" + "*".join(factors)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"MPoly({str(self)!r})"

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "vars": list(self.vars),
            "terms": [
                {"exp": list(e), "num": str(c.numerator), "den": str(c.denominator)}
                for e, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "MPoly":
        vars = tuple(data["vars"])
        terms = {}
        for t in data["terms"]:
            e = tuple(int(x) for x in t["exp"])
            c = Fraction(int(t["num"]), int(t.get("den", "1")))
            terms[e] = terms.get(e, 0) + c
        p = cls(vars, terms)
        return p.with_vars(sort_vars(vars)) if vars != sort_vars(vars) else p


# -- module-level operations ---------------------------------------------------

def mpoly_add(a: MPoly, b: MPoly) -> MPoly:
    return a + b


def mpoly_mul(a: MPoly, b: MPoly) -> MPoly:
    return a * b


def mpoly_diff(p: MPoly, v: str) -> MPoly:
    return p.diff(v)


def mpoly_eval(p: MPoly, pt: Mapping[str, object]):
    return p.eval(pt)


def mpoly_subst(p: MPoly, mapping: Mapping[str, object]) -> MPoly:
    return p.subst(mapping)


def gradient(p: MPoly) -> List[MPoly]:
    return [p.diff(v) for v in p.vars]


def hessian(p: MPoly) -> List[List[MPoly]]:
    grad = gradient(p)
    return [[g.diff(v) for v in p.vars] for g in grad]


def hessian_at(p: MPoly, pt: Mapping[str, object]) -> List[List[Fraction]]:
    """Matrix of second partials at ``pt``, rows and columns in ``p.vars`` order."""
    n = len(p.vars)
    H = [[Fraction(0)] * n for _ in range(n)]
    grad = gradient(p)
    for i in range(n):
        for j in range(i, n):
            val = grad[i].diff(p.vars[j]).eval(pt)
            H[i][j] = H[j][i] = val
    return H


def variables(*names: str) -> List[MPoly]:
    return [MPoly.var(n) for n in names]


# -- parser ----------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>\*\*|[-+*/^()]))"
)


def _tokenize(text: str):
    pos = 0
    tokens = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r} at position {pos} in {text!r}")
        pos = m.end()
        if m.group("num"):
            tokens.append(("num", m.group("num")))
        elif m.group("name"):
            tokens.append(("name", m.group("name")))
        else:
            op = m.group("op")
            tokens.append(("op", "^" if op == "**" else op))
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r} in {self.text!r}")

    def parse(self) -> MPoly:
        if not self.toks:
            raise ParseError("empty expression")
        p = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input {self.toks[self.i][1]!r} in {self.text!r}")
        return p

    def expr(self):
        p = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            _, op = self.take()
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            _, op = self.take()
            q = self.unary()
            if op == "*":
                p = p * q
            else:
                if not q.is_constant() or q.is_zero():
                    raise ParseError(f"division by a non-constant or zero in {self.text!r}")
                p = p / q.constant_term()
        return p

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num" or not val.isdigit():
                raise ParseError(f"exponent must be a non-negative integer in {self.text!r}")
            return base ** int(val)
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return MPoly.const(Fraction(val))
        if kind == "name":
            return MPoly.var(val)
        if (kind, val) == ("op", "("):
            p = self.expr()
            self.expect(")")
            return p
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")


def parse(text: str) -> MPoly:
    """Parse a human-readable polynomial such as ``7/25*x^2 - 48/25*x*z``."""
    return _Parser(text).parse()
