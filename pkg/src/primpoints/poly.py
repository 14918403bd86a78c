"""Sparse multivariate polynomials over a FieldCtx.

Text grammar (variables are 1-indexed)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := atom ['^' INT]
    atom   := INT | 'x' INT | 'g' | '(' expr ')'

Integer literals are reduced into the prime subfield; ``g`` is the field's
fixed generator, so ``3*g^5*x1^2`` names any coefficient of GF(p^n).
"""

from __future__ import annotations

import enum
import itertools
import math
import re
from dataclasses import dataclass, field

import numpy as np

from .arith import subsets
from .field import FieldCtx, build_field, embedding

Exps = tuple[int, ...]


class PolyParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.message = message
        self.position = position


@dataclass(frozen=True)
class MultiPoly:
    ctx: FieldCtx = field(repr=False, compare=False)
    nvars: int
    terms: tuple[tuple[Exps, int], ...]

    def __post_init__(self):
        if self.nvars < 1:
            raise ValueError("a polynomial needs at least one variable")
        for exps, c in self.terms:
            if len(exps) != self.nvars:
                raise ValueError(f"exponent vector {exps} does not have {self.nvars} entries")
            if c == 0:
                raise ValueError("zero coefficient in canonical term list")

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.ctx.q == other.ctx.q and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.ctx.q, self.nvars, self.terms))

    @classmethod
    def from_dict(cls, ctx: FieldCtx, nvars: int, coeffs: dict[Exps, int]) -> MultiPoly:
        terms = [(tuple(e), int(c)) for e, c in coeffs.items() if c != 0]
        terms.sort(key=lambda t: (sum(t[0]), t[0]), reverse=True)
        return cls(ctx, nvars, tuple(terms))

    @classmethod
    def constant(cls, ctx: FieldCtx, nvars: int, c: int) -> MultiPoly:
        return cls.from_dict(ctx, nvars, {(0,) * nvars: c})

    def as_dict(self) -> dict[Exps, int]:
        return dict(self.terms)

    @property
    def q(self) -> int:
        return self.ctx.q

    @property
    def degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return self.degree <= 0

    @property
    def constant_term(self) -> int:
        return self.as_dict().get((0,) * self.nvars, 0)

    def homogeneous_part(self, d: int) -> MultiPoly:
        return MultiPoly(self.ctx, self.nvars, tuple(t for t in self.terms if sum(t[0]) == d))

    def restrict(self, keep) -> MultiPoly:
        """Set every variable outside ``keep`` (0-based indices) to zero."""
        keep = set(keep)
        terms = tuple(
            (e, c) for e, c in self.terms if all(e[i] == 0 for i in range(self.nvars) if i not in keep)
        )
        return MultiPoly(self.ctx, self.nvars, terms)

    def derivative(self, i: int) -> MultiPoly:
        F = self.ctx
        out: dict[Exps, int] = {}
        for e, c in self.terms:
            if e[i] == 0:
                continue
            k = F.mul(c, F.from_int(e[i]))
            if k:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = k
        return MultiPoly.from_dict(F, self.nvars, out)

    def variable_degree(self, i: int) -> int:
        return max((e[i] for e, _ in self.terms), default=0)

    def map_coefficients(self, ctx: FieldCtx, table) -> MultiPoly:
        return MultiPoly.from_dict(ctx, self.nvars, {e: int(table[c]) for e, c in self.terms})

    # --- evaluation ---------------------------------------------------------

    def __call__(self, *point: int) -> int:
        return self.eval(point)

    def eval(self, point) -> int:
        point = tuple(point)
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} coordinates, polynomial has {self.nvars} variables")
        F = self.ctx
        acc = 0
        for e, c in self.terms:
            v = c
            for x, k in zip(point, e):
                if k:
                    v = F.mul(v, F.pow(x, k))
            acc = F.add(acc, v)
        return acc

    def eval_grid(self, columns) -> np.ndarray:
        """Vectorized evaluation; ``columns`` are broadcastable arrays, one per variable."""
        if len(columns) != self.nvars:
            raise ValueError(f"got {len(columns)} coordinate arrays for {self.nvars} variables")
        F = self.ctx
        m = F.q - 1
        cols = [np.asarray(c, dtype=np.int64) for c in columns]
        shape = np.broadcast_shapes(*(c.shape for c in cols))
        logs = [F.log[c] for c in cols]
        zeros = [c == 0 for c in cols]
        acc = np.zeros(shape, dtype=np.int64)
        for e, c in self.terms:
            lg = np.full(shape, int(F.log[c]), dtype=np.int64)
            dead = np.zeros(shape, dtype=bool)
            for k, L, Z in zip(e, logs, zeros):
                if k:
                    lg = lg + k * L
                    dead = dead | Z
            val = np.where(dead, 0, F.exp[lg % m])
            acc = F.add_v(acc, val)
        return acc

    # --- transformations ------------------------------------------------------

    def twist(self, r) -> MultiPoly:
        """Substitute x_i -> x_i^{r_i}."""
        r = tuple(int(v) for v in r)
        if len(r) != self.nvars:
            raise ValueError(f"twist vector has {len(r)} entries, polynomial has {self.nvars} variables")
        if any(v < 1 for v in r):
            raise ValueError("twist exponents must be positive")
        out: dict[Exps, int] = {}
        F = self.ctx
        for e, c in self.terms:
            ne = tuple(a * b for a, b in zip(e, r))
            out[ne] = F.add(out.get(ne, 0), c)
        return MultiPoly.from_dict(F, self.nvars, out)

    def __add__(self, other: MultiPoly) -> MultiPoly:
        F = self.ctx
        n = max(self.nvars, other.nvars)
        out: dict[Exps, int] = {}
        for e, c in self.terms + other.terms:
            e = e + (0,) * (n - len(e))
            out[e] = F.add(out.get(e, 0), c)
        return MultiPoly.from_dict(F, n, out)

    def __neg__(self) -> MultiPoly:
        return MultiPoly.from_dict(self.ctx, self.nvars, {e: self.ctx.neg(c) for e, c in self.terms})

    def __sub__(self, other: MultiPoly) -> MultiPoly:
        return self + (-other)

    def __mul__(self, other: MultiPoly) -> MultiPoly:
        F = self.ctx
        n = max(self.nvars, other.nvars)
        out: dict[Exps, int] = {}
        for e1, c1 in self.terms:
            e1 = e1 + (0,) * (n - len(e1))
            for e2, c2 in other.terms:
                e2 = e2 + (0,) * (n - len(e2))
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = F.add(out.get(e, 0), F.mul(c1, c2))
        return MultiPoly.from_dict(F, n, out)

    def __pow__(self, k: int) -> MultiPoly:
        result = MultiPoly.constant(self.ctx, self.nvars, 1)
        for _ in range(k):
            result = result * self
        return result

    # --- text -----------------------------------------------------------------

    def _coeff_text(self, c: int) -> str:
        F = self.ctx
        if c < F.p:
            return str(c)
        return f"g^{F.dlog(c)}"

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            mono = [f"x{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k]
            if not mono:
                parts.append(self._coeff_text(c))
            elif c == 1:
                parts.append("*".join(mono))
            else:
                parts.append("*".join([self._coeff_text(c)] + mono))
        return "+".join(parts)

    def __str__(self):
        return self.to_text()


# --- parser -----------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(x)|(g)|([-+*^()]))")


def _tokenize(text: str):
    pos = 0
    toks = []
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolyParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            toks.append(("int", int(m.group(1)), start))
        elif m.group(2):
            toks.append(("x", None, start))
        elif m.group(3):
            toks.append(("g", None, start))
        else:
            toks.append((m.group(4), None, start))
        pos = m.end()
    toks.append(("end", None, len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, ctx: FieldCtx):
        self.text = text
        self.ctx = ctx
        self.toks = _tokenize(text)
        self.i = 0
        self.max_var = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[0] if tok[1] is None else tok[1])
            raise PolyParseError(f"expected {kind}, found {what}", tok[2])
        self.i += 1
        return tok

    # polynomials during parsing: dict {frozen sorted ((var, exp), ...): coeff}
    def _const(self, c):
        return {(): c} if c else {}

    def _add(self, a, b):
        F = self.ctx
        out = dict(a)
        for k, v in b.items():
            s = F.add(out.get(k, 0), v)
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return out

    def _mul(self, a, b):
        F = self.ctx
        out = {}
        for k1, v1 in a.items():
            for k2, v2 in b.items():
                m = dict(k1)
                for var, e in k2:
                    m[var] = m.get(var, 0) + e
                key = tuple(sorted(m.items()))
                s = F.add(out.get(key, 0), F.mul(v1, v2))
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return out

    def _neg(self, a):
        return {k: self.ctx.neg(v) for k, v in a.items()}

    def parse(self):
        if self.peek()[0] == "end":
            raise PolyParseError("empty polynomial", 0)
        result = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise PolyParseError(f"unexpected {tok[0] if tok[1] is None else tok[1]!r}", tok[2])
        return result

    def expr(self):
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.take()[0] == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = self._neg(acc)
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            t = self.term()
            acc = self._add(acc, t if op == "+" else self._neg(t))
        return acc

    def term(self):
        acc = self.factor()
        while self.peek()[0] == "*":
            self.take()
            acc = self._mul(acc, self.factor())
        return acc

    def factor(self):
        base, is_var = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.peek()
            if tok[0] == "-":
                raise PolyParseError("negative exponent", tok[2])
            e = self.take("int")[1]
            if is_var is not None:
                return {((is_var, e),): 1} if e else {(): 1}
            if set(base) <= {()}:
                return self._const(self.ctx.pow(base.get((), 0), e))
            out = {(): 1}
            for _ in range(e):
                out = self._mul(out, base)
            return out
        return base

    def atom(self):
        kind, val, pos = self.peek()
        if kind == "int":
            self.take()
            return self._const(self.ctx.from_int(val)), None
        if kind == "x":
            self.take()
            tok = self.peek()
            if tok[0] != "int":
                raise PolyParseError("expected variable index after 'x'", tok[2])
            idx = self.take()[1]
            if idx == 0:
                raise PolyParseError("variable index 0 (variables start at x1)", tok[2])
            self.max_var = max(self.max_var, idx)
            return {((idx, 1),): 1}, idx
        if kind == "g":
            self.take()
            return self._const(self.ctx.generator), None
        if kind == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner, None
        what = "end of input" if kind == "end" else repr(kind if val is None else val)
        raise PolyParseError(f"unexpected {what}", pos)


def parse_poly(text: str, ctx: FieldCtx, nvars: int | None = None) -> MultiPoly:
    """Parse ``text`` over ``ctx``; the variable count is the highest index used
    unless ``nvars`` asks for more."""
    parser = _Parser(text, ctx)
    raw = parser.parse()
    s = max(parser.max_var, nvars or 0, 1)
    coeffs = {}
    for key, c in raw.items():
        e = [0] * s
        for var, k in key:
            e[var - 1] = k
        coeffs[tuple(e)] = c
    return MultiPoly.from_dict(ctx, s, coeffs)


# --- Fermat shapes -------------------------------------------------------------------


@dataclass(frozen=True)
class FermatShape:
    """a_1 x_1^{d_1} + ... + a_s x_s^{d_s} - b."""

    a: tuple[int, ...]
    d: tuple[int, ...]
    b: int

    def __post_init__(self):
        if len(self.a) != len(self.d):
            raise ValueError("coefficient and exponent vectors differ in length")
        if any(x == 0 for x in self.a):
            raise ValueError("Fermat coefficients must be nonzero")
        if any(k < 1 for k in self.d):
            raise ValueError("Fermat exponents must be positive")

    @property
    def s(self) -> int:
        return len(self.a)

    def to_poly(self, ctx: FieldCtx) -> MultiPoly:
        s = self.s
        coeffs = {}
        for i, (ai, di) in enumerate(zip(self.a, self.d)):
            e = [0] * s
            e[i] = di
            coeffs[tuple(e)] = ai
        if self.b:
            coeffs[(0,) * s] = ctx.neg(self.b)
        return MultiPoly.from_dict(ctx, s, coeffs)


def as_fermat_shape(f: MultiPoly) -> FermatShape | None:
    """Return the Fermat data of f, or None when f is not of that form."""
    s = f.nvars
    a = [0] * s
    d = [0] * s
    b = 0
    for e, c in f.terms:
        support = [i for i, k in enumerate(e) if k]
        if not support:
            b = f.ctx.neg(c)
            continue
        if len(support) != 1:
            return None
        i = support[0]
        if a[i]:
            return None
        a[i], d[i] = c, e[i]
    if any(x == 0 for x in a):
        return None
    return FermatShape(tuple(a), tuple(d), b)


# --- Dwork regularity ----------------------------------------------------------------


class Regularity(str, enum.Enum):
    REGULAR_CERTIFIED = "REGULAR_CERTIFIED"
    NOT_REGULAR = "NOT_REGULAR"
    UNKNOWN = "UNKNOWN"


def _diagonal_top(top: MultiPoly, d: int) -> bool:
    seen = set()
    for e, _ in top.terms:
        support = [i for i, k in enumerate(e) if k]
        if len(support) != 1 or e[support[0]] != d:
            return False
        seen.add(support[0])
    return len(seen) == top.nvars


def _projective_points(F: FieldCtx, k: int, chunk: int = 1 << 16):
    """Yield (k, N) arrays of projective representatives (first nonzero coordinate 1)."""
    for lead in range(k):
        free = k - 1 - lead
        total = F.q**free
        for start in range(0, total, chunk):
            idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
            cols = np.zeros((k, idx.size), dtype=np.int64)
            cols[lead] = 1
            rem = idx
            for j in range(free):
                rem, cols[lead + 1 + j] = np.divmod(rem, F.q)
            yield cols


def _has_singular_point(top: MultiPoly, keep: list[int], big: FieldCtx, emb) -> bool:
    k = len(keep)
    partials = []
    for i in keep:
        dpoly = top.derivative(i)
        sub = {tuple(e[j] for j in keep): c for e, c in dpoly.terms}
        partials.append(MultiPoly.from_dict(top.ctx, k, sub).map_coefficients(big, emb))
    for cols in _projective_points(big, k):
        alive = np.ones(cols.shape[1], dtype=bool)
        for dp in partials:
            alive &= dp.eval_grid(list(cols)) == 0
            if not alive.any():
                break
        if alive.any():
            return True
    return False


SINGULAR_SEARCH_LIMIT = 2_000_000


def dwork_regularity_check(f: MultiPoly, max_extension: int = 3) -> Regularity:
    """Three-valued Dwork-regularity test.

    Certifies only when the top form is a diagonal sum c_i x_i^d with all
    c_i != 0 and gcd(d, p) = 1: its gradient then vanishes only at the origin,
    and so does that of every coordinate restriction. Otherwise looks for a
    singular projective point of some restricted top form over GF(q^j),
    j <= max_extension (skipping extensions too large to enumerate).
    """
    if f.is_constant():
        raise ValueError("Dwork regularity needs a nonconstant polynomial")
    F = f.ctx
    d = f.degree
    if math.gcd(d, F.p) != 1:
        return Regularity.NOT_REGULAR
    top = f.homogeneous_part(d)
    s = f.nvars
    for keep in subsets(range(s), nonempty=True):
        if top.restrict(keep).is_zero():
            return Regularity.NOT_REGULAR
    if _diagonal_top(top, d):
        return Regularity.REGULAR_CERTIFIED
    for j in range(1, max_extension + 1):
        if F.n * j > 64:
            break
        Q = F.q**j
        big = None
        for keep in subsets(range(s), nonempty=True):
            k = len(keep)
            if k < 2 or Q ** (k - 1) * k > SINGULAR_SEARCH_LIMIT:
                continue
            if big is None:
                try:
                    big = build_field(F.p, F.n * j)
                except ValueError:
                    break
                emb = embedding(F, big)
            if _has_singular_point(top.restrict(keep), list(keep), big, emb):
                return Regularity.NOT_REGULAR
    return Regularity.UNKNOWN


def diagonal_poly(ctx: FieldCtx, coeffs, d: int, lower: dict | None = None) -> MultiPoly:
    """sum c_i x_i^d plus optional lower-degree terms {exps: coeff}."""
    s = len(coeffs)
    out = dict(lower or {})
    for i, c in enumerate(coeffs):
        e = [0] * s
        e[i] = d
        out[tuple(e)] = ctx.add(out.get(tuple(e), 0), c)
    return MultiPoly.from_dict(ctx, s, out)


def random_poly(ctx: FieldCtx, nvars: int, max_degree: int, nterms: int, rng) -> MultiPoly:
    """Random polynomial with up to ``nterms`` terms of total degree <= max_degree."""
    monos = [e for e in itertools.product(range(max_degree + 1), repeat=nvars) if sum(e) <= max_degree]
    picks = rng.choice(len(monos), size=min(nterms, len(monos)), replace=False)
    out = {}
    for k in picks:
        out[monos[int(k)]] = int(rng.integers(1, ctx.q))
    return MultiPoly.from_dict(ctx, nvars, out)
