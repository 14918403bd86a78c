"""Additive and multiplicative characters, Gauss and Jacobi sums, mixed
character sums and the Carlitz order indicator.

Character m sends g^k to exp(2 pi i m k / (q-1)). Values at 0 follow an
explicit convention: ``trivial_at_zero=True`` gives the trivial character the
value 1 at 0 (every nontrivial character is 0 there), ``False`` makes every
character vanish at 0.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith import divisors, euler_phi, moebius, squarefree_divisor_count
from .budget import check_budget
from .field import FieldCtx
from .poly import MultiPoly


def _roots(m: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(m) / m)


@dataclass(frozen=True)
class MulCharacter:
    ctx: FieldCtx = field(repr=False, compare=False)
    index: int

    def __post_init__(self):
        object.__setattr__(self, "index", self.index % (self.ctx.q - 1))

    @property
    def q(self) -> int:
        return self.ctx.q

    @property
    def order(self) -> int:
        m = self.q - 1
        return m // math.gcd(self.index, m)

    @property
    def is_trivial(self) -> bool:
        return self.index == 0

    def __mul__(self, other: MulCharacter) -> MulCharacter:
        return MulCharacter(self.ctx, self.index + other.index)

    def __pow__(self, k: int) -> MulCharacter:
        return MulCharacter(self.ctx, self.index * k)

    def conj(self) -> MulCharacter:
        return MulCharacter(self.ctx, -self.index)

    def __call__(self, x: int, trivial_at_zero: bool = False) -> complex:
        if x == 0:
            return 1.0 + 0j if (self.is_trivial and trivial_at_zero) else 0j
        m = self.q - 1
        k = int(self.ctx.log[x]) * self.index % m
        return cmath.exp(2j * cmath.pi * k / m)

    def values(self, trivial_at_zero: bool = False) -> np.ndarray:
        """Values on every element, indexed by encoding."""
        return character_table(self.ctx, [self.index], trivial_at_zero)[0]


def character_table(ctx: FieldCtx, indices, trivial_at_zero: bool = False) -> np.ndarray:
    """Complex matrix T[j, x] = chi_{indices[j]}(x) over all encodings x."""
    m = ctx.q - 1
    idx = np.asarray(list(indices), dtype=np.int64) % m
    logs = ctx.log[1:]
    out = np.zeros((idx.size, ctx.q), dtype=np.complex128)
    out[:, 1:] = _roots(m)[np.outer(idx, logs) % m]
    if trivial_at_zero:
        out[idx == 0, 0] = 1.0
    return out


def characters_of_order(ctx: FieldCtx, r: int) -> list[MulCharacter]:
    m = ctx.q - 1
    if r < 1 or m % r:
        raise ValueError(f"{r} does not divide q-1 = {m}")
    step = m // r
    return [MulCharacter(ctx, j * step) for j in range(r) if math.gcd(j, r) == 1]


def quadratic_character(ctx: FieldCtx) -> MulCharacter:
    if ctx.q % 2 == 0:
        raise ValueError("quadratic character needs odd q")
    return MulCharacter(ctx, (ctx.q - 1) // 2)


def additive_table(ctx: FieldCtx) -> np.ndarray:
    """psi(x) = exp(2 pi i Tr(x) / p) for every encoding x."""
    return _roots(ctx.p)[ctx.trace_table]


def additive_char(ctx: FieldCtx, x: int) -> complex:
    return cmath.exp(2j * cmath.pi * ctx.trace(x) / ctx.p)


def dpower_indicator_sum(ctx: FieldCtx, d: int, c: int) -> complex:
    """sum_{j<d} chi_d^j(c): 1 at c = 0, d on nonzero d-th powers, else 0."""
    m = ctx.q - 1
    if d < 1 or m % d:
        raise ValueError(f"{d} does not divide q-1 = {m}")
    chi = MulCharacter(ctx, m // d)
    return sum((chi**j)(c, trivial_at_zero=True) for j in range(d))


def gauss_sum(chi: MulCharacter) -> complex:
    """sum_x chi(x) psi(x) with chi(0) = 0."""
    return complex(chi.values(False) @ additive_table(chi.ctx))


@lru_cache(maxsize=64)
def _gauss_vector(ctx: FieldCtx) -> np.ndarray:
    m = ctx.q - 1
    psi_on_powers = additive_table(ctx)[ctx.exp]
    # sum_k psi(g^k) exp(2 pi i j k / m) for every index j
    v = np.fft.ifft(psi_on_powers) * m
    v.setflags(write=False)
    return v


def gauss_sums(ctx: FieldCtx) -> np.ndarray:
    """Gauss sums of all q-1 characters, indexed by character index."""
    return _gauss_vector(ctx)


def _as_indices(chars) -> list[int]:
    return [c.index if isinstance(c, MulCharacter) else int(c) for c in chars]


def _ctx_of(chars) -> FieldCtx:
    ctxs = {c.ctx.q for c in chars}
    if len(ctxs) != 1:
        raise ValueError("characters must share one field")
    return chars[0].ctx


def jacobi_sum_direct(
    chars: list[MulCharacter],
    b: int,
    coeffs=None,
    *,
    trivial_at_zero: bool = True,
    budget: int | None = None,
) -> complex:
    """sum over y in F_q^s with sum a_i y_i = b of prod lambda_i(y_i).

    Enumerates the first s-1 coordinates and solves for the last one.
    """
    if not chars:
        raise ValueError("need at least one character")
    F = _ctx_of(chars)
    s = len(chars)
    a = [1] * s if coeffs is None else list(coeffs)
    if len(a) != s or any(x == 0 for x in a):
        raise ValueError("coefficients must be nonzero, one per character")
    check_budget(float(F.q) ** (s - 1) * s, "jacobi_sum_direct", budget)
    T = character_table(F, _as_indices(chars), trivial_at_zero)
    if s == 1:
        return complex(T[0, F.div(b, a[0])])
    q = F.q
    total = 0j
    last_inv = F.inv(a[-1])
    grid = np.indices((q,) * (s - 1)).reshape(s - 1, -1) if s <= 3 else None
    if grid is None:
        for head in np.ndindex(*(q,) * (s - 2)):
            acc = 0
            prod = 1.0 + 0j
            for i, y in enumerate(head):
                acc = F.add(acc, F.mul(a[i], y))
                prod *= T[i, y]
            if prod == 0:
                continue
            ys = F.elements
            partial = F.add_v(acc, F.mul_v(a[s - 2], ys))
            last = F.mul_v(F.add_v(b, F.neg_v(partial)), last_inv)
            total += prod * complex(np.sum(T[s - 2, ys] * T[s - 1, last]))
        return total
    acc = np.zeros(grid.shape[1], dtype=np.int64)
    prod = np.ones(grid.shape[1], dtype=np.complex128)
    for i in range(s - 1):
        acc = F.add_v(acc, F.mul_v(a[i], grid[i]))
        prod *= T[i, grid[i]]
    last = F.mul_v(F.add_v(b, F.neg_v(acc)), last_inv)
    return complex(np.sum(prod * T[s - 1, last]))


def jacobi_sum_fast(chars: list[MulCharacter], b: int, coeffs=None) -> complex:
    """Jacobi sum through Gauss-sum factorization (trivial character is 1 at 0).

    b = 0 is delegated to direct summation.
    """
    if not chars:
        raise ValueError("need at least one character")
    F = _ctx_of(chars)
    s = len(chars)
    a = [1] * s if coeffs is None else list(coeffs)
    if len(a) != s or any(x == 0 for x in a):
        raise ValueError("coefficients must be nonzero, one per character")
    if b == 0:
        return jacobi_sum_direct(chars, b, a)
    m = F.q - 1
    idx = [c.index for c in chars]
    trivial = [i == 0 for i in idx]
    if all(trivial):
        j1 = complex(F.q ** (s - 1))
    elif any(trivial):
        return 0j
    else:
        g = gauss_sums(F)
        num = complex(np.prod([g[i] for i in idx]))
        total = sum(idx) % m
        j1 = num / g[total] if total else -num / F.q
    # substitute z_i = a_i y_i / b
    scale = 0
    logb = int(F.log[b])
    for i, ai in zip(idx, a):
        scale += i * (logb - int(F.log[ai]))
    return j1 * cmath.exp(2j * cmath.pi * (scale % m) / m)


def jacobi_table_fast(ctx: FieldCtx, idx_lists, b: int, coeffs=None) -> np.ndarray:
    """J_b over every tuple of nontrivial indices (one list per coordinate), via Gauss sums.

    Needs b != 0. The result has one axis per coordinate.
    """
    if b == 0:
        raise ValueError("the Gauss-sum factorization needs b != 0")
    a = [1] * len(idx_lists) if coeffs is None else list(coeffs)
    m = ctx.q - 1
    g = gauss_sums(ctx)
    k = len(idx_lists)
    grids = np.meshgrid(*idx_lists, indexing="ij")
    num = np.ones(grids[0].shape, dtype=np.complex128)
    total = np.zeros(grids[0].shape, dtype=np.int64)
    phase = np.zeros(grids[0].shape, dtype=np.int64)
    logb = int(ctx.log[b])
    for G, ai in zip(grids, a):
        num = num * g[G]
        total = total + G
        phase = phase + G * (logb - int(ctx.log[ai]))
    total %= m
    denom = np.where(total == 0, -ctx.q, g[total])
    j1 = num / denom
    if k == 1:
        j1 = np.ones_like(j1)
    return j1 * np.exp(2j * np.pi * (phase % m) / m)


def jacobi_table_direct(ctx: FieldCtx, idx_lists, b: int, coeffs=None, *, budget: int | None = None) -> np.ndarray:
    """J_b over every tuple of indices (one list per coordinate), by direct summation.

    The trivial character takes the value 1 at 0, as in jacobi_sum_direct.

    Builds the table over all partial sums t of the first k-1 coordinates, then
    contracts the last coordinate at t = b.
    """
    F = ctx
    q = F.q
    k = len(idx_lists)
    a = [1] * k if coeffs is None else list(coeffs)
    sizes = [len(v) for v in idx_lists]
    check_budget(float(q) * q * math.prod(sizes[:-1]) + float(q) * math.prod(sizes), "jacobi_table_direct", budget)
    T = [character_table(F, lst, True) for lst in idx_lists]
    elems = F.elements
    if k == 1:
        return T[0][:, F.div(b, a[0])].copy()
    # table[t, ...] = sum over y_1..y_j with sum a_i y_i = t of prod chi(y_i)
    table = np.zeros((q, len(idx_lists[0])), dtype=np.complex128)
    table[F.mul_v(a[0], elems)] = T[0].T
    for j in range(1, k - 1):
        new = np.zeros((q,) + table.shape[1:] + (len(idx_lists[j]),), dtype=np.complex128)
        for y in range(q):
            shift = F.add_v(elems, F.mul(a[j], y))  # t -> t + a_j y
            new[shift] += table[..., None] * T[j][:, y]
        table = new
    # last coordinate: t = b - a_k y
    last = F.add_v(b, F.neg_v(F.mul_v(a[-1], elems)))
    picked = table[last]  # (q, ...) indexed by y
    return np.tensordot(picked, T[-1], axes=([0], [1]))


def jacobi_magnitude_law(chars: list[MulCharacter]) -> float | None:
    """|J_1| predicted for all-nontrivial tuples; None when some character is trivial."""
    if any(c.is_trivial for c in chars):
        return None
    s = len(chars)
    q = chars[0].q
    prod_trivial = sum(c.index for c in chars) % (q - 1) == 0
    return q ** ((s - 2) / 2) if prod_trivial else q ** ((s - 1) / 2)


def mixed_char_sum(f: MultiPoly, chars: list[MulCharacter], *, budget: int | None = None) -> complex:
    """sum_{x in F_q^s} psi(f(x)) prod lambda_i(x_i), every character 0 at 0."""
    F = f.ctx
    s = f.nvars
    if len(chars) != s:
        raise ValueError(f"need {s} characters, got {len(chars)}")
    check_budget(float(F.q) ** s * (len(f.terms) + s), "mixed_char_sum", budget)
    psi = additive_table(F)
    T = character_table(F, _as_indices(chars), False)
    q = F.q
    total = 0j
    chunk_vars = min(s, max(1, int(math.log(2_000_000, q))))
    outer = s - chunk_vars
    inner = np.indices((q,) * chunk_vars).reshape(chunk_vars, -1)
    for head in np.ndindex(*(q,) * outer):
        w = 1.0 + 0j
        for i, y in enumerate(head):
            w *= T[i, y]
        if w == 0:
            continue
        cols = [np.full(1, y, dtype=np.int64) for y in head] + list(inner)
        vals = f.eval_grid(cols)
        prod = psi[vals]
        for j in range(chunk_vars):
            prod = prod * T[outer + j, inner[j]]
        total += w * complex(prod.sum())
    return total


def mixed_char_sums_pairs(f: MultiPoly) -> np.ndarray:
    """All (q-1)^2 mixed sums for a bivariate f, as a matrix over character indices."""
    if f.nvars != 2:
        raise ValueError("pairwise table needs a bivariate polynomial")
    F = f.ctx
    x, y = np.meshgrid(F.elements, F.elements, indexing="ij")
    Psi = additive_table(F)[f.eval_grid([x, y])]
    T = character_table(F, range(F.q - 1), False)
    return T @ Psi @ T.T


def _mu_phi_weight(r: int, d: int) -> Fraction:
    k = r // math.gcd(r, d)
    return Fraction(moebius(k), euler_phi(k))


def indicator_weights(q_minus_1: int, d: int) -> dict[int, Fraction]:
    """Divisor weights mu(r/(r,d))/phi(r/(r,d)) of the order indicator, nonzero ones only."""
    out = {}
    for r in divisors(q_minus_1):
        w = _mu_phi_weight(r, d)
        if w:
            out[r] = w
    return out


def order_indicator(ctx: FieldCtx, d: int, y: int) -> float:
    """Character-sum evaluation of the indicator of elements of order (q-1)/d.

    Equals 1 or 0 on nonzero y and phi((q-1)/d)/(q-1) at y = 0.
    """
    m = ctx.q - 1
    if d < 1 or m % d:
        raise ValueError(f"{d} does not divide q-1 = {m}")
    total = 0j
    for r, w in indicator_weights(m, d).items():
        inner = sum(chi(y, trivial_at_zero=True) for chi in characters_of_order(ctx, r))
        total += float(w) * inner
    return float(euler_phi(m // d) / m * total.real)


def mu_phi_divisor_sum(q_minus_1: int, d: int) -> int:
    """sum_{r | q-1} |mu(r/(r,d))| phi(r) / phi(r/(r,d)); equals d * W((q-1)/d)."""
    if d < 1 or q_minus_1 % d:
        raise ValueError(f"{d} does not divide {q_minus_1}")
    total = Fraction(0)
    for r in divisors(q_minus_1):
        k = r // math.gcd(r, d)
        if moebius(k):
            total += Fraction(euler_phi(r), euler_phi(k))
    if total.denominator != 1:
        raise ArithmeticError(f"non-integral divisor sum {total}")
    return int(total)


def mu_phi_divisor_sum_gcd_form(q_minus_1: int, d: int) -> int:
    """(q-1, d) * W((d, (q-1)/(q-1, d))), a gcd closed form.

    Kept for comparison only; it disagrees with the divisor sum (e.g. 4 vs 8
    at q-1 = 12, d = 2).
    """
    g = math.gcd(q_minus_1, d)
    return g * squarefree_divisor_count(math.gcd(d, q_minus_1 // g))
