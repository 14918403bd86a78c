"""Exact point counts: brute-force oracles, inclusion-exclusion over zero
patterns, the Moebius formula for primitive points, and counts of solutions
restricted to (R, d)-free coordinates."""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product

import numpy as np

from .arith import (
    divisors,
    euler_phi,
    factorize,
    moebius,
    squarefree_divisor_count,
    subsets,
)
from .budget import check_budget
from .field import FieldCtx
from .poly import MultiPoly

CHUNK = 1 << 18
ZERO_TENSOR_LIMIT = 1 << 22


def iter_product(sets, chunk: int = CHUNK):
    """Yield lists of coordinate columns covering the cartesian product of ``sets``."""
    sets = [np.asarray(v, dtype=np.int64) for v in sets]
    sizes = [len(v) for v in sets]
    total = math.prod(sizes)
    if total == 0:
        return
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        cols = [None] * len(sets)
        for i in range(len(sets) - 1, -1, -1):
            idx, r = np.divmod(idx, sizes[i])
            cols[i] = sets[i][r]
        yield cols


def _zeros_of(f: MultiPoly, sets, what: str, budget=None) -> int:
    cost = float(math.prod(len(v) for v in sets)) * max(1, len(f.terms))
    check_budget(cost, what, budget)
    if f.nvars == 0:  # pragma: no cover
        return int(f.is_zero())
    return sum(int(np.count_nonzero(f.eval_grid(cols) == 0)) for cols in iter_product(sets))


def count_points(f: MultiPoly, *, budget: int | None = None) -> int:
    """N(f): zeros of f in F_q^s."""
    F = f.ctx
    return _zeros_of(f, [F.elements] * f.nvars, "count_points", budget)


def count_points_nonzero(f: MultiPoly, *, budget: int | None = None) -> int:
    """N*(f): zeros of f with every coordinate nonzero."""
    F = f.ctx
    return _zeros_of(f, [F.nonzero] * f.nvars, "count_points_nonzero", budget)


def count_points_zeroed(f: MultiPoly, I, *, budget: int | None = None) -> int:
    """N_I(f): zeros with x_i = 0 for every i outside I (I holds 1-based indices)."""
    F = f.ctx
    I = set(I)
    if any(not 1 <= i <= f.nvars for i in I):
        raise ValueError(f"index set {sorted(I)} is not inside 1..{f.nvars}")
    zero = np.zeros(1, dtype=np.int64)
    sets = [F.elements if i + 1 in I else zero for i in range(f.nvars)]
    return _zeros_of(f, sets, "count_points_zeroed", budget)


def nstar_via_inclusion_exclusion(f: MultiPoly, *, budget: int | None = None) -> int:
    s = f.nvars
    total = 0
    for I in subsets(range(1, s + 1)):
        total += (-1) ** (s - len(I)) * count_points_zeroed(f, I, budget=budget)
    return total


def _split_linear_last(f: MultiPoly):
    """f = A * x_s + B with A, B free of x_s, or None when deg_{x_s} f != 1."""
    s = f.nvars
    if f.variable_degree(s - 1) != 1:
        return None
    A, B = {}, {}
    for e, c in f.terms:
        if e[-1] == 1:
            A[e[:-1] + (0,)] = c
        else:
            B[e] = c
    return MultiPoly.from_dict(f.ctx, s, A), MultiPoly.from_dict(f.ctx, s, B)


def count_primitive_brute(f: MultiPoly, *, budget: int | None = None) -> int:
    """P_q(f): zeros of f whose coordinates are all primitive elements."""
    F = f.ctx
    s = f.nvars
    prim = F.primitive_elements()
    phi = len(prim)
    split = _split_linear_last(f)
    if split is None:
        return _zeros_of(f, [prim] * s, "count_primitive_brute", budget)
    A, B = split
    check_budget(float(phi) ** (s - 1) * max(1, len(f.terms)), "count_primitive_brute", budget)
    zero = np.zeros(1, dtype=np.int64)
    total = 0
    for cols in iter_product([prim] * (s - 1) + [zero]):
        a = A.eval_grid(cols)
        b = B.eval_grid(cols)
        solvable = a != 0
        xs = F.mul_v(F.neg_v(b[solvable]), F.exp[-F.log[a[solvable]] % (F.q - 1)])
        total += int(np.count_nonzero(F.primitive_mask[xs]))
        total += phi * int(np.count_nonzero(~solvable & (b == 0)))
    return total


def primitive_via_moebius(f: MultiPoly, *, budget: int | None = None) -> int:
    """sum over squarefree r_i | q-1 of prod mu(r_i)/r_i * N*(f(x^r)), in exact rationals."""
    F = f.ctx
    s = f.nvars
    sq = divisors(F.q - 1, squarefree_only=True)
    check_budget(float(len(sq)) ** s * float(F.q - 1) ** s * max(1, len(f.terms)), "primitive_via_moebius", budget)
    m = F.q - 1
    zeros = None
    if m**s <= ZERO_TENSOR_LIMIT:
        # zero pattern of f on (F_q^*)^s in log coordinates: zeros[k_1, .., k_s] <=> f(g^k) = 0;
        # the twist x -> x^r is then the index map k -> r k mod (q-1)
        cols = list(np.meshgrid(*([F.exp] * s), indexing="ij"))
        zeros = (f.eval_grid([c.ravel() for c in cols]) == 0).reshape((m,) * s)
    k = np.arange(m)
    total = Fraction(0)
    for r in product(sq, repeat=s):
        mu = math.prod(moebius(x) for x in r)
        if mu == 0:  # pragma: no cover
            continue
        weight = Fraction(mu, math.prod(r))
        if zeros is not None:
            n = int(np.count_nonzero(zeros[np.ix_(*[(ri * k) % m for ri in r])]))
        else:
            n = count_points_nonzero(f.twist(r), budget=budget)
        total += weight * n
    if total.denominator != 1:
        raise ArithmeticError(f"Moebius accumulation is not integral: {total}")
    return int(total)


def primitive_dth_root_count(ctx: FieldCtx, d: int, y: int) -> int:
    """Number of primitive x with x^d = y, for y of order (q-1)/d."""
    m = ctx.q - 1
    if d < 1 or m % d:
        raise ValueError(f"{d} does not divide q-1 = {m}")
    if y == 0 or ctx.element_order(y) != m // d:
        raise ValueError(f"y={y} does not have order {m // d}")
    prim = ctx.primitive_elements()
    return int(np.count_nonzero(ctx.pow_v(prim, d) == y))


# --- (R, d)-freeness ----------------------------------------------------------------


def _check_free_params(ctx: FieldCtx, R: int, d: int) -> int:
    m = ctx.q - 1
    if d < 1 or m % d:
        raise ValueError(f"{d} does not divide q-1 = {m}")
    if R < 1 or (m // d) % R:
        raise ValueError(f"{R} does not divide (q-1)/d = {m // d}")
    return m


def free_mask(ctx: FieldCtx, R: int, d: int) -> np.ndarray:
    """Boolean mask over encodings of the (R, d)-free elements."""
    _check_free_params(ctx, R, d)
    k = ctx.log.copy()
    in_cd = (k >= 0) & (k % d == 0)
    j = np.where(in_cd, k // d, 0)
    ok = in_cd.copy()
    for ell in factorize(R).primes:
        ok &= j % ell != 0
    return ok


def is_free(ctx: FieldCtx, h: int, R: int, d: int) -> bool:
    """h lies in the index-d subgroup C_d and is no ell-th power there for any prime ell | R."""
    _check_free_params(ctx, R, d)
    if h == 0:
        return False
    k = int(ctx.log[h])
    if k % d:
        return False
    j = k // d
    return all(j % ell for ell in factorize(R).primes)


def count_linear_solutions(ctx: FieldCtx, a, b: int, allowed, *, budget: int | None = None) -> int:
    """#{y : sum a_i y_i = b, y_i in allowed[i]} by dynamic programming over partial sums.

    ``allowed`` holds one boolean mask over encodings per coordinate.
    """
    F = ctx
    a = list(a)
    if len(a) != len(allowed):
        raise ValueError("one allowed set per coefficient")
    if any(x == 0 for x in a):
        raise ValueError("coefficients must be nonzero")
    sets = [F.mul_v(ai, np.flatnonzero(mask)) for ai, mask in zip(a, allowed)]
    check_budget(float(sum(len(v) for v in sets)) * F.q, "count_linear_solutions", budget)
    dist = np.zeros(F.q, dtype=object if F.q ** len(a) > 2**62 else np.int64)
    dist[0] = 1
    elems = F.elements
    # diff[t, v] = t - v
    diff = F.add_v(elems[:, None], F.neg_v(elems)[None, :])
    for vals in sets:
        hits = np.bincount(vals, minlength=F.q).astype(dist.dtype)
        # new[t] = sum_v hits[v] * dist[t - v]
        dist = (dist[diff] * hits[None, :]).sum(axis=1)
    return int(dist[b])


def order_mask(ctx: FieldCtx, d: int) -> np.ndarray:
    """Mask of elements of order exactly (q-1)/d."""
    m = ctx.q - 1
    if d < 1 or m % d:
        raise ValueError(f"{d} does not divide q-1 = {m}")
    mask = ctx.orders == m // d
    mask[0] = False
    return mask


def count_free_solutions(ctx: FieldCtx, a, b: int, d, R, *, budget: int | None = None) -> int:
    """N(R_1..R_s): solutions of sum a_i y_i = b with each y_i (R_i, d_i)-free."""
    masks = [free_mask(ctx, Ri, di) for Ri, di in zip(R, d)]
    if len(masks) != len(list(a)):
        raise ValueError("a, d and R must have equal length")
    return count_linear_solutions(ctx, a, b, masks, budget=budget)


def free_solutions_lower_bound(q: int, d, R, b_is_zero: bool = False) -> float:
    """prod phi(R_i)/(R_i d_i) * [(q-1)^s/q - q^{-1/2} prod(1 + (d_i W(R_i) - 1) sqrt q)].

    For b = 0 the Jacobi sums whose character product is trivial have size
    (q-1) q^{(k-2)/2} rather than q^{(k-1)/2}, so the factor q^{-1/2} in front of
    the product becomes (q-1)/q.
    """
    rq = math.sqrt(q)
    eps = math.prod(euler_phi(Ri) / (Ri * di) for Ri, di in zip(R, d))
    err = math.prod(1 + (di * squarefree_divisor_count(Ri) - 1) * rq for Ri, di in zip(R, d))
    err *= (q - 1) / q if b_is_zero else 1 / rq
    return eps * ((q - 1) ** len(d) / q - err)
