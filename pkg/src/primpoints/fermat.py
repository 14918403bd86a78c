"""Primitive points on Fermat hypersurfaces a_1 x_1^{d_1} + ... + a_s x_s^{d_s} = b.

With d_i | q-1, x_i is primitive exactly when y_i = x_i^{d_i} has order
(q-1)/d_i, and each such y_i has phi(q-1)/phi((q-1)/d_i) primitive d_i-th
roots. The primitive count is therefore that product times the number of
solutions of the linear equation sum a_i y_i = b with order-restricted y_i.
"""

from __future__ import annotations

import itertools
import math
import time
from fractions import Fraction

import numpy as np

from .arith import euler_phi, squarefree_divisor_count, subsets
from .budget import check_budget
from .charsum import indicator_weights, jacobi_table_direct, jacobi_table_fast
from .count import count_linear_solutions, count_primitive_brute, order_mask
from .field import FieldCtx
from .poly import (
    FermatShape,
    MultiPoly,
    Regularity,
    as_fermat_shape,
    dwork_regularity_check,
)
from .report import CountReport

CHARSUM_TOLERANCE = 1e-3


def _check_shape(ctx: FieldCtx, shape: FermatShape) -> None:
    m = ctx.q - 1
    bad = [d for d in shape.d if m % d]
    if bad:
        raise ValueError(f"exponents {bad} do not divide q-1 = {m}")


def root_multiplicity(q: int, d: int) -> int:
    """phi(q-1) / phi((q-1)/d): primitive d-th roots of an element of order (q-1)/d."""
    num, den = euler_phi(q - 1), euler_phi((q - 1) // d)
    if num % den:  # pragma: no cover
        raise ArithmeticError("non-integral root multiplicity")
    return num // den


def count_order_restricted(ctx: FieldCtx, shape: FermatShape, *, budget: int | None = None) -> int:
    """#{y in (F_q^*)^s : sum a_i y_i = b, ord(y_i) = (q-1)/d_i}."""
    _check_shape(ctx, shape)
    masks = [order_mask(ctx, d) for d in shape.d]
    return count_linear_solutions(ctx, shape.a, shape.b, masks, budget=budget)


def primitive_count_fermat_exact(ctx: FieldCtx, shape: FermatShape, *, budget: int | None = None) -> int:
    eps = math.prod(root_multiplicity(ctx.q, d) for d in shape.d)
    return eps * count_order_restricted(ctx, shape, budget=budget)


def _weighted_characters(ctx: FieldCtx, d: int):
    """Nontrivial character indices with their indicator weights mu(r/(r,d))/phi(r/(r,d))."""
    m = ctx.q - 1
    idx, w = [], []
    for r, weight in indicator_weights(m, d).items():
        if r == 1:
            continue
        step = m // r
        for j in range(1, r):
            if math.gcd(j, r) == 1:
                idx.append(j * step)
                w.append(float(weight))
    return np.array(idx, dtype=np.int64), np.array(w, dtype=np.float64)


def primitive_count_fermat_charsum(
    ctx: FieldCtx, shape: FermatShape, *, budget: int | None = None, return_raw: bool = False
):
    """Primitive count from the Jacobi-sum expansion of the order indicators.

    P = phi^s/q - (-eps)^s/q + R_b
        + eps^s sum_{I != {}} (-1)^{s-|I|} sum_{nontrivial chars} prod w_i J_I,
    where eps = phi(q-1)/(q-1) and R_b = (-eps)^s when b = 0.
    """
    _check_shape(ctx, shape)
    q = ctx.q
    s = shape.s
    m = q - 1
    eps = euler_phi(m) / m
    weighted = [_weighted_characters(ctx, d) for d in shape.d]
    cost = 0.0
    for I in subsets(range(s), nonempty=True):
        cost += math.prod(len(weighted[i][0]) for i in I) * (q if shape.b else q * q)
    check_budget(cost, "primitive_count_fermat_charsum", budget)
    value = euler_phi(m) ** s / q - (-eps) ** s / q
    if shape.b == 0:
        value += (-eps) ** s
    acc = 0j
    for I in subsets(range(s), nonempty=True):
        idx_lists = [weighted[i][0] for i in I]
        if any(len(v) == 0 for v in idx_lists):
            continue
        a_I = [shape.a[i] for i in I]
        if shape.b:
            J = jacobi_table_fast(ctx, idx_lists, shape.b, a_I)
        else:
            J = jacobi_table_direct(ctx, idx_lists, 0, a_I)
        W = np.ones(J.shape)
        for axis, i in enumerate(I):
            shp = [1] * len(I)
            shp[axis] = -1
            W = W * weighted[i][1].reshape(shp)
        acc += (-1) ** (s - len(I)) * complex(np.sum(W * J))
    value += eps**s * acc.real
    if return_raw:
        return value, eps**s * acc.imag
    nearest = round(value)
    if abs(value - nearest) > CHARSUM_TOLERANCE:
        raise ArithmeticError(f"character-sum count {value!r} is not within {CHARSUM_TOLERANCE} of an integer")
    return int(nearest)


def theorem2_bound(q: int, d, b_is_zero: bool) -> float:
    """Deviation bound for the Fermat primitive count.

    (phi(q-1)/(q-1))^s q^{-1/2} prod [1 + (d_i W((q-1)/d_i) - 1) sqrt q] + delta_b,
    with delta_b = (phi(q-1)/(q-1))^s when b = 0 and 0 otherwise.
    """
    m = q - 1
    d = tuple(d)
    if any(m % di for di in d):
        raise ValueError(f"exponents must divide q-1 = {m}")
    s = len(d)
    rq = math.sqrt(q)
    eps_s = (euler_phi(m) / m) ** s
    prod = math.prod(1 + (di * squarefree_divisor_count(m // di) - 1) * rq for di in d)
    return eps_s * prod / rq + (eps_s if b_is_zero else 0.0)


def theorem2_bound_corrected(q: int, d, b_is_zero: bool) -> float:
    """A deviation bound that also holds for b = 0.

    For b != 0 this is theorem2_bound. For b = 0 the Jacobi sums with trivial
    character product have size (q-1) q^{(k-2)/2}, not q^{(k-1)/2}, giving
    (phi(q-1)/(q-1))^s [(q-1)/q prod(1 + (d_i W((q-1)/d_i) - 1) sqrt q) + 2/q].
    The uncorrected b = 0 value fails already at q = 9, x1 + x2 = 0.
    """
    if not b_is_zero:
        return theorem2_bound(q, d, False)
    m = q - 1
    d = tuple(d)
    if any(m % di for di in d):
        raise ValueError(f"exponents must divide q-1 = {m}")
    rq = math.sqrt(q)
    eps_s = (euler_phi(m) / m) ** len(d)
    prod = math.prod(1 + (di * squarefree_divisor_count(m // di) - 1) * rq for di in d)
    return eps_s * ((q - 1) / q * prod + 2 / q)


def main_term(q: int, s: int) -> float:
    return euler_phi(q - 1) ** s / q


def theorem2_check(ctx: FieldCtx, shape: FermatShape) -> CountReport:
    t0 = time.perf_counter()
    count = primitive_count_fermat_exact(ctx, shape)
    bound = theorem2_bound(ctx.q, shape.d, shape.b == 0)
    return CountReport(
        q=ctx.q,
        p=ctx.p,
        n=ctx.n,
        poly=shape.to_poly(ctx).to_text(),
        method="fermat-exact",
        count=count,
        main_term=main_term(ctx.q, shape.s),
        bound=bound,
        elapsed=time.perf_counter() - t0,
    )


def dwork_bound(q: int, d: int, s: int) -> float:
    """(d sqrt q + 1)^s W(q-1)^s."""
    return (d * math.sqrt(q) + 1) ** s * squarefree_divisor_count(q - 1) ** s


def dwork_bound_check(ctx: FieldCtx, f: MultiPoly, *, max_extension: int = 3) -> CountReport:
    verdict = dwork_regularity_check(f, max_extension)
    if verdict is not Regularity.REGULAR_CERTIFIED:
        raise ValueError(f"polynomial is not certified Dwork-regular ({verdict.value})")
    t0 = time.perf_counter()
    shape = as_fermat_shape(f)
    if shape is not None and all((ctx.q - 1) % d == 0 for d in shape.d):
        count = primitive_count_fermat_exact(ctx, shape)
    else:
        count = count_primitive_brute(f)
    return CountReport(
        q=ctx.q,
        p=ctx.p,
        n=ctx.n,
        poly=f.to_text(),
        method="dwork",
        count=count,
        main_term=main_term(ctx.q, f.nvars),
        bound=dwork_bound(ctx.q, f.degree, f.nvars),
        elapsed=time.perf_counter() - t0,
    )


def superelliptic_bound(q: int, n: int, d: int, s: int) -> float:
    """n d W((q-1)/n) W(q-1) phi(q-1)^{s+1} (q-1)^{-2} sqrt q."""
    m = q - 1
    if n < 1 or m % n:
        raise ValueError(f"{n} does not divide q-1 = {m}")
    return (
        n
        * d
        * squarefree_divisor_count(m // n)
        * squarefree_divisor_count(m)
        * Fraction(euler_phi(m) ** (s + 1), m**2)
        * math.sqrt(q)
    )


def fermat_shapes(ctx: FieldCtx, s: int, *, bs=None, a_values=None):
    """Enumerate Fermat shapes with exponents dividing q-1 (generator over (a, d, b))."""
    from .arith import divisors

    divs = divisors(ctx.q - 1)
    bs = [0, 1, ctx.generator] if bs is None else bs
    bs = sorted(set(bs))
    a_values = a_values if a_values is not None else itertools.product(range(1, ctx.q), repeat=s)
    a_values = list(a_values)
    for d in itertools.product(divs, repeat=s):
        for a in a_values:
            for b in bs:
                yield FermatShape(tuple(a), d, b)
