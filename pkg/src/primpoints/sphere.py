"""Primitive points on the sphere x^2 + y^2 + z^2 = 1: exhaustive scan and threshold."""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .arith import euler_phi, prime_powers_upto, primorial, w_upper_bound
from .field import DEFAULT_CAP, CapExceeded, field_for_q

EXCEPTIONS = (3, 5, 9, 13, 25)
SCAN_BOUND = 18602
FULL_SCAN_BOUND = 300067


def sphere_witness(q: int, *, cap: int = DEFAULT_CAP):
    """Smallest witness (x, y, z) of primitive elements with x^2+y^2+z^2 = 1, or None.

    Witnesses are ordered by the encodings of x^2 and then y^2, so the result
    does not depend on how a scan is scheduled.
    """
    if q % 2 == 0:
        raise ValueError("the sphere scan needs odd q")
    F = field_for_q(q, cap=cap)
    prim = F.primitive_elements()
    sq = F.pow_v(prim, 2)
    # root[v] = smallest primitive x with x^2 = v
    root = np.full(F.q, -1, dtype=np.int64)
    order = np.argsort(sq, kind="stable")
    first = np.unique(sq[order], return_index=True)
    values = first[0]
    root[values] = prim[order][first[1]]
    member = root >= 0
    neg_values = F.neg_v(values)
    for u in values:
        w = F.add_v(F.sub(1, int(u)), neg_values)  # 1 - u - v for every square v
        hit = np.flatnonzero(member[w])
        if hit.size:
            j = int(hit[0])
            return int(root[u]), int(root[values[j]]), int(root[w[j]])
    return None


def sphere_has_primitive(q: int, *, cap: int = DEFAULT_CAP) -> bool:
    return sphere_witness(q, cap=cap) is not None


def _scan_one(args):
    q, cap = args
    w = sphere_witness(q, cap=cap)
    return q, w


def _load_checkpoint(path: Path) -> dict[int, list | None]:
    """Read completed records and cut the file back to the last complete one."""
    done: dict[int, list | None] = {}
    if not path.exists():
        return done
    good = 0
    with path.open("rb") as fh:
        for raw in fh:
            if not raw.endswith(b"\n"):
                break  # a torn final line from an interrupted run
            line = raw.strip()
            if line:
                try:
                    rec = json.loads(line)
                except json.JSONDecodeError:
                    break
                done[int(rec["q"])] = rec["witness"]
            good += len(raw)
    if good != path.stat().st_size:
        with path.open("r+b") as fh:
            fh.truncate(good)
    return done


def sphere_scan(
    max_q: int,
    parallelism: int | None = None,
    checkpoint_path: str | os.PathLike | None = None,
    *,
    cap: int = DEFAULT_CAP,
    records: list | None = None,
) -> list[int]:
    """Odd prime powers q <= max_q whose sphere has no primitive point, ascending.

    Each completed q is appended to ``checkpoint_path`` as a JSON line; values
    already present there are not recomputed. ``records``, if given, receives
    one dict per q in ascending order.
    """
    if max_q > cap:
        raise CapExceeded(f"max_q={max_q} exceeds cap {cap}")
    qs = prime_powers_upto(max_q, odd_only=True)
    done: dict[int, list | None] = {}
    path = Path(checkpoint_path) if checkpoint_path is not None else None
    if path is not None:
        done = {q: w for q, w in _load_checkpoint(path).items() if q <= max_q}
    pending = [q for q in qs if q not in done]
    jobs = parallelism if parallelism is not None else (os.cpu_count() or 1)
    jobs = max(1, min(jobs, len(pending) or 1))

    out = path.open("a") if path is not None else None
    try:
        if jobs == 1:
            results = map(_scan_one, ((q, cap) for q in pending))
            executor = None
        else:
            executor = ProcessPoolExecutor(max_workers=jobs)
            chunk = max(1, len(pending) // (jobs * 16))
            results = executor.map(_scan_one, [(q, cap) for q in pending], chunksize=chunk)
        try:
            for q, w in results:
                done[q] = list(w) if w is not None else None
                if out is not None:
                    out.write(json.dumps({"q": q, "has_primitive": w is not None, "witness": done[q]}) + "\n")
                    out.flush()
        finally:
            if executor is not None:
                executor.shutdown(cancel_futures=True)
    finally:
        if out is not None:
            out.close()

    if records is not None:
        for q in qs:
            records.append({"q": q, "has_primitive": done[q] is not None, "witness": done[q]})
    return [q for q in qs if done[q] is None]


# --- analytic range -----------------------------------------------------------------


def sphere_sufficiency_gap(q: float) -> float:
    """log of (q-1)^3 / (sqrt q [1 + (2 W - 1) sqrt q]^3) with W bounded at t = (q+1)/2.

    Positive exactly when the sufficient condition for a primitive point holds.
    """
    w = w_upper_bound((q + 1) / 2)
    rq = math.sqrt(q)
    return 3 * math.log(q - 1) - math.log(rq) - 3 * math.log(1 + (2 * w - 1) * rq)


def sphere_sufficient(q: float) -> bool:
    return sphere_sufficiency_gap(q) > 0


def sphere_sufficient_exact(q: int) -> bool:
    """The same inequality with the true W((q-1)/2) and the phi factor kept."""
    from .arith import squarefree_divisor_count

    m = q - 1
    rq = math.sqrt(q)
    eps = euler_phi(m) / m
    lhs = euler_phi(m) ** 3 / q
    rhs = eps**3 / rq * (1 + (2 * squarefree_divisor_count(m // 2) - 1) * rq) ** 3
    return lhs > rhs


def sufficiency_threshold(lo: float = 1e3, hi: float = 1e12, iters: int = 200) -> float:
    """Crossing point of the sphere sufficiency inequality.

    Bisection in log scale on the real line, then an outward integer check so the
    returned value v satisfies: inequality false at floor(v), true at every
    integer from ceil(v) probed upward.
    """
    if sphere_sufficient(lo) or not sphere_sufficient(hi):
        raise ArithmeticError("threshold is not bracketed")
    a, b = math.log(lo), math.log(hi)
    for _ in range(iters):
        mid = (a + b) / 2
        if sphere_sufficient(math.exp(mid)):
            b = mid
        else:
            a = mid
        if b - a < 1e-15:
            break
    root = math.exp(b)
    n = math.ceil(root)
    while not sphere_sufficient(n):
        n += 1
    while n > 2 and sphere_sufficient(n - 1):
        n -= 1
    return float(n) if abs(n - root) > 1 else root


def primorial_facts() -> dict[str, bool]:
    return {
        "29# = 6469693230": primorial(29) == 6469693230,
        "29# > 6e9": primorial(29) > 6 * 10**9,
        "19# = 9699690": primorial(19) == 9699690,
        "19# > 9.6e6": primorial(19) > 9.6e6,
    }
