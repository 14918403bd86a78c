"""Prime sieve for (R, d)-free solution counts and its existence criterion."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

from sympy import isprime

from .arith import factorize, squarefree_divisor_count
from .count import count_free_solutions
from .field import FieldCtx
from .poly import FermatShape
from .report import CountReport


@dataclass(frozen=True)
class SieveConfig:
    """Sieve parameters. ``q`` may be None to evaluate table rows without a field."""

    d: tuple[int, ...]
    ell: tuple[int, ...]
    primes: tuple[tuple[int, ...], ...]
    q: int | None = None
    w_ell: tuple[int, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "d", tuple(self.d))
        object.__setattr__(self, "ell", tuple(self.ell))
        object.__setattr__(self, "primes", tuple(tuple(ps) for ps in self.primes))
        if not (len(self.d) == len(self.ell) == len(self.primes)):
            raise ValueError("d, ell and primes need one entry per coordinate")
        for ps in self.primes:
            for p in ps:
                if not isprime(p):
                    raise ValueError(f"sieving value {p} is not prime")
        if self.q is None:
            return
        m = self.q - 1
        for di, li, ps in zip(self.d, self.ell, self.primes):
            if di < 1 or m % di:
                raise ValueError(f"{di} does not divide q-1 = {m}")
            if li < 1 or (m // di) % li:
                raise ValueError(f"ell={li} does not divide (q-1)/d = {m // di}")
            for p in ps:
                if (m // di) % p or li % p == 0:
                    raise ValueError(f"sieving prime {p} must divide {m // di} and not {li}")

    @property
    def s(self) -> int:
        return len(self.d)

    @property
    def t(self) -> tuple[int, ...]:
        return tuple(len(ps) for ps in self.primes)

    @property
    def t_total(self) -> int:
        return sum(self.t)

    @property
    def delta(self) -> float:
        return sieve_delta(self)

    def w_values(self) -> tuple[int, ...]:
        if self.w_ell is not None:
            return tuple(self.w_ell)
        return tuple(squarefree_divisor_count(li) for li in self.ell)


def sieve_delta(config: SieveConfig) -> float:
    """1 - sum over coordinates and sieving primes of 1/p."""
    return 1.0 - sum(1.0 / p for ps in config.primes for p in ps)


def sieve_config_for(q: int, d, ell) -> SieveConfig:
    """Config whose sieving primes are all primes of (q-1)/d_i not dividing ell_i."""
    m = q - 1
    primes = []
    for di, li in zip(d, ell):
        if m % di:
            raise ValueError(f"{di} does not divide q-1 = {m}")
        primes.append(tuple(p for p in factorize(m // di).primes if li % p))
    return SieveConfig(d=tuple(d), ell=tuple(ell), primes=tuple(primes), q=q)


def sieve_criterion(q: int, d, ell, t_total: int, delta: float, w_ell=None) -> bool:
    """(q-1)^s / sqrt q > ((t-1)/delta + 2) prod [1 + (d_i W(ell_i) - 1) sqrt q].

    ``w_ell`` overrides W(ell_i), either one value per coordinate or a single value.
    """
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    d = tuple(d)
    s = len(d)
    if w_ell is None:
        w = [squarefree_divisor_count(li) for li in ell]
    elif isinstance(w_ell, int):
        w = [w_ell] * s
    else:
        w = list(w_ell)
    rq = math.sqrt(q)
    lhs = (q - 1) ** s / rq
    rhs = ((t_total - 1) / delta + 2) * math.prod(1 + (di * wi - 1) * rq for di, wi in zip(d, w))
    return lhs > rhs


def sieve_lower_bound_check(ctx: FieldCtx, config: SieveConfig, a, b: int) -> CountReport:
    """Brute-force both sides of the sieve inequality.

    The report carries the left side in ``count`` and the right side in
    ``main_term``; ``holds`` is left >= right.
    """
    if config.q is not None and config.q != ctx.q:
        raise ValueError("config and field disagree on q")
    t0 = time.perf_counter()
    a = tuple(a)
    m = ctx.q - 1
    d, ell = config.d, config.ell
    full = tuple(m // di for di in d)

    def N(R):
        return count_free_solutions(ctx, a, b, d, R)

    lhs = N(full)
    base = N(ell)
    rhs = -(config.t_total - 1) * base
    for i, ps in enumerate(config.primes):
        for p in ps:
            R = list(ell)
            R[i] *= p
            rhs += N(tuple(R))
    return CountReport(
        q=ctx.q,
        p=ctx.p,
        n=ctx.n,
        poly=FermatShape(a, tuple([1] * len(a)), b).to_poly(ctx).to_text(),
        method="sieve",
        count=lhs,
        main_term=float(rhs),
        holds=lhs >= rhs,
        elapsed=time.perf_counter() - t0,
    )


@dataclass(frozen=True)
class DeltaRow:
    max_w: int
    primes: tuple[int, ...]
    listed_delta: float
    w_ell: int
    interval: tuple[float, float]
    s: int = 3

    @property
    def config(self) -> SieveConfig:
        return SieveConfig(
            d=(2,) * self.s, ell=(1,) * self.s, primes=(self.primes,) * self.s, w_ell=(self.w_ell,) * self.s
        )

    @property
    def delta(self) -> float:
        return sieve_delta(self.config)

    @property
    def t_total(self) -> int:
        return self.s * len(self.primes)

    def criterion_at(self, q: int) -> bool:
        return sieve_criterion(q, (2,) * self.s, None, self.t_total, self.delta, w_ell=self.w_ell)


# Sieving table for the sphere x^2 + y^2 + z^2 = 1 (d = 2 in each coordinate).
DELTA_TABLE = (
    DeltaRow(2**9, (13, 17, 19, 23), 0.304, 2**5, (9.536e6, 5.275e9)),
    DeltaRow(2**7, (11, 13, 17), 0.320, 2**4, (804377, 9.536e6)),
    DeltaRow(2**6, (11, 13), 0.298, 2**3, (300067, 804377)),
)
