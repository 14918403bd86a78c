"""Integer number theory used throughout: factorization, phi, mu, W and the
analytic bound functions that feed the existence thresholds."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from sympy import factorint, isprime

# exp(Euler-Mascheroni gamma)
EXP_GAMMA = 1.7810724179901979

# phi(n)/n dips below the Rosser-Schoenfeld bound only here
PHI_BOUND_EXCEPTION = 223092870

MAX_INT = 2**63 - 1


@dataclass(frozen=True)
class Factorization:
    value: int
    factors: tuple[tuple[int, int], ...]

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def __iter__(self):
        return iter(self.factors)


def _check_positive(n: int, name: str = "n") -> int:
    if isinstance(n, bool) or not isinstance(n, int):
        raise TypeError(f"{name} must be an int, got {type(n).__name__}")
    if n < 1:
        raise ValueError(f"{name} must be a positive integer, got {n}")
    return n


@lru_cache(maxsize=8192)
def factorize(n: int) -> Factorization:
    _check_positive(n)
    if n > MAX_INT:
        raise ValueError(f"{n} exceeds 2^63-1")
    facs = tuple(sorted(factorint(n).items()))
    return Factorization(n, facs)


def prime_factors(n: int) -> tuple[int, ...]:
    return factorize(n).primes


def euler_phi(n: int) -> int:
    result = n
    for p, _ in factorize(n):
        result -= result // p
    return result


def moebius(n: int) -> int:
    f = factorize(n).factors
    if any(e > 1 for _, e in f):
        return 0
    return -1 if len(f) % 2 else 1


def squarefree_divisor_count(t: int) -> int:
    return 2 ** len(factorize(t).factors)


def divisors(n: int, squarefree_only: bool = False) -> list[int]:
    divs = [1]
    for p, e in factorize(n):
        top = 1 if squarefree_only else e
        divs = [d * p**k for d in divs for k in range(top + 1)]
    return sorted(divs)


def squarefree_kernel(n: int) -> int:
    return math.prod(prime_factors(n))


def primorial(p: int) -> int:
    """Product of all primes <= p."""
    return math.prod(k for k in range(2, p + 1) if isprime(k))


def phi_ratio_lower_bound(n: int) -> float:
    """Lower bound for phi(n)/n, valid for every n >= 3 except 223092870.

    Reciprocal form of the Rosser-Schoenfeld inequality
    n/phi(n) < e^gamma ln ln n + 5 / (2 ln ln n).
    """
    if n < 3:
        raise ValueError("phi_ratio_lower_bound needs n >= 3")
    ll = math.log(math.log(n))
    return 2.0 * ll / (2.0 * EXP_GAMMA * ll * ll + 5.0)


def phi_bound_is_exception(n: int) -> bool:
    return n == PHI_BOUND_EXCEPTION


def w_upper_bound(t: float) -> float:
    """t^(0.96 / ln ln t); strictly exceeds W(t-1) for integers t >= 3."""
    if t < 3:
        raise ValueError("w_upper_bound needs t >= 3")
    return t ** (0.96 / math.log(math.log(t)))


def fermat_prime_index(q: int) -> int | None:
    """Return l with q = 2^(2^l) + 1 when q is a Fermat prime, else None."""
    if q < 3 or not isprime(q):
        return None
    m = q - 1
    if m & (m - 1):
        return None
    k = m.bit_length() - 1
    if k & (k - 1):
        return None
    return k.bit_length() - 1


def is_fermat_prime(q: int, *, require_l_positive: bool = False) -> bool:
    """True iff q = 2^(2^l) + 1 is prime.

    With ``require_l_positive`` the degenerate q = 3 (l = 0) is rejected,
    which is what the closed-form hyperplane counts need.
    """
    l = fermat_prime_index(q)
    if l is None:
        return False
    return l > 0 or not require_l_positive


def prime_power_decompose(q: int) -> tuple[int, int] | None:
    """(p, n) with q = p^n, or None when q is not a prime power."""
    if q < 2:
        return None
    f = factorize(q).factors
    if len(f) != 1:
        return None
    return f[0]


def is_prime_power(q: int) -> bool:
    return prime_power_decompose(q) is not None


def prime_powers_upto(limit: int, *, odd_only: bool = False) -> list[int]:
    from sympy import primerange

    out = []
    for p in primerange(3 if odd_only else 2, limit + 1):
        q = p
        while q <= limit:
            out.append(q)
            q *= p
    return sorted(out)


def subsets(items, *, nonempty: bool = False):
    """All subsets of ``items`` as tuples, smallest first."""
    items = tuple(items)
    for k in range(1 if nonempty else 0, len(items) + 1):
        yield from combinations(items, k)
