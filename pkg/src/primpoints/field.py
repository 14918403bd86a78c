"""Table-driven GF(p^n).

Elements are plain ints: the base-p encoding of the polynomial
representative, constant coefficient first (so GF(p) elements are 0..p-1).
Every nonzero element is also g^k for the fixed generator g; the exp/log
tables translate between the two views, making multiplication, powers and
orders O(1).
"""

from __future__ import annotations

import math
from functools import cached_property, lru_cache

import numpy as np
from sympy import isprime

from .arith import Factorization, factorize, prime_power_decompose

DEFAULT_CAP = 2**24


class FieldError(ValueError):
    pass


class CapExceeded(FieldError):
    """q is larger than the table cap (memory budget)."""


# --- dense polynomials over GF(p), coefficient lists constant-first ---------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim(list(a))
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _trim(a)
    return a


def _pmulmod(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _pmod(out, m, p)


def _ppowmod(a: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(a, m, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, m, p)
        base = _pmulmod(base, base, m, p)
        e >>= 1
    return result


def _psub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def is_irreducible(modulus: list[int] | tuple[int, ...], p: int) -> bool:
    """Rabin's test for a monic polynomial over GF(p)."""
    m = list(modulus)
    n = len(m) - 1
    if n < 1 or m[-1] != 1:
        return False
    if n == 1:
        return True
    if m[0] == 0:
        return False
    x = [0, 1]
    if _psub(_ppowmod(x, p**n, m, p), x, p):
        return False
    for ell in factorize(n).primes:
        h = _psub(_ppowmod(x, p ** (n // ell), m, p), x, p)
        if len(_pgcd(m, h, p)) != 1:
            return False
    return True


def _digits(enc: int, p: int, n: int) -> list[int]:
    out = []
    for _ in range(n):
        enc, r = divmod(enc, p)
        out.append(r)
    return out


def _encode(coeffs, p: int) -> int:
    v = 0
    for c in reversed(list(coeffs)):
        v = v * p + c
    return v


def find_modulus(p: int, n: int) -> tuple[int, ...]:
    """Monic irreducible of degree n with the smallest encoding of its lower coefficients."""
    if n == 1:
        return (0, 1)
    for enc in range(p**n):
        low = _digits(enc, p, n)
        if low[0] == 0:
            continue
        cand = low + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise FieldError(f"no irreducible polynomial of degree {n} over GF({p})")  # pragma: no cover


def _find_generator(p: int, n: int, modulus: tuple[int, ...], qm1_primes) -> int:
    q = p**n
    if q == 2:
        return 1
    exps = [(q - 1) // ell for ell in qm1_primes]
    m = list(modulus)
    for enc in range(1, q):
        if n == 1:
            if all(pow(enc, e, p) != 1 for e in exps):
                return enc
        else:
            a = _digits(enc, p, n)
            if all(_ppowmod(a, e, m, p) != [1] for e in exps):
                return enc
    raise FieldError("no generator found")  # pragma: no cover


def _mul_matrix(c: list[int], modulus: tuple[int, ...], p: int, n: int) -> np.ndarray:
    """Row j holds the coefficients of x^j * c; row-vector @ matrix multiplies by c."""
    M = np.zeros((n, n), dtype=np.int64)
    m = list(modulus)
    for j in range(n):
        row = _pmulmod([0] * j + [1], c, m, p)
        M[j, : len(row)] = row
    return M


class FieldCtx:
    """GF(p^n) with a fixed modulus, generator and full exp/log tables.

    Immutable after construction; safe to share between threads and to send
    to worker processes.
    """

    def __init__(self, p: int, n: int = 1, *, cap: int = DEFAULT_CAP):
        if not isinstance(p, int) or not isprime(p):
            raise FieldError(f"p={p} is not prime")
        if not isinstance(n, int) or n < 1:
            raise FieldError(f"extension degree must be >= 1, got {n}")
        q = p**n
        if q > cap:
            raise CapExceeded(f"q={q} exceeds the field table cap {cap}")
        self.p, self.n, self.q = p, n, q
        self.modulus = find_modulus(p, n)
        self.q_minus_1_factorization: Factorization = factorize(q - 1) if q > 2 else Factorization(1, ())
        self.generator = _find_generator(p, n, self.modulus, self.q_minus_1_factorization.primes)
        self.exp, self.log = self._build_tables()
        self.exp.setflags(write=False)
        self.log.setflags(write=False)

    def _build_tables(self):
        p, n, q = self.p, self.n, self.q
        size = q - 1
        g = self.generator
        if n == 1:
            exp = np.empty(size, dtype=np.int64)
            exp[0] = 1
            filled = 1
            while filled < size:
                step = min(filled, size - filled)
                gm = pow(g, filled, p)
                exp[filled : filled + step] = exp[:step] * gm % p
                filled += step
        else:
            rows = np.zeros((size, n), dtype=np.int64)
            rows[0, 0] = 1
            filled = 1
            gpoly = _digits(g, p, n)
            m = list(self.modulus)
            while filled < size:
                step = min(filled, size - filled)
                M = _mul_matrix(_ppowmod(gpoly, filled, m, p), self.modulus, p, n)
                rows[filled : filled + step] = rows[:step] @ M % p
                filled += step
            exp = rows @ (p ** np.arange(n, dtype=np.int64))
        log = np.full(q, -1, dtype=np.int64)
        log[exp] = np.arange(size, dtype=np.int64)
        return exp, log

    def __repr__(self):
        return f"FieldCtx(p={self.p}, n={self.n})"

    def __reduce__(self):
        return (build_field, (self.p, self.n))

    # --- scalar arithmetic -------------------------------------------------

    @property
    def order(self) -> int:
        return self.q

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def from_int(self, k: int) -> int:
        """Image of the integer k in the prime subfield."""
        return k % self.p

    def digits(self, x: int) -> list[int]:
        return _digits(x, self.p, self.n)

    def _check(self, x: int) -> int:
        if not 0 <= x < self.q:
            raise FieldError(f"{x} is not an element of GF({self.q})")
        return x

    def add(self, a: int, b: int) -> int:
        if self.n == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        p = self.p
        return _encode([(x + y) % p for x, y in zip(self.digits(a), self.digits(b))], p)

    def neg(self, a: int) -> int:
        if self.n == 1:
            return -a % self.p
        if self.p == 2:
            return a
        p = self.p
        return _encode([-x % p for x in self.digits(a)], p)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[(self.log[a] + self.log[b]) % (self.q - 1)])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return int(self.exp[-self.log[a] % (self.q - 1)])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if e == 0 else 0
        return int(self.exp[self.log[a] * e % (self.q - 1)])

    def dlog(self, a: int) -> int:
        if a == 0:
            raise FieldError("discrete log of zero")
        return int(self.log[a])

    def gpow(self, k: int) -> int:
        """g^k for the fixed generator g."""
        return int(self.exp[k % (self.q - 1)])

    def element_order(self, x: int) -> int:
        if x == 0:
            raise FieldError("zero has no multiplicative order")
        k = int(self.log[x])
        return (self.q - 1) // math.gcd(k, self.q - 1)

    def is_primitive(self, x: int) -> bool:
        return x != 0 and self.element_order(x) == self.q - 1

    def trace(self, x: int) -> int:
        return int(self.trace_table[x])

    # --- vectorized arithmetic ----------------------------------------------

    def add_v(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.n == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        p = self.p
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        pw = 1
        for _ in range(self.n):
            out += ((a // pw + b // pw) % p) * pw
            pw *= p
        return out

    def neg_v(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.n == 1:
            return -a % self.p
        if self.p == 2:
            return a.copy()
        p = self.p
        out = np.zeros_like(a)
        pw = 1
        for _ in range(self.n):
            out += (-(a // pw) % p) * pw
            pw *= p
        return out

    def mul_v(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        la, lb = self.log[a], self.log[b]
        out = self.exp[(la + lb) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def pow_v(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        out = self.exp[self.log[a] * e % (self.q - 1)]
        return np.where(a == 0, 0, out)

    # --- cached whole-field data ---------------------------------------------

    @cached_property
    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    @cached_property
    def nonzero(self) -> np.ndarray:
        return np.arange(1, self.q, dtype=np.int64)

    @cached_property
    def orders(self) -> np.ndarray:
        """orders[x] = multiplicative order of x (0 at x = 0)."""
        k = self.log.copy()
        out = np.zeros(self.q, dtype=np.int64)
        m = self.q - 1
        out[1:] = m // np.gcd(k[1:], m)
        out.setflags(write=False)
        return out

    @cached_property
    def primitive_mask(self) -> np.ndarray:
        mask = self.orders == self.q - 1
        mask[0] = False
        mask.setflags(write=False)
        return mask

    def primitive_elements(self) -> np.ndarray:
        """Primitive elements in increasing encoding order."""
        return np.flatnonzero(self.primitive_mask).astype(np.int64)

    @cached_property
    def trace_table(self) -> np.ndarray:
        x = self.elements
        acc = x.copy()
        cur = x
        for _ in range(self.n - 1):
            cur = self.pow_v(cur, self.p)
            acc = self.add_v(acc, cur)
        acc.setflags(write=False)
        return acc

    def info(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "q": self.q,
            "modulus": list(self.modulus),
            "generator": self.generator,
            "q_minus_1_factors": [list(t) for t in self.q_minus_1_factorization.factors],
        }


@lru_cache(maxsize=32)
def _cached_field(p: int, n: int) -> FieldCtx:
    return FieldCtx(p, n)


def build_field(p: int, n: int = 1, *, cap: int = DEFAULT_CAP) -> FieldCtx:
    if not isinstance(p, int) or not isprime(p):
        raise FieldError(f"p={p} is not prime")
    if isinstance(n, int) and n >= 1 and p**n > cap:
        raise CapExceeded(f"q={p**n} exceeds the field table cap {cap}")
    if cap == DEFAULT_CAP:
        return _cached_field(p, n)
    return FieldCtx(p, n, cap=cap)


def field_for_q(q: int, *, cap: int = DEFAULT_CAP) -> FieldCtx:
    if q > cap:
        raise CapExceeded(f"q={q} exceeds the field table cap {cap}")
    pn = prime_power_decompose(q)
    if pn is None:
        raise FieldError(f"q={q} is not a prime power")
    return build_field(pn[0], pn[1], cap=cap)


def embedding(small: FieldCtx, big: FieldCtx) -> np.ndarray:
    """Array mapping encodings of ``small`` to their images in ``big``.

    ``big`` must be an extension of ``small`` (same characteristic, degree a
    multiple). The image of the generating root is found among the elements
    of the order-q subfield of ``big``.
    """
    if small.p != big.p or big.n % small.n:
        raise FieldError(f"{big!r} does not contain {small!r}")
    if small.n == 1:
        return np.arange(small.q, dtype=np.int64)
    step = (big.q - 1) // (small.q - 1)
    mod = small.modulus
    beta = None
    for t in range(small.q - 1):
        cand = big.gpow(t * step)
        acc = 0
        for c in reversed(mod):
            acc = big.add(big.mul(acc, cand), big.from_int(c))
        if acc == 0:
            beta = cand
            break
    if beta is None:  # pragma: no cover
        raise FieldError("no root of the modulus in the extension")
    powers = [big.pow(beta, i) for i in range(small.n)]
    out = np.zeros(small.q, dtype=np.int64)
    for enc in range(small.q):
        acc = 0
        for c, bp in zip(small.digits(enc), powers):
            if c:
                acc = big.add(acc, big.mul(big.from_int(c), bp))
        out[enc] = acc
    return out
