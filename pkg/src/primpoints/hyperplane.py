"""Primitive points on hyperplanes a_1 x_1 + ... + a_s x_s = b over Fermat primes.

Twisting by x -> x^2 turns the hyperplane into a diagonal quadric, so the
closed forms rest on point counts of quadratic forms. Values live in
Q(sqrt q) and are carried exactly as pairs of rationals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .arith import euler_phi, is_fermat_prime
from .field import FieldCtx


@dataclass(frozen=True)
class QuadExt:
    """rational + surd * sqrt(q)."""

    rational: Fraction
    surd: Fraction
    q: int

    def __post_init__(self):
        object.__setattr__(self, "rational", Fraction(self.rational))
        object.__setattr__(self, "surd", Fraction(self.surd))

    @classmethod
    def of(cls, q: int, value=0) -> QuadExt:
        return cls(Fraction(value), Fraction(0), q)

    @classmethod
    def sqrt(cls, q: int) -> QuadExt:
        return cls(Fraction(0), Fraction(1), q)

    def _coerce(self, other) -> QuadExt:
        if isinstance(other, QuadExt):
            if other.q != self.q:
                raise ValueError("radicands differ")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadExt.of(self.q, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.rational + o.rational, self.surd + o.surd, self.q)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.rational, -self.surd, self.q)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(
            self.rational * o.rational + self.q * self.surd * o.surd,
            self.rational * o.surd + self.surd * o.rational,
            self.q,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadExt(self.rational / other, self.surd / other, self.q)
        o = self._coerce(other)
        norm = o.rational**2 - self.q * o.surd**2
        if norm == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt q)")
        conj = QuadExt(o.rational, -o.surd, self.q)
        return (self * conj) / norm

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not supported")
        out = QuadExt.of(self.q, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.rational == o.rational and self.surd == o.surd

    def __hash__(self):
        return hash((self.rational, self.surd, self.q))

    def is_integral(self) -> bool:
        return self.surd == 0 and self.rational.denominator == 1

    def to_int(self) -> int:
        if not self.is_integral():
            raise ArithmeticError(f"{self} is not an integer")
        return int(self.rational)

    def __float__(self):
        return float(self.rational) + float(self.surd) * math.sqrt(self.q)

    def __str__(self):
        return f"{self.rational} + {self.surd}*sqrt({self.q})"


def _chi2(ctx: FieldCtx, x: int) -> int:
    if x == 0:
        return 0
    return 1 if ctx.log[x] % 2 == 0 else -1


def _nu(q: int, b: int) -> int:
    return q - 1 if b == 0 else -1


def quad_solution_count(ctx: FieldCtx, a, b: int) -> int:
    """Solutions of sum a_i x_i^2 = b in F_q^s for a nondegenerate diagonal form."""
    if ctx.p == 2:
        raise ValueError("q must be odd")
    a = list(a)
    if not a or any(x == 0 for x in a):
        raise ValueError("coefficients must be nonzero")
    q, s = ctx.q, len(a)
    delta = 1
    for x in a:
        delta = ctx.mul(delta, x)
    minus_one = ctx.neg(1)
    if s % 2 == 0:
        sign = ctx.pow(minus_one, s // 2)
        return q ** (s - 1) + q ** ((s - 2) // 2) * _nu(q, b) * _chi2(ctx, ctx.mul(sign, delta))
    sign = ctx.pow(minus_one, (s - 1) // 2)
    return q ** (s - 1) + q ** ((s - 1) // 2) * _chi2(ctx, ctx.mul(ctx.mul(sign, b), delta))


def _require_fermat(q: int) -> None:
    if not is_fermat_prime(q, require_l_positive=True):
        raise ValueError(f"q={q} must be a Fermat prime greater than 3")


def ni_linear(q: int, size: int) -> int:
    """Solutions of a linear equation in ``size`` free coordinates: q^{size-1}."""
    if size < 1:
        raise ValueError("size must be at least 1")
    return q ** (size - 1)


def _legendre(a: int, q: int) -> int:
    a %= q
    if a == 0:
        return 0
    return 1 if pow(a, (q - 1) // 2, q) == 1 else -1


def ni_quadratic(q: int, a, b: int) -> int:
    """Solutions of sum_{i in I} a_i x_i^2 = b, q a Fermat prime > 3 (so chi_2(-1) = 1)."""
    _require_fermat(q)
    a = [x % q for x in a]
    if not a or any(x == 0 for x in a):
        raise ValueError("coefficients must be nonzero")
    k = len(a)
    chi = _legendre(math.prod(a), q)
    if k % 2 == 0:
        return q ** (k - 1) + q ** ((k - 2) // 2) * _nu(q, b % q) * chi
    return q ** (k - 1) + q ** ((k - 1) // 2) * _legendre(b * math.prod(a), q)


def _closed_form(q: int, signs, b_chi: int, nu: int) -> QuadExt:
    s = len(signs)
    rq = QuadExt.sqrt(q)
    tau0 = nu + rq * b_chi
    tau1 = nu - rq * b_chi
    plus = QuadExt.of(q, 1)
    minus = QuadExt.of(q, 1)
    for c in signs:
        plus = plus * (rq * c + 1)
        minus = minus * (rq * c - 1)
    bracket = tau0 * plus * (-1) ** s + tau1 * minus
    return QuadExt.of(q, Fraction(euler_phi(q - 1) ** s, q)) + bracket / (q * 2 ** (s + 1))


def primitive_count_hyperplane_exact(ctx: FieldCtx, a, b: int) -> int:
    """Primitive solutions of sum a_i x_i = b over a Fermat prime field."""
    q = ctx.q
    _require_fermat(q)
    a = [x % q for x in a]
    if not a or any(x == 0 for x in a):
        raise ValueError("coefficients must be nonzero")
    b %= q
    value = _closed_form(q, [_legendre(x, q) for x in a], _legendre(b, q), _nu(q, b))
    if not value.is_integral():
        raise ArithmeticError(f"closed form is not an integer: {value}")
    return value.to_int()


def primitive_count_hyperplane_expansion(ctx: FieldCtx, a, b: int) -> int:
    """The same count assembled term by term from the Moebius and zero-pattern expansion.

    Over a Fermat prime q-1 is a power of 2, so the only squarefree divisors are
    1 and 2; the twisted equation is linear on coordinates with r_i = 1 and
    quadratic on those with r_i = 2.
    """
    q = ctx.q
    _require_fermat(q)
    a = [x % q for x in a]
    b %= q
    s = len(a)
    total = Fraction(0)
    for mask in range(1 << s):
        r = [2 if mask >> i & 1 else 1 for i in range(s)]
        weight = Fraction((-1) ** sum(ri == 2 for ri in r), math.prod(r))
        nstar = 0
        for k in range(s + 1):
            for I in combinations(range(s), k):
                nstar += (-1) ** (s - k) * _ni_twisted(q, [a[i] for i in I], [r[i] for i in I], b)
        total += weight * nstar
    if total.denominator != 1:
        raise ArithmeticError(f"expansion is not integral: {total}")
    return int(total)


def _ni_twisted(q: int, a, r, b: int) -> int:
    if not a:
        return 1 if b == 0 else 0
    if any(ri == 1 for ri in r):
        return ni_linear(q, len(a))
    return ni_quadratic(q, a, b)


def corollary_count(q: int, s: int) -> int:
    """Primitive solutions of x_1 + ... + x_s = 0 over a Fermat prime q > 3."""
    _require_fermat(q)
    if s < 2:
        raise ValueError("s must be at least 2")
    rq = QuadExt.sqrt(q)
    val = QuadExt.of(q, Fraction(euler_phi(q - 1) ** s, q)) + (
        ((rq - 1) ** s + (rq + 1) ** s * (-1) ** s) * Fraction(q - 1, q) / 2 ** (s + 1)
    )
    if not val.is_integral():
        raise ArithmeticError(f"closed form is not an integer: {val}")
    return val.to_int()


def cubic_identity_check(q: int) -> bool:
    num = q * q - 6 * q + 5
    return num % 8 == 0 and corollary_count(q, 3) == num // 8


def subset_power_sum(q: int, signs, parity: int) -> QuadExt:
    """sum over I with |I| = parity (mod 2) of q^{|I|/2} prod_{j in I} signs[j]."""
    rq = QuadExt.sqrt(q)
    total = QuadExt.of(q, 0)
    s = len(signs)
    for k in range(parity % 2, s + 1, 2):
        for I in combinations(range(s), k):
            total = total + rq**k * math.prod(signs[j] for j in I)
    return total


def subset_power_sum_closed(q: int, signs, parity: int) -> QuadExt:
    """[prod(sqrt q c_i + 1) + (-1)^{s+parity} prod(sqrt q c_i - 1)] / 2."""
    rq = QuadExt.sqrt(q)
    s = len(signs)
    plus = QuadExt.of(q, 1)
    minus = QuadExt.of(q, 1)
    for c in signs:
        plus = plus * (rq * c + 1)
        minus = minus * (rq * c - 1)
    return (plus + minus * (-1) ** (s + parity)) / 2
