import itertools
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from primpoints.arith import (
    PHI_BOUND_EXCEPTION,
    divisors,
    euler_phi,
    factorize,
    fermat_prime_index,
    is_fermat_prime,
    moebius,
    phi_bound_is_exception,
    phi_ratio_lower_bound,
    prime_power_decompose,
    prime_powers_upto,
    primorial,
    squarefree_divisor_count,
    subsets,
    w_upper_bound,
)


def test_factorize_examples():
    assert factorize(1).factors == ()
    assert factorize(12).factors == ((2, 2), (3, 1))
    assert factorize(6469693230).factors == tuple((p, 1) for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29))


@pytest.mark.parametrize("bad", [0, -5, 2**63])
def test_factorize_rejects(bad):
    with pytest.raises(ValueError):
        factorize(bad)


def test_factorize_rejects_non_int():
    with pytest.raises(TypeError):
        factorize(12.0)


@given(st.integers(min_value=1, max_value=2**62))
def test_factorization_invariants(n):
    f = factorize(n)
    assert math.prod(p**e for p, e in f) == n
    ps = f.primes
    assert list(ps) == sorted(set(ps))
    assert all(e >= 1 for _, e in f)


def test_phi_mu_w_examples():
    assert [euler_phi(n) for n in (1, 16, 12)] == [1, 8, 4]
    assert [moebius(n) for n in (1, 30, 12)] == [1, -1, 0]
    assert [squarefree_divisor_count(n) for n in (1, 12, 16)] == [1, 4, 2]


def test_divisors_examples():
    assert divisors(4, squarefree_only=True) == [1, 2]
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert divisors(12, squarefree_only=True) == [1, 2, 3, 6]


def _brute_phi(n):
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


def test_identities_up_to_5000():
    for n in range(1, 5001):
        divs = divisors(n)
        assert euler_phi(n) == sum(moebius(d) * (n // d) for d in divs)
        assert sum(euler_phi(d) for d in divs) == n
        assert squarefree_divisor_count(n) == 2 ** len(factorize(n).factors)
        assert squarefree_divisor_count(n) == sum(1 for d in divs if moebius(d) != 0)


def test_phi_matches_enumeration():
    for n in range(1, 300):
        assert euler_phi(n) == _brute_phi(n)


@given(st.integers(1, 5000), st.integers(1, 5000))
def test_w_multiplicative(a, b):
    if math.gcd(a, b) == 1:
        assert squarefree_divisor_count(a * b) == squarefree_divisor_count(a) * squarefree_divisor_count(b)


def test_phi_ratio_lower_bound():
    v = phi_ratio_lower_bound(16)
    assert 0 < v < 1 and euler_phi(16) / 16 > v
    assert phi_bound_is_exception(PHI_BOUND_EXCEPTION)
    assert not phi_bound_is_exception(16)
    samples = [10**6 * 1.5**k for k in range(35)]
    vals = [phi_ratio_lower_bound(int(x)) for x in samples if x <= 1e12]
    assert all(a > b for a, b in itertools.pairwise(vals))
    with pytest.raises(ValueError):
        phi_ratio_lower_bound(2)


def test_phi_ratio_bound_holds_up_to_1e6():
    import numpy as np

    N = 10**6
    phi = np.arange(N + 1, dtype=np.float64)
    for p in range(2, N + 1):
        if phi[p] == p:  # p untouched so far, hence prime
            phi[p::p] -= phi[p::p] / p
    n = np.arange(3, N + 1)
    ll = np.log(np.log(n))
    bound = 2 * ll / (2 * 1.7810724179901979 * ll * ll + 5)
    assert np.all(phi[3:] / n > bound)


def test_w_upper_bound():
    assert w_upper_bound(101) == pytest.approx(18.1, abs=0.05)
    assert squarefree_divisor_count(100) < w_upper_bound(101)
    assert 2 < w_upper_bound(3) < math.inf
    assert w_upper_bound(2638435455) == pytest.approx(869.7, abs=0.05)
    with pytest.raises(ValueError):
        w_upper_bound(2)


def test_w_upper_bound_holds_up_to_1e6():
    import numpy as np

    N = 10**6
    omega = np.zeros(N + 1, dtype=np.int64)
    for p in range(2, N + 1):
        if omega[p] == 0:
            omega[p::p] += 1
    t = np.arange(3, N + 1)
    w = 2.0 ** omega[2:N]
    assert np.all(w < t ** (0.96 / np.log(np.log(t))))


def test_fermat_primes():
    assert is_fermat_prime(17)
    assert not is_fermat_prime(15)
    assert is_fermat_prime(3) and fermat_prime_index(3) == 0
    assert not is_fermat_prime(3, require_l_positive=True)
    assert [q for q in range(2, 70000) if is_fermat_prime(q)] == [3, 5, 17, 257, 65537]


def test_prime_powers_and_primorial():
    assert prime_power_decompose(9) == (3, 2)
    assert prime_power_decompose(12) is None
    assert prime_powers_upto(30, odd_only=True) == [3, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27, 29]
    assert primorial(29) == 6469693230
    assert primorial(19) == 9699690


def test_subsets_order():
    assert list(subsets([1, 2], nonempty=True)) == [(1,), (2,), (1, 2)]
    assert len(list(subsets(range(4)))) == 16
