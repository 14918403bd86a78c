import pickle

import numpy as np
import pytest

from primpoints.arith import euler_phi, prime_powers_upto
from primpoints.field import (
    CapExceeded,
    FieldError,
    build_field,
    embedding,
    field_for_q,
    is_irreducible,
)
from primpoints.field import field_for_q as F


def test_build_examples():
    f5 = build_field(5)
    assert f5.q == 5 and f5.generator == 2
    f9 = build_field(3, 2)
    assert f9.modulus == (1, 0, 1)
    f2 = build_field(2)
    assert f2.q == 2 and list(f2.primitive_elements()) == [1]


def test_build_errors():
    with pytest.raises(FieldError):
        build_field(4)
    with pytest.raises(CapExceeded):
        build_field(2, 30)
    with pytest.raises(CapExceeded):
        field_for_q(4294967311)
    with pytest.raises(FieldError):
        field_for_q(12)


def test_scalar_ops():
    f5 = build_field(5)
    assert f5.mul(2, 3) == 1
    assert f5.pow(2, 4) == 1
    f9 = build_field(3, 2)
    assert all(f9.add(x, f9.neg(x)) == 0 for x in range(9))
    with pytest.raises(ZeroDivisionError):
        f5.inv(0)


def test_orders_and_primitives():
    f7 = build_field(7)
    assert f7.element_order(2) == 3 and f7.element_order(3) == 6 and f7.element_order(1) == 1
    with pytest.raises(ValueError):
        f7.element_order(0)
    assert list(build_field(13).primitive_elements()) == [2, 6, 7, 11]
    assert list(f7.primitive_elements()) == [3, 5]
    assert list(build_field(5).primitive_elements()) == [2, 3]
    assert not f7.is_primitive(0)


def test_trace():
    f7 = build_field(7)
    assert [f7.trace(x) for x in range(7)] == list(range(7))
    f9 = build_field(3, 2)
    assert f9.trace(1) == 2
    for q in (8, 9, 25, 27, 49):
        G = F(q)
        assert int(np.count_nonzero(G.trace_table == 0)) == q // G.p


def test_modulus_is_smallest_irreducible():
    for p, n in [(2, 3), (3, 3), (5, 2), (2, 4)]:
        G = build_field(p, n)
        assert is_irreducible(G.modulus, p)
        # no smaller monic candidate is irreducible
        enc = sum(c * p**i for i, c in enumerate(G.modulus[:-1]))
        for e in range(enc):
            coeffs = [(e // p**i) % p for i in range(n)] + [1]
            assert not is_irreducible(coeffs, p)


def test_generator_is_smallest_primitive():
    for q in (9, 25, 27, 32, 49, 121):
        G = F(q)
        assert G.generator == int(G.primitive_elements()[0])
        assert G.element_order(G.generator) == q - 1


@pytest.mark.parametrize("q", [4, 8, 9, 16, 25, 27, 49, 64, 81, 125])
def test_field_axioms_sampled(q, rng):
    G = F(q)
    a, b, c = (rng.integers(0, q, 10**4) for _ in range(3))
    mul, add = G.mul_v, G.add_v
    assert np.array_equal(mul(a, mul(b, c)), mul(mul(a, b), c))
    assert np.array_equal(add(a, add(b, c)), add(add(a, b), c))
    assert np.array_equal(mul(a, b), mul(b, a))
    assert np.array_equal(add(a, b), add(b, a))
    assert np.array_equal(mul(a, add(b, c)), add(mul(a, b), mul(a, c)))


def test_frobenius_fixes_everything():
    for q in prime_powers_upto(512):
        G = F(q)
        assert np.array_equal(G.pow_v(G.elements, q), G.elements)


def test_primitive_count_is_phi():
    for q in prime_powers_upto(2048):
        assert len(F(q).primitive_elements()) == euler_phi(q - 1)


def test_exp_log_inverse():
    for q in (2, 3, 16, 81, 343, 1024):
        G = F(q)
        assert np.array_equal(G.log[G.exp], np.arange(q - 1))
        assert np.array_equal(G.exp[G.log[1:]], np.arange(1, q))
        assert sorted(G.exp.tolist()) == list(range(1, q))


def test_deterministic_and_picklable():
    G = build_field(3, 4)
    H = pickle.loads(pickle.dumps(G))
    assert H.modulus == G.modulus and H.generator == G.generator
    assert np.array_equal(H.exp, G.exp)


def test_embedding_is_ring_hom():
    small, big = build_field(3), build_field(3, 2)
    emb = embedding(small, big)
    for x in range(3):
        for y in range(3):
            assert emb[small.mul(x, y)] == big.mul(int(emb[x]), int(emb[y]))
            assert emb[small.add(x, y)] == big.add(int(emb[x]), int(emb[y]))


def test_info():
    info = build_field(3, 2).info()
    assert info["q"] == 9 and info["generator"] == 4 and info["modulus"] == [1, 0, 1]
