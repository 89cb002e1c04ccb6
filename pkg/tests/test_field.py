"""Field construction and arithmetic axioms."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lclcodes.field import FieldSpec, default_modulus, field_make


def test_f2_addition_is_xor():
    f = field_make(2)
    for a in range(2):
        for b in range(2):
            assert f.add(a, b) == a ^ b


def test_f4_square_of_generator():
    # brute-force oracle: multiply coefficient polynomials mod x^2 + x + 1
    f = field_make(2, 2, modulus=[1, 1, 1])

    def oracle_mul(a, b):
        pa = (a & 1, a >> 1)
        pb = (b & 1, b >> 1)
        prod = [0, 0, 0]
        for i, x in enumerate(pa):
            for j, y in enumerate(pb):
                prod[i + j] ^= x & y
        # reduce x^2 = x + 1
        c0 = prod[0] ^ prod[2]
        c1 = prod[1] ^ prod[2]
        return c0 | (c1 << 1)

    for a in range(4):
        for b in range(4):
            assert f.mul(a, b) == oracle_mul(a, b)
    assert f.mul(2, 2) == 3


def test_nonprime_characteristic_rejected():
    with pytest.raises(ValueError):
        field_make(4)


def test_reducible_modulus_rejected():
    with pytest.raises(ValueError):
        field_make(2, 2, modulus=[1, 0, 1])  # x^2 + 1 = (x+1)^2 over F_2


def test_order_bound_enforced():
    with pytest.raises(ValueError):
        field_make(2, 17)
    field_make(2, 16)  # exactly the default bound


def test_default_modulus_is_deterministic():
    assert default_modulus(2, 2) == (1, 1, 1)
    assert default_modulus(2, 3) == default_modulus(2, 3)
    assert field_make(3, 2).modulus == default_modulus(3, 2)


@pytest.mark.parametrize("p,m", [(2, 1), (3, 1), (5, 1), (2, 2), (2, 3),
                                 (3, 2), (2, 4), (7, 1), (2, 6)])
def test_field_axioms_exhaustive_via_tables(p, m):
    f = field_make(p, m)
    add, sub, mul, _, inv = f.tables()
    a = np.array(add, dtype=np.int64)
    mt = np.array(mul, dtype=np.int64)
    q = f.q
    idx = np.arange(q)
    # commutativity
    assert np.array_equal(a, a.T)
    assert np.array_equal(mt, mt.T)
    # identity elements
    assert np.array_equal(a[0], idx)
    assert np.array_equal(mt[1], idx)
    # associativity, exhaustively via table gathers:
    # T[T][a,b,c] = T[T[a,b],c] and T[:,T][a,b,c] = T[a,T[b,c]]
    assert np.array_equal(a[a], a[:, a])
    assert np.array_equal(mt[mt], mt[:, mt])
    # distributivity: M[:,A][a,b,c] = a*(b+c);  A[M,M][a,b,c] = a*b + a*c
    assert np.array_equal(mt[:, a], a[mt[:, :, None], mt[:, None, :]])
    # inverses
    for x in range(1, q):
        assert mul[x][inv[x]] == 1
    # subtraction really is the inverse of addition
    for x in range(q):
        for y in range(q):
            assert add[sub[x][y]][y] == x


@given(st.integers(0, 3 ** 4 - 1), st.integers(0, 3 ** 4 - 1),
       st.integers(0, 3 ** 4 - 1))
def test_axioms_sampled_large_extension(a, b, c):
    # F_{3^4} = 81 is table-backed, but exercise the on-the-fly ops directly
    f = FieldSpec(3, 4)
    assert f.add(a, b) == f.add(b, a)
    assert f.mul(a, b) == f.mul(b, a)
    assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
    assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
    if a:
        assert f.mul(a, f.inv(a)) == 1
    assert f.add(a, f.neg(a)) == 0


def test_large_prime_field_inverse():
    f = field_make(65521)  # largest prime below 2^16
    for a in [1, 2, 12345, 65520]:
        assert f.mul(a, f.inv(a)) == 1


def test_large_extension_field_untabled():
    f = field_make(2, 10)  # q = 1024 > table limit
    assert not f.table_backed
    a, b = 513, 777
    assert f.mul(a, b) == f.mul(b, a)
    assert f.mul(a, f.inv(a)) == 1
    with pytest.raises(ValueError):
        f.tables()


def test_pow_matches_repeated_multiplication():
    f = field_make(3, 2)
    for a in range(1, f.q):
        acc = 1
        for e in range(6):
            assert f.pow(a, e) == acc
            acc = f.mul(acc, a)


def test_field_identity_and_caching():
    assert field_make(2, 2) is field_make(2, 2)
    assert field_make(2, 2) == field_make(2, 2, modulus=[1, 1, 1])
    assert field_make(2) != field_make(3)
