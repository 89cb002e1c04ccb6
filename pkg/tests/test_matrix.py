"""Exact elimination: RREF, rank, kernel, solve, text format, backends."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lclcodes import _gfkernels_py
from lclcodes._backend import BACKEND
from lclcodes.field import field_make
from lclcodes.matrix import (MatrixFq, kernel, rank, read_matrix_text, rref,
                             rref_ndarray, solve_right, write_matrix_text)
from lclcodes.oracles import rank_by_span_enumeration, span_vectors

F2 = field_make(2)
F3 = field_make(3)
F4 = field_make(2, 2)


def test_rref_identity_fixed_point():
    ident = MatrixFq.identity(F2, 3)
    red, rk, piv = rref(ident)
    assert red == ident and rk == 3 and piv == (0, 1, 2)


def test_rref_equal_rows():
    red, rk, piv = rref(MatrixFq(F2, [[1, 1], [1, 1]]))
    assert red.entries == ((1, 1), (0, 0))
    assert rk == 1 and piv == (0,)


def test_rref_random_rank_matches_span_enumeration():
    rng = np.random.default_rng(5)
    for _ in range(10):
        m = MatrixFq(F3, rng.integers(0, 3, size=(5, 7)).tolist())
        assert rank(m) == rank_by_span_enumeration(m)


def _random_matrix(field, rows, cols, seed):
    rng = np.random.default_rng(seed)
    return MatrixFq(field, rng.integers(0, field.q, size=(rows, cols)).tolist())


@given(st.integers(0, 10 ** 6))
@settings(max_examples=40)
def test_rref_idempotent(seed):
    m = _random_matrix(F3, 4, 5, seed)
    red, _, _ = rref(m)
    red2, _, _ = rref(red)
    assert red == red2


@given(st.integers(0, 10 ** 6))
@settings(max_examples=40)
def test_rank_nullity(seed):
    m = _random_matrix(F4, 4, 6, seed)
    assert rank(m) + kernel(m).nrows == m.ncols


@given(st.integers(0, 10 ** 6))
@settings(max_examples=40)
def test_kernel_annihilates(seed):
    m = _random_matrix(F3, 3, 5, seed)
    k = kernel(m)
    for row in k.entries:
        assert not any(m.matvec(row))


def test_kernel_examples():
    assert kernel(MatrixFq.zeros(F2, 2, 3)).nrows == 3
    assert kernel(MatrixFq.identity(F3, 3)).nrows == 0
    k = kernel(MatrixFq(F2, [[1, 1, 0]]))
    assert set(k.entries) == {(1, 1, 0), (0, 0, 1)}


def test_equal_rowspans_iff_equal_rref():
    rng = np.random.default_rng(11)
    mats = [_random_matrix(F2, 3, 4, s) for s in range(40)]
    for a in mats[:12]:
        for b in mats[:12]:
            same_span = span_vectors(a.entries, F2) == span_vectors(b.entries, F2)
            assert same_span == (rref(a)[0].entries[:rank(a)] == rref(b)[0].entries[:rank(b)])


def test_solve_right():
    a = MatrixFq(F3, [[1, 2, 0], [0, 1, 1]])
    x = solve_right(a, (2, 1))
    assert x is not None and a.matvec(x) == (2, 1)
    # inconsistent system
    b = MatrixFq(F2, [[1, 0], [1, 0]])
    assert solve_right(b, (1, 0)) is None


def test_matmul_and_vecmat():
    a = MatrixFq(F3, [[1, 2], [0, 1]])
    b = MatrixFq(F3, [[1, 1], [2, 0]])
    assert a.matmul(b).entries == ((2, 1), (2, 0))
    assert a.vecmat((1, 1)) == (1, 0)


def test_entry_validation():
    with pytest.raises(ValueError):
        MatrixFq(F2, [[0, 2]])
    with pytest.raises(ValueError):
        MatrixFq(F2, [[0], [1, 1]])


def test_matrix_text_roundtrip(tmp_path):
    m = _random_matrix(F4, 3, 5, 7)
    path = tmp_path / "m.txt"
    write_matrix_text(m, path)
    back = read_matrix_text(path)
    assert back == m
    header = path.read_text().splitlines()[0]
    assert header == "3 5 4"


def test_empty_and_degenerate_shapes():
    empty = MatrixFq(F2, [], ncols=3)
    red, rk, piv = rref(empty)
    assert (red.nrows, red.ncols, rk, piv) == (0, 3, 0, ())
    assert kernel(empty).nrows == 3
    assert empty.transpose().nrows == 3 and empty.transpose().ncols == 0


@pytest.mark.parametrize("q,shape", [(2, (6, 8)), (3, (5, 5)), (4, (4, 7)),
                                     (251, (6, 8)), (65521, (3, 4))])
def test_backends_agree(q, shape):
    if q == 4:
        f = field_make(2, 2)
    else:
        f = field_make(q)
    rng = np.random.default_rng(q)
    arr = rng.integers(0, f.q, size=shape).astype(np.int64)
    red_main, rank_main, piv_main = rref_ndarray(arr, f)
    # run the pure-Python twin directly on the same input
    if f.table_backed:
        work = arr.astype(np.uint8).copy()
        _, sub_t, mul_t, inv_t = f.np_tables()
        rank_py, piv_py = _gfkernels_py.rref_table(work, sub_t, mul_t, inv_t)
        red_py = work.astype(np.int64)
    else:
        work = arr.copy()
        rank_py, piv_py = _gfkernels_py.rref_prime(work, f.p)
        red_py = work
    assert rank_main == rank_py
    assert tuple(piv_main) == tuple(piv_py)
    assert np.array_equal(red_main, red_py)


def test_backend_name_is_reported():
    assert BACKEND in ("cython", "python")
