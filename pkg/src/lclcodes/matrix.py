"""Exact linear algebra over F_q: RREF, rank, kernel, solve.

MatrixFq is an immutable value type (hashable, comparable); the heavy
lifting happens on numpy int arrays through the selected backend.  Hot
callers (Monte Carlo deciders) use the ndarray-level functions directly.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from ._backend import kernels
from .field import FieldSpec, field_make, is_prime


class MatrixFq:
    """A rows x cols matrix with entries in 0..q-1, stored row-major."""

    __slots__ = ("field", "nrows", "ncols", "entries")

    def __init__(self, field: FieldSpec, entries: Sequence[Sequence[int]],
                 ncols: Optional[int] = None):
        rows = tuple(tuple(int(x) for x in row) for row in entries)
        if rows:
            ncols = len(rows[0])
            if any(len(r) != ncols for r in rows):
                raise ValueError("ragged rows")
        elif ncols is None:
            raise ValueError("empty matrix needs an explicit column count")
        q = field.q
        for row in rows:
            for x in row:
                if not 0 <= x < q:
                    raise ValueError(f"entry {x} outside 0..{q - 1}")
        self.field = field
        self.nrows = len(rows)
        self.ncols = ncols
        self.entries = rows

    # -- constructors --------------------------------------------------------

    @classmethod
    def zeros(cls, field: FieldSpec, nrows: int, ncols: int) -> "MatrixFq":
        return cls(field, [[0] * ncols for _ in range(nrows)], ncols=ncols)

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "MatrixFq":
        return cls(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)],
                   ncols=n)

    @classmethod
    def from_ndarray(cls, field: FieldSpec, arr: np.ndarray) -> "MatrixFq":
        return cls(field, arr.tolist(), ncols=arr.shape[1] if arr.ndim == 2 else None)

    # -- views ----------------------------------------------------------------

    def to_ndarray(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64).reshape(self.nrows, self.ncols)

    def row(self, i: int) -> tuple:
        return self.entries[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> "MatrixFq":
        if self.nrows == 0:
            return MatrixFq(self.field, [[] for _ in range(self.ncols)], ncols=0)
        return MatrixFq(self.field, list(zip(*self.entries)), ncols=self.nrows)

    # -- arithmetic ------------------------------------------------------------

    def matmul(self, other: "MatrixFq") -> "MatrixFq":
        if self.field != other.field or self.ncols != other.nrows:
            raise ValueError("shape or field mismatch")
        f = self.field
        ocols = [other.col(j) for j in range(other.ncols)]
        out = []
        for row in self.entries:
            orow = []
            for colv in ocols:
                acc = 0
                for a, b in zip(row, colv):
                    if a and b:
                        acc = f.add(acc, f.mul(a, b))
                orow.append(acc)
            out.append(orow)
        return MatrixFq(f, out, ncols=other.ncols)

    def matvec(self, v: Sequence[int]) -> tuple:
        """self @ v for a length-ncols vector."""
        f = self.field
        out = []
        for row in self.entries:
            acc = 0
            for a, b in zip(row, v):
                if a and b:
                    acc = f.add(acc, f.mul(a, b))
            out.append(acc)
        return tuple(out)

    def vecmat(self, v: Sequence[int]) -> tuple:
        """v @ self for a length-nrows vector."""
        f = self.field
        out = [0] * self.ncols
        for vi, row in zip(v, self.entries):
            if not vi:
                continue
            for j, r in enumerate(row):
                if r:
                    out[j] = f.add(out[j], f.mul(vi, r))
        return tuple(out)

    # -- identity ----------------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, MatrixFq) and self.field == other.field
                and self.ncols == other.ncols and self.entries == other.entries)

    def __hash__(self):
        return hash((self.field, self.ncols, self.entries))

    def __repr__(self):
        return f"MatrixFq({self.field}, {self.nrows}x{self.ncols})"


# ---------------------------------------------------------------------------
# ndarray-level elimination (hot path)


def rref_ndarray(arr: np.ndarray, field: FieldSpec) -> Tuple[np.ndarray, int, tuple]:
    """Reduced row echelon form of an int array; returns (R, rank, pivots).

    The input is not modified.
    """
    rows, cols = arr.shape
    if rows == 0 or cols == 0:
        return arr.astype(np.int64, copy=True), 0, ()
    if field.table_backed:
        _, sub_t, mul_t, inv_t = field.np_tables()
        work = np.ascontiguousarray(arr, dtype=np.uint8).copy()
        rank, pivots = kernels.rref_table(work, sub_t, mul_t, inv_t)
        return work.astype(np.int64), rank, tuple(pivots)
    if field.m == 1:
        work = np.ascontiguousarray(arr, dtype=np.int64).copy()
        rank, pivots = kernels.rref_prime(work, field.p)
        return work, rank, tuple(pivots)
    return _rref_generic(arr, field)


def _rref_generic(arr: np.ndarray, field: FieldSpec) -> Tuple[np.ndarray, int, tuple]:
    """Generic-field elimination for big extension fields (never hot)."""
    work = [list(map(int, row)) for row in arr]
    rows_n, cols = arr.shape
    piv_r = 0
    pivots = []
    for c in range(cols):
        sel = next((r for r in range(piv_r, rows_n) if work[r][c]), None)
        if sel is None:
            continue
        work[sel], work[piv_r] = work[piv_r], work[sel]
        prow = work[piv_r]
        if prow[c] != 1:
            pinv = field.inv(prow[c])
            for cc in range(c, cols):
                prow[cc] = field.mul(prow[cc], pinv)
        for r in range(rows_n):
            if r == piv_r or not work[r][c]:
                continue
            f = work[r][c]
            row = work[r]
            for cc in range(c, cols):
                row[cc] = field.sub(row[cc], field.mul(f, prow[cc]))
        pivots.append(c)
        piv_r += 1
        if piv_r == rows_n:
            break
    return np.array(work, dtype=np.int64).reshape(rows_n, cols), piv_r, tuple(pivots)


def rank_ndarray(arr: np.ndarray, field: FieldSpec) -> int:
    return rref_ndarray(arr, field)[1]


def kernel_ndarray(arr: np.ndarray, field: FieldSpec) -> np.ndarray:
    """Basis rows of {x : arr @ x = 0}; shape (cols - rank, cols)."""
    rows, cols = arr.shape
    if rows == 0 or cols == 0:
        return np.eye(cols, dtype=np.int64)
    red, rank, pivots = rref_ndarray(arr, field)
    pivset = set(pivots)
    free = [c for c in range(cols) if c not in pivset]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for bi, fcol in enumerate(free):
        basis[bi, fcol] = 1
        for ri, pcol in enumerate(pivots):
            basis[bi, pcol] = field.neg(int(red[ri, fcol]))
    return basis


# ---------------------------------------------------------------------------
# MatrixFq-level operations


def rref(a: MatrixFq) -> Tuple[MatrixFq, int, tuple]:
    """The unique RREF of a, its rank, and the (increasing) pivot columns."""
    red, rank, pivots = rref_ndarray(a.to_ndarray(), a.field)
    return MatrixFq.from_ndarray(a.field, red), rank, pivots


def rank(a: MatrixFq) -> int:
    return rank_ndarray(a.to_ndarray(), a.field)


def kernel(a: MatrixFq) -> MatrixFq:
    """Basis rows of the right null space {x : a @ x = 0}."""
    basis = kernel_ndarray(a.to_ndarray(), a.field)
    return MatrixFq(a.field, basis.tolist(), ncols=a.ncols)


def solve_right(a: MatrixFq, b: Sequence[int]) -> Optional[tuple]:
    """One solution x of a @ x = b, or None when inconsistent."""
    if len(b) != a.nrows:
        raise ValueError("dimension mismatch")
    aug = np.zeros((a.nrows, a.ncols + 1), dtype=np.int64)
    if a.nrows:
        aug[:, :a.ncols] = a.to_ndarray()
        aug[:, a.ncols] = list(b)
    red, rnk, pivots = rref_ndarray(aug, a.field)
    if a.ncols in pivots:
        return None
    x = [0] * a.ncols
    for ri, pcol in enumerate(pivots):
        x[pcol] = int(red[ri, a.ncols])
    return tuple(x)


# ---------------------------------------------------------------------------
# Matrix text format: first line "rows cols q", then rows of element codes.


def factor_prime_power(q: int) -> Tuple[int, int]:
    """q -> (p, m) with q = p^m; errors when q is not a prime power."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = next((d for d in range(2, q + 1) if q % d == 0), q)
    if not is_prime(p):
        raise ValueError(f"{q} is not a prime power")
    m = 0
    v = q
    while v > 1:
        if v % p:
            raise ValueError(f"{q} is not a prime power")
        v //= p
        m += 1
    return p, m


def write_matrix_text(a: MatrixFq, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{a.nrows} {a.ncols} {a.field.q}\n")
        for row in a.entries:
            fh.write(" ".join(str(x) for x in row) + "\n")


def read_matrix_text(path, field: Optional[FieldSpec] = None) -> MatrixFq:
    """Read the text format; extension fields assume the default modulus."""
    with open(path, encoding="ascii") as fh:
        header = fh.readline().split()
        nrows, ncols, q = (int(t) for t in header)
        if field is None:
            p, m = factor_prime_power(q)
            field = field_make(p, m)
        elif field.q != q:
            raise ValueError(f"file is over F_{q}, expected F_{field.q}")
        rows = []
        for _ in range(nrows):
            row = [int(t) for t in fh.readline().split()]
            if len(row) != ncols:
                raise ValueError("malformed matrix row")
            rows.append(row)
    return MatrixFq(field, rows, ncols=ncols)
