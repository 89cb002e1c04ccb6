"""Subspaces of F_q^b: canonical RREF representation, lattice operations,
exact enumeration, and the distinct-coordinate-type predicate.

The canonical basis makes subspaces hashable, so equality is structural and
dimension bookkeeping can be memoized.  Enumeration order is fixed (by
dimension, then pivot columns in lexicographic order, then free entries in
row-major ascending order) so that argmin/argmax reports are reproducible.
"""

from __future__ import annotations

import itertools
import math
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .errors import CapExceeded
from .field import FieldSpec
from .matrix import MatrixFq, kernel_ndarray, rref_ndarray

DEFAULT_LATTICE_CAP = 10_000_000


class Subspace:
    """A linear subspace of F_q^b held as its unique RREF basis."""

    __slots__ = ("field", "ambient", "basis", "_hash")

    def __init__(self, field: FieldSpec, ambient: int, rref_rows: Sequence[Sequence[int]]):
        # rref_rows must already be a full-row-rank RREF; use from_vectors otherwise
        self.field = field
        self.ambient = ambient
        self.basis = MatrixFq(field, rref_rows, ncols=ambient)
        self._hash = hash((field, ambient, self.basis.entries))

    @classmethod
    def from_vectors(cls, field: FieldSpec, ambient: int,
                     vectors: Sequence[Sequence[int]]) -> "Subspace":
        if not vectors:
            return cls(field, ambient, [])
        arr = np.array([list(v) for v in vectors], dtype=np.int64)
        red, rank, _ = rref_ndarray(arr, field)
        return cls(field, ambient, red[:rank].tolist())

    @classmethod
    def zero(cls, field: FieldSpec, ambient: int) -> "Subspace":
        return cls(field, ambient, [])

    @classmethod
    def full(cls, field: FieldSpec, ambient: int) -> "Subspace":
        return cls(field, ambient,
                   [[1 if i == j else 0 for j in range(ambient)] for i in range(ambient)])

    @property
    def dim(self) -> int:
        return self.basis.nrows

    def contains(self, v: Sequence[int]) -> bool:
        """Membership by reduction against the RREF basis."""
        f = self.field
        w = list(v)
        for row in self.basis.entries:
            pivot = next(j for j, x in enumerate(row) if x)
            if w[pivot]:
                c = w[pivot]
                for j in range(pivot, self.ambient):
                    if row[j]:
                        w[j] = f.sub(w[j], f.mul(c, row[j]))
        return not any(w)

    def contains_space(self, other: "Subspace") -> bool:
        return all(self.contains(r) for r in other.basis.entries)

    def elements(self, cap: int = 1_000_000) -> Iterator[tuple]:
        """All q^dim vectors, coefficient-lexicographic order."""
        if self.field.q ** self.dim > cap:
            raise CapExceeded(f"subspace has {self.field.q ** self.dim} elements, cap {cap}")
        f = self.field
        for coeffs in itertools.product(range(f.q), repeat=self.dim):
            v = [0] * self.ambient
            for c, row in zip(coeffs, self.basis.entries):
                if c:
                    for j, r in enumerate(row):
                        if r:
                            v[j] = f.add(v[j], f.mul(c, r))
            yield tuple(v)

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.field == other.field
                and self.ambient == other.ambient and self.basis == other.basis)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Subspace(dim {self.dim} of {self.field}^{self.ambient})"


# ---------------------------------------------------------------------------
# lattice operations


def intersect(u: Subspace, w: Subspace) -> Subspace:
    """u ∩ w via the kernel of the stacked coefficient system."""
    _check_compatible(u, w)
    if u.dim == 0 or w.dim == 0:
        return Subspace.zero(u.field, u.ambient)
    # x in both spans: x = a·U = c·W  <=>  [U^T | -W^T](a;c) = 0
    ut = u.basis.to_ndarray().T
    wt = w.basis.to_ndarray().T
    neg_wt = np.vectorize(u.field.neg, otypes=[np.int64])(wt) if wt.size else wt
    stacked = np.hstack([ut, neg_wt])
    null = kernel_ndarray(stacked, u.field)
    vecs = [u.basis.vecmat(row[:u.dim]) for row in null.tolist()]
    return Subspace.from_vectors(u.field, u.ambient, vecs)


def span_sum(u: Subspace, w: Subspace) -> Subspace:
    """u + w: row span of the concatenated bases."""
    _check_compatible(u, w)
    return Subspace.from_vectors(u.field, u.ambient,
                                 list(u.basis.entries) + list(w.basis.entries))


def _check_compatible(u: Subspace, w: Subspace) -> None:
    if u.field != w.field or u.ambient != w.ambient:
        raise ValueError("ambient space mismatch")


def complement_map(u: Subspace) -> MatrixFq:
    """A (b - dim) x b matrix H with {x : H @ x = 0} = u.

    Rows of u's basis pair to zero against rows of H, and a dimension count
    shows the kernel of H is exactly u.
    """
    if u.dim == 0:
        return MatrixFq.identity(u.field, u.ambient)
    basis = kernel_ndarray(u.basis.to_ndarray(), u.field)
    return MatrixFq(u.field, basis.tolist(), ncols=u.ambient)


# ---------------------------------------------------------------------------
# enumeration


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of F_q^n."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def count_subspaces(field: FieldSpec, ambient: int,
                    dims: Optional[Iterable[int]] = None) -> int:
    dims = range(ambient + 1) if dims is None else dims
    return sum(gaussian_binomial(ambient, d, field.q) for d in dims)


def enumerate_subspaces(field: FieldSpec, ambient: int,
                        dims: Optional[Iterable[int]] = None,
                        cap: int = DEFAULT_LATTICE_CAP) -> Iterator[Subspace]:
    """Every subspace of F_q^ambient exactly once, in the fixed order.

    Enumerates RREF matrices directly: for each pivot-column set the free
    entries (right of each row's pivot, outside pivot columns) range over
    the field.  Refuses with CapExceeded rather than truncating.
    """
    dim_list = sorted(range(ambient + 1) if dims is None else set(dims))
    total = count_subspaces(field, ambient, dim_list)
    if total > cap:
        raise CapExceeded(
            f"lattice slice of {field}^{ambient} has {total} subspaces, cap {cap}")
    q = field.q
    for d in dim_list:
        if d == 0:
            yield Subspace.zero(field, ambient)
            continue
        for pivots in itertools.combinations(range(ambient), d):
            pivset = set(pivots)
            free_pos = [(i, c) for i in range(d)
                        for c in range(pivots[i] + 1, ambient) if c not in pivset]
            for values in itertools.product(range(q), repeat=len(free_pos)):
                rows = [[0] * ambient for _ in range(d)]
                for i, p in enumerate(pivots):
                    rows[i][p] = 1
                for (i, c), v in zip(free_pos, values):
                    rows[i][c] = v
                yield Subspace(field, ambient, rows)


def enumerate_subspaces_of(u: Subspace, proper: bool = False,
                           cap: int = DEFAULT_LATTICE_CAP) -> Iterator[Subspace]:
    """All (proper) subspaces of u, enumerated in u's own coordinates.

    Cost scales with dim u, not the ambient dimension.
    """
    d = u.dim
    for w in enumerate_subspaces(u.field, d, cap=cap):
        if proper and w.dim == d:
            continue
        lifted = [u.basis.vecmat(row) for row in w.basis.entries]
        yield Subspace.from_vectors(u.field, u.ambient, lifted)


def is_distinct_type(u: Subspace) -> bool:
    """Whether u avoids every coordinate-pair hyperplane {x : x_i = x_j}.

    Equivalently: u is the row span of some matrix with pairwise-distinct
    columns.  Checked pair by pair on basis vectors (if every basis vector
    has x_i = x_j, so does all of u).
    """
    if u.ambient <= 1:
        return True
    if u.dim == 0:
        return False
    rows = u.basis.entries
    for i, j in itertools.combinations(range(u.ambient), 2):
        if all(row[i] == row[j] for row in rows):
            return False
    return True


def equiv_subspace(field: FieldSpec, ambient: int,
                   blocks: Sequence[Sequence[int]]) -> Subspace:
    """The subspace {x : x_r = x_s whenever r, s share a block}.

    ``blocks`` is a partition of range(ambient); singleton blocks impose
    nothing.  Built as the kernel of the difference constraints.
    """
    constraints = []
    for block in blocks:
        b = sorted(block)
        for s in b[1:]:
            row = [0] * ambient
            row[b[0]] = 1
            row[s] = field.neg(1)
            constraints.append(row)
    if not constraints:
        return Subspace.full(field, ambient)
    basis = kernel_ndarray(np.array(constraints, dtype=np.int64), field)
    return Subspace.from_vectors(field, ambient, basis.tolist())
