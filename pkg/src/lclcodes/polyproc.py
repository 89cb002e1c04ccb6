"""Tuples of bounded-degree polynomials, evaluation maps, polynomial
profiles, and the constraint-revelation process with its potential function.

Spaces of polynomial b-tuples live on the k*b-dimensional coefficient space
(slot j's coefficient of X^e sits at column j*k + e).  Ranks over the
rational-function field are computed by fraction-free (Bareiss) elimination
on F_q[X], never by evaluation, so tiny q cannot misreport a rank.

Two deterministic theorem-backed bounds are asserted on every call that
they govern: evaluated dimension never exceeds the span dimension over
F_q(X), and each revelation step changes the potential by a bounded,
nonnegative amount.  A violation raises InvariantViolation with a dump.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import InvariantViolation
from .field import FieldSpec
from .matrix import MatrixFq, kernel_ndarray, rref_ndarray
from .profile import Profile
from .subspace import Subspace, complement_map

Poly = Tuple[int, ...]  # coefficients ascending, trimmed; () is the zero polynomial


# ---------------------------------------------------------------------------
# polynomial arithmetic over a FieldSpec


def pnorm(coeffs: Sequence[int]) -> Poly:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def pconst(c: int) -> Poly:
    return (c,) if c else ()


def pdeg(a: Poly) -> int:
    return len(a) - 1


def padd(a: Poly, b: Poly, f: FieldSpec) -> Poly:
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else 0
        y = b[i] if i < len(b) else 0
        out.append(f.add(x, y))
    return pnorm(out)


def psub(a: Poly, b: Poly, f: FieldSpec) -> Poly:
    return padd(a, tuple(f.neg(x) for x in b), f)


def pmul(a: Poly, b: Poly, f: FieldSpec) -> Poly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            if bj:
                out[i + j] = f.add(out[i + j], f.mul(ai, bj))
    return pnorm(out)


def pscale(a: Poly, c: int, f: FieldSpec) -> Poly:
    if not c:
        return ()
    return pnorm([f.mul(c, x) for x in a])


def peval(a: Poly, alpha: int, f: FieldSpec) -> int:
    out = 0
    for c in reversed(a):
        out = f.add(f.mul(out, alpha), c)
    return out


def pdivmod(a: Poly, b: Poly, f: FieldSpec) -> Tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    binv = f.inv(b[-1])
    q = [0] * max(len(r) - db, 0)
    while len(r) - 1 >= db and r:
        lead = r[-1]
        if lead:
            shift = len(r) - 1 - db
            fac = f.mul(lead, binv)
            q[shift] = fac
            for i, c in enumerate(b):
                if c:
                    r[shift + i] = f.sub(r[shift + i], f.mul(fac, c))
        r.pop()
    return pnorm(q), pnorm(r)


# ---------------------------------------------------------------------------
# polynomial matrices


class PolyMatrix:
    """A matrix over F_q[X], representing an F_q(X)-linear map v -> M @ v."""

    __slots__ = ("field", "nrows", "ncols", "entries")

    def __init__(self, field: FieldSpec, entries: Sequence[Sequence[Poly]],
                 ncols: Optional[int] = None):
        rows = tuple(tuple(pnorm(e) for e in row) for row in entries)
        if rows:
            ncols = len(rows[0])
            if any(len(r) != ncols for r in rows):
                raise ValueError("ragged rows")
        elif ncols is None:
            raise ValueError("empty matrix needs an explicit column count")
        self.field = field
        self.nrows = len(rows)
        self.ncols = ncols
        self.entries = rows

    @classmethod
    def from_constant(cls, m: MatrixFq) -> "PolyMatrix":
        return cls(m.field, [[pconst(x) for x in row] for row in m.entries],
                   ncols=m.ncols)

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "PolyMatrix":
        return cls(field, [[pconst(1) if i == j else () for j in range(n)]
                           for i in range(n)], ncols=n)

    @classmethod
    def zeros(cls, field: FieldSpec, nrows: int, ncols: int) -> "PolyMatrix":
        return cls(field, [[()] * ncols for _ in range(nrows)], ncols=ncols)

    def evaluate(self, alpha: int) -> MatrixFq:
        return MatrixFq(self.field,
                        [[peval(e, alpha, self.field) for e in row] for row in self.entries],
                        ncols=self.ncols)

    def transpose(self) -> "PolyMatrix":
        if self.nrows == 0:
            return PolyMatrix(self.field, [[] for _ in range(self.ncols)], ncols=0)
        return PolyMatrix(self.field, list(zip(*self.entries)), ncols=self.nrows)

    def matmul(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.ncols != other.nrows or self.field != other.field:
            raise ValueError("shape or field mismatch")
        f = self.field
        out = []
        for row in self.entries:
            orow = []
            for j in range(other.ncols):
                acc: Poly = ()
                for t, e in enumerate(row):
                    if e and other.entries[t][j]:
                        acc = padd(acc, pmul(e, other.entries[t][j], f), f)
                orow.append(acc)
            out.append(orow)
        return PolyMatrix(f, out, ncols=other.ncols)

    def max_degree(self) -> int:
        return max((pdeg(e) for row in self.entries for e in row), default=-1)

    def is_zero(self) -> bool:
        return all(not e for row in self.entries for e in row)

    def __eq__(self, other):
        return (isinstance(other, PolyMatrix) and self.field == other.field
                and self.ncols == other.ncols and self.entries == other.entries)

    def __repr__(self):
        return f"PolyMatrix({self.nrows}x{self.ncols}, {self.field})"


def fqx_rank(m: PolyMatrix) -> int:
    """Rank over F_q(X) by fraction-free Gaussian elimination on F_q[X].

    Bareiss updates keep every intermediate entry a polynomial (a minor of
    the original matrix); each division by the previous pivot is exact and
    checked.
    """
    f = m.field
    rows = [list(r) for r in m.entries]
    nr, nc = m.nrows, m.ncols
    prev: Poly = (1,)
    rank_ = 0
    for col in range(nc):
        sel = next((r for r in range(rank_, nr) if rows[r][col]), None)
        if sel is None:
            continue
        rows[rank_], rows[sel] = rows[sel], rows[rank_]
        piv = rows[rank_][col]
        for r in range(rank_ + 1, nr):
            num_col = rows[r][col]
            for c2 in range(col + 1, nc):
                num = psub(pmul(piv, rows[r][c2], f), pmul(num_col, rows[rank_][c2], f), f)
                quot, rem = pdivmod(num, prev, f)
                if rem:
                    raise InvariantViolation("Bareiss division was inexact",
                                             {"row": r, "col": c2})
                rows[r][c2] = quot
            rows[r][col] = ()
        prev = piv
        rank_ += 1
        if rank_ == nr:
            break
    return rank_


def poly_det(m: PolyMatrix) -> Poly:
    """Determinant by cofactor expansion (matrices here stay tiny)."""
    if m.nrows != m.ncols:
        raise ValueError("determinant of a non-square matrix")
    f = m.field
    ent = m.entries

    def rec(rows: Tuple[int, ...], cols: Tuple[int, ...]) -> Poly:
        if not rows:
            return (1,)
        r0 = rows[0]
        acc: Poly = ()
        for pos, c in enumerate(cols):
            e = ent[r0][c]
            if not e:
                continue
            minor = rec(rows[1:], cols[:pos] + cols[pos + 1:])
            term = pmul(e, minor, f)
            if pos % 2:
                term = tuple(f.neg(x) for x in term)
            acc = padd(acc, term, f)
        return acc

    return rec(tuple(range(m.nrows)), tuple(range(m.ncols)))


def poly_adjugate(m: PolyMatrix) -> PolyMatrix:
    """adj(m) with m @ adj(m) = det(m) * I."""
    n = m.nrows
    if n != m.ncols:
        raise ValueError("adjugate of a non-square matrix")
    f = m.field
    ent = m.entries
    out = [[() for _ in range(n)] for _ in range(n)]
    idx = tuple(range(n))
    for i in range(n):
        for j in range(n):
            rows = idx[:j] + idx[j + 1:]
            cols = idx[:i] + idx[i + 1:]
            minor = PolyMatrix(f, [[ent[r][c] for c in cols] for r in rows],
                               ncols=n - 1)
            cof = poly_det(minor)
            if (i + j) % 2:
                cof = tuple(f.neg(x) for x in cof)
            out[i][j] = cof
    return PolyMatrix(f, out, ncols=n)


def kernel_clearing_matrix(t: PolyMatrix) -> PolyMatrix:
    """Z with ker Z = column span of t, entries of degree <= (#cols)*deg(t).

    t's columns must be F_q(X)-independent.  Built from a full-rank row
    block via the adjugate (Cramer), then column-unpermuted; verified by
    Z @ t = 0 plus rank and degree checks before returning.
    """
    f = t.field
    b, d = t.nrows, t.ncols
    if fqx_rank(t) != d:
        raise ValueError("columns are not F_q(X)-independent")
    if d == 0:
        return PolyMatrix.identity(f, b)
    if d == b:
        return PolyMatrix.zeros(f, 0, b)
    selected: List[int] = []
    for r in range(b):
        cand = selected + [r]
        sub = PolyMatrix(f, [t.entries[i] for i in cand], ncols=d)
        if fqx_rank(sub) == len(cand):
            selected.append(r)
        if len(selected) == d:
            break
    rest = [r for r in range(b) if r not in selected]
    t1 = PolyMatrix(f, [t.entries[i] for i in selected], ncols=d)
    t2 = PolyMatrix(f, [t.entries[i] for i in rest], ncols=d)
    det1 = poly_det(t1)
    adj = poly_adjugate(t1)
    left = t2.matmul(adj)
    z_rows = [[() for _ in range(b)] for _ in range(b - d)]
    for ri in range(b - d):
        for pos, orig in enumerate(selected):
            z_rows[ri][orig] = tuple(f.neg(x) for x in left.entries[ri][pos])
        z_rows[ri][rest[ri]] = det1
    z = PolyMatrix(f, z_rows, ncols=b)
    if not z.matmul(t).is_zero():
        raise InvariantViolation("clearing matrix does not annihilate its span",
                                 {"t": t.entries, "z": z.entries})
    if fqx_rank(z) != b - d:
        raise InvariantViolation("clearing matrix rank is wrong", {"z": z.entries})
    bound = d * max(t.max_degree(), 0)
    if z.max_degree() > bound:
        raise InvariantViolation(f"clearing degree {z.max_degree()} exceeds bound {bound}",
                                 {"z": z.entries})
    return z


# ---------------------------------------------------------------------------
# spaces of polynomial tuples


class PolySpace:
    """An F_q-linear space of b-tuples of polynomials of degree < k, on the
    k*b-dimensional coefficient space (RREF basis)."""

    __slots__ = ("field", "k", "b", "basis", "_span_dim")

    def __init__(self, field: FieldSpec, k: int, b: int, rref_rows: Sequence[Sequence[int]]):
        self.field = field
        self.k = k
        self.b = b
        self.basis = MatrixFq(field, rref_rows, ncols=k * b)
        self._span_dim: Optional[int] = None

    @classmethod
    def full(cls, field: FieldSpec, k: int, b: int) -> "PolySpace":
        ident = [[1 if i == j else 0 for j in range(k * b)] for i in range(k * b)]
        return cls(field, k, b, ident)

    @classmethod
    def from_coeff_rows(cls, field: FieldSpec, k: int, b: int,
                        rows: Sequence[Sequence[int]]) -> "PolySpace":
        if not rows:
            return cls(field, k, b, [])
        arr = np.array([list(r) for r in rows], dtype=np.int64)
        red, rank, _ = rref_ndarray(arr, field)
        return cls(field, k, b, red[:rank].tolist())

    @property
    def dim(self) -> int:
        return self.basis.nrows

    def tuples(self) -> List[Tuple[Poly, ...]]:
        """Basis rows as b-tuples of polynomials."""
        out = []
        for row in self.basis.entries:
            out.append(tuple(pnorm(row[j * self.k:(j + 1) * self.k])
                             for j in range(self.b)))
        return out

    def tuple_matrix(self) -> PolyMatrix:
        return PolyMatrix(self.field, [list(t) for t in self.tuples()], ncols=self.b)

    def span_dim_fqx(self) -> int:
        """dim over F_q(X) of the span of the tuples."""
        if self._span_dim is None:
            self._span_dim = fqx_rank(self.tuple_matrix()) if self.dim else 0
        return self._span_dim

    def __repr__(self):
        return f"PolySpace(dim={self.dim}, k={self.k}, b={self.b}, {self.field})"


def eval_map(s: PolySpace, alpha: int) -> Subspace:
    """Image of s under coordinate-wise evaluation at alpha, as a subspace.

    The evaluated dimension never exceeds the F_q(X)-span dimension; that
    bound is asserted on every call.
    """
    f = s.field
    vecs = [[peval(t[j], alpha, f) for j in range(s.b)] for t in s.tuples()]
    img = Subspace.from_vectors(f, s.b, vecs)
    d = s.span_dim_fqx()
    if img.dim > d:
        raise InvariantViolation(
            f"evaluated dimension {img.dim} exceeds span dimension {d}",
            {"alpha": alpha, "basis": s.basis.entries})
    return img


@dataclass(frozen=True)
class PolyProfile:
    """A length-n sequence of F_q(X)-linear maps applied tuple-wise."""

    field: FieldSpec
    b: int
    maps: Tuple[PolyMatrix, ...]

    def __post_init__(self):
        for psi in self.maps:
            if psi.ncols != self.b or psi.field != self.field:
                raise ValueError("map width or field mismatch")

    @property
    def n(self) -> int:
        return len(self.maps)


def lcl_to_poly_profile(profile: Profile) -> PolyProfile:
    """Constant maps whose kernels are the profile's constraint spaces.

    Evaluation commutes with these maps, so a tuple of code polynomials
    satisfies the converted profile exactly when the evaluated rows satisfy
    the original one.
    """
    maps = tuple(PolyMatrix.from_constant(complement_map(s)) for s in profile.spaces)
    return PolyProfile(profile.field, profile.b, maps)


def _restrict(space: PolySpace, constraint_rows: Sequence[Sequence[int]]) -> PolySpace:
    """Subspace of `space` on which the given coefficient functionals vanish."""
    if not constraint_rows or space.dim == 0:
        return space
    f = space.field
    cons = np.array([list(r) for r in constraint_rows], dtype=np.int64)
    sbt = space.basis.to_ndarray().T
    if f.m == 1:
        a = (cons @ sbt) % f.p
    else:
        a = np.zeros((cons.shape[0], sbt.shape[1]), dtype=np.int64)
        for i in range(cons.shape[0]):
            for j in range(sbt.shape[1]):
                acc = 0
                for t in range(cons.shape[1]):
                    x, y = int(cons[i, t]), int(sbt[t, j])
                    if x and y:
                        acc = f.add(acc, f.mul(x, y))
                a[i, j] = acc
    null = kernel_ndarray(a, f)
    if null.shape[0] == 0:
        return PolySpace(f, space.k, space.b, [])
    s_rows = space.basis.entries
    new_rows = []
    for crow in null.tolist():
        vec = [0] * (space.k * space.b)
        for c, row in zip(crow, s_rows):
            if c:
                for j, r in enumerate(row):
                    if r:
                        vec[j] = f.add(vec[j], f.mul(c, r))
        new_rows.append(vec)
    return PolySpace.from_coeff_rows(f, space.k, space.b, new_rows)


def constrain_step(s: PolySpace, psi: PolyMatrix, alpha: int) -> PolySpace:
    """The subspace of s on which eval_alpha(psi(tuple)) vanishes.

    Because evaluation is a ring homomorphism the condition is
    psi(alpha) @ eval_alpha(tuple) = 0, which is F_q-linear in the
    coefficients.  The dimension drop is bounded by the rank of psi on the
    span of s; violations abort.
    """
    f = s.field
    psi_a = psi.evaluate(alpha)
    alpha_pows = [1]
    for _ in range(s.k - 1):
        alpha_pows.append(f.mul(alpha_pows[-1], alpha))
    rows = []
    for prow in psi_a.entries:
        row = [0] * (s.k * s.b)
        for j in range(s.b):
            c = prow[j]
            if c:
                for e in range(s.k):
                    row[j * s.k + e] = f.mul(c, alpha_pows[e])
        rows.append(row)
    out = _restrict(s, rows)
    drop = s.dim - out.dim
    bound = fqx_rank(s.tuple_matrix().matmul(psi.transpose())) if s.dim else 0
    if drop < 0 or drop > bound:
        raise InvariantViolation(
            f"dimension drop {drop} outside [0, {bound}]",
            {"alpha": alpha, "psi": psi.entries, "dim_before": s.dim,
             "dim_after": out.dim})
    return out


# ---------------------------------------------------------------------------
# the potential function


def psi_rank_on(psi: PolyMatrix, w: PolyMatrix) -> int:
    """rank over F_q(X) of psi restricted to the row span of w."""
    if w.nrows == 0:
        return 0
    return fqx_rank(w.matmul(psi.transpose()))


def membership_rows(w: PolyMatrix, k: int) -> List[List[int]]:
    """Coefficient functionals cutting out membership in span(w) for
    b-tuples of degree < k, one functional per clearing row and degree
    slice."""
    f = w.field
    b = w.ncols
    if w.nrows >= b and fqx_rank(w) == b:
        return []
    z = kernel_clearing_matrix(w.transpose())
    rows = []
    for zrow in z.entries:
        top = max((pdeg(e) for e in zrow), default=-1) + k
        for dd in range(max(top, 0)):
            row = [0] * (k * b)
            nonzero = False
            for j in range(b):
                e = zrow[j]
                for exp in range(k):
                    coeff = e[dd - exp] if 0 <= dd - exp < len(e) else 0
                    if coeff:
                        row[j * k + exp] = coeff
                        nonzero = True
            if nonzero:
                rows.append(row)
    return rows


def space_cap_dim(s: PolySpace, w: PolyMatrix,
                  _memb_cache: Optional[List[List[int]]] = None) -> int:
    """dim over F_q of {v in s : v lies in span_{F_q(X)}(w)}."""
    memb = membership_rows(w, s.k) if _memb_cache is None else _memb_cache
    return _restrict(s, memb).dim


def gamma(psi_suffix: Sequence[PolyMatrix], w: PolyMatrix, s: PolySpace) -> int:
    """Remaining constraint capacity on w minus the w-part of s."""
    return sum(psi_rank_on(psi, w) for psi in psi_suffix) - space_cap_dim(s, w)


# ---------------------------------------------------------------------------
# the revelation process


@dataclass(frozen=True)
class StepRecord:
    index: int
    dim: int
    span_dim: int
    gamma: Dict[str, int]


@dataclass
class ProcessTrace:
    steps: List[StepRecord]
    alphas: Tuple[int, ...]
    final_space: PolySpace

    def to_jsonl(self) -> str:
        lines = []
        for st in self.steps:
            lines.append(json.dumps({"i": st.index, "dim": st.dim,
                                     "span_dim": st.span_dim, "gamma": st.gamma},
                                    sort_keys=True))
        return "\n".join(lines) + "\n"


def run_process(s0: PolySpace, profile: PolyProfile, alphas: Sequence[int],
                watch: Optional[Dict[str, PolyMatrix]] = None) -> ProcessTrace:
    """Reveal the evaluation points one by one, shrinking the space.

    Records per-step dimension, F_q(X)-span dimension, and the potential
    against every watched space; the deterministic step bounds
    0 <= gamma_{i-1} - gamma_i <= rank(psi_i on W) are checked at every
    step and violations abort with a counterexample dump.
    """
    if len(alphas) != profile.n:
        raise ValueError("need one evaluation point per profile map")
    watch = watch or {}
    memb = {label: membership_rows(w, s0.k) for label, w in watch.items()}
    ranks = {label: [psi_rank_on(psi, w) for psi in profile.maps]
             for label, w in watch.items()}
    suffix = {label: [0] * (profile.n + 1) for label in watch}
    for label in watch:
        for i in range(profile.n - 1, -1, -1):
            suffix[label][i] = suffix[label][i + 1] + ranks[label][i]

    def gammas(space: PolySpace, i: int) -> Dict[str, int]:
        return {label: suffix[label][i] - space_cap_dim(space, watch[label], memb[label])
                for label in watch}

    space = s0
    records = [StepRecord(0, space.dim, space.span_dim_fqx(), gammas(space, 0))]
    for i, (psi, alpha) in enumerate(zip(profile.maps, alphas), start=1):
        nxt = constrain_step(space, psi, int(alpha))
        rec = StepRecord(i, nxt.dim, nxt.span_dim_fqx(), gammas(nxt, i))
        prev = records[-1]
        for label in watch:
            diff = prev.gamma[label] - rec.gamma[label]
            bound = ranks[label][i - 1]
            if diff < 0 or diff > bound:
                raise InvariantViolation(
                    f"step {i}: potential change {diff} outside [0, {bound}] for "
                    f"watched space {label!r}",
                    {"step": i, "alpha": int(alpha), "gamma_before": prev.gamma[label],
                     "gamma_after": rec.gamma[label], "bound": bound})
        records.append(rec)
        space = nxt
    return ProcessTrace(records, tuple(int(a) for a in alphas), space)
