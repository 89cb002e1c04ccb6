"""Samplers for the random code models: kernel-model and uniform-subspace
random linear codes, random Reed-Solomon codes with and without repeated
evaluation points, and the coupled RS pair.

All randomness flows through RngStream, a splittable deterministic wrapper
around numpy's SeedSequence: the same (seed, key) always produces the same
draws on a given numpy release, which is what the reproducibility contract
of the experiment harness relies on.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field as dc_field
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .errors import CapExceeded
from .field import FieldSpec
from .matrix import MatrixFq, kernel_ndarray, rank_ndarray, rref_ndarray, write_matrix_text


@dataclass(frozen=True)
class RngStream:
    """A named, splittable random stream: (seed, key) fully determines it."""

    seed: int
    key: Tuple[int, ...] = ()

    def generator(self) -> np.random.Generator:
        return np.random.default_rng(np.random.SeedSequence(self.seed, spawn_key=self.key))

    def child(self, index: int) -> "RngStream":
        return RngStream(self.seed, self.key + (index,))

    def describe(self) -> dict:
        return {"seed": self.seed, "key": list(self.key)}


class Code:
    """A linear code given by a generator matrix plus ensemble provenance.

    The generator is stored exactly as constructed (an RS evaluation matrix
    may be rank-deficient when points repeat); ``dim`` and ``basis`` report
    the actual row space.
    """

    def __init__(self, field: FieldSpec, n: int, generator: MatrixFq, provenance: dict):
        if generator.ncols != n or generator.field != field:
            raise ValueError("generator shape or field mismatch")
        self.field = field
        self.n = n
        self.generator = generator
        self.provenance = provenance
        self._basis_nd: Optional[np.ndarray] = None

    @property
    def basis_ndarray(self) -> np.ndarray:
        """RREF basis rows of the row space, shape (dim, n)."""
        if self._basis_nd is None:
            red, rank, _ = rref_ndarray(self.generator.to_ndarray(), self.field)
            self._basis_nd = red[:rank]
        return self._basis_nd

    @property
    def dim(self) -> int:
        return self.basis_ndarray.shape[0]

    @property
    def basis(self) -> MatrixFq:
        return MatrixFq(self.field, self.basis_ndarray.tolist(), ncols=self.n)

    def contains_word(self, word: Sequence[int]) -> bool:
        stacked = np.vstack([self.basis_ndarray, np.array([list(word)], dtype=np.int64)])
        return rank_ndarray(stacked, self.field) == self.dim

    def __repr__(self):
        model = self.provenance.get("model", "explicit")
        return f"Code({model}, n={self.n}, dim={self.dim}, {self.field})"


def explicit_code(field: FieldSpec, generator: MatrixFq) -> Code:
    return Code(field, generator.ncols, generator, {"model": "explicit"})


# ---------------------------------------------------------------------------
# samplers


def sample_rlc(field: FieldSpec, n: int, k: int, rng: RngStream) -> Code:
    """Kernel of a uniform (n-k) x n parity matrix; dimension may exceed k."""
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    gen = rng.generator()
    parity = gen.integers(0, field.q, size=(n - k, n)).astype(np.int64)
    basis = kernel_ndarray(parity, field)
    return Code(field, n, MatrixFq(field, basis.tolist(), ncols=n),
                {"model": "rlc-parity", "parity": parity.tolist(),
                 "requested_dim": k, "rng": rng.describe()})


def rlc_from_parity(field: FieldSpec, parity: np.ndarray, n: int,
                    requested_dim: int, provenance: Optional[dict] = None) -> Code:
    """Build the kernel code of an explicit parity matrix (nested sampling
    reuses prefixes of one master parity draw)."""
    basis = kernel_ndarray(parity, field)
    prov = {"model": "rlc-parity", "parity": parity.tolist(),
            "requested_dim": requested_dim}
    if provenance:
        prov.update(provenance)
    return Code(field, n, MatrixFq(field, basis.tolist(), ncols=n), prov)


def sample_rlc_uniform(field: FieldSpec, n: int, k: int, rng: RngStream,
                       max_tries: int = 1000) -> Code:
    """Uniform dimension-k subspace, by rejection to a full-rank parity."""
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    gen = rng.generator()
    for _ in range(max_tries):
        parity = gen.integers(0, field.q, size=(n - k, n)).astype(np.int64)
        if rank_ndarray(parity, field) == n - k:
            basis = kernel_ndarray(parity, field)
            return Code(field, n, MatrixFq(field, basis.tolist(), ncols=n),
                        {"model": "rlc-uniform", "parity": parity.tolist(),
                         "requested_dim": k, "rng": rng.describe()})
    raise RuntimeError("rejection sampling failed to find a full-rank parity; "
                       "this indicates a bug")


def rs_generator(field: FieldSpec, points: Sequence[int], k: int) -> MatrixFq:
    """The k x n evaluation matrix with rows (alpha_j^i), i = 0..k-1."""
    rows = []
    powers = [1] * len(points)
    for i in range(k):
        rows.append(list(powers))
        powers = [field.mul(p, a) for p, a in zip(powers, points)]
    return MatrixFq(field, rows, ncols=len(points))


def sample_rs(field: FieldSpec, n: int, k: int, rng: RngStream,
              with_repetition: bool = True) -> Code:
    """Random RS code: evaluation points i.i.d. uniform, or a uniform
    repetition-free sequence (requires n <= q)."""
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    gen = rng.generator()
    if with_repetition:
        points = [int(a) for a in gen.integers(0, field.q, size=n)]
    else:
        if n > field.q:
            raise ValueError(f"repetition-free model needs n <= q, got n={n}, q={field.q}")
        points = [int(a) for a in gen.permutation(field.q)[:n]]
    return Code(field, n, rs_generator(field, points, k),
                {"model": "rs", "points": points, "with_repetition": with_repetition,
                 "requested_dim": k, "rng": rng.describe()})


def coupled_rs_pair(field: FieldSpec, n: int, k: int,
                    rng: RngStream) -> Tuple[Code, Code, List[int]]:
    """Jointly sample an i.i.d.-points RS code and a repetition-free one.

    The second code keeps the first-occurrence points and redraws the
    positions I where a repeat happened, uniformly without repetition; the
    induced codeword map (same polynomial, substituted points) moves any
    codeword in at most |I| coordinates.
    """
    if n > field.q:
        raise ValueError(f"coupling needs n <= q, got n={n}, q={field.q}")
    gen = rng.generator()
    alphas = [int(a) for a in gen.integers(0, field.q, size=n)]
    seen = set()
    repeats = []
    for i, a in enumerate(alphas):
        if a in seen:
            repeats.append(i)
        else:
            seen.add(a)
    pool = np.array(sorted(set(range(field.q)) - seen), dtype=np.int64)
    betas = list(alphas)
    if repeats:
        picks = gen.choice(pool, size=len(repeats), replace=False)
        for i, b in zip(repeats, picks):
            betas[i] = int(b)
    prov = {"requested_dim": k, "rng": rng.describe(), "repeat_positions": repeats}
    code_a = Code(field, n, rs_generator(field, alphas, k),
                  {"model": "rs", "points": alphas, "with_repetition": True, **prov})
    code_b = Code(field, n, rs_generator(field, betas, k),
                  {"model": "rs", "points": betas, "with_repetition": False, **prov})
    return code_a, code_b, repeats


# ---------------------------------------------------------------------------
# codeword enumeration


def enumerate_codewords(code: Code, cap: int = 1_000_000) -> Iterator[tuple]:
    """All q^dim codewords in message-lexicographic order over the basis."""
    d = code.dim
    if code.field.q ** d > cap:
        raise CapExceeded(f"code has {code.field.q ** d} words, cap {cap}")
    f = code.field
    basis = code.basis_ndarray.tolist()
    for msg in itertools.product(range(f.q), repeat=d):
        word = [0] * code.n
        for c, row in zip(msg, basis):
            if c:
                for j, r in enumerate(row):
                    if r:
                        word[j] = f.add(word[j], f.mul(c, r))
        yield tuple(word)


def _all_codewords_table(basis: np.ndarray, field: FieldSpec) -> np.ndarray:
    """(q^d, n) uint8 array of all codewords, message-lex order; q <= 256.

    Characteristic 2 adds by XOR of the digit encodings, prime fields by a
    vectorized modular add; other fields fall back to table gathering.
    """
    _, _, mul_t, _ = field.np_tables()
    d, n = basis.shape
    q = field.q
    total = q ** d
    reps = total
    idx_base = np.arange(total)
    if field.p == 2:
        words = np.zeros((total, n), dtype=np.uint8)
        for r in range(d):
            reps //= q
            scalar_multiples = mul_t[:, basis[r].astype(np.intp)]
            digit = (idx_base // reps) % q
            words ^= scalar_multiples[digit]
        return words
    if field.m == 1:
        acc = np.zeros((total, n), dtype=np.uint16)
        for r in range(d):
            reps //= q
            scalar_multiples = mul_t[:, basis[r].astype(np.intp)].astype(np.uint16)
            digit = (idx_base // reps) % q
            acc += scalar_multiples[digit]
            acc %= q
        return acc.astype(np.uint8)
    add_t = field.np_tables()[0]
    words = np.zeros((total, n), dtype=np.uint8)
    for r in range(d):
        reps //= q
        scalar_multiples = mul_t[:, basis[r].astype(np.intp)]
        digit = (idx_base // reps) % q
        words = add_t[words, scalar_multiples[digit]]
    return words


def low_weight_codewords(code: Code, wmax: int, budget: int = 2_000_000,
                         bulk_cap: int = 1 << 22) -> List[tuple]:
    """All nonzero codewords of Hamming weight <= wmax, sorted.

    Complete: either enumerates the whole code (vectorized, when q^dim is
    small enough), or enumerates every possible zero set of size n - wmax
    and collects the shortened subcodes.  Raises CapExceeded when neither
    route fits the budget.
    """
    d = code.dim
    n = code.n
    q = code.field.q
    if d == 0:
        return []
    wmax = min(wmax, n)
    if code.field.table_backed and q ** d <= bulk_cap:
        words = _all_codewords_table(code.basis_ndarray.astype(np.uint8), code.field)
        wts = np.count_nonzero(words, axis=1)
        sel = words[(wts > 0) & (wts <= wmax)]
        return sorted(tuple(int(x) for x in row) for row in sel)
    zero_size = n - wmax
    if zero_size <= 0:
        raise CapExceeded(f"full enumeration of {q}^{d} codewords exceeds the bulk cap")
    f = code.field
    basis_nd = code.basis_ndarray
    basis_rows = basis_nd.tolist()
    found = {}
    enumerated = 0
    for zero_set in itertools.combinations(range(n), zero_size):
        sub = np.array(basis_nd[:, zero_set].T, dtype=np.int64, order="C")
        null = kernel_ndarray(sub, f)
        nd = null.shape[0]
        if nd == 0:
            continue
        enumerated += q ** nd
        if enumerated > budget:
            raise CapExceeded(f"low-weight search enumerated past budget {budget}")
        null_rows = null.tolist()
        for coeffs in itertools.product(range(q), repeat=nd):
            if not any(coeffs):
                continue
            msg = [0] * d
            for c, row in zip(coeffs, null_rows):
                if c:
                    for j, r in enumerate(row):
                        if r:
                            msg[j] = f.add(msg[j], f.mul(c, r))
            word = [0] * n
            for c, row in zip(msg, basis_rows):
                if c:
                    for j, r in enumerate(row):
                        if r:
                            word[j] = f.add(word[j], f.mul(c, r))
            wt = sum(1 for x in word if x)
            if 0 < wt <= wmax:
                found[tuple(word)] = True
    return sorted(found)


def shortened_null_basis(code: Code, support: Sequence[int]) -> np.ndarray:
    """Message-space basis of the subcode vanishing outside ``support``."""
    outside = [j for j in range(code.n) if j not in set(support)]
    if not outside:
        return np.eye(code.dim, dtype=np.int64)
    sub = np.array(code.basis_ndarray[:, outside].T, dtype=np.int64, order="C")
    return kernel_ndarray(sub, code.field)


# ---------------------------------------------------------------------------
# serialization: matrix text plus a provenance JSON sidecar


def write_code(code: Code, path) -> None:
    write_matrix_text(code.generator, path)
    sidecar = str(path) + ".provenance.json"
    with open(sidecar, "w", encoding="ascii") as fh:
        json.dump(code.provenance, fh, sort_keys=True, indent=1)
        fh.write("\n")
