"""Independent brute-force oracles.

Everything here decides by unrestricted enumeration straight from the
definitions, sharing no decision logic with the modules it checks; tests
and `verify-lemmas` compare the two implementations.  Performance is a
non-goal.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .errors import CapExceeded
from .field import FieldSpec
from .matrix import MatrixFq
from .profile import Profile, RecoveryParams
from .subspace import Subspace
from .ensembles import Code, enumerate_codewords, rlc_from_parity


# ---------------------------------------------------------------------------
# exhaustive RLC distribution


def all_parity_matrices(field: FieldSpec, n: int, k: int,
                        budget: int = 20_000_000) -> Iterator[np.ndarray]:
    rows = n - k
    total = field.q ** (rows * n)
    if total > budget:
        raise CapExceeded(f"{total} parity matrices exceed budget {budget}")
    for flat in itertools.product(range(field.q), repeat=rows * n):
        yield np.array(flat, dtype=np.int64).reshape(rows, n)


def exhaustive_rlc_law(field: FieldSpec, n: int, k: int,
                       predicate: Callable[[Code], bool],
                       budget: int = 20_000_000) -> Fraction:
    """Exact probability of a code predicate under the kernel model, by
    enumerating every parity matrix."""
    count = 0
    total = 0
    for parity in all_parity_matrices(field, n, k, budget):
        total += 1
        if predicate(rlc_from_parity(field, parity, n, k)):
            count += 1
    return Fraction(count, total)


def exhaustive_rlc_containment_table(field: FieldSpec, n: int, k: int, b: int,
                                     budget: int = 20_000_000):
    """For every matrix A (as a b-tuple of column vectors), the exact
    containment frequency over all parity matrices.

    Membership is brute force: a column is in the code iff the parity
    matrix annihilates it.  Returns (vectors, counts, total) where
    counts[(i1..ib)] counts parity matrices whose kernel contains all of
    vectors[i1..ib]; the probability is Fraction(count, total).
    """
    q = field.q
    rows = n - k
    nv = q ** n
    total = q ** (rows * n)
    if total * nv > budget:
        raise CapExceeded(f"{total} x {nv} membership checks exceed budget {budget}")
    vectors = [tuple(v) for v in itertools.product(range(q), repeat=n)]
    if rows == 0:
        mask = np.ones((1, nv), dtype=bool)
    elif field.m == 1:
        flats = np.array(list(itertools.product(range(q), repeat=rows * n)),
                         dtype=np.int64).reshape(total, rows, n)
        vmat = np.array(vectors, dtype=np.int64).T
        prod = np.einsum("prn,nv->prv", flats, vmat) % q
        mask = ~np.any(prod, axis=1)
    else:
        mask = np.zeros((total, nv), dtype=bool)
        for pi, parity in enumerate(all_parity_matrices(field, n, k, budget)):
            pm = MatrixFq(field, parity.tolist(), ncols=n)
            for vi, v in enumerate(vectors):
                mask[pi, vi] = not any(pm.matvec(v))
    m64 = mask.astype(np.int64)
    if b == 1:
        counts = m64.sum(axis=0)
    elif b == 2:
        counts = np.einsum("pi,pj->ij", m64, m64)
    else:
        raise ValueError("containment table implemented for b <= 2")
    return vectors, counts, total


# ---------------------------------------------------------------------------
# unrestricted witness searches


def naive_clustered(x_words: Sequence[tuple], field: FieldSpec, n: int, rho,
                    budget: int = 2_000_000) -> Tuple[bool, Optional[tuple]]:
    """is_clustered by enumerating every center in F_q^n."""
    radius = Fraction(rho) * n
    if radius.denominator != 1:
        raise ValueError("rho*n must be an integer")
    radius = int(radius)
    if field.q ** n > budget:
        raise CapExceeded("center enumeration over budget")
    for z in itertools.product(range(field.q), repeat=n):
        if all(sum(1 for a, c in zip(w, z) if a != c) <= radius for w in x_words):
            return True, z
    return False, None


def naive_recovery_clustered(x_words: Sequence[tuple], field: FieldSpec, n: int,
                             rho, ell: int,
                             budget: int = 5_000_000) -> Tuple[bool, Optional[tuple]]:
    """is_recovery_clustered by enumerating every sequence of lists of size
    exactly min(ell, q) drawn from the whole alphabet."""
    radius = Fraction(rho) * n
    if radius.denominator != 1:
        raise ValueError("rho*n must be an integer")
    radius = int(radius)
    size = min(ell, field.q)
    per_coord = list(itertools.combinations(range(field.q), size))
    if len(per_coord) ** n > budget:
        raise CapExceeded("list-sequence enumeration over budget")
    for seq in itertools.product(per_coord, repeat=n):
        if all(sum(1 for i in range(n) if w[i] not in seq[i]) <= radius
               for w in x_words):
            return True, seq
    return False, None


def naive_avg_clustered(x_words: Sequence[tuple], field: FieldSpec, n: int, rho,
                        budget: int = 2_000_000) -> bool:
    if field.q ** n > budget:
        raise CapExceeded("center enumeration over budget")
    bound = Fraction(rho) * n * len(x_words)
    for z in itertools.product(range(field.q), repeat=n):
        tot = sum(sum(1 for a, c in zip(w, z) if a != c) for w in x_words)
        if tot <= bound:
            return True
    return False


def naive_avg_recovery_clustered(x_words: Sequence[tuple], field: FieldSpec, n: int,
                                 rho, ell: int, budget: int = 5_000_000) -> bool:
    size = min(ell, field.q)
    per_coord = list(itertools.combinations(range(field.q), size))
    if len(per_coord) ** n > budget:
        raise CapExceeded("list-sequence enumeration over budget")
    bound = Fraction(rho) * n * len(x_words)
    for seq in itertools.product(per_coord, repeat=n):
        tot = sum(sum(1 for i in range(n) if w[i] not in seq[i]) for w in x_words)
        if tot <= bound:
            return True
    return False


def naive_certify(code: Code, params: RecoveryParams,
                  budget: int = 2_000_000) -> bool:
    """List-recoverability by unrestricted nested-loop search."""
    words = list(enumerate_codewords(code, cap=budget))
    if len(words) <= params.L:
        return True
    for combo in itertools.combinations(words, params.L + 1):
        if params.average_weight:
            if params.ell == 1:
                hit = naive_avg_clustered(combo, code.field, code.n, params.rho)
            else:
                hit = naive_avg_recovery_clustered(combo, code.field, code.n,
                                                   params.rho, params.ell)
        elif params.ell == 1:
            hit, _ = naive_clustered(combo, code.field, code.n, params.rho)
        else:
            hit, _ = naive_recovery_clustered(combo, code.field, code.n,
                                              params.rho, params.ell)
        if hit:
            return False
    return True


def naive_contains_profile(code: Code, profile: Profile,
                           budget: int = 2_000_000) -> bool:
    """Profile containment by enumerating ordered tuples of distinct
    codewords as candidate columns."""
    words = list(enumerate_codewords(code, cap=budget))
    b = profile.b
    if math.perm(len(words), b) > budget:
        raise CapExceeded("codeword tuple enumeration over budget")
    for cols in itertools.permutations(words, b):
        ok = True
        for i in range(code.n):
            if not profile.spaces[i].contains([c[i] for c in cols]):
                ok = False
                break
        if ok:
            return True
    return False


# ---------------------------------------------------------------------------
# naive list-recovery family generator (paper-literal)


def naive_lr_family(field: FieldSpec, n: int, params: RecoveryParams,
                    budget: int = 1_000_000) -> List[Profile]:
    """The profile family built straight from the defining data: coordinate
    sets plus full equivalence relations with at most ell classes, each
    coordinate space obtained by filtering all of F_q^b for the stated
    condition and spanning the survivors."""
    b = params.b
    need = (1 - params.rho) * n

    def partitions_upto(items, limit):
        items = list(items)
        if not items:
            yield []
            return
        first, rest = items[0], items[1:]
        for part in partitions_upto(rest, limit):
            for i in range(len(part)):
                yield part[:i] + [[first] + part[i]] + part[i + 1:]
            if len(part) < limit:
                yield [[first]] + part

    relations = [tuple(tuple(sorted(blk)) for blk in p)
                 for p in partitions_upto(range(b), params.ell)]
    if params.average_weight:
        subsets = [frozenset(c) for size in range(n + 1)
                   for c in itertools.combinations(range(n), size)]
        i_tuples = [t for t in itertools.product(subsets, repeat=b)
                    if sum(len(s) for s in t) >= b * need]
    else:
        min_size = math.ceil(need)
        subsets = [frozenset(c) for size in range(min_size, n + 1)
                   for c in itertools.combinations(range(n), size)]
        i_tuples = list(itertools.product(subsets, repeat=b))
    if len(i_tuples) * len(relations) ** n > budget:
        raise CapExceeded("family recount over budget")
    all_vecs = list(itertools.product(range(field.q), repeat=b))
    seen = {}
    for i_tuple in i_tuples:
        for rel_combo in itertools.product(relations, repeat=n):
            spaces = []
            for i in range(n):
                blocks = rel_combo[i]
                keep = []
                for v in all_vecs:
                    ok = True
                    for blk in blocks:
                        for r, s in itertools.combinations(blk, 2):
                            if i in i_tuple[r] and i in i_tuple[s] and v[r] != v[s]:
                                ok = False
                                break
                        if not ok:
                            break
                    if ok:
                        keep.append(v)
                spaces.append(Subspace.from_vectors(field, b, keep))
            prof = Profile(field, b, spaces)
            key = prof.key()
            if key not in seen:
                seen[key] = prof
    return list(seen.values())


# ---------------------------------------------------------------------------
# closed forms and enumerative primitives


def balls_in_bins_expectation(n: int, q: int) -> Fraction:
    """Expected number of repeat positions when n balls land in q bins:
    n - q*(1 - (1 - 1/q)^n)."""
    return n - q * (1 - Fraction(q - 1, q) ** n)


def span_vectors(rows: Sequence[Sequence[int]], field: FieldSpec,
                 budget: int = 2_000_000) -> set:
    """The full row span as a set of tuples, by coefficient enumeration."""
    rows = [list(r) for r in rows]
    if rows and field.q ** len(rows) > budget:
        raise CapExceeded("span enumeration over budget")
    width = len(rows[0]) if rows else 0
    out = set()
    for coeffs in itertools.product(range(field.q), repeat=len(rows)):
        v = [0] * width
        for c, row in zip(coeffs, rows):
            if c:
                for j, x in enumerate(row):
                    if x:
                        v[j] = field.add(v[j], field.mul(c, x))
        out.add(tuple(v))
    return out


def rank_by_span_enumeration(m: MatrixFq, budget: int = 2_000_000) -> int:
    """Rank as log_q of the row-span cardinality."""
    size = len(span_vectors(m.entries, m.field, budget))
    rank = 0
    while m.field.q ** rank < size:
        rank += 1
    if m.field.q ** rank != size:
        raise RuntimeError("span cardinality is not a power of q; bug")
    return rank


def rs_codewords_by_polynomials(field: FieldSpec, points: Sequence[int],
                                k: int, budget: int = 2_000_000) -> set:
    """All RS codewords by direct evaluation of every coefficient tuple."""
    if field.q ** k > budget:
        raise CapExceeded("polynomial enumeration over budget")
    out = set()
    for coeffs in itertools.product(range(field.q), repeat=k):
        word = []
        for a in points:
            acc = 0
            for c in reversed(coeffs):
                acc = field.add(field.mul(acc, a), c)
            word.append(acc)
        out.add(tuple(word))
    return out
