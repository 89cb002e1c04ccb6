"""Coordinate-wise linear profiles, the degree function, and exact threshold
rates, plus the list-recovery profile-family constructions.

All rates and degrees are exact `fractions.Fraction` values: the min-max
over lattice candidates is decided by exact comparison, never floats.
Profiles are stored run-length encoded per distinct constraint space, and
intersection dimensions are memoized per (space, candidate) pair, so the
degree costs O(#distinct spaces) instead of O(n).
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from .errors import CapExceeded
from .field import FieldSpec, field_make
from .matrix import factor_prime_power
from .subspace import (DEFAULT_LATTICE_CAP, Subspace, enumerate_subspaces,
                       enumerate_subspaces_of, equiv_subspace, intersect,
                       is_distinct_type)


class Profile:
    """A length-n sequence of constraint subspaces of F_q^b, one per
    coordinate."""

    __slots__ = ("field", "b", "n", "spaces", "_rle", "_cap_cache")

    def __init__(self, field: FieldSpec, b: int, spaces: Sequence[Subspace]):
        spaces = tuple(spaces)
        for s in spaces:
            if s.field != field or s.ambient != b:
                raise ValueError("constraint space has wrong field or ambient dimension")
        self.field = field
        self.b = b
        self.n = len(spaces)
        self.spaces = spaces
        self._rle = None
        self._cap_cache = {}

    @classmethod
    def from_rle(cls, field: FieldSpec, b: int,
                 pairs: Sequence[Tuple[Subspace, int]]) -> "Profile":
        spaces: List[Subspace] = []
        for s, mult in pairs:
            spaces.extend([s] * mult)
        return cls(field, b, spaces)

    @property
    def rle(self) -> List[Tuple[Subspace, int]]:
        """Distinct spaces with multiplicities, first-occurrence order."""
        if self._rle is None:
            counts: dict = {}
            order = []
            for s in self.spaces:
                if s not in counts:
                    counts[s] = 0
                    order.append(s)
                counts[s] += 1
            self._rle = [(s, counts[s]) for s in order]
        return self._rle

    def key(self) -> tuple:
        """Canonical identity of the profile sequence (for deduplication)."""
        return tuple(s.basis.entries for s in self.spaces)

    def dim_cap(self, s: Subspace, u: Subspace) -> int:
        """Memoized dim(s ∩ u)."""
        k = (s, u)
        d = self._cap_cache.get(k)
        if d is None:
            d = intersect(s, u).dim
            self._cap_cache[k] = d
        return d

    def __eq__(self, other):
        return (isinstance(other, Profile) and self.field == other.field
                and self.b == other.b and self.spaces == other.spaces)

    def __hash__(self):
        return hash((self.field, self.b, self.spaces))

    def __repr__(self):
        return f"Profile(n={self.n}, b={self.b}, {self.field})"


# ---------------------------------------------------------------------------
# degree and threshold rates


def deg(profile: Profile, u: Subspace, rate: Fraction) -> Fraction:
    """sum_i dim(V_i ∩ u) - (1 - rate) * n * dim u, exactly."""
    if u.field != profile.field or u.ambient != profile.b:
        raise ValueError("ambient space mismatch")
    total = sum(mult * profile.dim_cap(s, u) for s, mult in profile.rle)
    return Fraction(total) - (1 - Fraction(rate)) * profile.n * u.dim


@dataclass(frozen=True)
class ThresholdResult:
    rate: Fraction
    u_witness: Subspace
    w_witness: Subspace


def threshold_rate_VU(profile: Profile, u: Subspace,
                      cap: int = DEFAULT_LATTICE_CAP) -> Tuple[Fraction, Subspace]:
    """max over W strictly inside u of 1 - g/(n*(dim u - dim W)).

    Ties report the enumeration-first maximizing W.  A profile that meets u
    only in {0} yields the degenerate sentinel value 1 ("never contained
    below rate 1"); see the package docs.
    """
    if u.dim == 0:
        raise ValueError("threshold is undefined for the zero space")
    dims_u = {s: profile.dim_cap(s, u) for s, _ in profile.rle}
    best: Optional[Fraction] = None
    best_w: Optional[Subspace] = None
    for w in enumerate_subspaces_of(u, proper=True, cap=cap):
        g = sum(mult * (dims_u[s] - profile.dim_cap(s, w)) for s, mult in profile.rle)
        val = 1 - Fraction(g, profile.n * (u.dim - w.dim))
        if best is None or val > best:
            best, best_w = val, w
    return best, best_w


def threshold_rate_V(profile: Profile,
                     cap: int = DEFAULT_LATTICE_CAP) -> ThresholdResult:
    """min over distinct-type U of threshold_rate_VU, with witnesses.

    U = {0} is excluded (the per-U threshold is undefined there).  Ties
    report the enumeration-first minimizing U.
    """
    best: Optional[ThresholdResult] = None
    for u in enumerate_subspaces(profile.field, profile.b, cap=cap):
        if u.dim == 0 or not is_distinct_type(u):
            continue
        rate, w = threshold_rate_VU(profile, u, cap=cap)
        if best is None or rate < best.rate:
            best = ThresholdResult(rate, u, w)
    if best is None:
        raise ValueError("no distinct-type subspace in the lattice")
    return best


def threshold_rate_family(profiles: Iterable[Profile],
                          cap: int = DEFAULT_LATTICE_CAP
                          ) -> Tuple[Fraction, int, ThresholdResult]:
    """min of threshold_rate_V over a finite stream; ties keep the first."""
    best = None
    best_idx = -1
    for idx, profile in enumerate(profiles):
        res = threshold_rate_V(profile, cap=cap)
        if best is None or res.rate < best.rate:
            best, best_idx = res, idx
    if best is None:
        raise ValueError("empty profile family")
    return best.rate, best_idx, best


def deg_argmax(profile: Profile, rate: Fraction,
               cap: int = DEFAULT_LATTICE_CAP) -> Tuple[Fraction, List[Subspace]]:
    """Maximum of deg(profile, ·, rate) over the full subspace lattice and
    all maximizers, in enumeration order."""
    best: Optional[Fraction] = None
    arg: List[Subspace] = []
    for u in enumerate_subspaces(profile.field, profile.b, cap=cap):
        d = deg(profile, u, rate)
        if best is None or d > best:
            best, arg = d, [u]
        elif d == best:
            arg.append(u)
    return best, arg


# ---------------------------------------------------------------------------
# list-recovery parameters and profile constructions


@dataclass(frozen=True)
class RecoveryParams:
    """(rho, ell, L) list-recovery parameters; ell = 1 is list-decoding."""

    rho: Fraction
    ell: int
    L: int
    average_weight: bool = False

    def __post_init__(self):
        object.__setattr__(self, "rho", Fraction(self.rho))
        if not 0 <= self.rho <= 1:
            raise ValueError("rho must lie in [0, 1]")
        if self.ell < 1 or self.L < 1:
            raise ValueError("ell and L must be positive")
        if self.ell > self.L:
            warnings.warn(f"ell={self.ell} > L={self.L}: only degenerate codes "
                          "can be list-recoverable at these parameters")

    @property
    def b(self) -> int:
        return self.L + 1

    def radius(self, n: int) -> int:
        rn = self.rho * n
        if rn.denominator != 1:
            raise ValueError(f"rho*n = {rn} is not an integer")
        return int(rn)


def lr_threshold_closed_form(params: RecoveryParams) -> Fraction:
    """max(1 - rho*(1 + ell/L), 0)."""
    return max(1 - params.rho * (1 + Fraction(params.ell, params.L)), Fraction(0))


@dataclass(frozen=True)
class EquivRelation:
    """A partition of range(b); blocks sorted by minimum, each sorted."""

    blocks: Tuple[Tuple[int, ...], ...]

    @classmethod
    def from_blocks(cls, blocks: Sequence[Sequence[int]], b: int) -> "EquivRelation":
        norm = tuple(sorted((tuple(sorted(set(blk))) for blk in blocks if blk),
                            key=lambda t: t[0]))
        seen = [x for blk in norm for x in blk]
        if sorted(seen) != list(range(b)):
            raise ValueError(f"blocks do not partition range({b})")
        return cls(norm)

    @classmethod
    def discrete(cls, b: int) -> "EquivRelation":
        return cls(tuple((i,) for i in range(b)))

    @classmethod
    def single_block(cls, b: int) -> "EquivRelation":
        return cls((tuple(range(b)),))

    def blocks_touching(self, active: frozenset) -> int:
        return sum(1 for blk in self.blocks if active.intersection(blk))


def build_lr_profile(field: FieldSpec, n: int, i_sets: Sequence[Sequence[int]],
                     sims: Sequence[EquivRelation],
                     params: RecoveryParams) -> Profile:
    """The profile whose i-th space forces x_r = x_s whenever coordinate i
    lies in both I_r and I_s and r, s share a block of sims[i]."""
    b = params.b
    if len(i_sets) != b:
        raise ValueError(f"need {b} coordinate sets, got {len(i_sets)}")
    if len(sims) != n:
        raise ValueError(f"need {n} equivalence relations, got {len(sims)}")
    sets = [frozenset(s) for s in i_sets]
    need = (1 - params.rho) * n
    if params.average_weight:
        if sum(len(s) for s in sets) < b * need:
            raise ValueError("coordinate sets violate the average-weight size condition")
    else:
        for r, s in enumerate(sets):
            if len(s) < need:
                raise ValueError(f"coordinate set {r} has {len(s)} < {need} elements")
    spaces = []
    for i in range(n):
        active = frozenset(r for r in range(b) if i in sets[r])
        if sims[i].blocks_touching(active) > params.ell:
            raise ValueError(f"relation at coordinate {i} touches the active set "
                             f"in more than {params.ell} blocks")
        merged = [tuple(sorted(set(blk) & active)) for blk in sims[i].blocks]
        merged = [blk for blk in merged if len(blk) >= 2]
        spaces.append(equiv_subspace(field, b, merged))
    return Profile(field, b, spaces)


def _set_partitions(items: Sequence[int], max_blocks: int) -> Iterator[tuple]:
    """All partitions of items into at most max_blocks blocks."""
    items = list(items)
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest, max_blocks):
        for i in range(len(part)):
            yield part[:i] + ((first,) + part[i],) + part[i + 1:]
        if len(part) < max_blocks:
            yield ((first,),) + part


def enumerate_lr_family(field: FieldSpec, n: int, params: RecoveryParams,
                        cap: int = 1_000_000) -> Iterator[Profile]:
    """Every profile of the list-recovery family exactly once (deduplicated
    by the canonical coordinate-space sequence).  Tiny n only; refuses with
    CapExceeded when the candidate count outgrows the cap."""
    b = params.b
    need = (1 - params.rho) * n
    if params.average_weight:
        subsets = [frozenset(c) for size in range(n + 1)
                   for c in itertools.combinations(range(n), size)]
        if len(subsets) ** b > cap:
            raise CapExceeded(f"{len(subsets) ** b} coordinate-set tuples exceed cap {cap}")
        tuples = (t for t in itertools.product(subsets, repeat=b)
                  if sum(len(s) for s in t) >= b * need)
    else:
        min_size = math.ceil(need)
        subsets = [frozenset(c) for size in range(min_size, n + 1)
                   for c in itertools.combinations(range(n), size)]
        if len(subsets) ** b > cap:
            raise CapExceeded(f"{len(subsets) ** b} coordinate-set tuples exceed cap {cap}")
        tuples = itertools.product(subsets, repeat=b)

    part_cache: dict = {}
    space_cache: dict = {}
    seen = set()
    candidates = 0
    for i_tuple in tuples:
        actives = [frozenset(r for r in range(b) if i in i_tuple[r]) for i in range(n)]
        options = []
        for act in actives:
            key = tuple(sorted(act))
            if key not in part_cache:
                part_cache[key] = [tuple(sorted((tuple(sorted(blk)) for blk in p),
                                                key=lambda t: t[0] if t else -1))
                                   for p in _set_partitions(sorted(act), params.ell)]
            options.append(part_cache[key])
        for combo in itertools.product(*options):
            candidates += 1
            if candidates > cap:
                raise CapExceeded(f"profile family candidates exceed cap {cap}")
            spaces = []
            for blocks in combo:
                merged = tuple(blk for blk in blocks if len(blk) >= 2)
                sp = space_cache.get(merged)
                if sp is None:
                    sp = equiv_subspace(field, b, merged)
                    space_cache[merged] = sp
                spaces.append(sp)
            profile = Profile(field, b, spaces)
            k = profile.key()
            if k not in seen:
                seen.add(k)
                yield profile


def build_extremal_lr_profile(field: FieldSpec, n: int,
                              params: RecoveryParams) -> Profile:
    """The tight construction: coordinates cycle over all s-subsets of the
    b tuple positions, forcing equality inside the subset, where
    s = (1 - rho)(L + 1) - ell + 1 and C(L+1, s) divides n."""
    b = params.b
    s_frac = (1 - params.rho) * b - params.ell + 1
    if s_frac.denominator != 1 or s_frac <= 0:
        raise ValueError(f"(1-rho)(L+1) - ell + 1 = {s_frac} is not a positive integer")
    s = int(s_frac)
    t = math.comb(b, s)
    if n % t:
        raise ValueError(f"n = {n} is not divisible by C({b},{s}) = {t}")
    pairs = []
    for z in itertools.combinations(range(b), s):
        pairs.append((equiv_subspace(field, b, [z]), n // t))
    return Profile.from_rle(field, b, pairs)


# ---------------------------------------------------------------------------
# profile text format: header "n b q", then per distinct space
# "mult dim" followed by dim basis rows of b element codes.


def write_profile(profile: Profile, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{profile.n} {profile.b} {profile.field.q}\n")
        for s, mult in profile.rle:
            fh.write(f"{mult} {s.dim}\n")
            for row in s.basis.entries:
                fh.write(" ".join(str(x) for x in row) + "\n")


def read_profile(path, field: Optional[FieldSpec] = None) -> Profile:
    with open(path, encoding="ascii") as fh:
        n, b, q = (int(t) for t in fh.readline().split())
        if field is None:
            p, m = factor_prime_power(q)
            field = field_make(p, m)
        elif field.q != q:
            raise ValueError(f"file is over F_{q}, expected F_{field.q}")
        pairs = []
        remaining = n
        while remaining > 0:
            mult, dim = (int(t) for t in fh.readline().split())
            rows = [[int(t) for t in fh.readline().split()] for _ in range(dim)]
            pairs.append((Subspace.from_vectors(field, b, rows), mult))
            remaining -= mult
        if remaining != 0:
            raise ValueError("multiplicities do not sum to n")
    return Profile.from_rle(field, b, pairs)
