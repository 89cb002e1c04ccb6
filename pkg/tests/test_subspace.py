"""Subspace lattice: operations, enumeration counts, distinct types."""

import itertools
import math

import numpy as np
import pytest

from lclcodes.errors import CapExceeded
from lclcodes.field import field_make
from lclcodes.subspace import (Subspace, complement_map, count_subspaces,
                               enumerate_subspaces, enumerate_subspaces_of,
                               equiv_subspace, gaussian_binomial, intersect,
                               is_distinct_type, span_sum)

F2 = field_make(2)
F3 = field_make(3)
F4 = field_make(2, 2)
F5 = field_make(5)


def random_subspace(field, ambient, rng, max_dim=None):
    d = int(rng.integers(0, (max_dim or ambient) + 1))
    vecs = rng.integers(0, field.q, size=(d, ambient)).tolist()
    return Subspace.from_vectors(field, ambient, vecs)


def test_enumeration_counts_match_gaussian_binomials():
    for field in (F2, F3, F4):
        for b in range(1, 5):
            total = sum(1 for _ in enumerate_subspaces(field, b))
            assert total == count_subspaces(field, b)
            for d in range(b + 1):
                got = sum(1 for s in enumerate_subspaces(field, b, dims=[d]))
                assert got == gaussian_binomial(b, d, field.q)


def test_enumeration_is_deduplicated_and_deterministic():
    first = [s.basis.entries for s in enumerate_subspaces(F3, 3)]
    second = [s.basis.entries for s in enumerate_subspaces(F3, 3)]
    assert first == second
    assert len(set(first)) == len(first)


def test_enumeration_cap():
    with pytest.raises(CapExceeded):
        list(enumerate_subspaces(F2, 4, cap=10))


def test_intersect_examples():
    u = Subspace.from_vectors(F2, 2, [(1, 0)])
    w = Subspace.from_vectors(F2, 2, [(0, 1)])
    assert intersect(u, u) == u
    assert intersect(u, w).dim == 0
    assert span_sum(u, w) == Subspace.full(F2, 2)
    assert span_sum(u, Subspace.zero(F2, 2)) == u


def test_intersect_matches_membership_filter_oracle():
    rng = np.random.default_rng(3)
    for _ in range(15):
        u = random_subspace(F3, 4, rng)
        w = random_subspace(F3, 4, rng)
        via_kernel = intersect(u, w)
        members = [v for v in u.elements() if w.contains(v)]
        oracle = Subspace.from_vectors(F3, 4, members)
        assert via_kernel == oracle
        assert (span_sum(u, w).dim == u.dim + w.dim - via_kernel.dim)


def test_lattice_laws_sampled():
    rng = np.random.default_rng(9)
    for _ in range(20):
        u = random_subspace(F2, 4, rng)
        w = random_subspace(F2, 4, rng)
        z = random_subspace(F2, 4, rng)
        assert intersect(u, w) == intersect(w, u)
        assert span_sum(u, w) == span_sum(w, u)
        assert intersect(intersect(u, w), z) == intersect(u, intersect(w, z))
        assert span_sum(span_sum(u, w), z) == span_sum(u, span_sum(w, z))
        assert intersect(u, span_sum(u, w)) == u
        # modular law with w inside u
        w_in = intersect(u, w)
        assert span_sum(w_in, intersect(u, z)) == intersect(u, span_sum(w_in, z))


def test_ambient_mismatch_rejected():
    with pytest.raises(ValueError):
        intersect(Subspace.full(F2, 2), Subspace.full(F2, 3))
    with pytest.raises(ValueError):
        span_sum(Subspace.full(F2, 2), Subspace.full(F3, 2))


def test_enumerate_subspaces_of_counts():
    one_dim = Subspace.from_vectors(F2, 3, [(1, 1, 0)])
    proper = list(enumerate_subspaces_of(one_dim, proper=True))
    assert len(proper) == 1 and proper[0].dim == 0

    full2 = Subspace.full(F2, 2)
    assert len(list(enumerate_subspaces_of(full2, proper=True))) == 4

    rng = np.random.default_rng(4)
    while True:
        u = random_subspace(F3, 4, rng)
        if u.dim == 2:
            break
    subs = list(enumerate_subspaces_of(u))
    assert len(subs) == 1 + 4 + 1  # zero + gaussian(2,1,3) lines + u itself
    assert all(u.contains_space(s) for s in subs)
    propers = list(enumerate_subspaces_of(u, proper=True))
    assert len(propers) == 5


def test_is_distinct_type_examples():
    assert is_distinct_type(Subspace.full(F2, 2))
    assert not is_distinct_type(Subspace.from_vectors(F2, 2, [(1, 1)]))
    assert not is_distinct_type(Subspace.zero(F2, 2))
    assert is_distinct_type(Subspace.zero(F2, 1))  # no pairs to separate


def test_distinct_type_single_element_characterization():
    # when q > C(b,2), distinct-type <=> some single element has pairwise
    # distinct coordinates (union of C(b,2) proper subspaces cannot cover)
    for u in enumerate_subspaces(F5, 3):
        has_elt = any(len(set(v)) == 3 for v in u.elements())
        assert is_distinct_type(u) == has_elt
    # at small q only one direction survives; check the implication
    for u in enumerate_subspaces(F2, 4):
        if any(len(set(v)) == 4 for v in u.elements()):
            assert is_distinct_type(u)
    # and the equivalence genuinely fails over F_2 at b = 4
    full = Subspace.full(F2, 4)
    assert is_distinct_type(full)
    assert not any(len(set(v)) == 4 for v in full.elements())


def test_complement_map():
    rng = np.random.default_rng(6)
    for _ in range(10):
        u = random_subspace(F3, 4, rng)
        h = complement_map(u)
        assert h.nrows == 4 - u.dim
        for v in u.elements():
            assert not any(h.matvec(v))


def test_equiv_subspace():
    e = equiv_subspace(F3, 3, [(0, 1, 2)])
    assert e.dim == 1
    assert all(v[0] == v[1] == v[2] for v in e.elements())
    partial = equiv_subspace(F3, 3, [(0, 1)])
    assert partial.dim == 2
    assert equiv_subspace(F3, 3, []) == Subspace.full(F3, 3)
