"""Clustered predicates, certifiers, and profile containment, each checked
against the unrestricted oracles."""

import itertools
import warnings
from fractions import Fraction

import numpy as np
import pytest

from lclcodes.field import field_make
from lclcodes.matrix import MatrixFq
from lclcodes.profile import Profile, RecoveryParams, enumerate_lr_family
from lclcodes.subspace import Subspace, enumerate_subspaces, equiv_subspace
from lclcodes.ensembles import Code, RngStream, explicit_code, sample_rlc
from lclcodes.witness import (WordSet, certify_list_decodable_linear,
                              certify_list_recoverable, code_contains_profile,
                              is_avg_clustered, is_avg_recovery_clustered,
                              is_clustered, is_recovery_clustered,
                              profile_solution_space)
from lclcodes import oracles

F2 = field_make(2)
F3 = field_make(3)
F5 = field_make(5)


# ---------------------------------------------------------------------------
# clustered predicates


def test_is_clustered_examples():
    single = WordSet(F2, 3, [(1, 0, 1)])
    ok, center = is_clustered(single, Fraction(0))
    assert ok and center == (1, 0, 1)

    far = WordSet(F2, 3, [(0, 0, 0), (1, 1, 1)])
    assert is_clustered(far, Fraction(1, 3)) == (False, None)

    near = WordSet(F2, 3, [(0, 0, 0), (1, 1, 0)])
    ok, center = is_clustered(near, Fraction(1, 3))
    assert ok and center in {(1, 0, 0), (0, 1, 0)}

    with pytest.raises(ValueError):
        is_clustered(near, Fraction(1, 2))  # rho*n not integral


def test_is_recovery_clustered_examples():
    square = WordSet(F2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)])
    assert is_recovery_clustered(square, Fraction(0), 1) == (False, None)
    ok, lists = is_recovery_clustered(square, Fraction(0), 2)
    assert ok and all(len(l) <= 2 for l in lists)

    words = WordSet(F3, 3, [(0, 1, 2), (1, 1, 0), (2, 1, 1)])
    got, _ = is_recovery_clustered(words, Fraction(1, 3), 2)
    want, _ = oracles.naive_recovery_clustered(words.words, F3, 3, Fraction(1, 3), 2)
    assert got == want


def test_avg_examples():
    dup = WordSet(F2, 3, [(1, 0, 1), (1, 0, 1)])
    assert is_avg_clustered(dup, Fraction(0))[0]

    pair = WordSet(F2, 3, [(0, 0, 0), (1, 1, 1)])
    ok, center = is_avg_clustered(pair, Fraction(1, 2))
    assert ok and center == (0, 0, 0)  # plurality ties to the smaller symbol
    assert is_avg_clustered(pair, Fraction(1, 3)) == (False, None)

    square = WordSet(F2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)])
    # best size-1 lists leave 4 total escapes = rho*n*|X| at rho = 1/2
    assert is_avg_recovery_clustered(square, Fraction(1, 2), 1)[0]
    assert not is_avg_recovery_clustered(square, Fraction(1, 4), 1)[0]
    assert is_avg_recovery_clustered(square, Fraction(0), 2)[0]  # ell = q covers all


def test_clustered_matches_oracle_all_pairs_f2_cubed():
    vecs = list(itertools.product(range(2), repeat=3))
    for x, y in itertools.combinations(vecs, 2):
        ws = WordSet(F2, 3, [x, y])
        got, center = is_clustered(ws, Fraction(1, 3))
        want, _ = oracles.naive_clustered(ws.words, F2, 3, Fraction(1, 3))
        assert got == want
        if got:
            assert all(sum(1 for a, b in zip(w, center) if a != b) <= 1
                       for w in ws.words)


def test_recovery_matches_oracle_triples_f3_squared():
    vecs = list(itertools.product(range(3), repeat=2))
    rng = np.random.default_rng(0)
    picks = [tuple(rng.choice(len(vecs), size=3, replace=False)) for _ in range(25)]
    for ell in (1, 2):
        for pick in picks:
            words = [vecs[i] for i in pick]
            ws = WordSet(F3, 2, words)
            got, _ = is_recovery_clustered(ws, Fraction(1, 2), ell)
            want, _ = oracles.naive_recovery_clustered(words, F3, 2, Fraction(1, 2), ell)
            assert got == want


def test_avg_matches_oracle_sampled():
    rng = np.random.default_rng(1)
    for _ in range(30):
        words = [tuple(int(x) for x in rng.integers(0, 3, size=3))
                 for _ in range(int(rng.integers(1, 4)))]
        ws = WordSet(F3, 3, words)
        for rho in (Fraction(0), Fraction(1, 3), Fraction(2, 3)):
            assert is_avg_clustered(ws, rho)[0] == \
                oracles.naive_avg_clustered(words, F3, 3, rho)
            assert is_avg_recovery_clustered(ws, rho, 2)[0] == \
                oracles.naive_avg_recovery_clustered(words, F3, 3, rho, 2)


def test_max_clustered_implies_avg_clustered():
    rng = np.random.default_rng(2)
    for _ in range(40):
        words = [tuple(int(x) for x in rng.integers(0, 2, size=4))
                 for _ in range(int(rng.integers(1, 5)))]
        ws = WordSet(F2, 4, words)
        for rho in (Fraction(0), Fraction(1, 4), Fraction(1, 2)):
            if is_clustered(ws, rho)[0]:
                assert is_avg_clustered(ws, rho)[0]


# ---------------------------------------------------------------------------
# certification


def all_small_codes(field, n, max_dim):
    return [explicit_code(field, MatrixFq(field, list(s.basis.entries), ncols=n))
            for s in enumerate_subspaces(field, n, dims=range(max_dim + 1))]


def test_certify_trivial_codes():
    zero = explicit_code(F2, MatrixFq(F2, [], ncols=3))
    for L in (1, 2):
        ok, wit = certify_list_recoverable(zero, RecoveryParams(Fraction(1, 3), 1, L))
        assert ok and wit is None

    full = explicit_code(F2, MatrixFq.identity(F2, 2))
    ok, wit = certify_list_recoverable(full, RecoveryParams(Fraction(1, 2), 1, 2),
                                       strategy="centers")
    assert not ok and len(wit.words) == 3


def test_certify_strategies_agree_exhaustively():
    codes = all_small_codes(F2, 3, 2)
    for params in (RecoveryParams(Fraction(1, 3), 1, 1),
                   RecoveryParams(Fraction(1, 3), 1, 2),
                   RecoveryParams(Fraction(2, 3), 1, 1)):
        for code in codes:
            a, _ = certify_list_recoverable(code, params, strategy="subsets")
            b, _ = certify_list_recoverable(code, params, strategy="centers")
            c, _ = certify_list_decodable_linear(code, params.rho, params.L)
            d = oracles.naive_certify(code, params)
            assert a == b == c == d


def test_certify_linear_agrees_on_random_codes():
    for trial in range(20):
        code = sample_rlc(F5, 5, 2, RngStream(100 + trial))
        for params in (RecoveryParams(Fraction(1, 5), 1, 1),
                       RecoveryParams(Fraction(2, 5), 1, 2)):
            fast, wit = certify_list_decodable_linear(code, params.rho, params.L)
            slow, _ = certify_list_recoverable(code, params, strategy="subsets",
                                               work_cap=20_000_000)
            assert fast == slow
            if not fast:
                ok, _ = is_clustered(wit, params.rho)
                assert ok and len(set(wit.words)) == params.L + 1
                assert all(code.contains_word(w) for w in wit.words)


def test_avg_certify_matches_oracle():
    codes = all_small_codes(F2, 3, 2)
    params = RecoveryParams(Fraction(1, 3), 1, 1, average_weight=True)
    for code in codes:
        got, _ = certify_list_recoverable(code, params, strategy="subsets")
        want = oracles.naive_certify(code, params)
        assert got == want


def test_adding_codewords_never_helps():
    # monotone-decreasing: growing the code cannot repair recoverability
    rng = np.random.default_rng(7)
    params = RecoveryParams(Fraction(1, 3), 1, 1)
    for _ in range(20):
        small = sample_rlc(F2, 3, 1, RngStream(int(rng.integers(0, 10 ** 6))))
        bigger_rows = list(small.basis.entries)
        extra = tuple(int(x) for x in rng.integers(0, 2, size=3))
        bigger = explicit_code(F2, MatrixFq(F2, bigger_rows + [list(extra)], ncols=3))
        ok_small, _ = certify_list_recoverable(small, params)
        ok_big, _ = certify_list_recoverable(bigger, params)
        if not ok_small:
            assert not ok_big


# ---------------------------------------------------------------------------
# profile containment


def test_profile_containment_examples():
    full_code = explicit_code(F2, MatrixFq.identity(F2, 2))
    diag = equiv_subspace(F2, 2, [(0, 1)])
    assert not code_contains_profile(full_code, Profile(F2, 2, [diag, diag]))[0]

    frees = Profile(F2, 2, [Subspace.full(F2, 2)] * 2)
    ok, wit = code_contains_profile(full_code, frees)
    assert ok
    assert len({wit.col(0), wit.col(1)}) == 2

    # b = 1: the zero matrix always witnesses containment
    line = explicit_code(F2, MatrixFq(F2, [[1, 0]], ncols=2))
    ok, wit = code_contains_profile(line, Profile(F2, 1, [Subspace.full(F2, 1)] * 2))
    assert ok and wit.ncols == 1


def test_profile_containment_matches_brute_force():
    rng = np.random.default_rng(9)
    lattice = list(enumerate_subspaces(F5, 2))
    for trial in range(15):
        code = sample_rlc(F5, 4, 2, RngStream(200 + trial))
        spaces = [lattice[int(i)] for i in rng.integers(0, len(lattice), size=4)]
        prof = Profile(F5, 2, spaces)
        got, wit = code_contains_profile(code, prof)
        want = oracles.naive_contains_profile(code, prof)
        assert got == want
        if got:
            for i, row in enumerate(wit.entries):
                assert prof.spaces[i].contains(row)


def test_profile_containment_small_q_fallback():
    # q = 2 <= C(b,2) for b = 3 forces the exhaustive route
    rng = np.random.default_rng(10)
    lattice = list(enumerate_subspaces(F2, 3))
    for trial in range(10):
        code = sample_rlc(F2, 4, 2, RngStream(300 + trial))
        spaces = [lattice[int(i)] for i in rng.integers(0, len(lattice), size=4)]
        prof = Profile(F2, 3, spaces)
        got, _ = code_contains_profile(code, prof)
        want = oracles.naive_contains_profile(code, prof)
        assert got == want


def test_prop31_equivalence_small():
    params = RecoveryParams(Fraction(1, 3), 1, 1)
    family = list(enumerate_lr_family(F2, 3, params))
    for code in all_small_codes(F2, 3, 2):
        recoverable, _ = certify_list_recoverable(code, params)
        contains = any(code_contains_profile(code, p)[0] for p in family)
        assert (not recoverable) == contains


def test_solution_space_dimension_counts():
    code = sample_rlc(F3, 4, 2, RngStream(17))
    frees = Profile(F3, 2, [Subspace.full(F3, 2)] * 4)
    s = profile_solution_space(code, frees)
    assert s.shape[0] == code.dim * 2  # unconstrained: the whole message space
