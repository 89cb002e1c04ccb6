"""Degree function, threshold rates, and the list-recovery constructions."""

import itertools
from fractions import Fraction

import numpy as np
import pytest

from lclcodes.errors import CapExceeded
from lclcodes.field import field_make
from lclcodes.profile import (EquivRelation, Profile, RecoveryParams,
                              build_extremal_lr_profile, build_lr_profile,
                              deg, deg_argmax, enumerate_lr_family,
                              lr_threshold_closed_form, read_profile,
                              threshold_rate_V, threshold_rate_VU,
                              threshold_rate_family, write_profile)
from lclcodes.subspace import (Subspace, enumerate_subspaces, equiv_subspace,
                               intersect, is_distinct_type, span_sum)
from lclcodes.oracles import naive_lr_family
from lclcodes.experiments import sample_random_profile

F2 = field_make(2)
F3 = field_make(3)


def half_full_half_diagonal(n=12, field=F2):
    """The running example: n/2 unconstrained coordinates, n/2 forcing
    equal pairs."""
    full = Subspace.full(field, 2)
    diag = equiv_subspace(field, 2, [(0, 1)])
    return Profile.from_rle(field, 2, [(full, n // 2), (diag, n // 2)])


def test_deg_zero_space_is_zero():
    prof = half_full_half_diagonal()
    for rate in (Fraction(0), Fraction(1, 3), Fraction(1)):
        assert deg(prof, Subspace.zero(F2, 2), rate) == 0


def test_deg_example_values():
    prof = half_full_half_diagonal(n=12)
    assert deg(prof, Subspace.full(F2, 2), Fraction(1, 3)) == 2
    # the projected profile through the coordinate-difference map
    proj = Profile.from_rle(F2, 1, [(Subspace.full(F2, 1), 6),
                                    (Subspace.zero(F2, 1), 6)])
    assert deg(proj, Subspace.full(F2, 1), Fraction(1, 3)) == -2


def test_monotone_shift_in_rate():
    rng = np.random.default_rng(1)
    for _ in range(10):
        prof = sample_random_profile(F3, 3, 6, rng)
        u = sample_random_profile(F3, 3, 1, rng).spaces[0]
        r = Fraction(1, 3)
        eps = Fraction(1, 7)
        assert deg(prof, u, r + eps) - deg(prof, u, r) == eps * prof.n * u.dim


def test_threshold_rate_vu_examples():
    prof = half_full_half_diagonal(n=12)
    rate, w = threshold_rate_VU(prof, Subspace.full(F2, 2))
    assert rate == Fraction(1, 2)
    assert w == equiv_subspace(F2, 2, [(0, 1)])  # the diagonal maximizer

    # all-zero profile: sentinel threshold 1
    zeros = Profile.from_rle(F2, 2, [(Subspace.zero(F2, 2), 4)])
    line = Subspace.from_vectors(F2, 2, [(1, 0)])
    assert threshold_rate_VU(zeros, line)[0] == 1

    # unconstrained profile: threshold 0
    frees = Profile.from_rle(F2, 2, [(Subspace.full(F2, 2), 4)])
    assert threshold_rate_VU(frees, Subspace.full(F2, 2))[0] == 0
    assert threshold_rate_V(frees).rate == 0

    with pytest.raises(ValueError):
        threshold_rate_VU(frees, Subspace.zero(F2, 2))


def test_projection_consistency_of_example():
    # R_{V,full} computed directly equals the value through the
    # difference-map profile at U = F_q^1
    prof = half_full_half_diagonal(n=12)
    direct, _ = threshold_rate_VU(prof, Subspace.full(F2, 2))
    proj = Profile.from_rle(F2, 1, [(Subspace.full(F2, 1), 6),
                                    (Subspace.zero(F2, 1), 6)])
    via_proj, _ = threshold_rate_VU(proj, Subspace.full(F2, 1))
    assert direct == via_proj == Fraction(1, 2)


def test_threshold_rate_v_example_is_half():
    prof = half_full_half_diagonal(n=12)
    res = threshold_rate_V(prof)
    assert res.rate == Fraction(1, 2)


def test_submodularity_sampled():
    rng = np.random.default_rng(2)
    for _ in range(150):
        q = int(rng.choice([2, 3]))
        f = field_make(q)
        b = int(rng.integers(2, 5))
        n = int(rng.integers(1, 9))
        prof = sample_random_profile(f, b, n, rng)
        lattice = list(enumerate_subspaces(f, b))
        u = lattice[int(rng.integers(0, len(lattice)))]
        w = lattice[int(rng.integers(0, len(lattice)))]
        rate = Fraction(int(rng.integers(0, n + 1)), n)
        lhs = deg(prof, u, rate) + deg(prof, w, rate)
        rhs = deg(prof, intersect(u, w), rate) + deg(prof, span_sum(u, w), rate)
        assert lhs <= rhs


def test_rvalt_trichotomy_small():
    rng = np.random.default_rng(3)
    for _ in range(25):
        q = int(rng.choice([2, 3]))
        f = field_make(q)
        prof = sample_random_profile(f, int(rng.integers(2, 4)),
                                     int(rng.integers(2, 7)), rng)
        rv = threshold_rate_V(prof).rate
        step = Fraction(1, prof.n)
        if rv - step >= 0:
            _, arg = deg_argmax(prof, rv - step)
            assert all(not is_distinct_type(u) for u in arg)
        if rv + step <= 1:
            _, arg = deg_argmax(prof, rv + step)
            assert all(is_distinct_type(u) for u in arg)
        if 0 <= rv <= 1:
            _, arg = deg_argmax(prof, rv)
            assert {is_distinct_type(u) for u in arg} == {True, False}


# ---------------------------------------------------------------------------
# list-recovery constructions


def test_build_lr_profile_examples():
    params = RecoveryParams(Fraction(0), 1, 1)
    n = 2
    merged = EquivRelation.single_block(2)
    prof = build_lr_profile(F2, n, [range(n), range(n)], [merged, merged], params)
    diag = equiv_subspace(F2, 2, [(0, 1)])
    assert all(s == diag for s in prof.spaces)

    discrete = EquivRelation.discrete(2)
    params_l2 = RecoveryParams(Fraction(0), 2, 1)  # ell = b keeps singletons legal
    prof2 = build_lr_profile(F2, n, [range(n), range(n)], [discrete, discrete], params_l2)
    assert all(s == Subspace.full(F2, 2) for s in prof2.spaces)

    # n=2, L=1, I_1={0,1}, I_2={0}, first relation merged, second discrete
    params_half = RecoveryParams(Fraction(1, 2), 1, 1)
    prof3 = build_lr_profile(F2, 2, [(0, 1), (0,)], [merged, discrete], params_half)
    assert prof3.spaces[0] == diag
    assert prof3.spaces[1] == Subspace.full(F2, 2)


def test_build_lr_profile_size_violations():
    params = RecoveryParams(Fraction(0), 1, 1)
    with pytest.raises(ValueError):
        build_lr_profile(F2, 2, [(0,), (0, 1)],
                         [EquivRelation.discrete(2)] * 2, params)
    # too many blocks touching the active set
    params2 = RecoveryParams(Fraction(0), 1, 2)
    with pytest.raises(ValueError):
        build_lr_profile(F2, 1, [(0,), (0,), (0,)],
                         [EquivRelation.discrete(3)], params2)


def test_enumerate_lr_family_dedup():
    fam = list(enumerate_lr_family(F2, 2, RecoveryParams(Fraction(0), 1, 1)))
    assert len(fam) == 1
    diag = equiv_subspace(F2, 2, [(0, 1)])
    assert all(s == diag for s in fam[0].spaces)


def test_enumerate_lr_family_rho_one_contains_unconstrained():
    fam = list(enumerate_lr_family(F2, 2, RecoveryParams(Fraction(1), 1, 1)))
    free = Profile(F2, 2, [Subspace.full(F2, 2)] * 2)
    assert any(p.key() == free.key() for p in fam)
    assert threshold_rate_V(free).rate == 0


def test_enumerate_lr_family_matches_naive_recount():
    for params in (RecoveryParams(Fraction(1, 3), 1, 1),
                   RecoveryParams(Fraction(1, 3), 2, 2)):
        fast = {p.key() for p in enumerate_lr_family(F2, 3, params)}
        naive = {p.key() for p in naive_lr_family(F2, 3, params)}
        assert fast == naive


def test_enumerate_lr_family_cap():
    with pytest.raises(CapExceeded):
        list(enumerate_lr_family(F2, 8, RecoveryParams(Fraction(1, 2), 1, 2),
                                 cap=100))


def test_extremal_profile_construction():
    params = RecoveryParams(Fraction(1, 2), 1, 3)
    prof = build_extremal_lr_profile(F2, 6, params)
    assert prof.n == 6 and prof.b == 4
    assert len(prof.rle) == 6  # one space per 2-subset of [4]
    assert all(s.dim == 3 for s in prof.spaces)

    forced = build_extremal_lr_profile(F2, 4, RecoveryParams(Fraction(0), 1, 1))
    diag = equiv_subspace(F2, 2, [(0, 1)])
    assert all(s == diag for s in forced.spaces)

    with pytest.raises(ValueError):  # s not integral
        build_extremal_lr_profile(F2, 6, RecoveryParams(Fraction(1, 4), 1, 2))
    with pytest.raises(ValueError):  # divisibility
        build_extremal_lr_profile(F2, 5, params)


def test_extremal_profile_threshold_is_closed_form():
    params = RecoveryParams(Fraction(1, 2), 1, 3)
    prof = build_extremal_lr_profile(F2, 6, params)
    assert threshold_rate_V(prof).rate == lr_threshold_closed_form(params) == Fraction(1, 3)


def test_threshold_rate_family():
    prof = half_full_half_diagonal(n=4)
    rate, idx, _ = threshold_rate_family([prof])
    assert rate == Fraction(1, 2) and idx == 0
    rate, idx, _ = threshold_rate_family([prof, prof])
    assert idx == 0  # tie keeps the first

    params = RecoveryParams(Fraction(1, 4), 1, 1)
    fam = list(enumerate_lr_family(F2, 4, params))
    rate, idx, _ = threshold_rate_family(fam)
    explicit = min(threshold_rate_V(p).rate for p in fam)
    assert rate == explicit

    with pytest.raises(ValueError):
        threshold_rate_family([])


def test_lr_family_lower_bound_direction():
    # every family profile has threshold >= the closed form
    params = RecoveryParams(Fraction(1, 3), 1, 2)
    bound = lr_threshold_closed_form(params)
    for prof in enumerate_lr_family(F2, 3, params):
        assert threshold_rate_V(prof).rate >= bound


def test_profile_io_roundtrip(tmp_path):
    prof = build_extremal_lr_profile(F2, 6, RecoveryParams(Fraction(1, 2), 1, 3))
    path = tmp_path / "profile.txt"
    write_profile(prof, path)
    back = read_profile(path)
    assert back.key() == prof.key()
    assert path.read_text().splitlines()[0] == "6 4 2"


def test_recovery_params_validation():
    with pytest.raises(ValueError):
        RecoveryParams(Fraction(3, 2), 1, 1)
    with pytest.raises(ValueError):
        RecoveryParams(Fraction(1, 2), 0, 1)
    with pytest.warns(UserWarning):
        RecoveryParams(Fraction(1, 2), 3, 2)  # ell > L is degenerate
    assert RecoveryParams(Fraction(1, 4), 1, 2).radius(16) == 4
    with pytest.raises(ValueError):
        RecoveryParams(Fraction(1, 3), 1, 1).radius(16)
