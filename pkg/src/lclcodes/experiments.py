"""Monte Carlo harness: threshold experiments, the RLC-vs-RS reduction
comparison, and the lemma verification driver.

Reproducibility contract: every trial draws from RngStream(seed).child(t),
so a (config, seed) pair determines the output byte for byte.  Rate grids
over the kernel-model RLC (and over RS codes) are sampled nested: one
master parity matrix (one point sequence) per trial, with higher rates
keeping a prefix of the parity rows (a prefix of the message space), which
couples the grid and makes per-seed satisfaction monotone in the rate.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import CapExceeded, InvariantViolation
from .field import FieldSpec, field_make
from .matrix import MatrixFq, rank as matrix_rank
from .subspace import Subspace, enumerate_subspaces
from .profile import (Profile, RecoveryParams, deg, deg_argmax,
                      enumerate_lr_family, lr_threshold_closed_form,
                      threshold_rate_V)
from .ensembles import (Code, RngStream, coupled_rs_pair, enumerate_codewords,
                        rlc_from_parity, rs_generator, sample_rlc_uniform)
from .witness import (certify_list_decodable_linear, certify_list_recoverable,
                      code_contains_profile)
from . import oracles

Z95 = 1.959963984540054


def wilson_interval(successes: int, trials: int, z: float = Z95) -> Tuple[float, float]:
    """Wilson 95% score interval for a binomial proportion."""
    if trials == 0:
        return 0.0, 1.0
    phat = successes / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = (z / denom) * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials))
    return max(0.0, center - half), min(1.0, center + half)


@dataclass(frozen=True)
class ExperimentConfig:
    ensemble: str                      # rlc | rlc-uniform | rs | rs-norep
    n: int
    p: int
    m: int = 1
    rates: Tuple[Fraction, ...] = ()
    trials: int = 100
    seed: int = 0
    lr: Optional[RecoveryParams] = None
    profile: Optional[Profile] = None
    epsilon: Fraction = Fraction(1, 100)
    budget: int = 4_000_000
    q_margin: int = 1                  # flag reductions with q < n * q_margin

    def __post_init__(self):
        if self.ensemble not in ("rlc", "rlc-uniform", "rs", "rs-norep"):
            raise ValueError(f"unknown ensemble {self.ensemble!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if (self.lr is None) == (self.profile is None):
            raise ValueError("exactly one of lr params or a profile must be given")
        rates = tuple(sorted(Fraction(r) for r in self.rates))
        object.__setattr__(self, "rates", rates)
        for r in rates:
            if (r * self.n).denominator != 1:
                raise ValueError(f"rate {r} does not give an integral dimension at n={self.n}")

    @property
    def field(self) -> FieldSpec:
        return field_make(self.p, self.m)

    def dims(self) -> List[int]:
        return [int(r * self.n) for r in self.rates]

    def describe(self) -> dict:
        d = {"ensemble": self.ensemble, "n": self.n, "p": self.p, "m": self.m,
             "rates": [str(r) for r in self.rates], "trials": self.trials,
             "seed": self.seed, "epsilon": str(self.epsilon)}
        if self.lr is not None:
            d["property"] = {"kind": "lr", "rho": str(self.lr.rho), "ell": self.lr.ell,
                             "L": self.lr.L, "average_weight": self.lr.average_weight}
        else:
            d["property"] = {"kind": "profile", "n": self.profile.n, "b": self.profile.b}
        return d


@dataclass(frozen=True)
class EstimateRow:
    rate: Fraction
    satisfied: int
    trials: int
    estimate: float
    wilson_lo: float
    wilson_hi: float
    threshold: Optional[Fraction]
    side: str


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    rows: List[EstimateRow]
    per_trial: List[List[bool]]  # per_trial[t][rate_index]


# ---------------------------------------------------------------------------
# satisfaction decision


def decide_satisfies(code: Code, cfg: ExperimentConfig) -> bool:
    """Whether the code satisfies the configured (monotone-increasing)
    property: containment of the profile, or non-list-recoverability."""
    if cfg.profile is not None:
        return code_contains_profile(code, cfg.profile, budget=cfg.budget)[0]
    lr = cfg.lr
    if lr.ell == 1 and not lr.average_weight:
        decodable, _ = certify_list_decodable_linear(code, lr.rho, lr.L,
                                                     budget=cfg.budget)
        return not decodable
    recoverable, _ = certify_list_recoverable(code, lr, strategy="subsets",
                                              word_cap=cfg.budget,
                                              work_cap=cfg.budget)
    return not recoverable


def _threshold_reference(cfg: ExperimentConfig) -> Optional[Fraction]:
    if cfg.lr is not None:
        return lr_threshold_closed_form(cfg.lr)
    try:
        return threshold_rate_V(cfg.profile).rate
    except CapExceeded:
        return None


def _side(rate: Fraction, threshold: Optional[Fraction], eps: Fraction) -> str:
    if threshold is None:
        return ""
    if rate <= threshold - eps:
        return "below"
    if rate >= threshold + eps:
        return "above"
    return "at"


# ---------------------------------------------------------------------------
# trial samplers (nested over the rate grid where the model allows)


def _trial_codes(cfg: ExperimentConfig, rng: RngStream) -> Tuple[List[Code], bool]:
    """Codes for one trial at every grid rate; second value says whether the
    grid is nested (so per-seed monotonicity is a theorem)."""
    f = cfg.field
    n = cfg.n
    dims = cfg.dims()
    gen = rng.generator()
    if cfg.ensemble == "rlc":
        master = gen.integers(0, f.q, size=(n - min(dims), n)).astype(np.int64)
        codes = [rlc_from_parity(f, master[:n - k], n, k,
                                 {"rng": rng.describe()}) for k in dims]
        return codes, True
    if cfg.ensemble == "rlc-uniform":
        codes = [sample_rlc_uniform(f, n, k, rng.child(j)) for j, k in enumerate(dims)]
        return codes, False
    with_rep = cfg.ensemble == "rs"
    if with_rep:
        points = [int(a) for a in gen.integers(0, f.q, size=n)]
    else:
        if n > f.q:
            raise ValueError("repetition-free RS needs n <= q")
        points = [int(a) for a in gen.permutation(f.q)[:n]]
    codes = []
    for k in dims:
        if k == 0:
            codes.append(Code(f, n, MatrixFq(f, [], ncols=n),
                              {"model": "rs", "points": points,
                               "with_repetition": with_rep, "requested_dim": 0,
                               "rng": rng.describe()}))
        else:
            codes.append(Code(f, n, rs_generator(f, points, k),
                              {"model": "rs", "points": points,
                               "with_repetition": with_rep, "requested_dim": k,
                               "rng": rng.describe()}))
    return codes, True


def run_threshold_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """One satisfaction estimate per grid rate, with matched-seed trials."""
    threshold = _threshold_reference(cfg)
    counts = [0] * len(cfg.rates)
    per_trial: List[List[bool]] = []
    for t in range(cfg.trials):
        codes, nested = _trial_codes(cfg, RngStream(cfg.seed).child(t))
        sats = [decide_satisfies(code, cfg) for code in codes]
        if nested:
            for a, b in zip(sats, sats[1:]):
                if a and not b:
                    raise InvariantViolation(
                        "per-seed satisfaction must be monotone under nested sampling",
                        {"trial": t, "satisfaction": sats})
        per_trial.append(sats)
        for j, s in enumerate(sats):
            if s:
                counts[j] += 1
    rows = []
    for j, rate in enumerate(cfg.rates):
        lo, hi = wilson_interval(counts[j], cfg.trials)
        rows.append(EstimateRow(rate, counts[j], cfg.trials, counts[j] / cfg.trials,
                                lo, hi, threshold, _side(rate, threshold, cfg.epsilon)))
    return ExperimentResult(cfg, rows, per_trial)


@dataclass(frozen=True)
class ReductionRow:
    rate: Fraction
    rlc_satisfied: int
    rs_satisfied: int
    trials: int
    rlc_estimate: float
    rs_estimate: float
    gap: float
    flag: str


@dataclass
class ReductionResult:
    config: ExperimentConfig
    rows: List[ReductionRow]


def run_reduction_experiment(cfg: ExperimentConfig) -> ReductionResult:
    """Side-by-side satisfaction of the kernel-model RLC and the random RS
    code at equal rates, with the per-rate gap."""
    flag = "small_q" if cfg.field.q < cfg.n * cfg.q_margin else ""
    rlc_counts = [0] * len(cfg.rates)
    rs_counts = [0] * len(cfg.rates)
    for t in range(cfg.trials):
        base = RngStream(cfg.seed).child(t)
        rlc_cfg = _with_ensemble(cfg, "rlc")
        rs_cfg = _with_ensemble(cfg, "rs")
        rlc_codes, _ = _trial_codes(rlc_cfg, base.child(0))
        rs_codes, _ = _trial_codes(rs_cfg, base.child(1))
        for j in range(len(cfg.rates)):
            if decide_satisfies(rlc_codes[j], cfg):
                rlc_counts[j] += 1
            if decide_satisfies(rs_codes[j], cfg):
                rs_counts[j] += 1
    rows = []
    for j, rate in enumerate(cfg.rates):
        rlc_est = rlc_counts[j] / cfg.trials
        rs_est = rs_counts[j] / cfg.trials
        rows.append(ReductionRow(rate, rlc_counts[j], rs_counts[j], cfg.trials,
                                 rlc_est, rs_est, rs_est - rlc_est, flag))
    return ReductionResult(cfg, rows)


def _with_ensemble(cfg: ExperimentConfig, ensemble: str) -> ExperimentConfig:
    return ExperimentConfig(ensemble=ensemble, n=cfg.n, p=cfg.p, m=cfg.m,
                            rates=cfg.rates, trials=cfg.trials, seed=cfg.seed,
                            lr=cfg.lr, profile=cfg.profile, epsilon=cfg.epsilon,
                            budget=cfg.budget, q_margin=cfg.q_margin)


# ---------------------------------------------------------------------------
# output formats (schema fixed; numbers are exact fractions or 6-digit floats)

CSV_HEADER = "rate,satisfied,trials,estimate,wilson_lo,wilson_hi,threshold,side"
REDUCTION_CSV_HEADER = ("rate,rlc_satisfied,rs_satisfied,trials,"
                        "rlc_estimate,rs_estimate,gap,flag")


def rows_to_csv(result: ExperimentResult) -> str:
    lines = [CSV_HEADER]
    for r in result.rows:
        thr = str(r.threshold) if r.threshold is not None else ""
        lines.append(f"{r.rate},{r.satisfied},{r.trials},{r.estimate:.6f},"
                     f"{r.wilson_lo:.6f},{r.wilson_hi:.6f},{thr},{r.side}")
    return "\n".join(lines) + "\n"


def reduction_to_csv(result: ReductionResult) -> str:
    lines = [REDUCTION_CSV_HEADER]
    for r in result.rows:
        lines.append(f"{r.rate},{r.rlc_satisfied},{r.rs_satisfied},{r.trials},"
                     f"{r.rlc_estimate:.6f},{r.rs_estimate:.6f},{r.gap:+.6f},{r.flag}")
    return "\n".join(lines) + "\n"


def result_to_json(result) -> str:
    if isinstance(result, ExperimentResult):
        rows = [{"rate": str(r.rate), "satisfied": r.satisfied, "trials": r.trials,
                 "estimate": f"{r.estimate:.6f}", "wilson_lo": f"{r.wilson_lo:.6f}",
                 "wilson_hi": f"{r.wilson_hi:.6f}",
                 "threshold": str(r.threshold) if r.threshold is not None else None,
                 "side": r.side} for r in result.rows]
    else:
        rows = [{"rate": str(r.rate), "rlc_satisfied": r.rlc_satisfied,
                 "rs_satisfied": r.rs_satisfied, "trials": r.trials,
                 "rlc_estimate": f"{r.rlc_estimate:.6f}",
                 "rs_estimate": f"{r.rs_estimate:.6f}", "gap": f"{r.gap:+.6f}",
                 "flag": r.flag} for r in result.rows]
    return json.dumps({"config": result.config.describe(), "rows": rows},
                      sort_keys=True, indent=1) + "\n"


# ---------------------------------------------------------------------------
# lemma verification


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def sample_random_profile(field: FieldSpec, b: int, n: int,
                          rng: np.random.Generator) -> Profile:
    lattice = list(enumerate_subspaces(field, b))
    picks = rng.integers(0, len(lattice), size=n)
    return Profile(field, b, [lattice[int(i)] for i in picks])


VERIFY_SELECTORS = ("prob-in-rlc", "submodularity", "rvalt", "prop31",
                    "coupling", "evaldim", "gamma-step")


def verify_lemmas(selector: str, budget: int = 1000, seed: int = 0) -> List[CheckResult]:
    """Run one identity-check suite; failures are report content."""
    if selector == "prob-in-rlc":
        return _verify_prob_in_rlc()
    if selector == "submodularity":
        return _verify_submodularity(budget, seed)
    if selector == "rvalt":
        return _verify_rvalt(budget, seed)
    if selector == "prop31":
        return _verify_prop31()
    if selector == "coupling":
        return _verify_coupling(budget, seed)
    if selector == "evaldim":
        return _verify_evaldim(budget, seed)
    if selector == "gamma-step":
        return _verify_gamma_step(budget, seed)
    raise ValueError(f"unknown selector {selector!r}; choose from {VERIFY_SELECTORS}")


def _verify_prob_in_rlc() -> List[CheckResult]:
    out = []
    for (n, k, q) in [(2, 1, 2), (2, 1, 3), (3, 1, 2), (3, 2, 3)]:
        f = field_make(q)
        vectors, counts, total = oracles.exhaustive_rlc_containment_table(f, n, k, b=1)
        bad = 0
        for vi, v in enumerate(vectors):
            r = matrix_rank(MatrixFq(f, [list(v)], ncols=n).transpose())
            expect = Fraction(1, q ** ((n - k) * r))
            if Fraction(int(counts[vi]), total) != expect:
                bad += 1
        out.append(CheckResult(f"prob-in-rlc n={n} k={k} q={q}", bad == 0,
                               f"{len(vectors)} vectors, {bad} mismatches"))
    return out


def _verify_submodularity(budget: int, seed: int) -> List[CheckResult]:
    from .subspace import intersect, span_sum
    rng = np.random.default_rng([seed, 1])
    samples = max(budget, 1000)
    violations = 0
    for _ in range(samples):
        q = int(rng.choice([2, 3]))
        b = int(rng.integers(2, 5))
        n = int(rng.integers(1, 9))
        f = field_make(q)
        prof = sample_random_profile(f, b, n, rng)
        lattice = list(enumerate_subspaces(f, b))
        u = lattice[int(rng.integers(0, len(lattice)))]
        w = lattice[int(rng.integers(0, len(lattice)))]
        rate = Fraction(int(rng.integers(0, n + 1)), n)
        lhs = deg(prof, u, rate) + deg(prof, w, rate)
        rhs = deg(prof, intersect(u, w), rate) + deg(prof, span_sum(u, w), rate)
        if lhs > rhs:
            violations += 1
    return [CheckResult("submodularity", violations == 0,
                        f"{samples} samples, {violations} violations")]


def _verify_rvalt(budget: int, seed: int) -> List[CheckResult]:
    rng = np.random.default_rng([seed, 2])
    profiles = max(min(budget, 500), 100)
    bad = 0
    for _ in range(profiles):
        q = int(rng.choice([2, 3]))
        b = int(rng.integers(2, 4))
        n = int(rng.integers(2, 7))
        f = field_make(q)
        prof = sample_random_profile(f, b, n, rng)
        if not _rvalt_trichotomy_holds(prof):
            bad += 1
    return [CheckResult("rvalt", bad == 0, f"{profiles} profiles, {bad} failures")]


def _rvalt_trichotomy_holds(prof: Profile) -> bool:
    from .subspace import is_distinct_type
    rv = threshold_rate_V(prof).rate
    step = Fraction(1, prof.n)
    below = rv - step
    above = rv + step
    if below >= 0:
        _, arg = deg_argmax(prof, below)
        if any(is_distinct_type(u) for u in arg):
            return False
    if above <= 1:
        _, arg = deg_argmax(prof, above)
        if not all(is_distinct_type(u) for u in arg):
            return False
    if 0 <= rv <= 1:
        _, arg = deg_argmax(prof, rv)
        kinds = {is_distinct_type(u) for u in arg}
        if kinds != {True, False}:
            return False
    return True


def _verify_prop31() -> List[CheckResult]:
    from .ensembles import explicit_code
    f = field_make(2)
    n = 3
    triples = [RecoveryParams(Fraction(1, 3), 1, 1),
               RecoveryParams(Fraction(1, 3), 1, 2),
               RecoveryParams(Fraction(0), 2, 2)]
    codes = []
    for sub in enumerate_subspaces(f, n, dims=[0, 1, 2]):
        rows = list(sub.basis.entries)
        gen = MatrixFq(f, rows, ncols=n)
        codes.append(explicit_code(f, gen))
    out = []
    for params in triples:
        mism = 0
        family = list(enumerate_lr_family(f, n, params))
        for code in codes:
            recoverable, _ = certify_list_recoverable(code, params)
            contains = any(code_contains_profile(code, prof)[0] for prof in family)
            if (not recoverable) != contains:
                mism += 1
        out.append(CheckResult(
            f"prop31 rho={params.rho} ell={params.ell} L={params.L}",
            mism == 0, f"{len(codes)} codes x {len(family)} profiles, {mism} mismatches"))
    return out


def _verify_coupling(budget: int, seed: int) -> List[CheckResult]:
    f = field_make(2, 3)  # F_8
    n, k = 6, 2
    draws = max(min(budget, 20000), 2000)
    exact = oracles.balls_in_bins_expectation(n, f.q)
    total = 0
    wt_ok = True
    rng_master = RngStream(seed, (3,))
    for t in range(draws):
        code_a, code_b, repeats = coupled_rs_pair(f, n, k, rng_master.child(t))
        total += len(repeats)
        pts_a = code_a.provenance["points"]
        pts_b = code_b.provenance["points"]
        # the coupling map: same polynomial evaluated at substituted points
        for coeffs in [(1, 0), (0, 1), (1, 1)]:
            wa = [f.add(coeffs[0], f.mul(coeffs[1], a)) for a in pts_a]
            wb = [f.add(coeffs[0], f.mul(coeffs[1], b)) for b in pts_b]
            moved = sum(1 for x, y in zip(wa, wb) if x != y)
            if moved > len(repeats):
                wt_ok = False
    mean = total / draws
    # |I| <= n, so a 4-sigma band with sigma <= n/2 is a safe acceptance gate
    stderr = (n / 2) / math.sqrt(draws)
    mean_ok = abs(mean - float(exact)) <= 4 * stderr + 1e-9
    return [CheckResult("coupling wt(x - phi(x)) <= |I|", wt_ok, f"{draws} draws"),
            CheckResult("coupling E|I| matches closed form", mean_ok,
                        f"mean {mean:.4f} vs exact {float(exact):.4f}")]


def _verify_evaldim(budget: int, seed: int) -> List[CheckResult]:
    from .polyproc import PolySpace, eval_map
    rng = np.random.default_rng([seed, 4])
    cases = max(min(budget, 200), 50)
    bad = 0
    for _ in range(cases):
        q = int(rng.choice([8, 16, 64]))
        if q == 8:
            f = field_make(2, 3)
        elif q == 16:
            f = field_make(2, 4)
        else:
            f = field_make(2, 6)
        k = int(rng.integers(1, 4))
        b = int(rng.integers(1, 4))
        rows = rng.integers(0, q, size=(int(rng.integers(1, k * b + 1)), k * b))
        space = PolySpace.from_coeff_rows(f, k, b, rows.tolist())
        d = space.span_dim_fqx()
        hits = sum(1 for a in range(q) if eval_map(space, a).dim == d)
        if Fraction(hits, q) < 1 - Fraction(d * k, q):
            bad += 1
    return [CheckResult("evaldim", bad == 0,
                        f"{cases} spaces swept over all evaluation points, {bad} below bound")]


def _verify_gamma_step(budget: int, seed: int) -> List[CheckResult]:
    from .polyproc import PolyMatrix, PolySpace, lcl_to_poly_profile, run_process
    rng = np.random.default_rng([seed, 5])
    traces = max(min(budget, 200), 100)
    degrees = {8: 3, 16: 4, 64: 6}
    for _ in range(traces):
        q = int(rng.choice([8, 16, 64]))
        f = field_make(2, degrees[q])
        b = int(rng.integers(1, 4))
        n = int(rng.integers(1, 17))
        k = int(rng.integers(1, 5))
        prof = sample_random_profile(f, b, n, rng)
        psi = lcl_to_poly_profile(prof)
        alphas = [int(a) for a in rng.integers(0, q, size=n)]
        watch = {"full": PolyMatrix.identity(f, b)}
        run_process(PolySpace.full(f, k, b), psi, alphas, watch)
    return [CheckResult("gamma-step", True,
                        f"{traces} traces, all deterministic bounds held")]
