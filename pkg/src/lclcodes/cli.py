"""Command-line interface.

Subcommands: threshold, simulate-rlc, simulate-rs, reduce-compare,
certify-code, verify-lemmas.  Exit codes: 0 success, 2 an exact enumeration
refused (cap exceeded), 3 a theorem-backed invariant failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional

from .errors import CapExceeded, InvariantViolation
from .field import field_make
from .matrix import factor_prime_power, read_matrix_text
from .profile import (RecoveryParams, lr_threshold_closed_form, read_profile,
                      threshold_rate_V)
from .ensembles import explicit_code
from .witness import (certify_list_decodable_linear, certify_list_recoverable,
                      clustered_predicate, WordSet)
from .experiments import (ExperimentConfig, VERIFY_SELECTORS, reduction_to_csv,
                          result_to_json, rows_to_csv, run_reduction_experiment,
                          run_threshold_experiment, verify_lemmas)


def _fraction(text: str) -> Fraction:
    return Fraction(text)


def _rates(text: str) -> List[Fraction]:
    return [Fraction(tok) for tok in text.split(",") if tok]


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--trials", type=int, default=100)
    sub.add_argument("--out", default=None, help="output path (default: stdout)")
    sub.add_argument("--format", choices=("csv", "json"), default="csv")


def _add_lr(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--rho", type=_fraction, required=True)
    sub.add_argument("--ell", type=int, default=1)
    sub.add_argument("--L", type=int, required=True)
    sub.add_argument("--avg", action="store_true",
                     help="average-weight variant of the property")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lclcodes",
        description="Exact workbench for coordinate-wise-linear code properties")
    subs = parser.add_subparsers(dest="command", required=True)

    th = subs.add_parser("threshold",
                         help="exact threshold rate of a profile or LR parameters")
    th.add_argument("--profile", help="profile file")
    th.add_argument("--rho", type=_fraction)
    th.add_argument("--ell", type=int, default=1)
    th.add_argument("--L", type=int)
    th.add_argument("--n", type=int, help="length for the extremal LR construction")
    th.add_argument("--q", type=int, help="field order for the LR construction")

    for name, ensemble in (("simulate-rlc", "rlc"), ("simulate-rs", "rs")):
        sim = subs.add_parser(name, help=f"threshold experiment over the {ensemble} ensemble")
        sim.add_argument("--n", type=int, required=True)
        sim.add_argument("--q", type=int, required=True)
        sim.add_argument("--rates", type=_rates, required=True,
                         help="comma-separated exact rates, e.g. 1/4,1/2")
        _add_lr(sim)
        _add_common(sim)
        if ensemble == "rlc":
            sim.add_argument("--uniform-model", action="store_true",
                             help="uniform-subspace model instead of the kernel model")
        else:
            sim.add_argument("--no-repetition", action="store_true",
                             help="repetition-free evaluation points")

    red = subs.add_parser("reduce-compare",
                          help="RLC vs random RS satisfaction at equal rates")
    red.add_argument("--n", type=int, required=True)
    red.add_argument("--q", type=int, required=True)
    red.add_argument("--rates", type=_rates, required=True)
    _add_lr(red)
    _add_common(red)

    cert = subs.add_parser("certify-code",
                           help="brute-force list-recoverability certificate")
    cert.add_argument("--generator", required=True, help="matrix text file")
    _add_lr(cert)
    cert.add_argument("--strategy", choices=("subsets", "centers", "linear"),
                      default="subsets")
    cert.add_argument("--budget", type=int, default=2_000_000)

    ver = subs.add_parser("verify-lemmas", help="run an identity-check suite")
    ver.add_argument("--selector", choices=VERIFY_SELECTORS + ("all",), default="all")
    ver.add_argument("--budget", type=int, default=1000)
    ver.add_argument("--seed", type=int, default=0)
    return parser


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_threshold(args) -> int:
    if args.profile:
        prof = read_profile(args.profile)
        res = threshold_rate_V(prof)
        print(f"threshold {res.rate}")
        print(f"witness U: dim {res.u_witness.dim}, basis {list(res.u_witness.basis.entries)}")
        print(f"witness W: dim {res.w_witness.dim}, basis {list(res.w_witness.basis.entries)}")
        return 0
    if args.rho is None or args.L is None:
        print("threshold needs --profile or --rho/--L", file=sys.stderr)
        return 1
    params = RecoveryParams(args.rho, args.ell, args.L)
    closed = lr_threshold_closed_form(params)
    print(f"closed-form threshold {closed}")
    if args.n and args.q:
        from .profile import build_extremal_lr_profile
        p, m = factor_prime_power(args.q)
        prof = build_extremal_lr_profile(field_make(p, m), args.n, params)
        res = threshold_rate_V(prof)
        print(f"extremal-profile threshold {res.rate}")
    return 0


def _experiment_config(args, ensemble: str) -> ExperimentConfig:
    p, m = factor_prime_power(args.q)
    return ExperimentConfig(
        ensemble=ensemble, n=args.n, p=p, m=m, rates=tuple(args.rates),
        trials=args.trials, seed=args.seed,
        lr=RecoveryParams(args.rho, args.ell, args.L, average_weight=args.avg))


def _cmd_simulate(args, ensemble: str) -> int:
    if ensemble == "rlc" and getattr(args, "uniform_model", False):
        ensemble = "rlc-uniform"
    if ensemble == "rs" and getattr(args, "no_repetition", False):
        ensemble = "rs-norep"
    result = run_threshold_experiment(_experiment_config(args, ensemble))
    text = rows_to_csv(result) if args.format == "csv" else result_to_json(result)
    _emit(text, args.out)
    return 0


def _cmd_reduce(args) -> int:
    result = run_reduction_experiment(_experiment_config(args, "rlc"))
    text = reduction_to_csv(result) if args.format == "csv" else result_to_json(result)
    _emit(text, args.out)
    return 0


def _cmd_certify(args) -> int:
    gen = read_matrix_text(args.generator)
    code = explicit_code(gen.field, gen)
    params = RecoveryParams(args.rho, args.ell, args.L, average_weight=args.avg)
    if args.strategy == "linear":
        if params.ell != 1 or params.average_weight:
            print("the linear strategy certifies plain list-decoding only",
                  file=sys.stderr)
            return 1
        verdict, witness = certify_list_decodable_linear(code, params.rho, params.L,
                                                         budget=args.budget)
    else:
        verdict, witness = certify_list_recoverable(code, params,
                                                    strategy=args.strategy,
                                                    work_cap=args.budget)
    payload = {"list_recoverable": verdict,
               "rho": str(params.rho), "ell": params.ell, "L": params.L,
               "average_weight": params.average_weight}
    if witness is not None:
        detail = {"words": [list(w) for w in witness.words]}
        ok, cert = clustered_predicate(params)(witness)
        if ok and cert is not None:
            key = "center" if params.ell == 1 else "lists"
            detail[key] = [list(c) if isinstance(c, tuple) else c for c in cert] \
                if params.ell != 1 else list(cert)
        payload["witness"] = detail
    print(json.dumps(payload, sort_keys=True, indent=1))
    return 0


def _cmd_verify(args) -> int:
    selectors = VERIFY_SELECTORS if args.selector == "all" else (args.selector,)
    all_ok = True
    for sel in selectors:
        for check in verify_lemmas(sel, budget=args.budget, seed=args.seed):
            status = "PASS" if check.passed else "FAIL"
            print(f"[{status}] {check.name}: {check.detail}")
            all_ok = all_ok and check.passed
    return 0 if all_ok else 3


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "threshold":
            return _cmd_threshold(args)
        if args.command == "simulate-rlc":
            return _cmd_simulate(args, "rlc")
        if args.command == "simulate-rs":
            return _cmd_simulate(args, "rs")
        if args.command == "reduce-compare":
            return _cmd_reduce(args)
        if args.command == "certify-code":
            return _cmd_certify(args)
        if args.command == "verify-lemmas":
            return _cmd_verify(args)
        raise AssertionError(f"unhandled command {args.command}")
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        if exc.dump:
            print(json.dumps(exc.dump, default=str, indent=1), file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
