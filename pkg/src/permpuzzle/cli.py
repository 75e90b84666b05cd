"""Command-line entry point: ``permpuzzle {run,trial,bound,verify}``.

Exit status is 0 on success, 1 when a kernel certificate fails and 2 for
invalid arguments.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from .attack import certificate_report, recommend_m
from .errors import PuzzleError
from .field import smallest_prime_at_least
from .harness import ExperimentConfig, run_experiment, run_trial
from .instance import Case, Conjecture, Params, build_instance

DEFAULT_TARGET = 1e-3


def _add_params(p: argparse.ArgumentParser, *, m_required: bool = False, conjecture: bool = True):
    if conjecture:
        p.add_argument("--conjecture", choices=[c.value for c in Conjecture], required=True)
    p.add_argument("--lambda", dest="lam", type=int, required=True)
    p.add_argument("--q", type=int, help="field size (default: smallest prime >= lambda^2)")
    p.add_argument("--m", type=int, required=m_required, help="number of sets")
    if conjecture:
        p.add_argument("--subset-size", type=int, help="evaluation-set size; required for --conjecture new")
    p.add_argument("--seed", type=int, required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="permpuzzle", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a full two-case experiment")
    _add_params(run)
    run.add_argument("--trials", type=int, required=True)
    run.add_argument("--exact-rank", action="store_true")
    run.add_argument("--format", choices=["jsonl", "csv"], default="jsonl")
    run.add_argument("--out", required=True)
    run.add_argument("--workers", type=int, default=1)

    trial = sub.add_parser("trial", help="run one trial and print it as JSON")
    _add_params(trial)
    trial.add_argument("--case", choices=[c.value for c in Case], required=True)
    trial.add_argument("--index", type=int, required=True)
    trial.add_argument("--exact-rank", action="store_true")

    bound = sub.add_parser("bound", help="recommend m for a target failure probability")
    bound.add_argument("--q", type=int, required=True)
    bound.add_argument("--target-failure", type=float, required=True)

    verify = sub.add_parser("verify", help="check the kernel certificates on debug instances")
    _add_params(verify, m_required=True, conjecture=False)
    return parser


def params_from_args(args, parser) -> Params:
    q = args.q if args.q is not None else smallest_prime_at_least(args.lam**2)
    m = args.m if args.m is not None else recommend_m(q, DEFAULT_TARGET)
    conjecture = getattr(args, "conjecture", Conjecture.ORIGINAL.value)
    s = getattr(args, "subset_size", None)
    if conjecture == Conjecture.NEW.value and s is None:
        parser.error("--subset-size is required with --conjecture new")
    if conjecture == Conjecture.ORIGINAL.value and s is not None:
        parser.error("--subset-size only applies to --conjecture new")
    return Params(args.lam, q, m, conjecture, s)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "bound":
            print(recommend_m(args.q, args.target_failure))
            return 0

        params = params_from_args(args, parser)

        if args.command == "run":
            config = ExperimentConfig(
                params, args.trials, args.seed, args.exact_rank, args.out, args.format, args.workers
            )
            report = run_experiment(config)
            print(json.dumps(report.summary(), indent=2))
            return 0

        if args.command == "trial":
            config = ExperimentConfig(params, 1, args.seed, args.exact_rank)
            print(json.dumps(run_trial(config, args.case, args.index).to_dict()))
            return 0

        # verify
        reports, ok = [], True
        for case in Case:
            inst = build_instance(replace(params, case=case), args.seed, 0, keep_secrets=True)
            rep = certificate_report(inst)
            rep["k_ok"] = rep["k_annihilated"] == rep["k_vectors"]
            rep["beta_ok"] = rep["beta_annihilated"] if case is Case.POLY else None
            ok &= rep["k_ok"] and rep["beta_ok"] is not False
            reports.append(rep)
        print(json.dumps({"params": params.to_dict() | {"case": None}, "seed": args.seed,
                          "certificates": reports, "ok": ok}, indent=2))
        return 0 if ok else 1
    except PuzzleError as exc:
        print(f"permpuzzle: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
