"""Monte Carlo driver: run the distinguisher on both cases and report the advantage."""
from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from statistics import NormalDist
from typing import Optional

from .attack import Verdict, distinguish, failure_bound
from .errors import InvalidCount, InvalidParams
from .instance import Case, Params, build_instance

TRIAL_FIELDS = [
    "trial_index",
    "case",
    "conjecture",
    "lam",
    "q",
    "m",
    "s",
    "rank",
    "threshold",
    "early_exit",
    "rows_consumed",
    "verdict",
    "correct",
    "master_seed",
    "elapsed_ms",
]


@dataclass
class ExperimentConfig:
    params: Params  # the case field is ignored; both cases are run
    trials_per_case: int
    master_seed: int
    exact_rank: bool = False
    output_path: Optional[Path] = None
    format: str = "jsonl"
    workers: int = 1

    def __post_init__(self):
        if self.trials_per_case < 1:
            raise InvalidParams("trials_per_case must be >= 1")
        if self.format not in ("jsonl", "csv"):
            raise InvalidParams(f"unknown output format {self.format!r}")
        if self.workers < 1:
            raise InvalidParams("workers must be >= 1")
        if self.output_path is not None:
            self.output_path = Path(self.output_path)

    def to_dict(self) -> dict:
        return {
            "params": {k: v for k, v in self.params.to_dict().items() if k != "case"},
            "trials_per_case": self.trials_per_case,
            "master_seed": self.master_seed,
            "exact_rank": self.exact_rank,
            "format": self.format,
        }


@dataclass
class TrialResult:
    trial_index: int
    case: str
    conjecture: str
    lam: int
    q: int
    m: int
    s: int
    rank: int
    threshold: int
    early_exit: bool
    rows_consumed: int
    verdict: str
    correct: bool
    master_seed: int
    elapsed_ms: int = field(default=0, compare=False)

    def to_dict(self) -> dict:
        return asdict(self)


def is_correct(case: Case, verdict: Verdict) -> bool:
    return (case is Case.POLY) == (verdict is Verdict.CASE1)


def run_trial(config: ExperimentConfig, case, trial_index: int) -> TrialResult:
    case = Case(case)
    params = replace(config.params, case=case)
    t0 = time.monotonic()
    inst = build_instance(params, config.master_seed, trial_index)
    d = distinguish(inst, exact_rank=config.exact_rank)
    elapsed = int((time.monotonic() - t0) * 1000)
    return TrialResult(
        trial_index=trial_index,
        case=case.value,
        conjecture=params.conjecture.value,
        lam=params.lam,
        q=params.q,
        m=params.m,
        s=params.s,
        rank=d.rank,
        threshold=d.threshold,
        early_exit=d.early_exit,
        rows_consumed=d.rows_consumed,
        verdict=d.verdict.value,
        correct=is_correct(case, d.verdict),
        master_seed=config.master_seed,
        elapsed_ms=elapsed,
    )


def wilson_interval(successes: int, n: int, confidence: float = 0.95) -> tuple[float, float]:
    if n < 1 or not 0 <= successes <= n:
        raise InvalidCount(f"need 0 <= successes <= n and n >= 1, got {successes}/{n}")
    if not 0 < confidence < 1:
        raise ValueError("confidence must lie in (0, 1)")
    z = NormalDist().inv_cdf(0.5 + confidence / 2)
    phat = successes / n
    denom = 1 + z * z / n
    centre = (phat + z * z / (2 * n)) / denom
    half = z * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom
    lo = 0.0 if successes == 0 else max(0.0, centre - half)
    hi = 1.0 if successes == n else min(1.0, centre + half)
    return lo, hi


@dataclass
class CaseSummary:
    trials: int
    case1: int  # trials with verdict case1
    correct: int
    case1_rate: float
    case1_ci: tuple[float, float]


@dataclass
class Report:
    config: dict
    poly: CaseSummary
    rand: CaseSummary
    advantage: float
    failure_bound: float
    results: list[TrialResult] = field(default_factory=list, repr=False)

    @property
    def intervals_overlap(self) -> bool:
        (a_lo, a_hi), (b_lo, b_hi) = self.poly.case1_ci, self.rand.case1_ci
        return a_lo <= b_hi and b_lo <= a_hi

    def summary(self) -> dict:
        return {
            "config": self.config,
            "poly": asdict(self.poly),
            "rand": asdict(self.rand),
            "advantage": self.advantage,
            "intervals_overlap": self.intervals_overlap,
            "failure_bound": self.failure_bound,
            "rand_error_rate": 1 - self.rand.correct / self.rand.trials,
        }


def summarize(results: list[TrialResult], case: Case) -> CaseSummary:
    rs = [r for r in results if r.case == case.value]
    n = len(rs)
    c1 = sum(r.verdict == Verdict.CASE1.value for r in rs)
    return CaseSummary(n, c1, sum(r.correct for r in rs), c1 / n, wilson_interval(c1, n))


def _run_one(args):
    config, case, idx = args
    return run_trial(config, case, idx)


def run_experiment(config: ExperimentConfig) -> Report:
    jobs = [(config, case, i) for case in (Case.POLY, Case.RAND) for i in range(config.trials_per_case)]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_run_one, jobs, chunksize=max(1, len(jobs) // (4 * config.workers))))
    else:
        results = [_run_one(j) for j in jobs]

    poly = summarize(results, Case.POLY)
    rand = summarize(results, Case.RAND)
    report = Report(
        config=config.to_dict(),
        poly=poly,
        rand=rand,
        advantage=abs(poly.case1_rate - rand.case1_rate),
        failure_bound=failure_bound(config.params.q, config.params.m),
        results=results,
    )
    if config.output_path is not None:
        write_results(report, config.output_path, config.format)
    return report


def format_results(results: list[TrialResult], fmt: str = "jsonl") -> str:
    if fmt == "jsonl":
        return "".join(json.dumps(r.to_dict()) + "\n" for r in results)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=TRIAL_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in results:
        w.writerow(r.to_dict())
    return buf.getvalue()


def summary_path(path: Path) -> Path:
    return path.with_name(path.name + ".summary.json")


def write_results(report: Report, path: Path, fmt: str = "jsonl") -> None:
    path = Path(path)
    path.write_text(format_results(report.results, fmt))
    summary_path(path).write_text(json.dumps(report.summary(), indent=2) + "\n")
