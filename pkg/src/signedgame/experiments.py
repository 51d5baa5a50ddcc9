"""Seeded Monte Carlo runs of the dynamics from generic initial networks.

Every trial owns a PCG64 stream seeded with ``(master_seed, n, trial)``,
so results do not depend on how trials are split across workers.
"""
from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .dynamics import STEP_FACTOR, EdgeSelector, default_max_steps, make_rng, run
from .game import Variant
from .network import SignedNetwork, num_pairs

CSV_HEADER = ["n", "trials", "successes", "success_rate", "mean_flips", "mean_steps",
              "clusters_histogram"]


def random_network(n: int, p_positive: float, rng: np.random.Generator) -> SignedNetwork:
    """Each sign independently +1 with probability ``p_positive``."""
    if not 0.0 < p_positive < 1.0:
        raise ValueError(f"p_positive must lie strictly between 0 and 1, got {p_positive}")
    draws = rng.random(num_pairs(n))
    return SignedNetwork(n, np.where(draws < p_positive, 1, -1).astype(np.int8))


def trial_rng(master_seed: int, n: int, trial: int) -> np.random.Generator:
    return make_rng([master_seed, n, trial])


@dataclass(frozen=True)
class ExperimentConfig:
    n_min: int
    n_max: int
    trials: int = 2000
    p_positive: float = 0.5
    master_seed: int = 0
    variant: Variant = Variant.CLUSTERING
    step_factor: int = STEP_FACTOR

    def __post_init__(self):
        if not 3 <= self.n_min <= self.n_max:
            raise ValueError(f"need 3 <= n_min <= n_max, got {self.n_min}..{self.n_max}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0.0 < self.p_positive < 1.0:
            raise ValueError("p_positive must lie strictly between 0 and 1")
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")
        if self.step_factor < 1:
            raise ValueError("step_factor must be >= 1")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["variant"] = self.variant.value
        d["max_steps_policy"] = f"{self.step_factor} * C(n,2) * (initial dissonance + 1)"
        return d


@dataclass(frozen=True)
class TrialResult:
    absorbed: bool
    success: bool
    clusters: int | None
    flips: int
    steps: int
    final_dissonance: int


def run_trial(cfg: ExperimentConfig, n: int, trial: int) -> TrialResult:
    rng = trial_rng(cfg.master_seed, n, trial)
    G0 = random_network(n, cfg.p_positive, rng)
    selector = EdgeSelector(n, seed=None, rng=rng)
    out = run(G0, selector, cfg.variant, default_max_steps(G0, cfg.variant, cfg.step_factor))
    k = out.final_cluster_count
    if cfg.variant is Variant.STRUCTURAL:
        balanced = k is not None and k <= 2
    else:
        balanced = k is not None
    return TrialResult(out.absorbed, out.absorbed and balanced, k, out.flips,
                       out.steps_taken, out.dissonance_trace[-1])


@dataclass
class ExperimentRow:
    n: int
    trials: int
    successes: int
    success_rate: float
    truncations: int
    absorbed_unbalanced: int
    mean_flips: float
    mean_steps: float
    structural_count: int
    clusters_histogram: dict[int, int] = field(default_factory=dict)


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    rows: list[ExperimentRow]

    def row(self, n: int) -> ExperimentRow:
        for r in self.rows:
            if r.n == n:
                return r
        raise KeyError(n)

    def parity_split(self) -> dict[str, float | None]:
        """Mean success rate over n > 5, split by parity of n."""
        out = {}
        for name, rem in (("odd", 1), ("even", 0)):
            rates = [r.success_rate for r in self.rows if r.n > 5 and r.n % 2 == rem]
            out[name] = sum(rates) / len(rates) if rates else None
        return out

    def to_dict(self) -> dict:
        rows = []
        for r in self.rows:
            d = asdict(r)
            d["clusters_histogram"] = {str(k): v for k, v in sorted(r.clusters_histogram.items())}
            rows.append(d)
        return {"config": self.config.to_dict(), "rows": rows, "parity_split": self.parity_split()}


def aggregate(n: int, results: list[TrialResult]) -> ExperimentRow:
    hist: dict[int, int] = {}
    for r in results:
        if r.success:
            hist[r.clusters] = hist.get(r.clusters, 0) + 1
    trials = len(results)
    successes = sum(r.success for r in results)
    return ExperimentRow(
        n=n,
        trials=trials,
        successes=successes,
        success_rate=successes / trials,
        truncations=sum(not r.absorbed for r in results),
        absorbed_unbalanced=sum(r.absorbed and not r.success for r in results),
        mean_flips=sum(r.flips for r in results) / trials,
        mean_steps=sum(r.steps for r in results) / trials,
        structural_count=sum(r.success and r.clusters <= 2 for r in results),
        clusters_histogram=dict(sorted(hist.items())),
    )


def _run_block(cfg: ExperimentConfig, n: int, start: int, stop: int) -> list[TrialResult]:
    return [run_trial(cfg, n, t) for t in range(start, stop)]


def run_experiment(cfg: ExperimentConfig, jobs: int = 1, progress=None) -> ExperimentReport:
    """Run every trial of ``cfg``; ``progress(n)`` is called as each size completes."""
    sizes = range(cfg.n_min, cfg.n_max + 1)
    if jobs <= 1:
        rows = []
        for n in sizes:
            rows.append(aggregate(n, _run_block(cfg, n, 0, cfg.trials)))
            if progress:
                progress(n)
        return ExperimentReport(cfg, rows)

    per_block = max(1, min(250, -(-cfg.trials // jobs)))
    tasks = [(n, s, min(cfg.trials, s + per_block))
             for n in sizes for s in range(0, cfg.trials, per_block)]
    results: dict[int, list[TrialResult]] = {n: [] for n in sizes}
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [(n, pool.submit(_run_block, cfg, n, s, e)) for n, s, e in tasks]
        for n, fut in futures:
            results[n].extend(fut.result())
    rows = []
    for n in sizes:
        rows.append(aggregate(n, results[n]))
        if progress:
            progress(n)
    return ExperimentReport(cfg, rows)


def _histogram_cell(hist: dict[int, int]) -> str:
    return "|".join(f"{k}:{c}" for k, c in sorted(hist.items()))


def parse_histogram_cell(cell: str) -> dict[int, int]:
    if not cell:
        return {}
    return {int(k): int(c) for k, c in (item.split(":") for item in cell.split("|"))}


def emit_report(report: ExperimentReport, fmt: str = "json") -> str:
    """Serialize a report. CSV has one header line and one row per node count."""
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2, sort_keys=False) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in report.rows:
            w.writerow([r.n, r.trials, r.successes, repr(r.success_rate), repr(r.mean_flips),
                        repr(r.mean_steps), _histogram_cell(r.clusters_histogram)])
        return buf.getvalue()
    raise ValueError(f"unknown report format {fmt!r}")


def config_document(cfg: ExperimentConfig) -> str:
    return json.dumps(cfg.to_dict(), indent=2) + "\n"
