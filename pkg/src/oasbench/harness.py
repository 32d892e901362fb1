"""Experiment orchestration: seeded runs, sweeps, CSV emission, statistics,
and the self-validation suite.

Every run is a deterministic function of (config, master_seed, run_index);
replication r of configuration cell (algo, n) consumes the stream
(master_seed, n_index * reps + r), so replications are independent while
equal run indices across configurations share seeds for paired
comparisons.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from multiprocessing import get_context
from typing import Iterable, Optional, Sequence

import numpy as np

from oasbench.algorithms import OneLambdaLambdaGA, OnePlusLambdaEA
from oasbench.core import init_at_distance, stream_rng
from oasbench.oracles import p_improve_opo, p_level_leave
from oasbench.policies import (
    PolicyParams,
    default_params,
    guard_distance,
    make_policy,
    selector_loop,
)
from oasbench.trace import OPTIMUM, RunTrace, fixed_target_times

__all__ = [
    "ALGO_TAGS",
    "ExperimentConfig",
    "SummaryStats",
    "SweepError",
    "default_budget",
    "run_one",
    "sweep",
    "write_csv",
    "CSV_COLUMNS",
    "summarize",
    "summarize_targets",
    "bootstrap_ci",
    "improvement_frequency",
    "ValidationReport",
    "validate",
]

ALGO_TAGS = ("opo-ea", "opl-ea", "ollga", "oas-oracle", "oas-stagnation", "hh")

CSV_COLUMNS = ("run_id", "algo", "n", "lambda1", "lambda2", "k", "d_switch",
               "seed", "event_type", "evaluations", "fitness", "distance")


def default_budget(n: int) -> int:
    """Default evaluation budget 200 n ln n, far above every expected runtime."""
    return math.ceil(200 * n * math.log(n))


@dataclass(frozen=True)
class ExperimentConfig:
    """One sweep cell family: an algorithm/policy over a list of problem sizes."""

    algo: str
    n_values: tuple[int, ...]
    reps: int = 1
    master_seed: int = 1
    budget: Optional[int] = None
    lambda1: Optional[int] = None
    lambda2: Optional[int] = None
    k: Optional[int] = None
    d_switch: Optional[int] = None
    start_distance: Optional[int] = None
    targets: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.algo not in ALGO_TAGS:
            raise ValueError(f"unknown algo {self.algo!r}; expected one of {ALGO_TAGS}")
        if not self.n_values:
            raise ValueError("at least one problem size is required")
        for n in self.n_values:
            if n < 8:
                raise ValueError(f"problem size n={n} below the minimum of 8")
        if self.reps < 1:
            raise ValueError("replication count must be >= 1")
        if self.budget is not None and self.budget < 1:
            raise ValueError("budget must be >= 1")

    @property
    def total_runs(self) -> int:
        return len(self.n_values) * self.reps

    def params_for(self, n: int) -> PolicyParams:
        p = default_params(n)
        kw = {}
        if self.lambda1 is not None:
            kw["lambda1"] = self.lambda1
        if self.lambda2 is not None:
            kw["lambda2"] = self.lambda2
        if self.k is not None:
            kw["k"] = self.k
        if self.d_switch is not None:
            kw["d_switch"] = self.d_switch
        return p.replace(**kw) if kw else p


def run_one(config: ExperimentConfig, run_index: int) -> RunTrace:
    """Execute one replication; deterministic in (config, master_seed, run_index)."""
    if not 0 <= run_index < config.total_runs:
        raise ValueError(f"run_index {run_index} outside [0, {config.total_runs})")
    n = config.n_values[run_index // config.reps]
    rep = run_index % config.reps
    params = config.params_for(n)
    if config.start_distance is not None and config.start_distance > n:
        raise ValueError(f"start distance {config.start_distance} exceeds n={n}")
    policy = make_policy(config.algo, params)
    budget = config.budget if config.budget is not None else default_budget(n)
    rng = stream_rng(config.master_seed, run_index)
    initial = None
    if config.start_distance is not None:
        initial = init_at_distance(n, config.start_distance, rng)
    trace = selector_loop(
        policy, n, rng, budget,
        initial_bits=initial,
        run_id=f"{config.algo}-n{n}-r{rep}",
        seed=config.master_seed,
    )
    trace.validate()
    return trace


class SweepError(RuntimeError):
    pass


def _run_task(args):
    ci, config, ri = args
    try:
        return ci, ri, run_one(config, ri)
    except Exception as exc:  # surfaced with run coordinates by sweep()
        return ci, ri, exc


def sweep(configs: Sequence[ExperimentConfig], workers: int = 1) -> list[RunTrace]:
    """Run all replications of all configs; deterministic order by
    (config index, run index) regardless of worker count."""
    if not configs:
        raise ValueError("config list is empty")
    tasks = [(ci, cfg, ri)
             for ci, cfg in enumerate(configs)
             for ri in range(cfg.total_runs)]
    if workers > 1 and len(tasks) > 1:
        with get_context("spawn").Pool(workers) as pool:
            results = pool.map(_run_task, tasks, chunksize=1)
    else:
        results = [_run_task(t) for t in tasks]
    traces: list[RunTrace] = []
    for ci, ri, res in results:
        if isinstance(res, Exception):
            raise SweepError(
                f"run failed in config {ci} ({configs[ci].algo}), "
                f"run_index {ri}: {res!r}") from res
        traces.append(res)
    return traces


def write_csv(traces: Iterable[RunTrace], path: str) -> None:
    """One row per event; header mandatory, UTF-8, LF, no quoting.

    Inapplicable parameter columns are left empty.
    """
    def cell(v) -> str:
        return "" if v is None else str(v)

    lines = [",".join(CSV_COLUMNS)]
    for tr in traces:
        tr.validate()
        head = (f"{tr.run_id},{tr.algo},{tr.n},{cell(tr.lambda1)},"
                f"{cell(tr.lambda2)},{cell(tr.k)},{cell(tr.d_switch)},{tr.seed}")
        for ev in tr.events:
            lines.append(f"{head},{ev.kind},{ev.evaluations},{ev.fitness},{ev.distance}")
    data = "\n".join(lines) + "\n"
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(data)


# ---------------------------------------------------------------------------
# statistics

@dataclass(frozen=True)
class SummaryStats:
    count: int
    mean: float
    sd: float
    ci_lo: float
    ci_hi: float


def bootstrap_ci(values: Sequence[float], rng: np.random.Generator,
                 resamples: int = 10_000, level: float = 0.95) -> tuple[float, float]:
    """Percentile bootstrap CI for the mean; runtimes are right-skewed, so
    no normal approximation."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("no values to bootstrap")
    if arr.size == 1:
        return float(arr[0]), float(arr[0])
    idx = rng.integers(0, arr.size, size=(resamples, arr.size))
    means = arr[idx].mean(axis=1)
    alpha = (1.0 - level) / 2.0
    lo, hi = np.quantile(means, [alpha, 1.0 - alpha])
    return float(lo), float(hi)


def _stats(values: Sequence[float], seed: int) -> SummaryStats:
    arr = np.asarray(values, dtype=np.float64)
    lo, hi = bootstrap_ci(arr, stream_rng(seed, 0xB0075))
    return SummaryStats(int(arr.size), float(arr.mean()),
                        float(arr.std(ddof=1)) if arr.size > 1 else 0.0, lo, hi)


def evals_to_optimum(traces: Iterable[RunTrace]) -> list[int]:
    out = []
    for tr in traces:
        t = tr.terminal
        if t is not None and t.kind == OPTIMUM:
            out.append(t.evaluations)
    return out


def summarize(traces: Sequence[RunTrace], seed: int = 0) -> Optional[SummaryStats]:
    """Summary of evaluations-to-optimum over the finished runs."""
    vals = evals_to_optimum(traces)
    if not vals:
        return None
    return _stats(vals, seed)


def summarize_targets(traces: Sequence[RunTrace], targets: Sequence[int],
                      seed: int = 0) -> dict[int, Optional[SummaryStats]]:
    """Per-target summary of first-hitting evaluation counts."""
    out: dict[int, Optional[SummaryStats]] = {}
    for t in targets:
        vals = []
        for tr in traces:
            hit = fixed_target_times(tr, [t])[t]
            if hit is not None:
                vals.append(hit)
        out[t] = _stats(vals, seed) if vals else None
    return out


# ---------------------------------------------------------------------------
# self-validation

def improvement_frequency(n: int, d: int, lam: int, trials: int,
                          rng: np.random.Generator) -> float:
    """Empirical strict-improvement frequency of one (1+lam) EA step from a
    fixed point at distance d."""
    pristine = np.ones(n, dtype=np.uint8)
    if d > 0:
        pristine[:d] = 0
    ea = OnePlusLambdaEA(pristine.copy(), lam)
    f0 = n - d
    hits = 0
    for _ in range(trials):
        ea.bits[:] = pristine
        ea.fitness = f0
        _, improved = ea.drive(rng, max_steps=1)
        if improved:
            hits += 1
    return hits / trials


@dataclass
class ValidationReport:
    checks: list[tuple[str, bool, str]] = field(default_factory=list)

    def add(self, name: str, passed: bool, detail: str) -> None:
        self.checks.append((name, passed, detail))

    @property
    def all_passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def lines(self) -> list[str]:
        return [f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
                for name, ok, detail in self.checks]


def _check_oracle_grid(report: ValidationReport, grid_max_n: int, trials: int,
                       seed: int) -> None:
    rng = stream_rng(seed, 1)
    worst = 0.0
    cells = 0
    ok = True
    for n in (2, 5, 10, 20):
        if n > grid_max_n:
            continue
        for d in sorted({1, math.ceil(n / 2), n}):
            for lam in (1, 2, 8):
                p = p_improve_opo(n, d) if lam == 1 else p_level_leave(n, d, lam)
                freq = improvement_frequency(n, d, lam, trials, rng)
                sigma = math.sqrt(max(p * (1 - p), 1e-300) / trials)
                dev = abs(freq - p) / sigma if sigma > 0 else 0.0
                worst = max(worst, dev)
                cells += 1
                if dev > 3.0:
                    ok = False
    report.add("oracle-agreement", ok,
               f"{cells} grid cells, worst deviation {worst:.2f} sigma (limit 3)")


def _check_cost_accounting(report: ValidationReport, n_traces: int, seed: int) -> None:
    rng = stream_rng(seed, 2)
    ok = True
    for _ in range(n_traces):
        n = int(rng.integers(8, 33))
        lam1 = int(rng.integers(1, 5))
        lam2 = int(rng.integers(1, min(n, 9)))
        bits = rng.integers(0, 2, size=n, dtype=np.uint8)
        ea = OnePlusLambdaEA(bits.copy(), lam1)
        ga = OneLambdaLambdaGA(bits.copy(), lam2)
        t1 = int(rng.integers(0, 30))
        t2 = int(rng.integers(0, 30))
        for _ in range(t1):
            ea.step(rng)
        for _ in range(t2):
            ga.step(rng)
        if ea.evaluations + ga.evaluations != lam1 * t1 + 2 * lam2 * t2:
            ok = False
            break
    report.add("cost-accounting", ok,
               f"{n_traces} mixed traces, exact equality" if ok else "mismatch found")


def _check_elitism(report: ValidationReport, seed: int) -> None:
    violations = 0
    runs = 0
    for algo in ALGO_TAGS:
        cfg = ExperimentConfig(algo=algo, n_values=(64,), reps=3,
                               master_seed=seed + 17)
        for rep in range(3):
            trace = run_one(cfg, rep)
            runs += 1
            try:
                trace.validate()
            except ValueError:
                violations += 1
            f = trace.initial_fitness
            for ev in trace.events:
                if ev.fitness < f:
                    violations += 1
                f = max(f, ev.fitness)
    report.add("elitism-and-trace-form", violations == 0,
               f"{runs} runs across all policies, {violations} violations")


def _check_early_switch(report: ValidationReport, runs: int, seed: int,
                        workers: int) -> None:
    n = 4096
    cfg = ExperimentConfig(algo="oas-stagnation", n_values=(n,), reps=runs,
                           master_seed=seed + 23)
    params = cfg.params_for(n)
    guard = guard_distance(n, params.k)
    traces = sweep([cfg], workers=workers)
    late = 0
    switched = 0
    for tr in traces:
        ev = tr.switch_event()
        if ev is not None:
            switched += 1
            if ev.distance > guard:
                late += 1
    frac = late / max(switched, 1)
    report.add("early-switch-rarity", frac <= 0.05,
               f"{switched} switches at n={n}, fraction above guard "
               f"distance {guard:.1f}: {frac:.4f} (limit 0.05)")


def validate(grid_max_n: int = 20, trials: int = 100_000,
             rarity_runs: int = 2000, seed: int = 2024,
             workers: int = 1) -> ValidationReport:
    """Run the oracle-agreement grid, cost audit, elitism audit, and
    early-switch rarity check."""
    report = ValidationReport()
    _check_oracle_grid(report, grid_max_n, trials, seed)
    _check_cost_accounting(report, 1000, seed)
    _check_elitism(report, seed)
    _check_early_switch(report, rarity_runs, seed, workers)
    return report
