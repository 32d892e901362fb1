"""Command-line interface: run, sweep, validate, bounds.

Exit status: 0 success, 1 invalid configuration, 2 validation failure.
The master seed is always explicit; there is no hidden entropy source.
"""

from __future__ import annotations

import argparse
import sys

import yaml

from oasbench import harness, oracles, policies

_ALGO_HELP = ("opo-ea: (1+1) EA; opl-ea: (1+lambda1) EA; ollga: "
              "(1+(lambda2,lambda2)) GA; oas-oracle: EA then GA once the "
              "distance to the optimum is at most the switch distance "
              "(idealized, distance is read off the known optimum); "
              "oas-stagnation: EA then GA after k non-improving iterations; "
              "hh: per-iteration EA/GA schedule")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _parse_targets(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip() != "")
    except ValueError:
        raise ValueError(f"could not parse targets {text!r}; expected t1,t2,...")


def build_parser() -> _Parser:
    parser = _Parser(prog="oasbench",
                     description="Online algorithm selection benchmark on OneMax")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_run = sub.add_parser("run", help="run one configuration and write an event CSV")
    p_run.add_argument("--algo", required=True, choices=harness.ALGO_TAGS,
                       help=_ALGO_HELP)
    p_run.add_argument("--n", type=int, required=True, help="problem size (>= 8)")
    p_run.add_argument("--lambda1", type=int, default=None, help="EA population size")
    p_run.add_argument("--lambda2", type=int, default=None, help="GA population size")
    p_run.add_argument("--k", type=int, default=None, help="stagnation threshold")
    p_run.add_argument("--switch-distance", type=int, default=None, dest="d_switch",
                       help="oracle switch distance")
    p_run.add_argument("--start-distance", type=int, default=None,
                       help="fixed-start distance (default: uniform random start)")
    p_run.add_argument("--reps", type=int, required=True, help="replication count")
    p_run.add_argument("--seed", type=int, required=True, help="master seed")
    p_run.add_argument("--budget", type=int, default=None,
                       help="evaluation budget (default 200 n ln n)")
    p_run.add_argument("--targets", type=str, default=None,
                       help="comma-separated fitness targets to report")
    p_run.add_argument("--out", required=True, help="output CSV path")

    p_sweep = sub.add_parser("sweep", help="run a YAML config of many cells")
    p_sweep.add_argument("--config", required=True, help="YAML sweep description")
    p_sweep.add_argument("--workers", type=int, default=1, help="parallel workers")
    p_sweep.add_argument("--out", required=True, help="output CSV path")

    p_val = sub.add_parser("validate",
                           help="oracle-agreement grid, cost and elitism audits, "
                                "early-switch rarity")
    p_val.add_argument("--grid-max-n", type=int, default=20)
    p_val.add_argument("--trials", type=int, default=100_000)
    p_val.add_argument("--rarity-runs", type=int, default=2000)
    p_val.add_argument("--seed", type=int, default=2024)
    p_val.add_argument("--workers", type=int, default=1)

    p_bounds = sub.add_parser("bounds", help="print reference bound values")
    p_bounds.add_argument("--n", type=int, required=True)
    p_bounds.add_argument("--d", type=int, default=None,
                          help="distance (default: the default switch distance)")
    p_bounds.add_argument("--lambda", type=int, default=None, dest="lam",
                          help="GA population size (default: round(ln n))")
    return parser


def _print_summary(label: str, stats) -> None:
    if stats is None:
        print(f"  {label}: no finished runs")
        return
    print(f"  {label}: count={stats.count} mean={stats.mean:.1f} sd={stats.sd:.1f} "
          f"ci95=[{stats.ci_lo:.1f}, {stats.ci_hi:.1f}]")


def _report_traces(traces, targets) -> None:
    by_key: dict[tuple[str, int], list] = {}
    for tr in traces:
        by_key.setdefault((tr.algo, tr.n), []).append(tr)
    for (algo, n), group in sorted(by_key.items()):
        finished = sum(1 for t in group if t.reached_optimum())
        print(f"{algo} n={n}: {len(group)} runs, {finished} reached the optimum")
        _print_summary("evaluations to optimum", harness.summarize(group))
        if targets:
            per = harness.summarize_targets(group, targets)
            for t in targets:
                _print_summary(f"evaluations to fitness >= {t}", per[t])


def _cmd_run(args) -> int:
    targets = _parse_targets(args.targets) if args.targets else ()
    cfg = harness.ExperimentConfig(
        algo=args.algo, n_values=(args.n,), reps=args.reps,
        master_seed=args.seed, budget=args.budget,
        lambda1=args.lambda1, lambda2=args.lambda2, k=args.k,
        d_switch=args.d_switch, start_distance=args.start_distance,
        targets=targets)
    # surfaces invalid parameter combinations before any run executes
    cfg.params_for(args.n)
    if args.algo == "oas-oracle":
        print("note: oas-oracle reads the true distance to the optimum "
              "(idealized policy)")
    traces = harness.sweep([cfg], workers=1)
    harness.write_csv(traces, args.out)
    print(f"wrote {sum(len(t.events) for t in traces)} events "
          f"({len(traces)} runs) to {args.out}")
    _report_traces(traces, targets)
    return 0


def _load_sweep_config(path: str) -> list[harness.ExperimentConfig]:
    with open(path, "r", encoding="utf-8") as fh:
        doc = yaml.safe_load(fh)
    if not isinstance(doc, dict) or "configs" not in doc:
        raise ValueError("sweep config must be a mapping with a 'configs' list")
    shared = {key: doc[key] for key in
              ("master_seed", "reps", "budget", "targets", "start_distance")
              if key in doc}
    out = []
    for i, cell in enumerate(doc["configs"]):
        if not isinstance(cell, dict) or "algo" not in cell or "n" not in cell:
            raise ValueError(f"config entry {i} needs at least 'algo' and 'n'")
        merged = dict(shared)
        merged.update(cell)
        n = merged.pop("n")
        n_values = tuple(n) if isinstance(n, (list, tuple)) else (int(n),)
        if "targets" in merged and merged["targets"] is not None:
            merged["targets"] = tuple(merged["targets"])
        allowed = {"algo", "reps", "master_seed", "budget", "lambda1", "lambda2",
                   "k", "d_switch", "start_distance", "targets"}
        unknown = set(merged) - allowed
        if unknown:
            raise ValueError(f"config entry {i} has unknown keys {sorted(unknown)}")
        out.append(harness.ExperimentConfig(n_values=n_values, **merged))
    return out


def _cmd_sweep(args) -> int:
    configs = _load_sweep_config(args.config)
    for cfg in configs:
        for n in cfg.n_values:
            cfg.params_for(n)
    traces = harness.sweep(configs, workers=max(1, args.workers))
    harness.write_csv(traces, args.out)
    print(f"wrote {sum(len(t.events) for t in traces)} events "
          f"({len(traces)} runs) to {args.out}")
    targets = sorted({t for cfg in configs for t in cfg.targets})
    _report_traces(traces, targets)
    return 0


def _cmd_validate(args) -> int:
    report = harness.validate(grid_max_n=args.grid_max_n, trials=args.trials,
                              rarity_runs=args.rarity_runs, seed=args.seed,
                              workers=max(1, args.workers))
    for line in report.lines():
        print(line)
    if not report.all_passed:
        return 2
    print("all checks passed")
    return 0


def _cmd_bounds(args) -> int:
    n = args.n
    defaults = policies.default_params(n)
    d = args.d if args.d is not None else defaults.d_switch
    lam = args.lam if args.lam is not None else defaults.lambda2
    print(f"n={n}")
    print(f"default parameters: lambda1={defaults.lambda1} "
          f"lambda2={defaults.lambda2} k={defaults.k} d_switch={defaults.d_switch}")
    print(f"guard distance 2 e n ln(n)/k = {defaults.d_guard:.2f}")
    print(f"band distance n/ln^2(n)     = {defaults.d_prime:.2f}")
    if d >= 1:
        ga = oracles.ollga_fixed_start_bound(n, d, lam)
        print(f"ga fixed-start bound(n={n}, D={d}, lambda={lam}) = {ga.value:.1f}")
        print(f"minimizing lambda* = {oracles.ollga_lambda_star(n, d):.2f}")
    ea = oracles.olea_fixed_target_bound(n, d, 1)
    print(f"ea fixed-target bound(n={n}, D={d}, lambda=1) = {ea.value:.1f} "
          f"[{ea.regime}]")
    sw = oracles.known_switch_bound(n, d, 1, lam)
    print(f"switch-at-distance bound(n={n}, D={d}, lambda1=1, lambda2={lam}) "
          f"= {sw.value:.1f}")
    inside = policies.corollary_window_check(n, d, lam)
    print(f"window check (D, lambda2): {'inside' if inside else 'outside'}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "validate":
            return _cmd_validate(args)
        if args.command == "bounds":
            return _cmd_bounds(args)
    except (ValueError, OSError, harness.SweepError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 1


if __name__ == "__main__":
    sys.exit(main())
