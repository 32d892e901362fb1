"""The three figure kinds: runtime scaling, fixed-target curves, and the
switch-distance histogram.

Figures are pure functions of the input CSV bytes: bootstrap bands use a
fixed seed, and every reference marker is recomputed from the (n, k)
columns of the data, never hard-coded.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Optional

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from oasplots.data import PlotDataError, load_events, optimum_events, switch_events

__all__ = ["FigureSpec", "PlotDataError", "plot_scaling", "plot_fixed_target",
           "plot_switch_hist"]

KINDS = ("scaling", "fixed_target", "switch_hist")
NORMS = ("none", "n_ln_n", "n_lnln_n")

_BOOT_SEED = 271828
_BOOT_RESAMPLES = 2000
_FIGSIZE = (12.0, 8.0)  # 1200x800 at dpi=100
_DPI = 100


@dataclass
class FigureSpec:
    kind: str
    inputs: list[str]
    out: str
    norm: str = "none"
    targets: Optional[list[int]] = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise PlotDataError(f"unknown figure kind {self.kind!r}")
        if self.norm not in NORMS:
            raise PlotDataError(f"unknown normalization {self.norm!r}")
        if not self.inputs:
            raise PlotDataError("at least one input CSV is required")
        if self.norm != "none" and self.kind != "scaling":
            raise PlotDataError(
                f"normalization applies to the scaling figure, not {self.kind}")


def _norm_divisor(norm: str, n: int) -> float:
    if norm == "n_ln_n":
        div = n * math.log(n)
    elif norm == "n_lnln_n":
        div = n * math.log(math.log(n))
    else:
        div = 1.0
    if div <= 0:
        raise PlotDataError(f"normalization {norm} non-positive for n={n}")
    return div


def _boot_band(values: np.ndarray) -> tuple[float, float]:
    if values.size < 2:
        m = float(values.mean())
        return m, m
    rng = np.random.default_rng(_BOOT_SEED)
    idx = rng.integers(0, values.size, size=(_BOOT_RESAMPLES, values.size))
    means = values[idx].mean(axis=1)
    lo, hi = np.quantile(means, [0.025, 0.975])
    return float(lo), float(hi)


def _save(fig, out: str) -> None:
    parent = os.path.dirname(os.path.abspath(out))
    os.makedirs(parent, exist_ok=True)
    fig.savefig(out, dpi=_DPI)
    plt.close(fig)


def plot_scaling(spec: FigureSpec) -> dict:
    """Mean evaluations-to-optimum per (algo, n) with CI bands, optionally
    normalized by n ln n or n lnln n; log-x axis."""
    df = load_events(spec.inputs)
    runs = df.groupby(["algo", "n", "run_id"], sort=True)
    finished = optimum_events(df)
    # every configuration present must have terminal optimum events
    for (algo, n), _ in df.groupby(["algo", "n"], sort=True):
        sub = finished[(finished["algo"] == algo) & (finished["n"] == n)]
        if sub.empty:
            raise PlotDataError(
                f"no terminal optimum events for algo={algo}, n={n}; "
                "cannot place it on a runtime-scaling curve")
    sizes = sorted(finished["n"].unique())
    if len(sizes) < 2:
        raise PlotDataError(
            f"scaling needs terminal events for >= 2 distinct n, found {sizes}")

    fig, ax = plt.subplots(figsize=_FIGSIZE)
    meta: dict = {"kind": "scaling", "norm": spec.norm, "series": {}}
    for algo, sub in finished.groupby("algo", sort=True):
        xs, ys, los, his = [], [], [], []
        for n, cell in sub.groupby("n", sort=True):
            div = _norm_divisor(spec.norm, int(n))
            vals = cell["evaluations"].to_numpy(dtype=np.float64) / div
            lo, hi = _boot_band(vals)
            xs.append(int(n))
            ys.append(float(vals.mean()))
            los.append(lo)
            his.append(hi)
        ax.plot(xs, ys, marker="o", label=algo)
        ax.fill_between(xs, los, his, alpha=0.2)
        meta["series"][algo] = dict(zip(xs, ys))
    ax.set_xscale("log", base=2)
    ax.set_xlabel("problem size n")
    ylabel = {"none": "evaluations to optimum",
              "n_ln_n": "evaluations / (n ln n)",
              "n_lnln_n": "evaluations / (n ln ln n)"}[spec.norm]
    ax.set_ylabel(ylabel)
    ax.set_title("Runtime scaling")
    ax.legend()
    ax.grid(True, alpha=0.3)
    _save(fig, spec.out)
    meta["out"] = spec.out
    return meta


def _first_hit(group, n: int, dist: int):
    hits = group[group["fitness"] >= n - dist]
    if hits.empty:
        return None
    return int(hits["evaluations"].min())


def plot_fixed_target(spec: FigureSpec) -> dict:
    """Evaluations to reach each target distance, one line per algorithm,
    log-log axes.  Targets default to a power-of-two distance grid."""
    df = load_events(spec.inputs)
    sizes = df["n"].unique()
    if len(sizes) != 1:
        raise PlotDataError(
            f"fixed-target curves need a single problem size, found {sorted(sizes)}")
    n = int(sizes[0])
    if spec.targets is not None:
        targets = sorted({int(t) for t in spec.targets}, reverse=True)
        if not targets:
            raise PlotDataError("empty target list")
        if any(t < 0 or t > n for t in targets):
            raise PlotDataError(f"target distances must lie in [0, {n}]")
    else:
        max_d = int(df["distance"].max())
        if max_d < 1:
            raise PlotDataError("no positive distances in the data")
        targets = [1 << e for e in range(int(math.log2(max_d)), -1, -1)]
    targets = [t for t in targets if t >= 1]
    if not targets:
        raise PlotDataError("empty target list")

    fig, ax = plt.subplots(figsize=_FIGSIZE)
    curves: dict[str, list] = {}
    bands: dict[str, list] = {}
    for algo, sub in df.groupby("algo", sort=True):
        means, los, his = [], [], []
        by_run = list(sub.groupby("run_id", sort=True))
        for t in targets:
            vals = [h for _, g in by_run if (h := _first_hit(g, n, t)) is not None]
            if vals:
                arr = np.asarray(vals, dtype=np.float64)
                lo, hi = _boot_band(arr)
                means.append(float(arr.mean()))
                los.append(lo)
                his.append(hi)
            else:
                means.append(np.nan)
                los.append(np.nan)
                his.append(np.nan)
        curves[algo] = means
        bands[algo] = (los, his)
        ax.plot(targets, means, marker="o", label=algo)
        if len(by_run) > 1:
            ax.fill_between(targets, los, his, alpha=0.2)

    crossings = []
    algos = sorted(curves)
    for i in range(len(algos)):
        for j in range(i + 1, len(algos)):
            diff = np.asarray(curves[algos[i]]) - np.asarray(curves[algos[j]])
            for a, b in zip(range(len(targets) - 1), range(1, len(targets))):
                if np.isfinite(diff[a]) and np.isfinite(diff[b]) and diff[a] * diff[b] < 0:
                    crossings.append((algos[i], algos[j], targets[b]))
                    ax.axvline(targets[b], color="gray", linestyle=":", alpha=0.8)
                    ax.annotate(f"{algos[i]}/{algos[j]} cross",
                                (targets[b], float(np.nanmean(
                                    [curves[algos[i]][b], curves[algos[j]][b]]))),
                                textcoords="offset points", xytext=(5, 5),
                                fontsize=9)
                    break
    ax.set_xscale("log", base=2)
    ax.set_yscale("log")
    ax.invert_xaxis()  # optimization progresses right, toward distance 1
    ax.set_xlabel("target distance to optimum")
    ax.set_ylabel("evaluations to reach target")
    ax.set_title(f"Fixed-target runtimes, n={n}")
    ax.legend()
    ax.grid(True, alpha=0.3)
    _save(fig, spec.out)
    return {"kind": "fixed_target", "n": n, "targets": targets,
            "curves": curves, "crossings": crossings, "out": spec.out}


def plot_switch_hist(spec: FigureSpec) -> dict:
    """Histogram of the distance at which runs switched algorithms, with
    guard (2 e n ln n / k) and band (n / ln^2 n) markers recomputed from
    the CSV's n and k columns."""
    df = load_events(spec.inputs)
    sw = switch_events(df)
    if sw.empty:
        algos = sorted(df["algo"].unique())
        raise PlotDataError(
            f"no switch events in input (algos present: {algos}); "
            "only one-way switching policies record them")
    sizes = sw["n"].unique()
    if len(sizes) != 1:
        raise PlotDataError(
            f"switch histogram needs a single problem size, found {sorted(sizes)}")
    n = int(sizes[0])
    d_prime = n / math.log(n) ** 2
    d_guard = None
    ks = sw["k"].dropna().unique()
    if len(ks) > 1:
        raise PlotDataError(f"mixed stagnation thresholds in input: {sorted(ks)}")
    if len(ks) == 1:
        k = int(ks[0])
        d_guard = 2.0 * math.e * n * math.log(n) / k

    distances = sw["distance"].to_numpy()
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    ax.hist(distances, bins="auto", color="steelblue", alpha=0.8)
    ax.axvline(d_prime, color="darkorange", linestyle="--",
               label=f"band n/ln^2 n = {d_prime:.1f}")
    if d_guard is not None:
        ax.axvline(d_guard, color="crimson", linestyle="--",
                   label=f"guard 2en ln n/k = {d_guard:.1f}")
    ax.set_xlabel("distance to optimum at switch")
    ax.set_ylabel("runs")
    ax.set_title(f"Switch distances, n={n} ({len(distances)} switches)")
    ax.legend()
    ax.grid(True, alpha=0.3)
    _save(fig, spec.out)
    return {"kind": "switch_hist", "n": n, "switches": int(len(distances)),
            "d_prime": d_prime, "d_guard": d_guard, "out": spec.out}
