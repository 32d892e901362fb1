"""Switching policies and the selector loop that interleaves the algorithms.

Three switching mechanisms are implemented on top of the never-switch
baseline:

* oracle: switch to the GA as soon as the distance to the optimum is at
  most d_switch.  Idealized; legal on OneMax only because the optimum is
  known, and labeled as such in all outputs.
* stagnation: switch after k consecutive non-improving EA iterations.
* hyper-heuristic: per-iteration choice; run the EA while fewer than
  lambda2 consecutive iterations were non-improving, otherwise run GA
  iterations until a strict improvement, then return to the EA.

The first two are one-way: once the GA is engaged it runs to the end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from oasbench.algorithms import (
    NO_FAIL_CAP,
    OneLambdaLambdaGA,
    OnePlusLambdaEA,
    StepOutcome,
)
from oasbench.core import as_bits, init_random
from oasbench.trace import (
    BUDGET_EXHAUSTED,
    IMPROVEMENT,
    OPTIMUM,
    SWITCH,
    RunTrace,
    TraceEvent,
)

__all__ = [
    "PolicyParams",
    "PolicyState",
    "default_params",
    "guard_distance",
    "band_distance",
    "corollary_window_check",
    "oracle_policy_decide",
    "stagnation_policy_decide",
    "hh_schedule",
    "NeverSwitchPolicy",
    "OraclePolicy",
    "StagnationPolicy",
    "HyperHeuristicPolicy",
    "selector_loop",
    "make_policy",
]

StepHook = Callable[[str, int, bool], None]


# ---------------------------------------------------------------------------
# parameters

@dataclass(frozen=True)
class PolicyParams:
    """Switch-policy parameters for problem size n.

    d_guard is the distance above which an early stagnation switch is
    rare; d_prime is the band below which a k-failure streak becomes
    likely.  Both derive from (n, k) and are recomputed, never stored.
    """

    n: int
    lambda1: int = 1
    lambda2: int = 2
    k: int = 1
    d_switch: int = 0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("problem size must be >= 1")
        if self.lambda1 < 1:
            raise ValueError("lambda1 must be >= 1")
        if not 1 <= self.lambda2 <= self.n:
            raise ValueError(f"lambda2={self.lambda2} outside [1, n={self.n}]")
        if self.k < 1:
            raise ValueError("stagnation threshold k must be >= 1")
        if not 0 <= self.d_switch <= self.n:
            raise ValueError(f"d_switch={self.d_switch} outside [0, n={self.n}]")

    @property
    def d_guard(self) -> float:
        return guard_distance(self.n, self.k)

    @property
    def d_prime(self) -> float:
        return band_distance(self.n)

    def replace(self, **kw) -> "PolicyParams":
        cur = dict(n=self.n, lambda1=self.lambda1, lambda2=self.lambda2,
                   k=self.k, d_switch=self.d_switch)
        cur.update(kw)
        return PolicyParams(**cur)


def guard_distance(n: int, k: int) -> float:
    """Guard distance 2 e n ln(n) / k."""
    return 2.0 * math.e * n * math.log(n) / k


def band_distance(n: int) -> float:
    """Band distance n / ln(n)^2."""
    return n / math.log(n) ** 2


def default_params(n: int) -> PolicyParams:
    """Default parameterization: lambda2 = round(ln n) (at least 2),
    k = ceil(2 lambda2 ln n), d_switch = ceil(n (ln ln n)^2 / ln n)."""
    if n < 8:
        raise ValueError("default parameters need n >= 8")
    ln_n = math.log(n)
    lam2 = max(2, round(ln_n))
    k = math.ceil(2 * lam2 * ln_n)
    d_switch = min(n, math.ceil(n * math.log(ln_n) ** 2 / ln_n))
    return PolicyParams(n=n, lambda1=1, lambda2=lam2, k=k, d_switch=d_switch)


def corollary_window_check(n: int, d_switch: int, lambda2: int) -> bool:
    """Whether (d_switch, lambda2) lies in the unit-constant window
    n/ln^3(n) <= D <= n (ln ln n)^2 / ln n  and
    ln n / ln ln n <= lambda2 <= (n / D) ln ln n.
    Boundaries inclusive."""
    if n < 3:
        raise ValueError("window check needs n >= 3")
    ln_n = math.log(n)
    lnln_n = math.log(ln_n)
    d_lo = n / ln_n ** 3
    d_hi = n * lnln_n ** 2 / ln_n
    if not d_lo <= d_switch <= d_hi:
        return False
    lam_lo = ln_n / lnln_n
    lam_hi = (n / d_switch) * lnln_n
    return lam_lo <= lambda2 <= lam_hi


# ---------------------------------------------------------------------------
# decision rules

@dataclass
class PolicyState:
    """Mutable switch bookkeeping for one run."""

    active: str = "EA"
    fail_streak: int = 0
    switched: bool = False
    switch_event: Optional[tuple[int, int]] = None  # (evaluations, distance)


def oracle_policy_decide(state: PolicyState, distance: int,
                         params: PolicyParams) -> bool:
    """Switch iff not yet switched and the distance is at most d_switch."""
    return not state.switched and distance <= params.d_switch


def stagnation_policy_decide(state: PolicyState, outcome: StepOutcome,
                             params: PolicyParams) -> bool:
    """Track consecutive non-improving iterations; switch when the streak
    reaches k.  Any strict improvement resets the streak; equal-fitness
    acceptances do not."""
    if outcome.improved:
        state.fail_streak = 0
        return False
    state.fail_streak += 1
    return state.fail_streak >= params.k


def hh_schedule(state: PolicyState, outcome: StepOutcome, lam: int) -> str:
    """Next algorithm for the hyper-heuristic given the last outcome:
    GA while the no-progress streak is at least lam, EA otherwise."""
    if outcome.improved:
        state.fail_streak = 0
    else:
        state.fail_streak += 1
    return "GA" if state.fail_streak >= lam else "EA"


# ---------------------------------------------------------------------------
# trace assembly

_PRIORITY = {IMPROVEMENT: 0, SWITCH: 1, OPTIMUM: 2, BUDGET_EXHAUSTED: 2}


class _TraceBuilder:
    """Collects events, keeping at most one per evaluation count.

    On a collision the higher-priority kind wins (terminal > switch >
    improvement); the surviving row carries the step's fitness, so merged
    improvements lose no information.
    """

    def __init__(self, n: int):
        self.n = n
        self.events: list[TraceEvent] = []

    def record(self, kind: str, evaluations: int, fitness: int) -> None:
        ev = TraceEvent(kind, evaluations, fitness, self.n - fitness)
        if self.events and self.events[-1].evaluations == evaluations:
            if _PRIORITY[kind] >= _PRIORITY[self.events[-1].kind]:
                self.events[-1] = ev
            return
        self.events.append(ev)


# ---------------------------------------------------------------------------
# policies

class _Policy:
    algo_tag = ""

    def __init__(self, params: PolicyParams):
        self.params = params

    def trace_fields(self) -> dict:
        return {}

    def execute(self, bits: np.ndarray, rng: np.random.Generator, budget: int,
                builder: _TraceBuilder, hook: Optional[StepHook]) -> None:
        raise NotImplementedError


def _drain(algo, tag: str, rng, budget: int, other_evals: int,
           builder: _TraceBuilder, hook: Optional[StepHook]) -> bool:
    """Run algo to the optimum or the budget; True iff optimum reached."""
    n = algo.n
    while True:
        room = (budget - other_evals - algo.evaluations) // algo.step_cost
        if room < 1:
            builder.record(BUDGET_EXHAUSTED, other_evals + algo.evaluations,
                           algo.fitness)
            return False
        steps, improved = algo.drive(rng, max_steps=room, max_fails=NO_FAIL_CAP)
        if hook:
            hook(tag, steps, improved)
        total = other_evals + algo.evaluations
        if improved:
            if algo.fitness == n:
                builder.record(OPTIMUM, total, n)
                return True
            builder.record(IMPROVEMENT, total, algo.fitness)


class NeverSwitchPolicy(_Policy):
    """Degenerate policy: one algorithm from start to finish."""

    def __init__(self, algo: str, lam: int, n: int):
        if algo == "ea":
            params = PolicyParams(n=n, lambda1=lam, lambda2=min(2, n))
            self.algo_tag = "opo-ea" if lam == 1 else "opl-ea"
        elif algo == "ga":
            params = PolicyParams(n=n, lambda2=lam)
            self.algo_tag = "ollga"
        else:
            raise ValueError(f"unknown algorithm {algo!r}")
        super().__init__(params)
        self._algo = algo

    def trace_fields(self) -> dict:
        if self._algo == "ea":
            return {"lambda1": self.params.lambda1}
        return {"lambda2": self.params.lambda2}

    def execute(self, bits, rng, budget, builder, hook):
        if self._algo == "ea":
            algo = OnePlusLambdaEA(bits, self.params.lambda1)
        else:
            algo = OneLambdaLambdaGA(bits, self.params.lambda2)
        if algo.fitness == algo.n:
            builder.record(OPTIMUM, 0, algo.n)
            return
        _drain(algo, self._algo, rng, budget, 0, builder, hook)


class OraclePolicy(_Policy):
    """Idealized distance-triggered switch: EA until the distance to the
    optimum is at most d_switch, then the GA.  One-way."""

    algo_tag = "oas-oracle"

    def trace_fields(self) -> dict:
        p = self.params
        return {"lambda1": p.lambda1, "lambda2": p.lambda2, "d_switch": p.d_switch}

    def execute(self, bits, rng, budget, builder, hook):
        p = self.params
        ea = OnePlusLambdaEA(bits, p.lambda1)
        n = ea.n
        state = PolicyState()
        if ea.fitness == n:
            builder.record(OPTIMUM, 0, n)
            return
        if not oracle_policy_decide(state, ea.distance, p):
            while True:
                room = (budget - ea.evaluations) // ea.step_cost
                if room < 1:
                    builder.record(BUDGET_EXHAUSTED, ea.evaluations, ea.fitness)
                    return
                steps, improved = ea.drive(rng, max_steps=room, max_fails=NO_FAIL_CAP)
                if hook:
                    hook("ea", steps, improved)
                if not improved:
                    builder.record(BUDGET_EXHAUSTED, ea.evaluations, ea.fitness)
                    return
                if ea.fitness == n:
                    builder.record(OPTIMUM, ea.evaluations, n)
                    return
                if oracle_policy_decide(state, ea.distance, p):
                    break
                builder.record(IMPROVEMENT, ea.evaluations, ea.fitness)
        # hand the current point to the GA unchanged; nothing is re-evaluated
        state.switched = True
        state.active = "GA"
        state.switch_event = (ea.evaluations, ea.distance)
        builder.record(SWITCH, ea.evaluations, ea.fitness)
        ga = OneLambdaLambdaGA(ea.bits, p.lambda2)
        _drain(ga, "ga", rng, budget, ea.evaluations, builder, hook)


class StagnationPolicy(_Policy):
    """Switch to the GA after k consecutive non-improving EA iterations."""

    algo_tag = "oas-stagnation"

    def trace_fields(self) -> dict:
        p = self.params
        return {"lambda1": p.lambda1, "lambda2": p.lambda2, "k": p.k}

    def execute(self, bits, rng, budget, builder, hook):
        p = self.params
        ea = OnePlusLambdaEA(bits, p.lambda1)
        n = ea.n
        state = PolicyState()
        if ea.fitness == n:
            builder.record(OPTIMUM, 0, n)
            return
        while True:
            room = (budget - ea.evaluations) // ea.step_cost
            if room < 1:
                builder.record(BUDGET_EXHAUSTED, ea.evaluations, ea.fitness)
                return
            steps, improved = ea.drive(rng, max_steps=room,
                                       max_fails=p.k - state.fail_streak)
            if hook:
                hook("ea", steps, improved)
            if improved:
                state.fail_streak = 0
                if ea.fitness == n:
                    builder.record(OPTIMUM, ea.evaluations, n)
                    return
                builder.record(IMPROVEMENT, ea.evaluations, ea.fitness)
                continue
            state.fail_streak += steps
            if state.fail_streak >= p.k:
                break
            # room exhausted without improvement: budget check on re-entry
        state.switched = True
        state.active = "GA"
        state.switch_event = (ea.evaluations, ea.distance)
        builder.record(SWITCH, ea.evaluations, ea.fitness)
        ga = OneLambdaLambdaGA(ea.bits, p.lambda2)
        _drain(ga, "ga", rng, budget, ea.evaluations, builder, hook)


class HyperHeuristicPolicy(_Policy):
    """Per-iteration schedule: EA while the no-progress streak is below
    lambda2, then GA iterations until a strict improvement.  Emits no
    switch events; the alternation is not a one-way switch."""

    algo_tag = "hh"

    def trace_fields(self) -> dict:
        p = self.params
        return {"lambda1": p.lambda1, "lambda2": p.lambda2}

    def execute(self, bits, rng, budget, builder, hook):
        p = self.params
        lam = p.lambda2
        ea = OnePlusLambdaEA(bits, p.lambda1)
        n = ea.n
        ga = OneLambdaLambdaGA(ea.bits, lam)
        state = PolicyState()
        if ea.fitness == n:
            builder.record(OPTIMUM, 0, n)
            return
        while True:
            total = ea.evaluations + ga.evaluations
            if state.fail_streak < lam:
                algo, tag = ea, "ea"
                max_fails = lam - state.fail_streak
            else:
                # the schedule mandates a GA iteration; if the budget cannot
                # fund one the run is exhausted even if an EA step would fit
                algo, tag = ga, "ga"
                max_fails = NO_FAIL_CAP
            room = (budget - total) // algo.step_cost
            if room < 1:
                builder.record(BUDGET_EXHAUSTED, total, ea.fitness)
                return
            steps, improved = algo.drive(rng, max_steps=room, max_fails=max_fails)
            if hook:
                hook(tag, steps, improved)
            ea.fitness = ga.fitness = algo.fitness
            total = ea.evaluations + ga.evaluations
            if improved:
                state.fail_streak = 0
                if algo.fitness == n:
                    builder.record(OPTIMUM, total, n)
                    return
                builder.record(IMPROVEMENT, total, algo.fitness)
            else:
                state.fail_streak += steps


def make_policy(algo: str, params: PolicyParams) -> _Policy:
    """Policy factory keyed by the harness/CLI algorithm tag."""
    if algo == "opo-ea":
        return NeverSwitchPolicy("ea", 1, params.n)
    if algo == "opl-ea":
        return NeverSwitchPolicy("ea", params.lambda1, params.n)
    if algo == "ollga":
        return NeverSwitchPolicy("ga", params.lambda2, params.n)
    if algo == "oas-oracle":
        return OraclePolicy(params)
    if algo == "oas-stagnation":
        return StagnationPolicy(params)
    if algo == "hh":
        return HyperHeuristicPolicy(params)
    raise ValueError(f"unknown algorithm/policy tag {algo!r}")


def selector_loop(policy: _Policy, n: int, rng: np.random.Generator,
                  budget: int, *, initial_bits=None, run_id: str = "run",
                  seed: int = 0, step_hook: Optional[StepHook] = None) -> RunTrace:
    """Run one policy to the optimum or budget exhaustion and log the trace.

    The start point is uniform random unless initial_bits is given.  The
    best-so-far point is handed to the next algorithm unchanged on a
    switch.
    """
    if budget < 0:
        raise ValueError("budget must be >= 0")
    if initial_bits is None:
        bits = init_random(n, rng)
    else:
        bits = as_bits(initial_bits).copy()
        if bits.size != n:
            raise ValueError("initial point length differs from n")
    f0 = int(bits.sum())
    builder = _TraceBuilder(n)
    policy.execute(bits, rng, budget, builder, step_hook)
    fields = policy.trace_fields()
    return RunTrace(
        run_id=run_id,
        algo=policy.algo_tag,
        n=n,
        seed=seed,
        initial_fitness=f0,
        lambda1=fields.get("lambda1"),
        lambda2=fields.get("lambda2"),
        k=fields.get("k"),
        d_switch=fields.get("d_switch"),
        events=builder.events,
    )
