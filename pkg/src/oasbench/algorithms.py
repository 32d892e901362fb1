"""Steppable, cost-accounted (1+lambda) EA and (1+(lambda,lambda)) GA.

Both algorithms expose one-iteration granularity through step() so policies
can interleave them, plus a batched drive() used by the run loops.  drive()
executes the identical per-step logic inside a compiled kernel and stops at
exactly the points a policy can react to: a strict improvement, a run of
consecutive non-improving steps, or a step cap.  Trajectories and random
streams are bit-identical between the two entry points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from oasbench import _kernels
from oasbench.core import as_bits, onemax
from oasbench.trace import IMPROVEMENT, TraceEvent

__all__ = [
    "StepOutcome",
    "OnePlusLambdaEA",
    "OneLambdaLambdaGA",
    "run_to_target",
    "TargetRunResult",
    "NO_FAIL_CAP",
]

NO_FAIL_CAP = 1 << 60


@dataclass(frozen=True)
class StepOutcome:
    cost: int
    improved: bool
    new_fitness: int


class _ElitistAlgorithm:
    """Shared state and buffer plumbing; subclasses bind a step kernel."""

    algo_name = ""

    def __init__(self, bits, lam: int):
        self.bits = as_bits(bits)
        self.n = int(self.bits.size)
        self.lam = int(lam)
        self.fitness = onemax(self.bits)
        self.evaluations = 0
        self._variates = np.empty(0, dtype=np.int64)
        self._vi = 0

    @property
    def distance(self) -> int:
        return self.n - self.fitness

    @property
    def step_cost(self) -> int:
        raise NotImplementedError

    def _refill(self, rng) -> None:
        raise NotImplementedError

    def _grow_scratch(self) -> None:
        raise NotImplementedError

    def _kernel(self, rng, max_steps, max_fails):
        raise NotImplementedError

    def _per_step_variates(self) -> int:
        raise NotImplementedError

    def drive(self, rng: np.random.Generator, max_steps: int,
              max_fails: int = NO_FAIL_CAP) -> tuple[int, bool]:
        """Run steps until a strict improvement, max_fails consecutive
        non-improving steps, or max_steps steps.

        Returns (steps_executed, improved).  Cost accounting: exactly
        steps_executed * step_cost evaluations are charged.
        """
        done = 0
        fails = 0
        cost = self.step_cost
        per = self._per_step_variates()
        while True:
            if self._vi + per > self._variates.size:
                self._refill(rng)
            steps, fit, reason = self._kernel(rng, max_steps - done, max_fails - fails)
            self._vi += steps * per
            self.evaluations += steps * cost
            self.fitness = int(fit)
            done += steps
            if reason == _kernels.IMPROVED:
                return done, True
            fails += steps
            if reason in (_kernels.FAIL_STREAK, _kernels.STEP_CAP):
                return done, False
            if reason == _kernels.SCRATCH:
                self._grow_scratch()
            # BUFFER_END falls through to a refill

    def step(self, rng: np.random.Generator) -> StepOutcome:
        """Execute exactly one iteration."""
        _, improved = self.drive(rng, max_steps=1)
        return StepOutcome(self.step_cost, improved, self.fitness)


class OnePlusLambdaEA(_ElitistAlgorithm):
    """(1+lambda) EA: lambda offspring by per-bit mutation at rate 1/n,
    best offspring (ties uniform) replaces the parent if not worse."""

    algo_name = "ea"

    def __init__(self, bits, lam: int = 1):
        if lam < 1:
            raise ValueError("population size lambda must be >= 1")
        super().__init__(bits, lam)
        cap = min(self.n, 256)
        self._keys = np.empty(cap, dtype=np.int64)
        self._vals = np.empty(cap, dtype=np.int64)
        self._cand = np.empty(cap, dtype=np.int64)
        self._best = np.empty(cap, dtype=np.int64)
        self._chunk = self.lam * max(1, min(2048, (1 << 17) // self.lam))

    @property
    def step_cost(self) -> int:
        return self.lam

    def _per_step_variates(self) -> int:
        return self.lam

    def _refill(self, rng) -> None:
        self._variates = rng.binomial(self.n, 1.0 / self.n, size=self._chunk)
        self._vi = 0

    def _grow_scratch(self) -> None:
        need = int(self._variates[self._vi:self._vi + self.lam].max())
        cap = min(self.n, 2 * need)
        for name in ("_keys", "_vals", "_cand", "_best"):
            setattr(self, name, np.empty(cap, dtype=np.int64))

    def _kernel(self, rng, max_steps, max_fails):
        return _kernels.ea_drive(
            self.bits, self.n, self.fitness, self.lam,
            self._variates, self._vi, rng, max_steps, max_fails,
            self._keys, self._vals, self._cand, self._best)


class OneLambdaLambdaGA(_ElitistAlgorithm):
    """(1+(lambda,lambda)) GA with mutation rate lambda/n and crossover
    bias 1/lambda.

    One iteration: draw ell ~ Bin(n, lambda/n); create lambda mutants at
    Hamming distance exactly ell (mutation winner by fitness, ties
    uniform); create lambda biased crossovers of parent and winner; the
    best crossover offspring replaces the parent if not worse than it.
    Costs 2*lambda evaluations.
    """

    algo_name = "ollga"

    def __init__(self, bits, lam: int):
        bits = as_bits(bits)
        if not 1 <= lam <= bits.size:
            raise ValueError(
                f"lambda={lam} outside [1, n={bits.size}] for the GA")
        super().__init__(bits, lam)
        self._cap = min(self.n, max(64, 4 * self.lam))
        self._alloc_scratch()
        self._chunk = 2048

    def _alloc_scratch(self) -> None:
        cap = self._cap
        self._keys = np.empty(cap, dtype=np.int64)
        self._vals = np.empty(cap, dtype=np.int64)
        self._posm = np.empty((self.lam, cap), dtype=np.int64)
        self._wmask = np.empty(cap, dtype=np.uint8)
        self._cmask = np.empty(cap, dtype=np.uint8)

    @property
    def step_cost(self) -> int:
        return 2 * self.lam

    def _per_step_variates(self) -> int:
        return 1

    def _refill(self, rng) -> None:
        self._variates = rng.binomial(self.n, self.lam / self.n, size=self._chunk)
        self._vi = 0

    def _grow_scratch(self) -> None:
        self._cap = min(self.n, 2 * int(self._variates[self._vi]))
        self._alloc_scratch()

    def _kernel(self, rng, max_steps, max_fails):
        return _kernels.ga_drive(
            self.bits, self.n, self.fitness, self.lam, 1.0 / self.lam,
            self._variates, self._vi, rng, max_steps, max_fails,
            self._keys, self._vals, self._posm, self._wmask, self._cmask)


@dataclass
class TargetRunResult:
    """Outcome of run_to_target: improvement events, cost, and how it ended."""

    events: list[TraceEvent]
    cost: int
    reached: bool

    @property
    def budget_exhausted(self) -> bool:
        return not self.reached


def run_to_target(algo: _ElitistAlgorithm, target_fitness: int, budget: int,
                  rng: np.random.Generator) -> TargetRunResult:
    """Step algo until fitness >= target_fitness or the budget cannot fund
    another full iteration.  Budget exhaustion is an outcome, not an error.
    """
    if budget < 0:
        raise ValueError("budget must be >= 0")
    if not 0 <= target_fitness <= algo.n:
        raise ValueError(f"target fitness outside [0, {algo.n}]")
    events: list[TraceEvent] = []
    start = algo.evaluations
    while algo.fitness < target_fitness:
        room = (budget - (algo.evaluations - start)) // algo.step_cost
        if room < 1:
            return TargetRunResult(events, algo.evaluations - start, False)
        _, improved = algo.drive(rng, max_steps=room)
        if improved:
            events.append(TraceEvent(IMPROVEMENT, algo.evaluations - start,
                                     algo.fitness, algo.n - algo.fitness))
    return TargetRunResult(events, algo.evaluations - start, True)
