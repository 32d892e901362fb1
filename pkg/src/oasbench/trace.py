"""Run traces: ordered event logs keyed by cumulative evaluation count."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

__all__ = [
    "IMPROVEMENT",
    "SWITCH",
    "OPTIMUM",
    "BUDGET_EXHAUSTED",
    "TERMINAL_KINDS",
    "TraceEvent",
    "RunTrace",
    "fixed_target_times",
]

IMPROVEMENT = "improvement"
SWITCH = "switch"
OPTIMUM = "optimum"
BUDGET_EXHAUSTED = "budget_exhausted"
TERMINAL_KINDS = (OPTIMUM, BUDGET_EXHAUSTED)


class TraceEvent(NamedTuple):
    kind: str
    evaluations: int
    fitness: int
    distance: int


@dataclass
class RunTrace:
    """Event log of one run.

    Events are strictly increasing in cumulative evaluations.  At most one
    event is recorded per evaluation count; when a step both improves and
    triggers a switch or a terminal condition, the switch/terminal event
    carries that step's fitness, so no fitness information is lost.
    """

    run_id: str
    algo: str
    n: int
    seed: int
    initial_fitness: int
    lambda1: Optional[int] = None
    lambda2: Optional[int] = None
    k: Optional[int] = None
    d_switch: Optional[int] = None
    events: list[TraceEvent] = field(default_factory=list)

    @property
    def final_fitness(self) -> int:
        f = self.initial_fitness
        for ev in self.events:
            f = max(f, ev.fitness)
        return f

    @property
    def total_evaluations(self) -> int:
        return self.events[-1].evaluations if self.events else 0

    @property
    def terminal(self) -> Optional[TraceEvent]:
        if self.events and self.events[-1].kind in TERMINAL_KINDS:
            return self.events[-1]
        return None

    def reached_optimum(self) -> bool:
        t = self.terminal
        return t is not None and t.kind == OPTIMUM

    def switch_event(self) -> Optional[TraceEvent]:
        for ev in self.events:
            if ev.kind == SWITCH:
                return ev
        return None

    def validate(self) -> None:
        """Raise ValueError if the trace violates its well-formedness contract."""
        last_evals = -1
        best = self.initial_fitness
        switches = 0
        terminals = 0
        for i, ev in enumerate(self.events):
            if ev.kind not in (IMPROVEMENT, SWITCH, OPTIMUM, BUDGET_EXHAUSTED):
                raise ValueError(f"{self.run_id}: unknown event kind {ev.kind!r}")
            if ev.evaluations <= last_evals:
                raise ValueError(
                    f"{self.run_id}: evaluations not strictly increasing at event {i}")
            last_evals = ev.evaluations
            if ev.distance != self.n - ev.fitness:
                raise ValueError(f"{self.run_id}: distance/fitness mismatch at event {i}")
            if ev.fitness < best:
                raise ValueError(f"{self.run_id}: fitness decreased at event {i}")
            if ev.kind == IMPROVEMENT and ev.fitness <= best:
                raise ValueError(
                    f"{self.run_id}: improvement event without strict gain at event {i}")
            best = max(best, ev.fitness)
            if ev.kind == SWITCH:
                switches += 1
            if ev.kind in TERMINAL_KINDS:
                terminals += 1
                if i != len(self.events) - 1:
                    raise ValueError(f"{self.run_id}: terminal event not last")
                if ev.kind == OPTIMUM and ev.fitness != self.n:
                    raise ValueError(f"{self.run_id}: optimum event below fitness n")
        if switches > 1:
            raise ValueError(f"{self.run_id}: more than one switch event")
        if terminals > 1:
            raise ValueError(f"{self.run_id}: more than one terminal event")


def fixed_target_times(trace: RunTrace, targets: Sequence[int]) -> dict[int, Optional[int]]:
    """Earliest cumulative evaluation count at which fitness reached each target.

    A target at or below the initial fitness reports 0; an unreached target
    reports None.  Fitness between events follows step-function semantics.
    """
    out: dict[int, Optional[int]] = {}
    for t in targets:
        if not 0 <= t <= trace.n:
            raise ValueError(f"target {t} outside [0, {trace.n}]")
        if trace.initial_fitness >= t:
            out[t] = 0
            continue
        hit = None
        for ev in trace.events:
            if ev.fitness >= t:
                hit = ev.evaluations
                break
        out[t] = hit
    return out
