"""Benchmark lab for online algorithm selection on OneMax.

Exact, cost-accounted implementations of the (1+lambda) EA and the
(1+(lambda,lambda)) GA, three switching policies (idealized distance
trigger, stagnation trigger, per-iteration hyper-heuristic), exact
small-instance improvement oracles, and a seeded experiment harness
with fixed-target and fixed-start instrumentation.
"""

from oasbench.core import (
    OneMaxCounter,
    hamming_distance,
    init_at_distance,
    init_random,
    onemax,
    stream_rng,
)
from oasbench.algorithms import (
    OneLambdaLambdaGA,
    OnePlusLambdaEA,
    StepOutcome,
    run_to_target,
)
from oasbench.policies import PolicyParams, default_params, selector_loop
from oasbench.trace import RunTrace, TraceEvent, fixed_target_times

__version__ = "0.1.0"

__all__ = [
    "OneMaxCounter",
    "OneLambdaLambdaGA",
    "OnePlusLambdaEA",
    "PolicyParams",
    "RunTrace",
    "StepOutcome",
    "TraceEvent",
    "default_params",
    "fixed_target_times",
    "hamming_distance",
    "init_at_distance",
    "init_random",
    "onemax",
    "run_to_target",
    "selector_loop",
    "stream_rng",
]
