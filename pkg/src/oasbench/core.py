"""Bitstring search points, the OneMax objective, and seeded random streams.

Search points are numpy uint8 vectors with values in {0, 1}.  The word-level
vector layout is an internal choice; everything downstream relies only on bit
access, flips, and Hamming distance.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "onemax",
    "OneMaxCounter",
    "init_random",
    "init_at_distance",
    "hamming_distance",
    "stream_rng",
    "as_bits",
]


def as_bits(x) -> np.ndarray:
    """Validate and return a {0,1}-valued uint8 vector."""
    a = np.asarray(x, dtype=np.uint8)
    if a.ndim != 1 or a.size < 1:
        raise ValueError("bitstring must be a non-empty 1-d vector")
    if a.max(initial=0) > 1:
        raise ValueError("bitstring entries must be 0 or 1")
    return a


def onemax(x) -> int:
    """Number of one-bits in x."""
    return int(np.asarray(x).sum())


class OneMaxCounter:
    """OneMax wrapped with an evaluation counter.

    Each call to evaluate() charges exactly one fitness evaluation.
    """

    def __init__(self) -> None:
        self.evaluations = 0

    def evaluate(self, x) -> int:
        self.evaluations += 1
        return onemax(x)


def stream_rng(master_seed: int, stream_index: int = 0) -> np.random.Generator:
    """Deterministic per-run random stream.

    Identical (master_seed, stream_index) pairs reproduce identical draw
    sequences; distinct stream indices give statistically independent
    streams (SeedSequence spawn keys).
    """
    if stream_index < 0:
        raise ValueError("stream_index must be non-negative")
    ss = np.random.SeedSequence(entropy=int(master_seed) & (2**64 - 1),
                                spawn_key=(int(stream_index),))
    return np.random.default_rng(ss)


def init_random(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform random bitstring of length n (each bit 1 with probability 1/2)."""
    if n < 1:
        raise ValueError("problem size n must be >= 1")
    return rng.integers(0, 2, size=n, dtype=np.uint8)


def init_at_distance(n: int, d: int, rng: np.random.Generator) -> np.ndarray:
    """Bitstring with exactly d zero-bits at uniformly chosen positions.

    The result has fitness n - d by construction.
    """
    if n < 1:
        raise ValueError("problem size n must be >= 1")
    if not 0 <= d <= n:
        raise ValueError(f"distance d={d} outside [0, {n}]")
    bits = np.ones(n, dtype=np.uint8)
    if d > 0:
        zeros = rng.choice(n, size=d, replace=False)
        bits[zeros] = 0
    return bits


def hamming_distance(a, b) -> int:
    """Number of positions where a and b differ."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError("length mismatch")
    return int(np.count_nonzero(a != b))
