"""Stochastic variation operators with exact distributional contracts.

All operators are pure: they return fresh arrays and never modify their
inputs.  Position sampling without replacement goes through the shared
Fisher-Yates kernel so the operators and the algorithm drivers draw from
one implementation.
"""

from __future__ import annotations

import numpy as np

from oasbench import _kernels
from oasbench.core import as_bits

__all__ = [
    "standard_bit_mutation",
    "flip_exact_l",
    "biased_crossover",
    "sample_binomial",
    "distinct_positions",
]

# above this count the O(m^2) sparse swap map loses to numpy's dense sampler
_FY_MAX = 1024


def _check_prob(p: float, name: str) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"{name}={p} outside [0, 1]")
    return p


def distinct_positions(n: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """m distinct indices from [0, n), uniform over m-subsets."""
    if not 0 <= m <= n:
        raise ValueError(f"cannot choose {m} distinct positions from {n}")
    if m == 0:
        return np.empty(0, dtype=np.int64)
    if m > _FY_MAX:
        return rng.choice(n, size=m, replace=False).astype(np.int64)
    keys = np.empty(m, dtype=np.int64)
    vals = np.empty(m, dtype=np.int64)
    out = np.empty(m, dtype=np.int64)
    _kernels.fy_positions_jit(n, m, rng, keys, vals, out)
    return out


def sample_binomial(n: int, p: float, rng: np.random.Generator) -> int:
    """One draw from Bin(n, p) via numpy's exact samplers."""
    if n < 0:
        raise ValueError("trial count must be >= 0")
    p = _check_prob(p, "p")
    if n == 0:
        return 0
    return int(rng.binomial(n, p))


def standard_bit_mutation(x, p: float, rng: np.random.Generator) -> np.ndarray:
    """Copy of x with each bit flipped independently with probability p.

    Sampled as a Bin(n, p) flip count at uniformly chosen distinct
    positions, which has exactly the per-bit independent-flip law.
    """
    bits = as_bits(x)
    p = _check_prob(p, "p")
    out = bits.copy()
    m = sample_binomial(bits.size, p, rng)
    if m:
        out[distinct_positions(bits.size, m, rng)] ^= 1
    return out


def flip_exact_l(x, l: int, rng: np.random.Generator) -> np.ndarray:
    """Copy of x with exactly l distinct uniformly chosen bits flipped."""
    bits = as_bits(x)
    if not 0 <= l <= bits.size:
        raise ValueError(f"flip count l={l} outside [0, {bits.size}]")
    out = bits.copy()
    if l:
        out[distinct_positions(bits.size, l, rng)] ^= 1
    return out


def biased_crossover(x, donor, c: float, rng: np.random.Generator) -> np.ndarray:
    """Per-position mix of x and donor, taking the donor bit with probability c."""
    a = as_bits(x)
    b = as_bits(donor)
    if a.shape != b.shape:
        raise ValueError("x and donor must have equal length")
    c = _check_prob(c, "c")
    take = rng.random(a.size) < c
    return np.where(take, b, a).astype(np.uint8)
