"""Exact combinatorial improvement probabilities and reference bound scales.

The improvement oracles are computed with exact rational arithmetic and
converted to float at the boundary; they are the ground truth the
simulation paths are tested against.  The bound calculators evaluate
unit-constant instantiations of asymptotic upper-bound expressions; they
are reference scales for reports and plots, never two-sided truths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "p_improve_opo",
    "p_improve_opo_exact",
    "p_level_leave",
    "BoundEstimate",
    "ollga_fixed_start_bound",
    "ollga_lambda_star",
    "olea_fixed_target_bound",
    "known_switch_bound",
]

# exact-summation regime; larger instances belong to the Monte Carlo side
MAX_EXACT_N = 30


def _check_nd(n: int, d: int) -> None:
    if not 1 <= n <= MAX_EXACT_N:
        raise ValueError(f"exact oracle supports 1 <= n <= {MAX_EXACT_N}, got {n}")
    if not 0 <= d <= n:
        raise ValueError(f"distance d={d} outside [0, {n}]")


def p_improve_opo_exact(n: int, d: int) -> Fraction:
    """Exact probability that one standard-bit-mutation offspring at rate
    1/n strictly improves OneMax fitness from distance d.

    Sums over a zero-bits and b one-bits flipped with b < a:
    C(d,a) C(n-d,b) (1/n)^(a+b) (1-1/n)^(n-a-b).
    """
    _check_nd(n, d)
    p = Fraction(1, n)
    q = 1 - p
    total = Fraction(0)
    for a in range(1, d + 1):
        for b in range(0, min(a - 1, n - d) + 1):
            total += (math.comb(d, a) * math.comb(n - d, b)
                      * p ** (a + b) * q ** (n - a - b))
    return total


def p_improve_opo(n: int, d: int) -> float:
    """Float boundary value of p_improve_opo_exact."""
    return float(p_improve_opo_exact(n, d))


def _p_improve_opo_float(n: int, d: int) -> float:
    """Pure floating-point twin of the exact sum, kept for cross-checking."""
    _check_nd(n, d)
    p = 1.0 / n
    q = 1.0 - p
    total = 0.0
    for a in range(1, d + 1):
        for b in range(0, min(a - 1, n - d) + 1):
            total += (math.comb(d, a) * math.comb(n - d, b)
                      * p ** (a + b) * q ** (n - a - b))
    return total


def p_level_leave(n: int, d: int, lam: int) -> float:
    """Probability that at least one of lam independent standard-bit-mutation
    offspring strictly improves from distance d: 1 - (1 - q)^lam."""
    if lam < 1:
        raise ValueError("lambda must be >= 1")
    q = p_improve_opo_exact(n, d)
    return float(1 - (1 - q) ** lam)


@dataclass(frozen=True)
class BoundEstimate:
    """Reference bound value (expected-evaluation scale) and the case it used."""

    value: float
    regime: str


def _ln_plus(x: float) -> float:
    """max(ln x, 1); collapses sub-e arguments to 1."""
    return max(math.log(x), 1.0) if x > 0 else 1.0


def ollga_fixed_start_bound(n: int, d_start: int, lam: int) -> BoundEstimate:
    """Unit-constant reference for the GA started at distance d_start:
    (n / lam) ln(d_start) + d_start * lam."""
    if d_start < 1:
        raise ValueError("start distance must be >= 1 (zero distance costs 0)")
    if not 1 <= lam <= n:
        raise ValueError(f"lambda={lam} outside [1, n={n}]")
    value = (n / lam) * math.log(d_start) + d_start * lam
    return BoundEstimate(value, "ga_fixed_start")


def ollga_lambda_star(n: int, d_start: int) -> float:
    """Population size minimizing the fixed-start reference bound:
    sqrt(n ln(d_start) / d_start)."""
    if d_start < 1:
        raise ValueError("start distance must be >= 1")
    return math.sqrt(n * math.log(d_start) / d_start)


def olea_fixed_target_bound(n: int, d_target: int, lam: int) -> BoundEstimate:
    """Unit-constant reference for the (1+lam) EA reaching distance d_target.

    Far targets (d_target >= n/lam) cost n lam lnp(lnp(lam)) / lnp(lam);
    nearer targets add n lnp(n / (lam (d_target + 1))), with
    lnp(x) = max(ln x, 1).
    """
    if not 0 <= d_target <= n:
        raise ValueError(f"target distance {d_target} outside [0, {n}]")
    if lam < 1:
        raise ValueError("lambda must be >= 1")
    base = n * lam * _ln_plus(_ln_plus(lam)) / _ln_plus(lam)
    if d_target >= n / lam:
        return BoundEstimate(base, "far_target")
    extra = n * _ln_plus(n / (lam * (d_target + 1)))
    return BoundEstimate(base + extra, "near_target")


def known_switch_bound(n: int, d_switch: int, lam1: int, lam2: int) -> BoundEstimate:
    """Unit-constant reference for switching from the EA to the GA at
    distance d_switch: EA fixed-target cost plus (n/lam2) ln(max(d,1)) +
    d * lam2."""
    if not 1 <= lam2 <= n:
        raise ValueError(f"lambda2={lam2} outside [1, n={n}]")
    ea = olea_fixed_target_bound(n, d_switch, lam1)
    ga = (n / lam2) * math.log(max(d_switch, 1)) + d_switch * lam2
    return BoundEstimate(ea.value + ga, ea.regime)
