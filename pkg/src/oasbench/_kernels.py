"""JIT-compiled inner loops for the two algorithms.

All randomness is drawn from the caller's numpy Generator; numba's
Generator bindings advance the same PCG64 state with bit-identical draws,
so trajectories are reproducible regardless of batching.

Flip positions are sampled by a partial Fisher-Yates shuffle over a virtual
identity array (sparse swap map with linear scans; flip counts are tiny in
practice), which is exactly uniform over distinct position sets without
rejection loops.
"""

from __future__ import annotations

import numpy as np
from numba import njit

NEG = -(1 << 40)

# stop reasons returned by the step drivers
IMPROVED = 1     # last step strictly improved fitness
FAIL_STREAK = 2  # max_fails consecutive non-improving steps executed
BUFFER_END = 3   # variate buffer exhausted, refill and re-enter
STEP_CAP = 4     # max_steps executed
SCRATCH = 5      # flip count exceeds scratch capacity, regrow and re-enter


@njit(cache=True, inline="always")
def fy_positions(n, m, rng, keys, vals, out):
    """Write m distinct positions from [0, n) into out[:m], uniformly.

    The swap map appends one (key, value) entry per draw; later entries
    override earlier ones, so lookups must scan backward.
    """
    for j in range(m):
        r = rng.integers(j, n)
        av = r
        for t in range(j - 1, -1, -1):
            if keys[t] == r:
                av = vals[t]
                break
        aj = j
        for t in range(j - 1, -1, -1):
            if keys[t] == j:
                aj = vals[t]
                break
        out[j] = av
        keys[j] = r
        vals[j] = aj


@njit(cache=True)
def fy_positions_jit(n, m, rng, keys, vals, out):
    """Non-inlined entry point for callers outside the drivers."""
    fy_positions(n, m, rng, keys, vals, out)


@njit(cache=True)
def ea_drive(bits, n, fitness, lam, counts, start, rng,
             max_steps, max_fails, keys, vals, cand, best):
    """Run (1+lam) EA steps until a strict improvement, a failure streak,
    the step cap, or the end of the flip-count buffer.

    counts holds pre-drawn Bin(n, 1/n) flip counts, lam per step, consumed
    from index start.  bits and fitness are updated through the returned
    tuple; each step charges lam evaluations (accounted by the caller from
    the step count).

    Returns (steps_executed, new_fitness, reason).
    """
    cap = cand.shape[0]
    total = counts.shape[0]
    pos = start
    steps = 0
    fails = 0
    while steps < max_steps and fails < max_fails:
        if pos + lam > total:
            return steps, fitness, BUFFER_END
        # scratch guard; Bin(n, 1/n) makes this unreachable in practice
        for i in range(lam):
            if counts[pos + i] > cap:
                return steps, fitness, SCRATCH
        best_delta = NEG
        best_m = 0
        ties = 0
        for i in range(lam):
            m = counts[pos + i]
            fy_positions(n, m, rng, keys, vals, cand)
            s = 0
            for j in range(m):
                s += bits[cand[j]]
            delta = m - 2 * s
            take = False
            if delta > best_delta:
                ties = 1
                take = True
            elif delta == best_delta:
                ties += 1
                if rng.random() * ties < 1.0:
                    take = True
            if take:
                best_delta = delta
                best_m = m
                for j in range(m):
                    best[j] = cand[j]
        pos += lam
        steps += 1
        if best_delta >= 0:
            for j in range(best_m):
                bits[best[j]] ^= 1
            if best_delta > 0:
                return steps, fitness + best_delta, IMPROVED
        fails += 1
    if steps >= max_steps:
        return steps, fitness, STEP_CAP
    return steps, fitness, FAIL_STREAK


@njit(cache=True)
def ga_drive(bits, n, fitness, lam, c, ells, start, rng,
             max_steps, max_fails, keys, vals, posm, wmask, cmask):
    """Run (1+(lam,lam)) GA steps with the same stopping contract as ea_drive.

    ells holds pre-drawn Bin(n, lam/n) mutation strengths, one per step.
    Each step charges 2*lam evaluations (accounted by the caller).

    Returns (steps_executed, new_fitness, reason).
    """
    cap = posm.shape[1]
    total = ells.shape[0]
    pos = start
    steps = 0
    fails = 0
    while steps < max_steps and fails < max_fails:
        if pos >= total:
            return steps, fitness, BUFFER_END
        ell = ells[pos]
        if ell > cap:
            return steps, fitness, SCRATCH
        pos += 1
        steps += 1
        if ell == 0:
            # all mutants and all crossover offspring equal the parent:
            # equal-fitness acceptance, never an improvement
            fails += 1
            continue
        # mutation phase: lam offspring at Hamming distance exactly ell
        best_delta = NEG
        wi = 0
        ties = 0
        for i in range(lam):
            fy_positions(n, ell, rng, keys, vals, posm[i])
            s = 0
            for j in range(ell):
                s += bits[posm[i, j]]
            delta = ell - 2 * s
            take = False
            if delta > best_delta:
                ties = 1
                take = True
            elif delta == best_delta:
                ties += 1
                if rng.random() * ties < 1.0:
                    take = True
            if take:
                best_delta = delta
                wi = i
        # crossover phase: each offspring takes donor bits with probability c;
        # the donor differs from the parent exactly at the winner's positions
        wpos = posm[wi]
        cbest = NEG
        ties = 0
        for i in range(lam):
            d = 0
            for j in range(ell):
                if rng.random() < c:
                    cmask[j] = 1
                    d += 1 - 2 * bits[wpos[j]]
                else:
                    cmask[j] = 0
            take = False
            if d > cbest:
                ties = 1
                take = True
            elif d == cbest:
                ties += 1
                if rng.random() * ties < 1.0:
                    take = True
            if take:
                cbest = d
                for j in range(ell):
                    wmask[j] = cmask[j]
        if cbest >= 0:
            for j in range(ell):
                if wmask[j]:
                    bits[wpos[j]] ^= 1
            if cbest > 0:
                return steps, fitness + cbest, IMPROVED
        fails += 1
    if steps >= max_steps:
        return steps, fitness, STEP_CAP
    return steps, fitness, FAIL_STREAK
