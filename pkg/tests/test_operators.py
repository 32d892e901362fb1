import math

import numpy as np
import pytest
from scipy import stats

from oasbench.core import hamming_distance, stream_rng
from oasbench.operators import (
    biased_crossover,
    distinct_positions,
    flip_exact_l,
    sample_binomial,
    standard_bit_mutation,
)


def test_mutation_certain_flip_is_complement():
    rng = stream_rng(1, 0)
    assert standard_bit_mutation([0], 1.0, rng)[0] == 1
    x = np.array([1, 0, 1, 1, 0], np.uint8)
    assert np.array_equal(standard_bit_mutation(x, 1.0, rng), 1 - x)


def test_mutation_zero_rate_is_identity():
    rng = stream_rng(2, 0)
    x = np.array([1, 0, 0, 1], np.uint8)
    assert np.array_equal(standard_bit_mutation(x, 0.0, rng), x)


def test_mutation_leaves_input_unchanged():
    rng = stream_rng(3, 0)
    x = np.zeros(64, np.uint8)
    before = x.copy()
    standard_bit_mutation(x, 0.5, rng)
    assert np.array_equal(x, before)


def test_mutation_rejects_bad_rate():
    rng = stream_rng(0, 0)
    with pytest.raises(ValueError):
        standard_bit_mutation([1, 0], 1.5, rng)
    with pytest.raises(ValueError):
        standard_bit_mutation([1, 0], -0.1, rng)


def test_mutation_flip_count_matches_binomial_pmf():
    # chi-square of observed flip counts against the exact Bin(100, 0.01) PMF
    rng = stream_rng(20240, 0)
    n, p, draws = 100, 0.01, 100_000
    x = np.zeros(n, np.uint8)
    counts = np.zeros(n + 1, dtype=np.int64)
    for _ in range(draws):
        counts[int(standard_bit_mutation(x, p, rng).sum())] += 1
    pmf = np.array([math.comb(n, k) * p**k * (1 - p) ** (n - k) for k in range(n + 1)])
    # pool the sparse tail so expected cell counts stay reasonable
    cut = 6
    observed = np.append(counts[:cut], counts[cut:].sum())
    expected = np.append(pmf[:cut], pmf[cut:].sum()) * draws
    res = stats.chisquare(observed, expected)
    assert res.pvalue > 0.001


def test_mutation_per_bit_flip_frequency_uniform():
    # each position must flip with frequency 1/n within 3 binomial sigma
    rng = stream_rng(99, 0)
    n, draws = 32, 100_000
    p = 1.0 / n
    x = np.zeros(n, np.uint8)
    flips = np.zeros(n, dtype=np.int64)
    for _ in range(draws):
        flips += standard_bit_mutation(x, p, rng)
    sigma = math.sqrt(p * (1 - p) / draws)
    freq = flips / draws
    assert np.all(np.abs(freq - p) <= 3 * sigma)


def test_flip_exact_l_extremes():
    rng = stream_rng(4, 0)
    x = np.array([1, 0, 1, 0, 1, 1], np.uint8)
    assert np.array_equal(flip_exact_l(x, 0, rng), x)
    assert np.array_equal(flip_exact_l(x, 6, rng), 1 - x)
    with pytest.raises(ValueError):
        flip_exact_l(x, 7, rng)


def test_flip_exact_l_hamming_contract():
    rng = stream_rng(5, 0)
    for _ in range(200):
        n = int(rng.integers(1, 40))
        l = int(rng.integers(0, n + 1))
        x = rng.integers(0, 2, size=n, dtype=np.uint8)
        y = flip_exact_l(x, l, rng)
        assert hamming_distance(x, y) == l


def test_flip_exact_l_large_count_path():
    # counts above the Fisher-Yates cutoff go through the dense sampler
    rng = stream_rng(6, 0)
    x = np.zeros(3000, np.uint8)
    y = flip_exact_l(x, 2100, rng)
    assert int(y.sum()) == 2100


def test_flip_exact_l_pair_uniformity():
    # n=6, l=2: all 15 position pairs equally likely
    rng = stream_rng(77, 0)
    draws = 30_000
    from collections import Counter
    seen = Counter()
    x = np.zeros(6, np.uint8)
    for _ in range(draws):
        y = flip_exact_l(x, 2, rng)
        seen[tuple(np.flatnonzero(y))] += 1
    assert len(seen) == 15
    observed = np.array([seen[k] for k in sorted(seen)])
    res = stats.chisquare(observed)
    assert res.pvalue > 0.001


def test_crossover_full_bias_returns_donor():
    rng = stream_rng(7, 0)
    x = np.zeros(30, np.uint8)
    donor = stream_rng(8, 0).integers(0, 2, 30, dtype=np.uint8)
    assert np.array_equal(biased_crossover(x, donor, 1.0, rng), donor)


def test_crossover_identical_parents_fixed_point():
    rng = stream_rng(9, 0)
    x = stream_rng(10, 0).integers(0, 2, 25, dtype=np.uint8)
    for c in (0.0, 0.3, 1.0):
        assert np.array_equal(biased_crossover(x, x.copy(), c, rng), x)


def test_crossover_output_bits_come_from_parents():
    rng = stream_rng(11, 0)
    x = np.zeros(40, np.uint8)
    donor = np.ones(40, np.uint8)
    for _ in range(50):
        y = biased_crossover(x, donor, 0.4, rng)
        assert set(np.unique(y)) <= {0, 1}
    # positions where parents agree never change
    x2 = np.array([1, 1, 0, 0], np.uint8)
    d2 = np.array([1, 0, 0, 1], np.uint8)
    for _ in range(50):
        y = biased_crossover(x2, d2, 0.5, rng)
        assert y[0] == 1 and y[2] == 0


def test_crossover_rejects_mismatch_and_bad_bias():
    rng = stream_rng(0, 0)
    with pytest.raises(ValueError):
        biased_crossover([1, 0], [1, 0, 1], 0.5, rng)
    with pytest.raises(ValueError):
        biased_crossover([1, 0], [0, 1], 1.2, rng)


def test_crossover_takes_binomial_many_donor_bits():
    # 10 differing positions at c=0.2: donor-valued count has mean 2
    rng = stream_rng(123, 0)
    n, diff, c, draws = 50, 10, 0.2, 100_000
    x = np.zeros(n, np.uint8)
    donor = x.copy()
    donor[:diff] = 1
    total = 0
    for _ in range(draws):
        total += int(biased_crossover(x, donor, c, rng).sum())
    mean = total / draws
    sigma = math.sqrt(diff * c * (1 - c) / draws)
    assert abs(mean - diff * c) <= 3 * sigma


def test_sample_binomial_degenerate():
    rng = stream_rng(12, 0)
    assert sample_binomial(100, 0.0, rng) == 0
    assert sample_binomial(100, 1.0, rng) == 100
    assert sample_binomial(0, 0.5, rng) == 0
    with pytest.raises(ValueError):
        sample_binomial(-1, 0.5, rng)
    with pytest.raises(ValueError):
        sample_binomial(10, 2.0, rng)


def test_sample_binomial_mean():
    rng = stream_rng(13, 0)
    n, p, draws = 1000, 0.007, 100_000
    total = sum(sample_binomial(n, p, rng) for _ in range(draws))
    mean = total / draws
    sigma = math.sqrt(n * p * (1 - p) / draws)
    assert abs(mean - n * p) <= 3 * sigma


def test_distinct_positions_contract():
    rng = stream_rng(14, 0)
    for _ in range(100):
        n = int(rng.integers(1, 64))
        m = int(rng.integers(0, n + 1))
        pos = distinct_positions(n, m, rng)
        assert pos.size == m
        assert len(set(pos.tolist())) == m
        assert all(0 <= p < n for p in pos.tolist())
    with pytest.raises(ValueError):
        distinct_positions(5, 6, rng)
