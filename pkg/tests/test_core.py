import numpy as np
import pytest

from oasbench.core import (
    OneMaxCounter,
    as_bits,
    hamming_distance,
    init_at_distance,
    init_random,
    onemax,
    stream_rng,
)


def test_onemax_direct_counts():
    assert onemax([1, 1, 1, 1]) == 4
    assert onemax([0, 0, 0]) == 0
    assert onemax([1, 0, 1, 1, 0]) == 3


def test_onemax_permutation_invariant():
    rng = stream_rng(11, 0)
    x = init_random(50, rng)
    for _ in range(20):
        perm = rng.permutation(50)
        assert onemax(x[perm]) == onemax(x)


def test_counter_charges_one_per_call():
    c = OneMaxCounter()
    assert c.evaluations == 0
    c.evaluate([1, 0, 1])
    c.evaluate([0, 0])
    assert c.evaluations == 2


def test_as_bits_rejects_bad_input():
    with pytest.raises(ValueError):
        as_bits([0, 2, 1])
    with pytest.raises(ValueError):
        as_bits([[0, 1], [1, 0]])
    with pytest.raises(ValueError):
        as_bits([])


def test_init_random_rejects_zero_size():
    with pytest.raises(ValueError):
        init_random(0, stream_rng(0, 0))


def test_init_random_single_bit_can_come_up_one():
    values = {int(init_random(1, stream_rng(seed, 0))[0]) for seed in range(12)}
    assert values == {0, 1}
    assert init_random(1, stream_rng(0, 0)).shape == (1,)


def test_init_random_length_contract():
    rng = stream_rng(3, 0)
    for _ in range(50):
        assert init_random(8, rng).size == 8


def test_init_random_mean_fitness_matches_binomial():
    rng = stream_rng(7, 0)
    draws = 100_000
    total = sum(onemax(init_random(4, rng)) for _ in range(draws))
    mean = total / draws
    # fitness ~ Bin(4, 1/2): mean 2, per-draw sd 1
    assert abs(mean - 2.0) <= 3.0 / np.sqrt(draws)


def test_init_at_distance_extremes():
    rng = stream_rng(1, 0)
    assert np.array_equal(init_at_distance(5, 0, rng), np.ones(5, np.uint8))
    assert np.array_equal(init_at_distance(5, 5, rng), np.zeros(5, np.uint8))
    for _ in range(20):
        assert onemax(init_at_distance(5, 2, rng)) == 3


def test_init_at_distance_fitness_forced_exhaustive():
    rng = stream_rng(2, 0)
    for n in range(1, 13):
        for d in range(n + 1):
            assert onemax(init_at_distance(n, d, rng)) == n - d


def test_init_at_distance_fitness_forced_large():
    rng = stream_rng(4, 0)
    for d in (0, 1, 250, 999, 1000):
        assert onemax(init_at_distance(1000, d, rng)) == 1000 - d


def test_init_at_distance_rejects_bad_distance():
    rng = stream_rng(0, 0)
    with pytest.raises(ValueError):
        init_at_distance(5, 6, rng)
    with pytest.raises(ValueError):
        init_at_distance(5, -1, rng)


def test_hamming_distance():
    assert hamming_distance([1, 0, 1], [1, 1, 1]) == 1
    assert hamming_distance([0, 0], [0, 0]) == 0
    with pytest.raises(ValueError):
        hamming_distance([1, 0], [1, 0, 1])


def test_stream_reproducibility_and_independence():
    a = stream_rng(123, 5).integers(0, 1 << 30, size=16)
    b = stream_rng(123, 5).integers(0, 1 << 30, size=16)
    c = stream_rng(123, 6).integers(0, 1 << 30, size=16)
    d = stream_rng(124, 5).integers(0, 1 << 30, size=16)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)
    with pytest.raises(ValueError):
        stream_rng(1, -1)
