import math as maths

import numpy as np
import pytest
import scipy.stats

from shufflesum.dp import noise
from shufflesum.utils.rng import make_generator


def test_zero_noise() -> None:
    mechanism = noise.zero_noise()
    assert mechanism.truncation_bound == 0
    assert mechanism.delta_noise == 0
    assert np.array_equal(mechanism.sample(make_generator(0), 5), np.zeros(5, dtype=np.int64))


def test_polya_truncation_bound() -> None:
    n, alpha, delta_noise = 100, maths.exp(-0.1), 2**-21
    bound = noise.polya_truncation_bound(1 / n, alpha, n, delta_noise)
    distribution = scipy.stats.nbinom(1 / n, 1 - alpha)
    assert bound > 0
    assert 2 * n * distribution.sf(bound) <= delta_noise
    assert 2 * n * distribution.sf(bound - 1) > delta_noise


def test_polya_noise_aggregate_is_discrete_laplace() -> None:
    n, scale, epsilon = 10, 3, 1.0
    mechanism = noise.polya_noise(epsilon, n, scale, 1e-6)
    assert mechanism.delta_noise == pytest.approx(0.5e-6)
    assert mechanism.aggregate_distribution_name == "discrete-laplace (polya-difference)"

    rng = make_generator(11)
    trials = 20_000
    totals = np.array([mechanism.sample(rng, n).sum() for _ in range(trials)])
    alpha = maths.exp(-epsilon / scale)
    assert abs(totals.mean()) <= 5 * maths.sqrt(2 * alpha / (1 - alpha) ** 2 / trials)
    assert totals.var() == pytest.approx(2 * alpha / (1 - alpha) ** 2, rel=0.1)
    assert np.mean(totals == 0) == pytest.approx((1 - alpha) / (1 + alpha), abs=0.015)


def test_polya_noise_respects_bound() -> None:
    mechanism = noise.polya_noise(0.5, 50, 7, 0.01, truncation_delta_fraction=0.9)
    samples = mechanism.sample(make_generator(3), 100_000)
    assert np.abs(samples).max() <= mechanism.truncation_bound
    assert samples.dtype == np.int64


def test_noise_sample_checks_bound() -> None:
    mechanism = noise.NoiseMechanism(lambda rng, size: np.full(size, 3), "constant", 2)
    with pytest.raises(AssertionError):
        mechanism.sample(make_generator(0), 4)


def test_polya_noise_invalid() -> None:
    with pytest.raises(ValueError):
        noise.polya_noise(1.0, 10, 3, 0.1, truncation_delta_fraction=1.0)
    with pytest.raises(ValueError):
        noise.polya_noise(0.0, 10, 3, 0.1)
    with pytest.raises(ValueError):
        noise.polya_noise(1.0, 0, 3, 0.1)
