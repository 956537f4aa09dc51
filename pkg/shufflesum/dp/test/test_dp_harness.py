import numpy as np
import pytest

from shufflesum.dp import harness, noise
from shufflesum.dp.params import derive_dp_params


def test_zero_noise_grid_is_exact() -> None:
    params = derive_dp_params(1.0, 2**-20, 16, scale=4)
    xs = np.arange(16) % 5 / 4
    record = harness.dp_sum_experiment(params, noise.zero_noise(), 20, seed=1, xs=xs, n_jobs=1)
    assert record.mean_abs_error == 0
    assert record.max_abs_error == 0
    assert record.wraparounds == 0
    assert record.passed


def test_default_noise_accuracy() -> None:
    params = derive_dp_params(1.0, 2**-20, 100)
    mechanism = noise.polya_noise(params.epsilon, params.n, params.scale, params.delta)
    record = harness.dp_sum_experiment(params, mechanism, 200, seed=4, xs=[0.5] * 100, n_jobs=1)
    assert record.target == 2
    assert record.tolerance == 20
    assert record.wraparounds == 0
    assert record.mean_abs_error > 0
    assert record.passed


def test_experiment_reproducible() -> None:
    params = derive_dp_params(0.5, 2**-10, 20)
    mechanism = noise.polya_noise(params.epsilon, params.n, params.scale, params.delta)
    first = harness.dp_sum_experiment(params, mechanism, 50, seed=123, n_jobs=1)
    second = harness.dp_sum_experiment(params, mechanism, 50, seed=123, n_jobs=2)
    assert first.mean_error == second.mean_error
    assert first.max_abs_error == second.max_abs_error
    assert harness.dp_sum_experiment(params, mechanism, 50, seed=124, n_jobs=1).mean_error != first.mean_error


def test_experiment_invalid_inputs() -> None:
    params = derive_dp_params(1.0, 2**-20, 16, scale=4)
    with pytest.raises(ValueError):
        harness.dp_sum_experiment(params, noise.zero_noise(), 10, seed=0, xs=[0.5] * 15)
    with pytest.raises(ValueError):
        harness.dp_sum_experiment(params, noise.zero_noise(), 10, seed=0, xs=[1.5] * 16)
    with pytest.raises(ValueError):
        harness.dp_sum_experiment(params, noise.zero_noise(), 0, seed=0)


@pytest.mark.integration
def test_default_noise_thousand_parties() -> None:
    for epsilon in (0.5, 1.0):
        params = derive_dp_params(epsilon, 2**-20, 1000)
        mechanism = noise.polya_noise(params.epsilon, params.n, params.scale, params.delta)
        record = harness.dp_sum_experiment(params, mechanism, 1000, seed=7)
        assert record.wraparounds == 0
        assert record.mean_abs_error <= 10 * (1 + 1 / epsilon)
        assert record.passed
