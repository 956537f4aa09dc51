import numpy as np
import pytest

from shufflesum.dp import base, noise
from shufflesum.dp.params import derive_dp_params
from shufflesum.ffield.base import field_sum
from shufflesum.protocol.base import shuffle
from shufflesum.protocol.params import ProtocolParams
from shufflesum.protocol.transcript import Transcript
from shufflesum.utils.rng import make_generator


def test_quantize_examples() -> None:
    rng = make_generator(0)
    assert np.array_equal(base.quantize([0.5] * 100, 10, rng), np.full(100, 5))
    assert np.array_equal(base.quantize([0.0, 1.0, 0.25], 4, rng), [0, 4, 1])
    values = base.quantize(np.full(100_000, 0.33), 10, rng)
    assert set(np.unique(values).tolist()) == {3, 4}
    assert abs(values.mean() - 3.3) <= 5 * np.sqrt(0.3 * 0.7 / values.size)


def test_quantize_invalid() -> None:
    rng = make_generator(0)
    for xs in ([-0.1], [1.5], [np.nan]):
        with pytest.raises(ValueError):
            base.quantize(xs, 10, rng)


def test_dp_encode_endpoints() -> None:
    params = derive_dp_params(1.0, 2**-20, 100)
    rng = make_generator(5)
    shares = base.dp_encode(0.0, params, noise.zero_noise(), rng)
    assert shares.m == params.m
    assert field_sum(shares.shares, params.q) == 0
    shares = base.dp_encode(1.0, params, noise.zero_noise(), rng)
    assert field_sum(shares.shares, params.q) == params.scale
    shares = base.dp_encode(0.5, params, noise.zero_noise(), rng)
    assert field_sum(shares.shares, params.q) == 5


def test_dp_encode_batch_rows() -> None:
    params = derive_dp_params(1.0, 2**-20, 16, scale=4)
    xs = np.arange(16) % 5 / 4
    shares = base.dp_encode_batch(xs, params, noise.zero_noise(), make_generator(2))
    assert shares.shape == (16, params.m)
    assert np.array_equal(shares.sum(axis=1) % params.q, (xs * 4).astype(np.int64))


def test_end_to_end_zero_noise_grid() -> None:
    params = derive_dp_params(1.0, 2**-20, 16, scale=4)
    rng = make_generator(8)
    xs = [k / 4 for k in (0, 1, 2, 3, 4, 4, 3, 2, 1, 0, 4, 4, 4, 4, 1, 2)]
    transcript = shuffle([base.dp_encode(x, params, noise.zero_noise(), rng) for x in xs], rng)
    assert base.dp_aggregate(transcript, params) == sum(xs)


def test_end_to_end_negative_noise() -> None:
    params = derive_dp_params(1.0, 2**-20, 16, scale=4)
    constant = noise.NoiseMechanism(lambda rng, size: np.full(size, -1), "constant", 1)
    rng = make_generator(8)
    transcript = shuffle([base.dp_encode(0.0, params, constant, rng) for _ in range(16)], rng)
    assert base.dp_aggregate(transcript, params) == -4


def test_decode_total() -> None:
    assert base.decode_total(5, 11) == 5
    assert base.decode_total(6, 11) == -5
    assert base.decode_total(0, 11) == 0
    assert base.decode_total(-1, 11) == -1
    assert base.decode_total(1, 2) == 1


def test_dp_aggregate_checks_params() -> None:
    params = derive_dp_params(1.0, 2**-20, 16, scale=4)
    transcript = Transcript([0, 0, 0, 0], ProtocolParams.create(4, 1, params.q))
    with pytest.raises(ValueError):
        base.dp_aggregate(transcript, params)


def test_dp_privacy_accounting() -> None:
    params = derive_dp_params(1.0, 2**-20, 100)
    report = base.dp_privacy_accounting(params, noise.zero_noise())
    assert type(report.delta_security) is float
    assert report.delta_security == pytest.approx(2**-20 / 4, rel=1e-9)
    assert report.delta_total == report.delta_security
    assert report.bits_per_message == 11
    assert report.m == params.m
    assert report.worst_case_headroom
    assert report.within_budget

    default = noise.polya_noise(params.epsilon, params.n, params.scale, params.delta)
    report = base.dp_privacy_accounting(params, default)
    assert report.delta_total == pytest.approx(0.75 * 2**-20, rel=1e-9)
    assert report.within_budget
    assert not report.worst_case_headroom

    tiny = derive_dp_params(1e-9, 0.01, 100)
    assert base.dp_privacy_accounting(tiny, noise.zero_noise()).delta_security == pytest.approx(0.0025, rel=1e-6)
