import math as maths

import pytest

from shufflesum.dp import params
from shufflesum.ffield.base import is_prime
from shufflesum.protocol.base import required_messages


def test_dp_sigma() -> None:
    assert params.dp_sigma(1, 2**-20) == pytest.approx(22.8945, abs=1e-3)
    assert params.dp_sigma(1e-12, 0.5) == pytest.approx(3, abs=1e-9)
    sigmas = [params.dp_sigma(1, delta) for delta in (0.001, 0.01, 0.1, 0.5, 0.9, 0.999)]
    assert sigmas == sorted(sigmas, reverse=True)


def test_dp_modulus() -> None:
    assert params.dp_modulus(100).q == 2003
    assert params.dp_modulus(3).q == 11
    # 2 * 4^(3/2) = 16 exactly, and the prime must be strictly larger.
    assert params.dp_modulus(4).q == 17
    for n in (5, 17, 50, 1000):
        q = params.dp_modulus(n).q
        assert q > 2 * n**1.5
        assert not any(is_prime(p) for p in range(maths.floor(2 * n**1.5) + 1, q))


def test_derive_dp_params_example() -> None:
    dp_params = params.derive_dp_params(1.0, 2**-20, 100)
    assert dp_params.q == 2003
    assert dp_params.scale == 10
    assert dp_params.bits_per_message == 11
    assert dp_params.sigma == pytest.approx(22.8945, abs=1e-3)
    assert dp_params.m == required_messages(100, 2003, 2.0 ** (-dp_params.sigma - 1))
    assert dp_params.protocol_params.gamma == pytest.approx(dp_params.gamma)
    assert dp_params.protocol_params.m == dp_params.m
    assert dp_params.scale * 2 * dp_params.n <= dp_params.q


def test_derive_dp_params_scale_headroom() -> None:
    for n in (3, 4, 10, 99, 100, 1000, 12345):
        dp_params = params.derive_dp_params(0.5, 1e-6, n)
        assert dp_params.scale == maths.isqrt(n)
        assert dp_params.scale <= dp_params.q / (2 * n)


def test_message_count_growth() -> None:
    deltas = (2**-10, 2**-20, 2**-40)
    ns = (10, 100, 1000, 10_000)
    grid = {(n, delta): params.derive_dp_params(1.0, delta, n).m for n in ns for delta in deltas}
    for n in ns:
        counts = [grid[n, delta] for delta in deltas]
        assert counts == sorted(counts)
    for delta in deltas:
        counts = [grid[n, delta] for n in ns]
        assert counts == sorted(counts, reverse=True)
    # The part above the constant 4 scales like (sigma + log2 q) / log2(n / 2).
    for (n, delta), m in grid.items():
        dp_params = params.derive_dp_params(1.0, delta, n)
        ratio = (dp_params.sigma + 1 + maths.log2(dp_params.q)) / maths.log2(n / 2)
        assert 100 * ratio - 1e-6 <= m - 4 < 100 * ratio + 1


def test_derive_dp_params_invalid() -> None:
    with pytest.raises(ValueError):
        params.derive_dp_params(0, 0.1, 10)
    with pytest.raises(ValueError):
        params.derive_dp_params(1, 1, 10)
    with pytest.raises(ValueError):
        params.derive_dp_params(1, 0, 10)
    with pytest.raises(ValueError):
        params.derive_dp_params(1, 0.1, 2)
    with pytest.raises(ValueError):
        params.derive_dp_params(1, 0.1, 100, scale=11)
    with pytest.raises(ValueError):
        params.derive_dp_params(1, 0.1, 100, scale=0)
