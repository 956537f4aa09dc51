import itertools
from fractions import Fraction

import pytest

from shufflesum.analysis import moments
from shufflesum.protocol.params import ProtocolParams
from shufflesum.utils.rng import make_generator


def test_first_moment_examples() -> None:
    assert moments.first_moment_check([0], [3], 3, ProtocolParams.create(1, 1, 5)) == 1
    for pi in itertools.permutations(range(2)):
        assert moments.first_moment_check(pi, [1, 0], 1, ProtocolParams.create(2, 1, 2)) == Fraction(1, 2)
    assert moments.first_moment_check(range(4), [1, 1], 2, ProtocolParams.create(2, 2, 3)) == Fraction(1, 3)


def test_first_moment_exhaustive() -> None:
    for n, m, q in itertools.product((1, 2, 3), (1, 2), (2, 3)):
        params = ProtocolParams.create(n, m, q)
        expected = Fraction(1, q ** (n - 1))
        for x in itertools.product(range(q), repeat=n):
            for pi in itertools.permutations(range(n * m)):
                assert moments.first_moment_check(pi, x, sum(x) % q, params) == expected


def test_first_moment_invalid() -> None:
    params = ProtocolParams.create(2, 2, 3)
    with pytest.raises(ValueError):
        moments.first_moment_check(range(4), [1, 1], 0, params)
    with pytest.raises(ValueError):
        moments.first_moment_check([0, 0, 1, 2], [1, 1], 2, params)


def test_pair_moment_matches_rank_deficit() -> None:
    rng = make_generator(12)
    params = ProtocolParams.create(3, 2, 2)
    for _ in range(40):
        pi = rng.permutation(6)
        pi_prime = rng.permutation(6)
        probability, bound = moments.pair_moment_check(pi, pi_prime, [1, 0, 1], params)
        assert probability <= bound
        assert probability in (0, bound)
    probability, bound = moments.pair_moment_check(range(6), range(6), [1, 0, 1], params)
    assert probability == bound == Fraction(1, 4)


def test_second_moment_series() -> None:
    # The k = 1 term alone is q.
    assert moments.second_moment_series(3, 3, 2) > 2
    assert moments.second_moment_series(1, 2, 5) == pytest.approx(5 + 25 * 1.0)


def test_second_moment_experiment() -> None:
    params = ProtocolParams.create(3, 3, 2)
    record = moments.second_moment_experiment(params, 20_000, seed=7, n_jobs=1)
    assert record.mu == Fraction(362_880, 4)
    assert record.k_tail[1] == 1.0
    assert record.k_tail[1] >= record.k_tail[2] >= record.k_tail[3]
    assert record.passed
    assert record.empirical_second_moment_ratio == pytest.approx(record.scaled_estimate / 2)
    assert record.chebyshev_zero_bound == pytest.approx(record.empirical_second_moment_ratio - 1)


def test_second_moment_identical_permutations() -> None:
    params = ProtocolParams.create(3, 3, 2)
    record = moments.second_moment_experiment(params, 20_000, seed=8, x=[1, 1, 0], identical=True, n_jobs=1)
    assert record.series_bound == 8.0
    assert record.k_tail[3] == 1.0
    assert record.passed


def test_second_moment_reproducible() -> None:
    params = ProtocolParams.create(4, 3, 3)
    first = moments.second_moment_experiment(params, 3_000, seed=2, n_jobs=1)
    second = moments.second_moment_experiment(params, 3_000, seed=2, n_jobs=2)
    assert first == second


def test_second_moment_invalid() -> None:
    with pytest.raises(ValueError):
        moments.second_moment_experiment(ProtocolParams.create(2, 3, 2), 100, seed=0)
    with pytest.raises(ValueError):
        moments.second_moment_experiment(ProtocolParams.create(3, 2, 2), 100, seed=0)
    with pytest.raises(ValueError):
        moments.second_moment_experiment(ProtocolParams.create(3, 3, 2), 0, seed=0)


@pytest.mark.integration
def test_second_moment_experiment_full() -> None:
    record = moments.second_moment_experiment(ProtocolParams.create(3, 3, 2), 100_000, seed=70)
    assert record.passed


def test_second_moment_slack() -> None:
    params = ProtocolParams.create(3, 3, 2)
    record = moments.second_moment_experiment(params, 100, 4, n_jobs=1, chunk_size=30, slack=0.0)
    assert record.slack == 0.0
    assert record.samples == 100
