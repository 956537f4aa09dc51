from fractions import Fraction

import numpy as np
import pytest

from shufflesum.linalg import tail


def test_deficit_tail_bound() -> None:
    assert tail.deficit_tail_bound(8, 4, 1) == 1.0
    assert tail.deficit_tail_bound(8, 4, 3) == pytest.approx(4.0)
    assert tail.deficit_tail_bound(16, 5, 3) == pytest.approx(0.5)


def test_deficit_union_bound() -> None:
    assert tail.deficit_union_bound(5, 3, 1) == 1
    # Compositions (1, 1) of n = 2 at m = 3: 2^2 / C(6, 3).
    assert tail.deficit_union_bound(2, 3, 2) == Fraction(4, 20)
    for n, m, k in ((8, 4, 2), (8, 5, 3), (16, 5, 3), (16, 6, 4)):
        assert tail.deficit_union_bound(n, m, k) <= tail.deficit_tail_bound(n, m, k) + 1e-12


def test_tail_experiment_k1() -> None:
    record = tail.deficit_tail_experiment(6, 3, 2, 1, 200, seed=4, n_jobs=1)
    assert record.empirical == 1.0
    assert record.bound == 1.0
    assert record.stderr == 0.0
    assert record.passed


def test_tail_experiment_examples() -> None:
    record = tail.deficit_tail_experiment(8, 4, 2, 3, 2_000, seed=10, n_jobs=1)
    assert record.bound == pytest.approx(4.0)
    assert record.passed
    record = tail.deficit_tail_experiment(16, 5, 5, 3, 1_000, seed=11, n_jobs=1)
    assert record.bound == pytest.approx(0.5)
    assert record.passed


def test_tail_sweep_reproducible() -> None:
    first = tail.deficit_tail_sweep(8, 3, 3, [1, 2, 3], 500, seed=99, n_jobs=1)
    second = tail.deficit_tail_sweep(8, 3, 3, [1, 2, 3], 500, seed=99, n_jobs=2)
    assert first == second
    assert [record.k for record in first] == [1, 2, 3]
    assert first[0].empirical >= first[1].empirical >= first[2].empirical


def test_sample_rank_deficits_range() -> None:
    deficits = tail.sample_rank_deficits(5, 3, 2, 300, seed=1, n_jobs=1)
    assert deficits.shape == (300,)
    assert np.all((deficits >= 1) & (deficits <= 5))


def test_tail_experiment_invalid() -> None:
    with pytest.raises(ValueError):
        tail.deficit_tail_experiment(8, 2, 2, 2, 10, seed=0)
    with pytest.raises(ValueError):
        tail.deficit_tail_experiment(8, 4, 2, 0, 10, seed=0)
    with pytest.raises(ValueError):
        tail.deficit_tail_experiment(8, 4, 2, 2, 0, seed=0)


@pytest.mark.integration
def test_tail_grid() -> None:
    for n in (8, 16):
        for m in (4, 5, 6):
            for q in (2, 5):
                for record in tail.deficit_tail_sweep(n, m, q, [2, 3, 4], 10_000, seed=n * 100 + m * 10 + q):
                    assert record.passed, record


def test_deficit_tail_sweep_settings() -> None:
    records = tail.deficit_tail_sweep(3, 3, 2, [1, 2], 200, 1, n_jobs=1, chunk_size=50, slack=0.5)
    assert [record.slack for record in records] == [0.5, 0.5]
    assert records[0].empirical == 1.0

    serial = tail.sample_rank_deficits(3, 3, 2, 200, 1, n_jobs=1, chunk_size=50)
    parallel = tail.sample_rank_deficits(3, 3, 2, 200, 1, n_jobs=2, chunk_size=50)
    assert np.array_equal(serial, parallel)
