import numpy as np
import pytest

from shufflesum.utils import parallel


def _draw(rng: np.random.Generator, trials: int, high: int) -> list[int]:
    return rng.integers(0, high, size=trials).tolist()


def test_run_chunked_chunks() -> None:
    results = parallel.run_chunked(_draw, 25, 3, 100, n_jobs=1, chunk_size=10)
    assert [len(chunk) for chunk in results] == [10, 10, 5]
    assert all(0 <= value < 100 for chunk in results for value in chunk)


def test_run_chunked_independent_of_n_jobs() -> None:
    serial = parallel.run_chunked(_draw, 40, 9, 1000, n_jobs=1, chunk_size=8)
    parallel_result = parallel.run_chunked(_draw, 40, 9, 1000, n_jobs=2, chunk_size=8)
    assert serial == parallel_result
    assert serial != parallel.run_chunked(_draw, 40, 10, 1000, n_jobs=1, chunk_size=8)


def test_run_chunked_invalid() -> None:
    for trials in (0, -1, 2.0):
        with pytest.raises(ValueError):
            parallel.run_chunked(_draw, trials, 0, 10, n_jobs=1)


def test_binomial_stderr() -> None:
    assert parallel.binomial_stderr(0.0, 10) == 0
    assert parallel.binomial_stderr(0.5, 100) == pytest.approx(0.05)
