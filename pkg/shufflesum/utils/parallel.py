from collections.abc import Callable
from typing import Any

import joblib
import numpy as np

from ..setup.config import Config
from .rng import chunk_sizes, make_generator, spawn_seeds
from .system import resolve_n_jobs


def run_chunked(
    function: Callable[..., Any],
    trials: int,
    seed: int,
    *args: Any,
    n_jobs: int | None = None,
    chunk_size: int | None = None,
) -> list[Any]:
    """
    Run a sampling function over independent chunks of trials, possibly in parallel.

    The trials are split into consecutive chunks of at most `chunk_size` and every chunk gets its own child of the
    seed. The chunking does not depend on `n_jobs`, so the returned list is identical for any worker count.

    Args:
        function (callable): called as `function(rng, chunk_trials, *args)` for every chunk.
        trials (int): total trial count.
        seed (int): 64-bit seed.
        args: extra positional arguments given to every call.
        n_jobs (int, optional): joblib worker count. Default: from config or the core count.
        chunk_size (int, optional): trials per chunk. Default: config `[parallel] chunk_size`.

    Returns:
        (list): results. One result per chunk, in chunk order.
    """
    if type(trials) is not int or trials < 1:
        raise ValueError(f"trials must be a positive int, got {trials}")
    if chunk_size is None:
        chunk_size = Config.get_default_for("parallel", "chunk_size")
    sizes = chunk_sizes(trials, chunk_size)
    seeds = spawn_seeds(seed, len(sizes))
    n_jobs = min(resolve_n_jobs(n_jobs), len(sizes))

    if n_jobs == 1:
        return [function(make_generator(child), size, *args) for child, size in zip(seeds, sizes, strict=True)]
    return joblib.Parallel(n_jobs=n_jobs, return_as="list")(
        joblib.delayed(_run_one)(function, child, size, args) for child, size in zip(seeds, sizes, strict=True)
    )


def _run_one(
    function: Callable[..., Any], child: np.random.SeedSequence, size: int, args: tuple[Any, ...]
) -> Any:
    return function(make_generator(child), size, *args)


def binomial_stderr(p: float, trials: int) -> float:
    assert trials >= 1
    return float(np.sqrt(max(p * (1 - p), 0.0) / trials))
