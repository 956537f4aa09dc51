import math as maths
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import tqdm

from .. import log
from ..ffield.base import FieldElement
from ..linalg.pair_matrix import build_pair_matrix, check_permutation, component_count, rank_deficit
from ..protocol.params import ProtocolParams
from ..setup.config import Config
from ..utils.errors import check_budget
from ..utils.parallel import binomial_stderr, run_chunked
from .distribution import _input_values

# Conditioned tuples checked per vectorised block during exact enumeration.
_ENUMERATION_BLOCK = 1 << 16


@dataclass(frozen=True)
class MomentRecord:
    """
    The second moment method for Z_t, the number of permutations pi with A_pi t = x for t drawn from U_a.

    Attributes:
        mu (Fraction): E[Z_t] = (mn)! / q^(n-1).
        empirical_second_moment_ratio (float): estimated E[Z_t^2] / mu^2 = E[Y_pi Y_pi'] * q^(2(n-1)).
        k_tail (dict[int, float]): empirical Pr[defc >= k] over the sampled pairs, for k = 1, ..., n.
        samples (int): sampled (pi, pi', t) triples.
        scaled_estimate (float): E[Y_pi Y_pi'] * q^(2n-1), estimated.
        scaled_stderr (float): standard error of `scaled_estimate`.
        series_bound (float): the bound sum over k = 1..2n of q^k * (n^2 / (n/2)^(m-2))^((k-1)/2), or q^n when the
            pairs were forced identical.
        identical (bool): pi' was forced equal to pi.
        slack (float): standard errors of allowed excess.
    """

    mu: Fraction
    empirical_second_moment_ratio: float
    k_tail: dict[int, float]
    samples: int = 0
    scaled_estimate: float = 0.0
    scaled_stderr: float = 0.0
    series_bound: float = 0.0
    identical: bool = False
    slack: float = 5.0

    def __post_init__(self) -> None:
        assert self.mu > 0

    @property
    def chebyshev_zero_bound(self) -> float:
        """
        Var[Z_t] / mu^2, the Chebyshev bound on Pr[Z_t = 0].
        """
        return self.empirical_second_moment_ratio - 1

    @property
    def passed(self) -> bool:
        if self.identical:
            return abs(self.scaled_estimate - self.series_bound) <= self.slack * self.scaled_stderr
        return self.scaled_estimate <= self.series_bound + self.slack * self.scaled_stderr


def _conditioned_block(start: int, stop: int, a: int, q: int, size: int) -> np.ndarray:
    """
    Tuples number start..stop-1 of F_q^size with coordinate sum a: the first size - 1 coordinates are the base q
    digits of the tuple number and the last one is determined.
    """
    indices = np.arange(start, stop, dtype=np.int64)
    powers = q ** np.arange(size - 2, -1, -1, dtype=np.int64)
    block = np.empty((stop - start, size), dtype=np.int64)
    block[:, : size - 1] = (indices[:, None] // powers[None, :]) % q
    block[:, size - 1] = (a - block[:, : size - 1].sum(axis=1)) % q
    return block


def _satisfies(t: np.ndarray, pi: np.ndarray, x: np.ndarray, n: int, m: int, q: int) -> np.ndarray:
    """
    Rows of t with A_pi t = x. Row i of A_pi sums the coordinates at pi's image of party i's block.
    """
    gathered = t[:, pi].reshape(t.shape[0], n, m).sum(axis=2) % q
    return (gathered == x[None, :]).all(axis=1)


def _count_conditioned(
    permutations: Sequence[np.ndarray], x: Sequence[int], params: ProtocolParams, budget: int | None
) -> int:
    q, n, m = params.q, params.n, params.m
    size = n * m
    total = q ** (size - 1)
    check_budget(total, budget, f"Conditioned enumeration at mn={size}, q={q}")
    x = np.asarray(x, dtype=np.int64)
    a = int(x.sum()) % q

    count = 0
    for start in tqdm.trange(0, total, _ENUMERATION_BLOCK, desc="Enumerating tuples", disable=None, leave=False):
        t = _conditioned_block(start, min(start + _ENUMERATION_BLOCK, total), a, q, size)
        hits = np.ones(t.shape[0], dtype=bool)
        for pi in permutations:
            hits &= _satisfies(t, pi, x, n, m, q)
        count += int(hits.sum())
    return count


def _check_moment_inputs(
    x: Sequence[FieldElement | int], a: FieldElement | int | None, params: ProtocolParams
) -> list[int]:
    values = _input_values(x, params)
    if a is not None:
        a = a.value if isinstance(a, FieldElement) else int(a) % params.q
        if sum(values) % params.q != a:
            raise ValueError(f"The inputs sum to {sum(values) % params.q}, not a = {a}")
    return values


def first_moment_check(
    pi: Sequence[int],
    x: Sequence[FieldElement | int],
    a: FieldElement | int,
    params: ProtocolParams,
    budget: int | None = None,
) -> Fraction:
    """
    Exact Pr_{t ~ U_a}[A_pi t = x], by enumerating every tuple with coordinate sum a. It equals q^-(n-1) for every pi
    because the n row sums are independent apart from their total.

    Args:
        pi (list of int): permutation of [0, mn).
        x (list of FieldElement or int): the n inputs.
        a (FieldElement or int): their sum.
        params (ProtocolParams): protocol parameters.
        budget (int, optional): enumeration budget. Default: from config.

    Returns:
        (Fraction): probability.
    """
    values = _check_moment_inputs(x, a, params)
    pi = np.asarray(check_permutation(pi, params.message_count))
    count = _count_conditioned([pi], values, params, budget)
    return Fraction(count, params.q ** (params.message_count - 1))


def pair_moment_check(
    pi: Sequence[int],
    pi_prime: Sequence[int],
    x: Sequence[FieldElement | int],
    params: ProtocolParams,
    budget: int | None = None,
) -> tuple[Fraction, Fraction]:
    """
    Exact E[Y_pi Y_pi'] = Pr_{t ~ U_a}[A_pi t = x and A_pi' t = x] for a = sum(x), with its per-pair bound
    q^defc / q^(2n-1).

    Returns:
        - (Fraction): probability. The exact joint probability.
        - (Fraction): bound. q^defc / q^(2n-1), where defc is the rank deficit of A_{pi, pi'} over F_q.
    """
    values = _check_moment_inputs(x, None, params)
    size = params.message_count
    pi = check_permutation(pi, size)
    pi_prime = check_permutation(pi_prime, size)
    count = _count_conditioned([np.asarray(pi), np.asarray(pi_prime)], values, params, budget)
    deficit = rank_deficit(build_pair_matrix(pi, pi_prime, params.n, params.m, params.modulus))
    q, n = params.q, params.n
    return Fraction(count, q ** (size - 1)), Fraction(q**deficit, q ** (2 * n - 1))


def second_moment_series(n: int, m: int, q: int) -> float:
    """
    Sum over k = 1..2n of q^k * (n^2 / (n/2)^(m-2))^((k-1)/2), which bounds E[Y_pi Y_pi'] * q^(2n-1). The series
    stops at k = 2n since the rank deficit never exceeds the row count.
    """
    ratio = n**2 / (n / 2) ** (m - 2)
    return float(sum(q**k * ratio ** ((k - 1) / 2) for k in range(1, 2 * n + 1)))


def _moment_chunk(
    rng: np.random.Generator, size: int, x: np.ndarray, n: int, m: int, q: int, identical: bool
) -> tuple[int, np.ndarray]:
    mn = n * m
    a = int(x.sum()) % q
    pis = rng.permuted(np.tile(np.arange(mn), (size, 1)), axis=1)
    pi_primes = pis if identical else rng.permuted(np.tile(np.arange(mn), (size, 1)), axis=1)
    t = np.empty((size, mn), dtype=np.int64)
    t[:, : mn - 1] = rng.integers(0, q, size=(size, mn - 1), dtype=np.int64)
    t[:, mn - 1] = (a - t[:, : mn - 1].sum(axis=1)) % q

    hits = np.ones(size, dtype=bool)
    for permutations in (pis, pi_primes):
        gathered = np.take_along_axis(t, permutations, axis=1).reshape(size, n, m).sum(axis=2) % q
        hits &= (gathered == x[None, :]).all(axis=1)

    deficit_counts = np.zeros(n + 1, dtype=np.int64)
    for pi, pi_prime in zip(pis, pi_primes, strict=True):
        deficit_counts[component_count(pi, pi_prime, n, m)] += 1
    return int(hits.sum()), deficit_counts


def second_moment_experiment(
    params: ProtocolParams,
    samples: int,
    seed: int,
    x: Sequence[FieldElement | int] | None = None,
    identical: bool = False,
    n_jobs: int | None = None,
    chunk_size: int | None = None,
    slack: float | None = None,
) -> MomentRecord:
    """
    Monte Carlo estimate of E[Y_pi Y_pi'] over uniform (pi, pi', t) triples, t ~ U_sum(x), against the series bound.

    Rank deficits of the sampled pairs are counted by the connected components of the party overlap graph, which
    equal the rank deficit over every field.

    Args:
        params (ProtocolParams): protocol parameters, n >= 3 and m >= 3.
        samples (int): number of sampled triples.
        seed (int): 64-bit seed.
        x (list of FieldElement or int, optional): the inputs. Default: all zero.
        identical (bool, optional): force pi' = pi, so the estimate targets E[Y] = q^-(n-1) instead. Default: false.
        n_jobs (int, optional): joblib worker count. Default: from config.
        chunk_size (int, optional): samples per seeded chunk. Default: from config.
        slack (float, optional): standard errors of allowed deviation from the bound. Default: from config.

    Returns:
        (MomentRecord): record.
    """
    n, m, q = params.n, params.m, params.q
    if n < 3 or m < 3:
        raise ValueError(f"The second moment experiment needs n >= 3 and m >= 3, got n={n}, m={m}")
    if type(samples) is not int or samples < 1:
        raise ValueError(f"samples must be a positive int, got {samples}")
    values = np.asarray(_input_values([0] * n if x is None else x, params), dtype=np.int64)

    log.info(f"Sampling {samples} permutation triples at n={n}, m={m}, q={q}" + (" with pi' = pi" if identical else ""))
    results = run_chunked(
        _moment_chunk, samples, seed, values, n, m, q, identical, n_jobs=n_jobs, chunk_size=chunk_size
    )
    hits = sum(result[0] for result in results)
    deficit_counts = np.sum([result[1] for result in results], axis=0)

    estimate = hits / samples
    scale = float(q ** (2 * n - 1))
    if slack is None:
        slack = Config.get_default_for("statistics", "stderr_slack")
    tail_counts = np.cumsum(deficit_counts[::-1])[::-1]
    return MomentRecord(
        mu=Fraction(maths.factorial(n * m), q ** (n - 1)),
        empirical_second_moment_ratio=estimate * q ** (2 * (n - 1)),
        k_tail={k: float(tail_counts[k] / samples) for k in range(1, n + 1)},
        samples=samples,
        scaled_estimate=estimate * scale,
        scaled_stderr=binomial_stderr(estimate, samples) * scale,
        series_bound=float(q**n) if identical else second_moment_series(n, m, q),
        identical=identical,
        slack=float(slack),
    )
