from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .. import log
from ..ffield.base import PrimeModulus
from ..protocol.params import as_modulus
from ..setup.config import Config
from ..utils.parallel import binomial_stderr, run_chunked
from .multinomial import compositions, multinomial_coefficient
from .pair_matrix import build_pair_matrix, random_permutation_pair, rank_deficit


@dataclass(frozen=True)
class TailRecord:
    """
    Empirical Pr[defc >= k] over uniform permutation pairs against its bound.

    Attributes:
        n (int), m (int), q (int), k (int): parameters.
        samples (int): sampled permutation pairs.
        empirical (float): fraction of pairs with rank deficit at least k.
        stderr (float): binomial standard error of `empirical`.
        bound (float): (n^2 / (n/2)^(m-2))^((k-1)/2).
        union_bound (Fraction): the exact union bound over matched partition sizes that the closed form relaxes.
        slack (float): standard errors of allowed Monte Carlo excess.
    """

    n: int
    m: int
    q: int
    k: int
    samples: int
    empirical: float
    stderr: float
    bound: float
    union_bound: Fraction
    slack: float

    @property
    def passed(self) -> bool:
        return self.empirical <= self.bound + self.slack * self.stderr


def deficit_tail_bound(n: int, m: int, k: int) -> float:
    """
    (n^2 / (n/2)^(m-2))^((k-1)/2), the closed-form tail bound on Pr[defc >= k].
    """
    return float((n**2 / (n / 2) ** (m - 2)) ** ((k - 1) / 2))


def deficit_union_bound(n: int, m: int, k: int) -> Fraction:
    """
    Sum over compositions a of n into k positive parts of multinomial(n; a)^2 / multinomial(mn; m a). This is the
    expected number of matching k-part partition pairs, so it bounds Pr[defc >= k].
    """
    total = Fraction(0)
    for parts in compositions(n, k):
        total += Fraction(
            multinomial_coefficient(parts) ** 2, multinomial_coefficient([m * part for part in parts])
        )
    return total


def _check_tail_args(n: int, m: int, ks: Sequence[int], samples: int) -> None:
    if type(n) is not int or n < 2:
        raise ValueError(f"n must be an int >= 2, got {n}")
    if type(m) is not int or m < 3:
        raise ValueError(f"m must be an int >= 3, got {m}")
    if any(type(k) is not int or k < 1 for k in ks):
        raise ValueError(f"Every k must be a positive int, got {list(ks)}")
    if type(samples) is not int or samples < 1:
        raise ValueError(f"samples must be a positive int, got {samples}")


def _deficit_chunk(rng: np.random.Generator, size: int, n: int, m: int, q: int) -> np.ndarray:
    deficits = np.empty(size, dtype=np.int64)
    for index in range(size):
        pi, pi_prime = random_permutation_pair(rng, n * m)
        deficits[index] = rank_deficit(build_pair_matrix(pi, pi_prime, n, m, q))
    return deficits


def sample_rank_deficits(
    n: int,
    m: int,
    q: PrimeModulus | int,
    samples: int,
    seed: int,
    n_jobs: int | None = None,
    chunk_size: int | None = None,
) -> np.ndarray:
    """
    Rank deficits over F_q of `samples` independent uniform permutation pairs.

    Returns:
        (`(samples) ndarray[int64]`): deficits. In [1, n].
    """
    q = as_modulus(q).q
    return np.concatenate(run_chunked(_deficit_chunk, samples, seed, n, m, q, n_jobs=n_jobs, chunk_size=chunk_size))


def deficit_tail_sweep(
    n: int,
    m: int,
    q: PrimeModulus | int,
    ks: Sequence[int],
    samples: int,
    seed: int,
    n_jobs: int | None = None,
    chunk_size: int | None = None,
    slack: float | None = None,
) -> list[TailRecord]:
    """
    Tail records for several k, all evaluated on one set of sampled permutation pairs.

    Args:
        n (int): number of parties, at least 2.
        m (int): messages per party, at least 3.
        q (PrimeModulus or int): the field.
        ks (list of int): thresholds, each at least 1.
        samples (int): number of permutation pairs.
        seed (int): 64-bit seed.
        n_jobs (int, optional): joblib worker count. Default: from config.
        chunk_size (int, optional): samples per seeded chunk. Default: from config.
        slack (float, optional): standard errors of allowed excess over the bound. Default: from config.

    Returns:
        (list of TailRecord): records. One per k, in the order of `ks`.
    """
    _check_tail_args(n, m, ks, samples)
    q = as_modulus(q).q
    log.info(f"Sampling {samples} permutation pairs at n={n}, m={m}, q={q}")
    deficits = sample_rank_deficits(n, m, q, samples, seed, n_jobs, chunk_size)
    log.debug(f"Largest sampled rank deficit: {int(deficits.max())}")
    if slack is None:
        slack = Config.get_default_for("statistics", "stderr_slack")
    records = []
    for k in ks:
        empirical = float(np.mean(deficits >= k))
        records.append(
            TailRecord(
                n,
                m,
                q,
                k,
                samples,
                empirical,
                binomial_stderr(empirical, samples),
                deficit_tail_bound(n, m, k),
                deficit_union_bound(n, m, k),
                float(slack),
            )
        )
    return records


def deficit_tail_experiment(
    n: int, m: int, q: PrimeModulus | int, k: int, samples: int, seed: int, n_jobs: int | None = None
) -> TailRecord:
    """
    Estimate Pr[defc >= k] for uniform permutation pairs and compare it with the closed-form bound.
    """
    return deficit_tail_sweep(n, m, q, [k], samples, seed, n_jobs)[0]
