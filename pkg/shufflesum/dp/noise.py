import math as maths
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
import scipy.stats

from .. import log
from ..setup.config import Config

NoiseSampler = Callable[[np.random.Generator, int], np.ndarray]


@dataclass(frozen=True)
class NoiseMechanism:
    """
    Integer noise each party adds to its quantized input before encoding.

    Attributes:
        per_party_sampler (callable): (rng, size) -> `(size) ndarray[int64]` of independent per-party samples.
        aggregate_distribution_name (str): label of the distribution of the summed noise.
        truncation_bound (int): every sample lies in [-truncation_bound, truncation_bound].
        delta_noise (float): probability mass, over all n parties, moved by the truncation.
    """

    per_party_sampler: NoiseSampler
    aggregate_distribution_name: str
    truncation_bound: int
    delta_noise: float = 0.0

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        samples = np.asarray(self.per_party_sampler(rng, size), dtype=np.int64)
        assert samples.shape == (size,)
        assert np.all(np.abs(samples) <= self.truncation_bound), "Noise sample outside the truncation bound"
        return samples


def zero_noise() -> NoiseMechanism:
    return NoiseMechanism(lambda rng, size: np.zeros(size, dtype=np.int64), "none", 0)


def polya_truncation_bound(share: float, alpha: float, n: int, delta_noise: float) -> int:
    """
    Smallest T with 2 n Pr[Polya(share, alpha) > T] <= delta_noise. A party's difference of two Polya counts only
    leaves [-T, T] when one of the counts exceeds T.
    """
    target = delta_noise / (2 * n)
    distribution = scipy.stats.nbinom(share, 1 - alpha)
    bound = max(int(distribution.isf(target)), 0)
    while distribution.sf(bound) > target:
        bound += 1
    while bound > 0 and distribution.sf(bound - 1) <= target:
        bound -= 1
    return bound


def polya_noise(
    epsilon: float, n: int, scale: int, delta: float, truncation_delta_fraction: float | None = None
) -> NoiseMechanism:
    """
    Each party adds the difference of two independent Polya(1/n, alpha) counts with alpha = exp(-epsilon / scale).
    Polya(1/n, alpha) is a negative binomial with 1/n successes, so the n differences sum to a discrete Laplace
    variable with Pr[k] proportional to alpha^|k|, the usual mechanism for sensitivity `scale`. Samples are clipped to
    [-T, T], with T chosen so that clipping happens with probability at most delta * truncation_delta_fraction.

    Args:
        epsilon (float): privacy parameter.
        n (int): number of parties.
        scale (int): fixed-point scale, the sensitivity of the quantized sum.
        delta (float): privacy parameter.
        truncation_delta_fraction (float, optional): share of delta given to the truncation. Default: config
            `[dp] truncation_delta_fraction`.

    Returns:
        (NoiseMechanism): mechanism.
    """
    if truncation_delta_fraction is None:
        truncation_delta_fraction = Config.get_default_for("dp", "truncation_delta_fraction")
    if not 0 < truncation_delta_fraction < 1:
        raise ValueError(f"truncation_delta_fraction must be in (0, 1), got {truncation_delta_fraction}")
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if type(n) is not int or n < 1:
        raise ValueError(f"n must be a positive int, got {n}")

    share = 1 / n
    alpha = maths.exp(-epsilon / scale)
    delta_noise = delta * truncation_delta_fraction
    bound = polya_truncation_bound(share, alpha, n, delta_noise)
    log.debug(f"Polya noise with {alpha=:.6f} is clipped to [-{bound}, {bound}]")

    def sample(rng: np.random.Generator, size: int) -> np.ndarray:
        counts = rng.negative_binomial(share, 1 - alpha, size=(2, size)).astype(np.int64)
        return np.clip(counts[0] - counts[1], -bound, bound)

    return NoiseMechanism(sample, "discrete-laplace (polya-difference)", bound, delta_noise)
