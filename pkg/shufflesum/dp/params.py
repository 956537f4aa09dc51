from __future__ import annotations

import math as maths
from dataclasses import dataclass

from .. import log
from ..ffield.base import PrimeModulus, next_prime_above
from ..protocol.base import required_messages
from ..protocol.params import ProtocolParams


def dp_sigma(epsilon: float, delta: float) -> float:
    """
    Security parameter in bits that makes the secure-aggregation leakage cost delta / 4 of the privacy budget:
    sigma = 1 + log2((1 + e^epsilon) / delta).
    """
    return 1 + maths.log2((1 + maths.exp(epsilon)) / delta)


def dp_modulus(n: int) -> PrimeModulus:
    """
    The smallest prime above 2 n^(3/2). Every integer in (floor(2 n^(3/2)), 2 n^(3/2)] would have to equal the
    threshold, so searching above floor(2 n^(3/2)) = isqrt(4 n^3) is exact.
    """
    return next_prime_above(maths.isqrt(4 * n**3))


@dataclass(frozen=True)
class DpParams:
    """
    Parameters of differentially private real summation over split-and-mix.

    Attributes:
        epsilon (float): privacy parameter, > 0.
        delta (float): privacy parameter, in (0, 1).
        n (int): number of parties.
        sigma (float): 1 + log2((1 + e^epsilon) / delta).
        modulus (PrimeModulus): the smallest prime above 2 n^(3/2).
        scale (int): fixed-point scale. Each input in [0, 1] becomes an integer in [0, scale].
        m (int): messages per party, certified for gamma = 2^(-sigma-1).
    """

    epsilon: float
    delta: float
    n: int
    sigma: float
    modulus: PrimeModulus
    scale: int
    m: int

    def __post_init__(self) -> None:
        assert isinstance(self.modulus, PrimeModulus)
        if self.scale * 2 * self.n > self.modulus.q:
            raise ValueError(f"scale must be at most q / (2n) = {self.modulus.q / (2 * self.n)}, got {self.scale}")

    @property
    def q(self) -> int:
        return self.modulus.q

    @property
    def gamma(self) -> float:
        return 2.0 ** (-self.sigma - 1)

    @property
    def bits_per_message(self) -> int:
        return self.modulus.bits

    @property
    def protocol_params(self) -> ProtocolParams:
        return ProtocolParams.from_sigma(self.n, self.m, self.modulus, self.sigma)


def derive_dp_params(epsilon: float, delta: float, n: int, scale: int | None = None) -> DpParams:
    """
    Derive every protocol parameter from the privacy target.

    Args:
        epsilon (float): privacy parameter, > 0.
        delta (float): privacy parameter, in (0, 1).
        n (int): number of parties, at least 3.
        scale (int, optional): fixed-point scale. Default: floor(sqrt(n)).

    Returns:
        (DpParams): params.
    """
    if not epsilon > 0 or not maths.isfinite(epsilon):
        raise ValueError(f"epsilon must be a positive number, got {epsilon}")
    if not 0 < delta < 1:
        raise ValueError(f"delta must be in (0, 1), got {delta}")
    if type(n) is not int or n < 3:
        raise ValueError(f"n must be an int >= 3, got {n}")
    if scale is None:
        scale = maths.isqrt(n)
    if type(scale) is not int or scale < 1:
        raise ValueError(f"scale must be a positive int, got {scale}")

    sigma = dp_sigma(epsilon, delta)
    modulus = dp_modulus(n)
    m = required_messages(n, modulus, 2.0 ** (-sigma - 1))
    log.debug(f"DP parameters for {n=}, {epsilon=}, {delta=}: {sigma=:.4f}, q={modulus.q}, {m=}, {scale=}")
    return DpParams(float(epsilon), float(delta), n, sigma, modulus, scale, m)
