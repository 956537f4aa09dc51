from __future__ import annotations

import math as maths
from dataclasses import dataclass

from ..ffield.base import PrimeModulus


def as_modulus(q: PrimeModulus | int) -> PrimeModulus:
    return q if isinstance(q, PrimeModulus) else PrimeModulus(int(q))


@dataclass(frozen=True)
class ProtocolParams:
    """
    Parameters of one split-and-mix run.

    Attributes:
        n (int): number of parties.
        m (int): messages sent by each party.
        modulus (PrimeModulus): the field F_q.
        gamma (float): target statistical distance to the conditioned-uniform reference, in (0, 1].
        sigma (float or none): security parameter in bits. When given, gamma is 2^(-sigma-1).
    """

    n: int
    m: int
    modulus: PrimeModulus
    gamma: float = 1.0
    sigma: float | None = None

    def __post_init__(self) -> None:
        if type(self.n) is not int or self.n < 1:
            raise ValueError(f"n must be a positive int, got {self.n}")
        if type(self.m) is not int or self.m < 1:
            raise ValueError(f"m must be a positive int, got {self.m}")
        if not isinstance(self.modulus, PrimeModulus):
            raise TypeError(f"modulus must be a PrimeModulus, got {type(self.modulus)}")
        if not 0 < self.gamma <= 1:
            raise ValueError(f"gamma must be in (0, 1], got {self.gamma}")
        if self.sigma is not None and not maths.isclose(self.gamma, 2.0 ** (-self.sigma - 1), rel_tol=1e-12):
            raise ValueError(f"gamma must be 2^(-sigma-1) = {2.0 ** (-self.sigma - 1)} when sigma is given")

    @classmethod
    def from_sigma(cls, n: int, m: int, modulus: PrimeModulus | int, sigma: float) -> ProtocolParams:
        """
        Build parameters from a security level. The distance budget 2^-sigma is split in two halves by the triangle
        inequality, one per input vector, so gamma = 2^(-sigma-1).
        """
        if sigma < 0:
            raise ValueError(f"sigma must be non-negative, got {sigma}")
        return cls(n, m, as_modulus(modulus), 2.0 ** (-sigma - 1), float(sigma))

    @classmethod
    def create(cls, n: int, m: int, q: PrimeModulus | int) -> ProtocolParams:
        return cls(n, m, as_modulus(q))

    @property
    def q(self) -> int:
        return self.modulus.q

    @property
    def message_count(self) -> int:
        return self.n * self.m
