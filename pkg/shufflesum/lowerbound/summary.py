import math as maths
from dataclasses import dataclass

from ..ffield.base import is_prime
from ..protocol.base import asymptotic_messages, required_messages

# Searches stop here; every floor of practical parameters is far below it.
_MAX_MESSAGES = 1 << 20


@dataclass(frozen=True)
class LowerBoundSummary:
    """
    Finite message-count floors implied by the two lower-bound inequalities, beside the upper bound.

    Attributes:
        n (int), q (int), sigma (float): parameters.
        m_field (int): smallest m with n^(nm) >= q^(n-1) (1 - 2^-sigma), below which some equal-sum pair of inputs is
            more than 2^-sigma apart.
        m_security (int): smallest m with (10nm)^(-5m) <= 2^-sigma.
        m_upper (int or none): certified split-and-mix message count at gamma = 2^(-sigma-1), None when n < 3 or q
            is not prime.
        m_asymptotic (float or none): the constant-free growth form 1 + (sigma + log2 q) / log2 n, None when n < 2 or
            q is not prime.
    """

    n: int
    q: int
    sigma: float
    m_field: int
    m_security: int
    m_upper: int | None
    m_asymptotic: float | None

    @property
    def m_floor(self) -> int:
        return max(self.m_field, self.m_security)


def _field_condition(n: int, m: int, q: int, sigma: float) -> bool:
    if float(sigma).is_integer():
        scale = 2 ** int(sigma)
        return n ** (n * m) * scale >= q ** (n - 1) * (scale - 1)
    return n * m * maths.log2(n) >= (n - 1) * maths.log2(q) + maths.log2(1 - 2.0**-sigma)


def _security_condition(n: int, m: int, sigma: float) -> bool:
    return 5 * m * maths.log2(10 * n * m) >= sigma


def _smallest_m(condition) -> int:
    for m in range(1, _MAX_MESSAGES + 1):
        if condition(m):
            return m
    raise ValueError(f"No message count up to {_MAX_MESSAGES} satisfies the condition")


def lower_bound_summary(n: int, q: int, sigma: float) -> LowerBoundSummary:
    """
    The two finite floors on messages per party for a sigma-secure protocol.

    Args:
        n (int): number of parties.
        q (int): field size.
        sigma (float): security parameter, at least 1.

    Returns:
        (LowerBoundSummary): summary.
    """
    if type(n) is not int or n < 1:
        raise ValueError(f"n must be a positive int, got {n}")
    if type(q) is not int or q < 2:
        raise ValueError(f"q must be an int >= 2, got {q}")
    if sigma < 1:
        raise ValueError(f"sigma must be at least 1, got {sigma}")

    if n == 1:
        m_field = 1
    else:
        m_field = _smallest_m(lambda m: _field_condition(n, m, q, sigma))
    m_security = _smallest_m(lambda m: _security_condition(n, m, sigma))
    # The floors hold over any Z_q; the split-and-mix figures are for prime fields.
    prime = is_prime(q)
    m_upper = required_messages(n, q, 2.0 ** (-sigma - 1)) if n >= 3 and prime else None
    m_asymptotic = asymptotic_messages(n, q, sigma) if n >= 2 and prime else None
    return LowerBoundSummary(n, q, float(sigma), m_field, m_security, m_upper, m_asymptotic)
