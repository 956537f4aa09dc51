from collections.abc import Sequence
from dataclasses import dataclass

from ..ffield.base import FieldElement
from ..protocol.base import required_messages
from ..protocol.params import ProtocolParams
from .distribution import (
    Probability,
    _input_values,
    exact_transcript_distribution,
    statistical_distance,
    uniform_conditioned_distribution,
)


@dataclass(frozen=True)
class SecurityReport:
    """
    Exact distances for one pair of equal-sum inputs.

    Attributes:
        sd (Fraction or float): SD(R(x), R(x')).
        certified_bound (Fraction or float): SD(R(x), U_a) + SD(R(x'), U_a), an upper bound on sd by the triangle
            inequality.
        sd_x_to_uniform (Fraction or float): SD(R(x), U_a).
        sd_x_prime_to_uniform (Fraction or float): SD(R(x'), U_a).
        gamma_bound (float or none): 2 * gamma when m reaches the certified message count for gamma, else None.
    """

    sd: Probability
    certified_bound: Probability
    sd_x_to_uniform: Probability
    sd_x_prime_to_uniform: Probability
    gamma_bound: float | None

    @property
    def passed(self) -> bool:
        if self.sd > self.certified_bound:
            return False
        return self.gamma_bound is None or self.sd <= self.gamma_bound


def security_check(
    x: Sequence[FieldElement | int],
    x_prime: Sequence[FieldElement | int],
    params: ProtocolParams,
    budget: int | None = None,
    rational_state_limit: int | None = None,
) -> SecurityReport:
    """
    Compare the transcripts of two input vectors with the same sum, exactly.

    Args:
        x (list of FieldElement or int): first input vector.
        x_prime (list of FieldElement or int): second input vector with the same sum modulo q.
        params (ProtocolParams): protocol parameters.
        budget (int, optional): enumeration budget. Default: from config.
        rational_state_limit (int, optional): largest state count stored as exact rationals. Default: from config.

    Returns:
        (SecurityReport): report. Exact distances and the triangle-inequality bound.
    """
    values = _input_values(x, params)
    values_prime = _input_values(x_prime, params)
    a = sum(values) % params.q
    if sum(values_prime) % params.q != a:
        raise ValueError(
            f"Inputs must have equal sums modulo {params.q}, got {a} and {sum(values_prime) % params.q}"
        )

    table = exact_transcript_distribution(values, params, budget, rational_state_limit)
    table_prime = exact_transcript_distribution(values_prime, params, budget, rational_state_limit)
    uniform = uniform_conditioned_distribution(a, params, budget, rational_state_limit)
    sd_x = statistical_distance(table, uniform)
    sd_x_prime = statistical_distance(table_prime, uniform)

    gamma_bound = None
    if params.n >= 3 and params.m >= required_messages(params.n, params.q, params.gamma):
        gamma_bound = 2 * params.gamma
    return SecurityReport(statistical_distance(table, table_prime), sd_x + sd_x_prime, sd_x, sd_x_prime, gamma_bound)
