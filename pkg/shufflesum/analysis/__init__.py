from ..utils.errors import BudgetExceededError
from .distribution import (
    DistributionTable,
    exact_transcript_distribution,
    sd_to_uniform,
    sd_to_uniform_sweep,
    statistical_distance,
    uniform_conditioned_distribution,
)
from .moments import MomentRecord, first_moment_check, pair_moment_check, second_moment_experiment
from .montecarlo import mc_advantage, multiset_acceptor, splitmix_sampler, zero_sum_subset_acceptor
from .security import SecurityReport, security_check

__all__ = [
    "BudgetExceededError",
    "DistributionTable",
    "MomentRecord",
    "SecurityReport",
    "exact_transcript_distribution",
    "first_moment_check",
    "mc_advantage",
    "multiset_acceptor",
    "pair_moment_check",
    "sd_to_uniform",
    "sd_to_uniform_sweep",
    "second_moment_experiment",
    "security_check",
    "splitmix_sampler",
    "statistical_distance",
    "uniform_conditioned_distribution",
    "zero_sum_subset_acceptor",
]
