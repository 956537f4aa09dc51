from .distinguisher import (
    DistinguisherRun,
    MarginalSpec,
    WarmupRecord,
    find_marginal_spec,
    general_distinguisher,
    splitmix_distinguisher_advantage,
    warmup_acceptance_probability,
)
from .encoder import (
    EncoderSpec,
    check_disjoint_supports,
    exact_shuffled_sd,
    shuffled_distribution,
    splitmix_encoder_spec,
)
from .field import FieldDistanceRecord, InvYRecord, avg_field_distance, feasible_inputs, invy_bound_check
from .summary import LowerBoundSummary, lower_bound_summary

__all__ = [
    "DistinguisherRun",
    "EncoderSpec",
    "FieldDistanceRecord",
    "InvYRecord",
    "LowerBoundSummary",
    "MarginalSpec",
    "WarmupRecord",
    "avg_field_distance",
    "check_disjoint_supports",
    "exact_shuffled_sd",
    "feasible_inputs",
    "find_marginal_spec",
    "general_distinguisher",
    "invy_bound_check",
    "lower_bound_summary",
    "shuffled_distribution",
    "splitmix_distinguisher_advantage",
    "splitmix_encoder_spec",
    "warmup_acceptance_probability",
]
