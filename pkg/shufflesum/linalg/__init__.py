from .multinomial import FactsReport, compositions, multinomial_coefficient, multinomial_facts_check
from .pair_matrix import PermutationPairMatrix, build_pair_matrix, component_count, rank_deficit
from .partitions import (
    MatchingCheckReport,
    PartitionPair,
    bell_number,
    find_matching_partitions,
    matching_exhaustive_check,
    set_partitions,
)
from .tail import TailRecord, deficit_tail_bound, deficit_tail_experiment, deficit_tail_sweep, deficit_union_bound

__all__ = [
    "FactsReport",
    "MatchingCheckReport",
    "PartitionPair",
    "PermutationPairMatrix",
    "TailRecord",
    "bell_number",
    "build_pair_matrix",
    "component_count",
    "compositions",
    "deficit_tail_bound",
    "deficit_tail_experiment",
    "deficit_tail_sweep",
    "deficit_union_bound",
    "find_matching_partitions",
    "matching_exhaustive_check",
    "multinomial_coefficient",
    "multinomial_facts_check",
    "rank_deficit",
    "set_partitions",
]
