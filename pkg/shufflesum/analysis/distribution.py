from __future__ import annotations

import heapq
import itertools
import json
import math as maths
from collections.abc import Iterable, Iterator, Mapping, Sequence
from fractions import Fraction

from .. import log
from ..ffield.base import FieldElement
from ..protocol.params import ProtocolParams
from ..setup.config import Config
from ..utils.errors import check_budget

Probability = Fraction | float
Multiset = tuple[int, ...]

# Allowed drift of a float table's total mass from 1.
FLOAT_MASS_TOLERANCE = 1e-12


class DistributionTable:
    """
    A probability distribution over canonical transcripts, each a sorted tuple of n * m symbols in [0, q).

    Probabilities are exact `Fraction`s when the table came from a small enumeration and floats otherwise. The table is
    immutable after construction.

    Attributes:
        q (int): alphabet size, the field size for split-and-mix transcripts.
        n (int): number of parties.
        m (int): messages per party.
        support (tuple of tuple of int): sorted distinct multisets with non-zero probability.
        probs (tuple of Fraction or float): matching probabilities.
    """

    q: int
    n: int
    m: int
    support: tuple[Multiset, ...]
    probs: tuple[Probability, ...]

    def __init__(self, entries: Mapping[Multiset, Probability], q: int, n: int, m: int) -> None:
        assert type(q) is int and q >= 1
        assert type(n) is int and n >= 1
        assert type(m) is int and m >= 1

        support = []
        probs = []
        for multiset in sorted(entries.keys()):
            prob = entries[multiset]
            if prob < 0:
                raise ValueError(f"Negative probability {prob} for {multiset}")
            if prob == 0:
                continue
            if len(multiset) != n * m or list(multiset) != sorted(multiset):
                raise ValueError(f"Support entry {multiset} is not a sorted multiset of {n * m} symbols")
            if not all(0 <= symbol < q for symbol in multiset):
                raise ValueError(f"Support entry {multiset} has symbols outside [0, {q})")
            support.append(tuple(multiset))
            probs.append(prob)

        total = sum(probs)
        if all(type(prob) is Fraction for prob in probs):
            if total != 1:
                raise ValueError(f"Exact probabilities must sum to 1, got {total}")
        elif abs(total - 1) > FLOAT_MASS_TOLERANCE:
            raise ValueError(f"Probabilities must sum to 1 within {FLOAT_MASS_TOLERANCE}, got {total}")

        self.q = q
        self.n = n
        self.m = m
        self.support = tuple(support)
        self.probs = tuple(probs)
        self._lookup = dict(zip(self.support, self.probs))

    @property
    def is_exact(self) -> bool:
        return all(type(prob) is Fraction for prob in self.probs)

    def prob(self, multiset: Iterable[int]) -> Probability:
        """
        Probability of one transcript multiset. Zero outside the support.
        """
        return self._lookup.get(tuple(sorted(multiset)), Fraction(0) if self.is_exact else 0.0)

    def items(self) -> Iterator[tuple[Multiset, Probability]]:
        return iter(zip(self.support, self.probs))

    def __len__(self) -> int:
        return len(self.support)

    def same_space(self, other: DistributionTable) -> bool:
        return (self.q, self.n, self.m) == (other.q, other.n, other.m)

    def to_dict(self) -> dict:
        """
        Text export {q, n, m, entries: [{multiset, prob_num, prob_den}]}. Float probabilities are written as their
        exact binary fraction.
        """
        entries = []
        for multiset, prob in self.items():
            exact = prob if type(prob) is Fraction else Fraction(prob)
            entries.append({"multiset": list(multiset), "prob_num": exact.numerator, "prob_den": exact.denominator})
        return {"q": self.q, "n": self.n, "m": self.m, "exact": self.is_exact, "entries": entries}

    @classmethod
    def from_dict(cls, content: dict) -> DistributionTable:
        exact = content.get("exact", True)
        entries = {}
        for entry in content["entries"]:
            prob = Fraction(int(entry["prob_num"]), int(entry["prob_den"]))
            entries[tuple(int(v) for v in entry["multiset"])] = prob if exact else float(prob)
        return cls(entries, int(content["q"]), int(content["n"]), int(content["m"]))

    def save(self, file_path: str) -> None:
        with open(file_path, "w") as file:
            json.dump(self.to_dict(), file)

    @classmethod
    def load(cls, file_path: str) -> DistributionTable:
        with open(file_path, "r") as file:
            return cls.from_dict(json.load(file))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DistributionTable):
            return NotImplemented
        return self.same_space(other) and self.support == other.support and self.probs == other.probs

    def __repr__(self) -> str:
        return f"DistributionTable(q={self.q}, n={self.n}, m={self.m}, support size {len(self)})"


def multinomial(multiset: Sequence[int]) -> int:
    """
    Number of distinct orderings of a multiset, len! / prod(count!).
    """
    result = maths.factorial(len(multiset))
    for _, group in itertools.groupby(sorted(multiset)):
        result //= maths.factorial(len(list(group)))
    return result


def sum_constrained_multisets(q: int, size: int, total: int) -> Iterator[tuple[Multiset, int]]:
    """
    Every sorted multiset of `size` symbols from [0, q) whose sum is `total` mod q, with its number of orderings.
    Summed over the output, the orderings count q^(size - 1) tuples.
    """
    total %= q
    for multiset in itertools.combinations_with_replacement(range(q), size):
        if sum(multiset) % q == total:
            yield multiset, multinomial(multiset)


def merge_multiset_counts(left: Mapping[Multiset, int], right: Mapping[Multiset, int]) -> dict[Multiset, int]:
    """
    Distribution of the union of two independent multisets, as integer weights.
    """
    merged: dict[Multiset, int] = {}
    for left_multiset, left_count in left.items():
        for right_multiset, right_count in right.items():
            union = tuple(heapq.merge(left_multiset, right_multiset))
            merged[union] = merged.get(union, 0) + left_count * right_count
    return merged


def counts_to_table(
    counts: Mapping[Multiset, int], total: int, q: int, n: int, m: int, rational_state_limit: int | None
) -> DistributionTable:
    """
    Normalise integer weights into a table, exact when the enumerated state count is at most `rational_state_limit`.
    """
    if rational_state_limit is None:
        rational_state_limit = Config.get_default_for("enumeration", "rational_state_limit")
    if total <= rational_state_limit:
        return DistributionTable({y: Fraction(c, total) for y, c in counts.items()}, q, n, m)
    return DistributionTable({y: c / total for y, c in counts.items()}, q, n, m)


def _input_values(x: Sequence[FieldElement | int], params: ProtocolParams) -> list[int]:
    if len(x) != params.n:
        raise ValueError(f"Expected {params.n} inputs, got {len(x)}")
    values = []
    for value in x:
        if isinstance(value, FieldElement):
            if value.modulus != params.modulus:
                raise ValueError(f"Input {value} is not in F_{params.q}")
            value = value.value
        values.append(int(value) % params.q)
    return values


def exact_transcript_distribution(
    x: Sequence[FieldElement | int],
    params: ProtocolParams,
    budget: int | None = None,
    rational_state_limit: int | None = None,
) -> DistributionTable:
    """
    Exact distribution of the split-and-mix transcript on input vector x.

    Each party's m shares are a uniform ordered tuple with sum x_i, so its multiset of shares has weight equal to its
    number of orderings. The party weights are merged party by party, which counts all q^((m-1)n) joint share
    choices with equal weight.

    Args:
        x (list of FieldElement or int): the n inputs.
        params (ProtocolParams): protocol parameters.
        budget (int, optional): enumeration budget. Default: config `[enumeration] budget`.
        rational_state_limit (int, optional): largest state count stored as exact rationals. Default: from config.

    Returns:
        (DistributionTable): table. The distribution of the canonical transcript.
    """
    values = _input_values(x, params)
    q, n, m = params.q, params.n, params.m
    state_count = q ** ((m - 1) * n)
    check_budget(state_count, budget, f"Transcript enumeration at n={n}, m={m}, q={q}")
    log.debug(f"Enumerating {state_count} share choices for x={values}")

    party_tables: dict[int, dict[Multiset, int]] = {}
    counts: dict[Multiset, int] = {(): 1}
    for value in values:
        if value not in party_tables:
            party_tables[value] = dict(sum_constrained_multisets(q, m, value))
        counts = merge_multiset_counts(counts, party_tables[value])
    return counts_to_table(counts, state_count, q, n, m, rational_state_limit)


def uniform_conditioned_distribution(
    a: FieldElement | int,
    params: ProtocolParams,
    budget: int | None = None,
    rational_state_limit: int | None = None,
) -> DistributionTable:
    """
    The reference distribution U_a: the canonical multiset of a uniform vector in F_q^(mn) whose coordinates sum to a.

    Args:
        a (FieldElement or int): the coordinate sum.
        params (ProtocolParams): protocol parameters.
        budget (int, optional): enumeration budget. Default: from config.
        rational_state_limit (int, optional): largest state count stored as exact rationals. Default: from config.

    Returns:
        (DistributionTable): table. U_a over canonical multisets.
    """
    a = a.value if isinstance(a, FieldElement) else int(a)
    q, n, m = params.q, params.n, params.m
    state_count = q ** (m * n - 1)
    check_budget(state_count, budget, f"Conditioned uniform enumeration at mn={m * n}, q={q}")

    counts = dict(sum_constrained_multisets(q, m * n, a))
    return counts_to_table(counts, state_count, q, n, m, rational_state_limit)


def statistical_distance(first: DistributionTable, second: DistributionTable) -> Probability:
    """
    Half the L1 distance between two tables over the union of their supports.

    Args:
        first (DistributionTable): first distribution.
        second (DistributionTable): second distribution, over the same (q, n, m) space.

    Returns:
        (Fraction or float): sd. In [0, 1]; exact when both tables are exact.
    """
    if not first.same_space(second):
        raise ValueError(
            f"Tables live on different spaces: (q, n, m) = {(first.q, first.n, first.m)} and "
            + f"{(second.q, second.n, second.m)}"
        )
    exact = first.is_exact and second.is_exact
    total = Fraction(0) if exact else 0.0
    for multiset in set(first.support) | set(second.support):
        difference = first.prob(multiset) - second.prob(multiset)
        total += abs(difference if exact else float(difference))
    return total / 2


def sd_to_uniform(
    x: Sequence[FieldElement | int],
    params: ProtocolParams,
    budget: int | None = None,
    rational_state_limit: int | None = None,
) -> Probability:
    """
    Exact SD(R(x), U_sum(x)).
    """
    values = _input_values(x, params)
    return statistical_distance(
        exact_transcript_distribution(values, params, budget, rational_state_limit),
        uniform_conditioned_distribution(sum(values) % params.q, params, budget, rational_state_limit),
    )


def sd_to_uniform_sweep(
    x: Sequence[int], q: int, ms: Sequence[int], budget: int | None = None, rational_state_limit: int | None = None
) -> list[tuple[int, Probability]]:
    """
    SD(R(x), U_sum(x)) for every m in `ms`, at fixed inputs and field.

    Returns:
        (list of tuple[int, Fraction or float]): sweep. (m, sd) pairs in the order of `ms`.
    """
    return [(m, sd_to_uniform(x, ProtocolParams.create(len(x), m, q), budget, rational_state_limit)) for m in ms]
