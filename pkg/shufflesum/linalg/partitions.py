from __future__ import annotations

import functools
import itertools
import math as maths
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field

import numpy as np
import tqdm

from .. import log
from ..ffield.base import PrimeModulus
from ..protocol.params import as_modulus
from ..utils.errors import check_budget
from .pair_matrix import block_masks, build_pair_matrix, check_permutation, rank_deficit

Part = frozenset[int]


@dataclass(frozen=True)
class PartitionPair:
    """
    Two partitions of the parties [0, n) into k matched parts.

    Attributes:
        parts (tuple of tuple[frozenset, frozenset]): the k pairs (S_j, S'_j).
        n (int): number of parties.
    """

    parts: tuple[tuple[Part, Part], ...]
    n: int

    def __post_init__(self) -> None:
        for side in range(2):
            blocks = [pair[side] for pair in self.parts]
            if any(len(block) == 0 for block in blocks):
                raise ValueError("All parts must be non-empty")
            if sorted(itertools.chain.from_iterable(blocks)) != list(range(self.n)):
                raise ValueError(f"Parts must be disjoint and cover [0, {self.n})")
        if any(len(left) != len(right) for left, right in self.parts):
            raise ValueError("Matched parts must have equal sizes")

    @property
    def k(self) -> int:
        return len(self.parts)

    def to_lists(self) -> list[tuple[list[int], list[int]]]:
        return [(sorted(left), sorted(right)) for left, right in self.parts]


@functools.cache
def bell_number(n: int) -> int:
    """
    Number of set partitions of an n element set, from the Bell triangle.
    """
    assert type(n) is int and n >= 0
    row = [1]
    for _ in range(n):
        next_row = [row[-1]]
        for value in row:
            next_row.append(next_row[-1] + value)
        row = next_row
    return row[0]


def set_partitions(n: int, k: int) -> Iterator[list[list[int]]]:
    """
    Every partition of [0, n) into exactly k non-empty blocks, as restricted growth strings in lexicographic order.
    Blocks are listed in increasing order of their minimal elements.
    """
    if k < 1 or k > n:
        return
    labels = [0] * n

    def grow(index: int, used: int) -> Iterator[list[list[int]]]:
        if n - index < k - used:
            return
        if index == n:
            if used == k:
                blocks: list[list[int]] = [[] for _ in range(k)]
                for element, label in enumerate(labels):
                    blocks[label].append(element)
                yield blocks
            return
        for label in range(min(used + 1, k)):
            labels[index] = label
            yield from grow(index + 1, max(used, label + 1))

    labels[0] = 0
    yield from grow(1, 1)


def _match_block(block: Sequence[int], top_masks: Sequence[int], bottom_masks: Sequence[int]) -> Part | None:
    union = 0
    for party in block:
        union |= top_masks[party]
    matched = [party for party, mask in enumerate(bottom_masks) if mask & union]
    covered = 0
    for party in matched:
        covered |= bottom_masks[party]
    if covered != union:
        return None
    return frozenset(matched)


def find_matching_partitions(
    pi: Sequence[int], pi_prime: Sequence[int], n: int, m: int, k: int, budget: int | None = None
) -> PartitionPair | None:
    """
    Search for k-part partitions S and S' of the parties with pi(S_j lifted) = pi'(S'_j lifted) for every part, where
    a set of parties is lifted to the union of their position blocks.

    Every k-block partition S is tried in canonical order and the only possible S' is derived from it: S'_j collects
    the parties whose pi' block image meets pi(S_j lifted), and the match holds when those images exactly cover it.

    Args:
        pi (list of int): first permutation of [0, mn).
        pi_prime (list of int): second permutation of [0, mn).
        n (int): number of parties.
        m (int): messages per party.
        k (int): number of parts, at least 1.
        budget (int, optional): largest allowed Bell(n)^2. Default: config `[partitions] budget`.

    Returns:
        (PartitionPair or none): partitions. The first matching pair found, or None.
    """
    if type(k) is not int or k < 1:
        raise ValueError(f"k must be a positive int, got {k}")
    pi = check_permutation(pi, n * m)
    pi_prime = check_permutation(pi_prime, n * m)
    check_budget(bell_number(n) ** 2, budget, f"Partition pair search at n={n}", section="partitions")

    top_masks = block_masks(pi, n, m)
    bottom_masks = block_masks(pi_prime, n, m)
    for blocks in set_partitions(n, k):
        parts = []
        for block in blocks:
            matched = _match_block(block, top_masks, bottom_masks)
            if matched is None:
                break
            parts.append((frozenset(block), matched))
        else:
            return PartitionPair(tuple(parts), n)
    return None


def row_sums_agree(pi: Sequence[int], pi_prime: Sequence[int], partitions: PartitionPair, m: int, q: int) -> bool:
    """
    Check that, for every part, the rows of A_pi in S_j and the rows of A_pi' in S'_j have equal sums over F_q.
    """
    pair_matrix = build_pair_matrix(pi, pi_prime, partitions.n, m, q)
    entries = pair_matrix.matrix.entries
    n = partitions.n
    for left, right in partitions.parts:
        top_sum = entries[sorted(left)].sum(axis=0) % q
        bottom_sum = entries[[n + party for party in sorted(right)]].sum(axis=0) % q
        if not np.array_equal(top_sum, bottom_sum):
            return False
    return True


@dataclass
class MatchingCheckReport:
    """
    Results of checking rank deficits against matching partitions over a set of permutation pairs.

    Attributes:
        n (int), m (int), q (int): parameters.
        pairs_checked (int): number of permutation pairs visited.
        proved_direction_holds (bool): defc >= k always implied a k-part match.
        converse_holds (bool): every k-part match had agreeing row sums and defc >= k.
        equality_holds (bool): defc always equalled the largest k with a match.
        counterexamples (list of dict): the first few violations, empty when everything held.
    """

    n: int
    m: int
    q: int
    pairs_checked: int = 0
    proved_direction_holds: bool = True
    converse_holds: bool = True
    equality_holds: bool = True
    counterexamples: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.proved_direction_holds and self.converse_holds


_MAX_COUNTEREXAMPLES = 10


def matching_exhaustive_check(
    n: int,
    m: int,
    q: PrimeModulus | int,
    all_pairs: bool = False,
    budget: int | None = None,
    partition_budget: int | None = None,
) -> MatchingCheckReport:
    """
    Over every permutation pair of [0, mn), compare the rank deficit with the k-part matching partitions for each k.

    Relabelling the columns by pi^-1 changes neither the rank nor which partitions match, so by default pi is fixed
    to the identity and only pi' is enumerated. `all_pairs` visits the full (mn)!^2 grid instead.

    Args:
        n (int): number of parties.
        m (int): messages per party.
        q (PrimeModulus or int): the field the rank is computed over.
        all_pairs (bool, optional): enumerate both permutations. Default: false.
        budget (int, optional): largest allowed number of pairs. Default: config `[enumeration] budget`.
        partition_budget (int, optional): largest allowed Bell(n)^2 per pair. Default: config `[partitions] budget`.

    Returns:
        (MatchingCheckReport): report. Which directions held and the first counterexamples.
    """
    q = as_modulus(q).q
    size = n * m
    pair_count = maths.factorial(size) ** (2 if all_pairs else 1)
    check_budget(pair_count, budget, f"Exhaustive pair check at mn={size}")
    log.info(f"Checking {pair_count} permutation pairs at n={n}, m={m}, q={q}")

    report = MatchingCheckReport(n, m, q)
    firsts = itertools.permutations(range(size)) if all_pairs else [tuple(range(size))]
    for pi in firsts:
        for pi_prime in tqdm.tqdm(
            itertools.permutations(range(size)),
            total=maths.factorial(size),
            desc="Checking permutation pairs",
            unit="pair",
            disable=None,
            leave=False,
        ):
            _check_pair(report, pi, pi_prime, n, m, q, partition_budget)
    return report


def _check_pair(
    report: MatchingCheckReport, pi: tuple, pi_prime: tuple, n: int, m: int, q: int, partition_budget: int | None
) -> None:
    report.pairs_checked += 1
    deficit = rank_deficit(build_pair_matrix(pi, pi_prime, n, m, q))
    largest_match = 0
    for k in range(1, n + 1):
        partitions = find_matching_partitions(pi, pi_prime, n, m, k, partition_budget)
        if partitions is None:
            if deficit >= k:
                report.proved_direction_holds = False
                _record(report, "proved_direction", pi, pi_prime, deficit, k)
            continue
        largest_match = k
        if not row_sums_agree(pi, pi_prime, partitions, m, q) or deficit < k:
            report.converse_holds = False
            _record(report, "converse", pi, pi_prime, deficit, k)
    if largest_match != deficit:
        report.equality_holds = False
        _record(report, "equality", pi, pi_prime, deficit, largest_match)


def _record(report: MatchingCheckReport, kind: str, pi: tuple, pi_prime: tuple, deficit: int, k: int) -> None:
    if len(report.counterexamples) < _MAX_COUNTEREXAMPLES:
        report.counterexamples.append(
            {"kind": kind, "pi": list(pi), "pi_prime": list(pi_prime), "deficit": deficit, "k": k}
        )
