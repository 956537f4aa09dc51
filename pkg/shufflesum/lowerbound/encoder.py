from __future__ import annotations

import heapq
import itertools
import math as maths
from collections import Counter
from collections.abc import Callable, Mapping, Sequence
from fractions import Fraction

import numpy as np
import tqdm

from ..analysis.distribution import (
    FLOAT_MASS_TOLERANCE,
    DistributionTable,
    Multiset,
    Probability,
    multinomial,
    statistical_distance,
    sum_constrained_multisets,
)
from ..utils.errors import check_budget
from ..utils.rng import make_generator


class EncoderSpec:
    """
    A local encoder Enc: F_q -> [l]^m given by explicit tables.

    Every per-input table is symmetrised at construction by averaging over the m! coordinate orders. The shuffled
    transcript only sees multisets, so this keeps every shuffled distribution and makes each per-input distribution
    exchangeable. Internally a table is stored as the probability of each sorted multiset of m symbols.

    Attributes:
        alphabet_size (int): l, the number of message symbols.
        messages_per_party (int): m.
        q (int): the number of inputs, 0, ..., q - 1.
        estimated (bool): the tables were estimated from samples rather than given exactly.
    """

    alphabet_size: int
    messages_per_party: int
    q: int
    estimated: bool

    def __init__(
        self,
        distributions: Mapping[int, Mapping[Sequence[int], Probability]],
        alphabet_size: int,
        messages_per_party: int,
        estimated: bool = False,
    ) -> None:
        """
        Args:
            distributions (dict[int, dict[tuple, Fraction or float]]): for every input x in [0, q), the probability
                of each ordered m-tuple of symbols. Missing tuples have probability zero.
            alphabet_size (int): l.
            messages_per_party (int): m.
            estimated (bool, optional): mark the tables as estimates. Default: false.
        """
        if type(alphabet_size) is not int or alphabet_size < 1:
            raise ValueError(f"alphabet_size must be a positive int, got {alphabet_size}")
        if type(messages_per_party) is not int or messages_per_party < 1:
            raise ValueError(f"messages_per_party must be a positive int, got {messages_per_party}")
        if sorted(distributions.keys()) != list(range(len(distributions))) or len(distributions) == 0:
            raise ValueError("Tables must be given for every input 0, ..., q - 1")

        self.alphabet_size = alphabet_size
        self.messages_per_party = messages_per_party
        self.q = len(distributions)
        self.estimated = estimated
        self._multisets: dict[int, dict[Multiset, Probability]] = {}
        for x, table in distributions.items():
            self._add_table(x, table)

    @classmethod
    def from_multisets(
        cls,
        masses: Mapping[int, Mapping[Multiset, Probability]],
        alphabet_size: int,
        messages_per_party: int,
        estimated: bool = False,
    ) -> EncoderSpec:
        """
        Build an already exchangeable encoder from the probability of each sorted multiset per input.
        """
        # The sorted representative carries the whole multiset mass; symmetrisation spreads it over the orderings.
        ordered: dict[int, dict[Multiset, Probability]] = {}
        for x, table in masses.items():
            ordered[x] = {}
            for multiset, mass in table.items():
                key = tuple(sorted(multiset))
                ordered[x][key] = ordered[x].get(key, 0) + mass
        return cls(ordered, alphabet_size, messages_per_party, estimated)

    @classmethod
    def from_sampler(
        cls,
        sampler: Callable[[int, np.random.Generator], Sequence[int]],
        q: int,
        alphabet_size: int,
        messages_per_party: int,
        samples: int,
        seed: int,
    ) -> EncoderSpec:
        """
        Estimate the tables of a black-box encoder from `samples` draws per input. The result is flagged `estimated`
        and every quantity derived from it carries sampling error.

        Args:
            sampler (callable): (x, rng) -> m symbols.
            q (int): number of inputs.
            alphabet_size (int): l.
            messages_per_party (int): m.
            samples (int): draws per input.
            seed (int): 64-bit seed.

        Returns:
            (EncoderSpec): encoder. Empirical frequencies as floats.
        """
        if type(samples) is not int or samples < 1:
            raise ValueError(f"samples must be a positive int, got {samples}")
        rng = make_generator(seed)
        masses = {}
        for x in tqdm.trange(q, desc="Sampling encoder", unit="input", disable=None):
            counts = Counter(tuple(sorted(int(s) for s in sampler(x, rng))) for _ in range(samples))
            masses[x] = {y: count / samples for y, count in counts.items()}
        return cls.from_multisets(masses, alphabet_size, messages_per_party, estimated=True)

    def _add_table(self, x: int, table: Mapping[Sequence[int], Probability]) -> None:
        m = self.messages_per_party
        masses: dict[Multiset, Probability] = {}
        for y, prob in table.items():
            y = tuple(int(symbol) for symbol in y)
            if len(y) != m or not all(0 <= symbol < self.alphabet_size for symbol in y):
                raise ValueError(f"Encoding {y} of input {x} is not an m-tuple over [0, {self.alphabet_size})")
            if prob < 0:
                raise ValueError(f"Negative probability {prob} for encoding {y} of input {x}")
            if prob == 0:
                continue
            if isinstance(prob, int):
                prob = Fraction(prob)
            key = tuple(sorted(y))
            masses[key] = masses.get(key, 0) + prob
        self._check_mass(x, masses)
        self._multisets[x] = dict(sorted(masses.items()))

    def _check_mass(self, x: int, masses: Mapping[Multiset, Probability]) -> None:
        total = sum(masses.values())
        if all(type(prob) is Fraction for prob in masses.values()):
            if total != 1:
                raise ValueError(f"The table of input {x} sums to {total}, not 1")
        elif abs(total - 1) > FLOAT_MASS_TOLERANCE:
            raise ValueError(f"The table of input {x} sums to {total}, not 1 within {FLOAT_MASS_TOLERANCE}")

    @property
    def is_exact(self) -> bool:
        return all(type(p) is Fraction for table in self._multisets.values() for p in table.values())

    def multiset_distribution(self, x: int) -> dict[Multiset, Probability]:
        return dict(self._multisets[int(x) % self.q])

    def support(self, x: int) -> set[Multiset]:
        return set(self._multisets[int(x) % self.q])

    def prob(self, x: int, y: Sequence[int]) -> Probability:
        """
        Probability of the ordered encoding y on input x, after symmetrisation.
        """
        key = tuple(sorted(int(symbol) for symbol in y))
        mass = self._multisets[int(x) % self.q].get(key, 0)
        return mass / multinomial(key) if mass else mass

    def marginal(self, x: int, t: int) -> dict[tuple[int, ...], Probability]:
        """
        The t-marginal: the distribution of the first t coordinates of an encoding of x, over ordered t-tuples.

        An exchangeable encoding reveals its coordinates as draws without replacement from its multiset, so each
        ordered t-tuple z drawn from a multiset has probability prod_j (remaining copies of z_j) / (m - j).
        """
        m = self.messages_per_party
        if type(t) is not int or not 1 <= t <= m:
            raise ValueError(f"t must be an int in [1, {m}], got {t}")
        result: dict[tuple[int, ...], Probability] = {}
        for multiset, mass in self._multisets[int(x) % self.q].items():
            for z in set(itertools.permutations(multiset, t)):
                remaining = Counter(multiset)
                weight = 1
                for j, symbol in enumerate(z):
                    weight *= Fraction(remaining[symbol], m - j)
                    remaining[symbol] -= 1
                result[z] = result.get(z, 0) + mass * (weight if type(mass) is Fraction else float(weight))
        return result


def splitmix_encoder_spec(q: int, m: int) -> EncoderSpec:
    """
    The split-and-mix encoder over F_q with m shares: every multiset of m field symbols summing to x, weighted by its
    number of orderings over q^(m-1).
    """
    total = q ** (m - 1)
    masses = {
        x: {multiset: Fraction(count, total) for multiset, count in sum_constrained_multisets(q, m, x)}
        for x in range(q)
    }
    return EncoderSpec.from_multisets(masses, q, m)


def check_disjoint_supports(enc: EncoderSpec) -> bool:
    """
    Whether the encodings of different inputs never coincide. Every correct aggregation protocol has this property.
    """
    assert isinstance(enc, EncoderSpec)
    seen: set[Multiset] = set()
    for x in range(enc.q):
        support = enc.support(x)
        if seen & support:
            return False
        seen |= support
    return True


def shuffled_distribution(enc: EncoderSpec, x: Sequence[int], budget: int | None = None) -> DistributionTable:
    """
    Exact distribution S(x) of the shuffled multiset when party i encodes x[i] with `enc`.

    Returns:
        (DistributionTable): table. Over sorted multisets of n * m symbols in [0, l).
    """
    n, m = len(x), enc.messages_per_party
    party_tables = [enc.multiset_distribution(value) for value in x]
    check_budget(maths.prod(len(table) for table in party_tables), budget, f"Shuffled distribution of {n} parties")

    combined: dict[Multiset, Probability] = {(): Fraction(1) if enc.is_exact else 1.0}
    for table in party_tables:
        merged: dict[Multiset, Probability] = {}
        for left, left_prob in combined.items():
            for right, right_prob in table.items():
                union = tuple(heapq.merge(left, right))
                merged[union] = merged.get(union, 0) + left_prob * right_prob
        combined = merged
    return DistributionTable(combined, enc.alphabet_size, n, m)


def exact_shuffled_sd(
    enc: EncoderSpec, x: Sequence[int], x_prime: Sequence[int], budget: int | None = None
) -> Probability:
    """
    SD(S(x), S(x')) for one encoder, exactly.
    """
    return statistical_distance(shuffled_distribution(enc, x, budget), shuffled_distribution(enc, x_prime, budget))
