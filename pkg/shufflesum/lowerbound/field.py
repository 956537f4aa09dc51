import itertools
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction

import tqdm

from .. import log
from ..analysis.distribution import Probability, statistical_distance
from ..utils.errors import check_budget
from .encoder import EncoderSpec, shuffled_distribution, splitmix_encoder_spec


def feasible_inputs(n: int, q: int, s: int) -> Iterator[tuple[int, ...]]:
    """
    Every input vector in F_q^n with coordinate sum s, in lexicographic order of the first n - 1 coordinates.
    """
    for head in itertools.product(range(q), repeat=n - 1):
        yield (*head, (s - sum(head)) % q)


def _resolve_encoder(q: int, m: int, enc: EncoderSpec | None) -> EncoderSpec:
    if enc is None:
        return splitmix_encoder_spec(q, m)
    if enc.q != q or enc.messages_per_party != m:
        raise ValueError(f"The encoder has q={enc.q}, m={enc.messages_per_party}, expected q={q}, m={m}")
    return enc


@dataclass(frozen=True)
class FieldDistanceRecord:
    """
    Average statistical distance between shuffled transcripts of equal-sum inputs.

    Attributes:
        n (int), m (int), q (int), s (int): parameters.
        d_avg (Fraction or float): q^(-2(n-1)) times the sum of SD(S(x), S(x')) over all ordered pairs with sum s.
        bound (Fraction): 1 - n^(nm) / q^(n-1).
        witness (tuple of tuple of int): the first pair (x, x') with the largest distance.
        witness_sd (Fraction or float): its distance.
    """

    n: int
    m: int
    q: int
    s: int
    d_avg: Probability
    bound: Fraction
    witness: tuple[tuple[int, ...], tuple[int, ...]]
    witness_sd: Probability

    @property
    def passed(self) -> bool:
        return self.d_avg >= self.bound and self.witness_sd >= self.bound


def avg_field_distance(
    n: int, m: int, q: int, s: int = 0, enc: EncoderSpec | None = None, budget: int | None = None
) -> FieldDistanceRecord:
    """
    Exact average distance over all pairs of inputs with sum s, the quantity that forces m to grow with log_n q.

    Args:
        n (int): number of parties.
        m (int): messages per party.
        q (int): field size.
        s (int, optional): the common input sum. Default: 0.
        enc (EncoderSpec, optional): the encoder. Default: split-and-mix.
        budget (int, optional): enumeration budget on the number of input pairs. Default: from config.

    Returns:
        (FieldDistanceRecord): record.
    """
    if type(n) is not int or n < 1:
        raise ValueError(f"n must be a positive int, got {n}")
    enc = _resolve_encoder(q, m, enc)
    check_budget(q ** (2 * (n - 1)), budget, f"Input pair enumeration at n={n}, q={q}")

    inputs = list(feasible_inputs(n, q, s))
    log.info(f"Comparing {len(inputs) ** 2} input pairs with sum {s} at n={n}, m={m}, q={q}")
    tables = [shuffled_distribution(enc, x) for x in tqdm.tqdm(inputs, desc="Shuffled tables", disable=None)]
    total = Fraction(0) if enc.is_exact else 0.0
    witness, witness_sd = (inputs[0], inputs[0]), Fraction(0)
    for i, j in itertools.combinations(range(len(inputs)), 2):
        sd = statistical_distance(tables[i], tables[j])
        total += 2 * sd
        if sd > witness_sd:
            witness, witness_sd = (inputs[i], inputs[j]), sd
    d_avg = total / q ** (2 * (n - 1))
    bound = 1 - Fraction(n ** (n * m), q ** (n - 1))
    return FieldDistanceRecord(n, m, q, s, d_avg, bound, witness, witness_sd)


@dataclass(frozen=True)
class InvYRecord:
    """
    Attributes:
        count (int): |Inv_y|, the number of inputs with sum s that can produce the transcript y.
        cap (int): min(q^(n-1), n^(nm)).
        inputs (list of tuple of int): the feasible inputs themselves.
    """

    count: int
    cap: int
    inputs: list[tuple[int, ...]]

    @property
    def passed(self) -> bool:
        return self.count <= self.cap


def invy_bound_check(
    y: Sequence[int], n: int, m: int, q: int, s: int = 0, enc: EncoderSpec | None = None, budget: int | None = None
) -> InvYRecord:
    """
    Count the equal-sum inputs that are consistent with one shuffled transcript y.
    """
    enc = _resolve_encoder(q, m, enc)
    if len(y) != n * m:
        raise ValueError(f"A transcript has {n * m} messages, got {len(y)}")
    check_budget(q ** (n - 1), budget, f"Input enumeration at n={n}, q={q}")

    key = tuple(sorted(int(symbol) for symbol in y))
    inputs = [x for x in feasible_inputs(n, q, s) if shuffled_distribution(enc, x).prob(key) > 0]
    return InvYRecord(len(inputs), min(q ** (n - 1), n ** (n * m)), inputs)
