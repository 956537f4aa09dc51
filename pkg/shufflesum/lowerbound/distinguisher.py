import itertools
import math as maths
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import tqdm

from .. import log
from ..analysis.distribution import Probability
from ..analysis.montecarlo import mc_advantage, splitmix_sampler, zero_sum_subset_acceptor
from ..protocol.params import ProtocolParams
from ..setup.config import Config
from ..utils.errors import BudgetExceededError, check_budget
from .encoder import EncoderSpec

CATEGORIES = ("I", "II", "III")
# Share values gathered per vectorised block of the zero-sum test enumeration.
_ENUMERATION_BLOCK = 1 << 22


@dataclass(frozen=True)
class WarmupRecord:
    """
    Advantage of the zero-sum test "the first m shuffled messages sum to 0" between S(0) and S(x) for split-and-mix.

    Attributes:
        n (int), m (int), q (int): parameters.
        x (tuple of int): the second input vector.
        advantage (float or Fraction): Pr[accept | S(0)] - Pr[accept | S(x)].
        closed_form (Fraction): the same advantage from counting which subsets are a single party's shares.
        floor (float): 1 / (e n)^m.
        exact (bool): the advantage was enumerated rather than sampled.
        stderr (float): Monte Carlo standard error, 0 when exact.
        slack (float): standard errors of allowed shortfall when sampled.
    """

    n: int
    m: int
    q: int
    x: tuple[int, ...]
    advantage: Probability
    closed_form: Fraction
    floor: float
    exact: bool
    stderr: float = 0.0
    slack: float = 5.0

    @property
    def passed(self) -> bool:
        return self.advantage + self.slack * self.stderr >= self.floor


def warmup_acceptance_probability(x: Sequence[int], m: int, q: int) -> Fraction:
    """
    Pr[m uniformly chosen messages of the split-and-mix transcript on x sum to 0]. The chosen messages are exactly
    one party's shares with probability n / C(nm, m) and then sum to that party's input; any other choice holds at
    most m - 1 shares of some party and its sum is uniform.
    """
    n = len(x)
    subsets = maths.comb(n * m, m)
    zeros = sum(1 for value in x if value % q == 0)
    return Fraction(zeros, subsets) + (1 - Fraction(n, subsets)) / q


def _share_block(start: int, stop: int, x: np.ndarray, m: int, q: int) -> np.ndarray:
    """
    Messages of share choices start..stop-1: the m - 1 free shares of every party are the base q digits of the choice
    number and each party's last share completes its input.
    """
    n = x.shape[0]
    indices = np.arange(start, stop, dtype=np.int64)
    powers = q ** np.arange((m - 1) * n - 1, -1, -1, dtype=np.int64)
    free = ((indices[:, None] // powers[None, :]) % q).reshape(stop - start, n, m - 1)
    shares = np.empty((stop - start, n, m), dtype=np.int64)
    shares[:, :, : m - 1] = free
    shares[:, :, m - 1] = (x[None, :] - free.sum(axis=2)) % q
    return shares.reshape(stop - start, n * m)


def _enumerated_acceptance(x: Sequence[int], m: int, q: int) -> Fraction:
    x = np.asarray(x, dtype=np.int64)
    n = x.shape[0]
    choices = q ** ((m - 1) * n)
    subsets = np.array(list(itertools.combinations(range(n * m), m)), dtype=np.int64)
    rows = max(1, _ENUMERATION_BLOCK // (subsets.shape[0] * m))

    accepted = 0
    for start in tqdm.trange(0, choices, rows, desc="Enumerating shares", disable=None, leave=False):
        messages = _share_block(start, min(start + rows, choices), x, m, q)
        accepted += int((messages[:, subsets].sum(axis=2) % q == 0).sum())
    return Fraction(accepted, choices * subsets.shape[0])


def splitmix_distinguisher_advantage(
    n: int,
    m: int,
    q: int,
    x: Sequence[int] | None = None,
    trials: int = 100_000,
    seed: int = 0,
    budget: int | None = None,
    slack: float | None = None,
) -> WarmupRecord:
    """
    Advantage of the zero-sum test between the all-zero input and x = (1, ..., 1, -(n-1)).

    The advantage is enumerated over every joint share choice and every position subset when that fits the budget,
    otherwise it is estimated by Monte Carlo.

    Args:
        n (int): number of parties.
        m (int): messages per party.
        q (int): field size.
        x (list of int, optional): the second input vector. Default: (1, ..., 1, -(n-1)).
        trials (int, optional): Monte Carlo trials per distribution when enumeration is too large. Default: 10^5.
        seed (int, optional): 64-bit seed for the Monte Carlo fallback. Default: 0.
        budget (int, optional): enumeration budget. Default: from config.
        slack (float, optional): standard errors of allowed shortfall when sampled. Default: from config.

    Returns:
        (WarmupRecord): record.
    """
    params = ProtocolParams.create(n, m, q)
    x = tuple([1] * (n - 1) + [-(n - 1) % q]) if x is None else tuple(int(value) % q for value in x)
    if len(x) != n:
        raise ValueError(f"Expected {n} inputs, got {len(x)}")
    if sum(x) % q != 0:
        raise ValueError(f"The input vector must sum to 0 mod {q}, got {sum(x) % q}")

    zero = (0,) * n
    closed_form = warmup_acceptance_probability(zero, m, q) - warmup_acceptance_probability(x, m, q)
    floor = 1 / (maths.e * n) ** m
    slack = float(Config.get_default_for("statistics", "stderr_slack") if slack is None else slack)
    try:
        check_budget(q ** ((m - 1) * n) * maths.comb(n * m, m), budget, "Zero-sum test enumeration")
    except BudgetExceededError as e:
        log.warn(f"{e}, estimating the zero-sum test advantage with {trials} Monte Carlo trials instead")
        estimate, stderr = mc_advantage(
            splitmix_sampler(zero, params), splitmix_sampler(x, params), zero_sum_subset_acceptor(m), trials, seed
        )
        return WarmupRecord(n, m, q, x, estimate, closed_form, floor, False, stderr, slack)
    advantage = _enumerated_acceptance(zero, m, q) - _enumerated_acceptance(x, m, q)
    return WarmupRecord(n, m, q, x, advantage, closed_form, floor, True, 0.0, slack)


@dataclass(frozen=True)
class MarginalSpec:
    """
    The marginal test used by the general distinguisher.

    Attributes:
        t (int): the smallest marginal size whose largest distance reaches its threshold.
        x_star (int): the input whose t-marginal is furthest from the zero input's, smallest on ties.
        H (frozenset of tuple of int): the t-tuples more likely under the zero input than under x_star.
        threshold (Fraction): 1 / (10nm)^(4(m-t)).
        sd (Fraction or float): SD(D_0|t, D_x_star|t).
        smaller_sds (dict[int, Fraction or float]): max over x of SD(D_0|t', D_x|t') for each t' < t.
    """

    t: int
    x_star: int
    H: frozenset[tuple[int, ...]]
    threshold: Fraction
    sd: Probability
    smaller_sds: dict[int, Probability] = field(default_factory=dict)


@dataclass(frozen=True)
class DistinguisherRun:
    """
    Exact advantage of the marginal test, split by the category of the shuffling permutation.

    Attributes:
        marginal (MarginalSpec): the test.
        x (tuple of int): the input (x*, ..., x*, -(n-1) x*).
        category_probs (dict[str, Fraction]): probability of categories I, II and III.
        delta_by_category (dict[str, Fraction or float]): conditional expected advantage per category, 0 for empty
            categories.
        total_advantage (Fraction or float): E over permutations of the advantage.
        floor (Fraction): 1 / (10nm)^(5m).
        checks (dict[str, bool]): each intermediate inequality by name, see `general_distinguisher`.
    """

    marginal: MarginalSpec
    x: tuple[int, ...]
    category_probs: dict[str, Fraction]
    delta_by_category: dict[str, Probability]
    total_advantage: Probability
    floor: Fraction
    checks: dict[str, bool]

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def marginal_distance(enc: EncoderSpec, x: int, t: int) -> Probability:
    zero, other = enc.marginal(0, t), enc.marginal(x, t)
    total = sum(abs(zero.get(z, 0) - other.get(z, 0)) for z in set(zero) | set(other))
    return total / 2


def find_marginal_spec(enc: EncoderSpec, n: int) -> MarginalSpec:
    """
    Pick the smallest t whose largest t-marginal distance from the zero input is at least 1 / (10nm)^(4(m-t)).
    """
    m = enc.messages_per_party
    smaller_sds: dict[int, Probability] = {}
    for t in range(1, m + 1):
        threshold = Fraction(1, (10 * n * m) ** (4 * (m - t)))
        distances = [marginal_distance(enc, x, t) for x in range(enc.q)]
        best = max(distances)
        if best >= threshold:
            x_star = distances.index(best)
            zero, other = enc.marginal(0, t), enc.marginal(x_star, t)
            H = frozenset(z for z, prob in zero.items() if prob > other.get(z, 0))
            return MarginalSpec(t, x_star, H, threshold, best, smaller_sds)
        smaller_sds[t] = best
    raise ValueError("No marginal reaches its threshold, so the encoder supports are not disjoint")


def _count_vectors(n: int, m: int, t: int) -> list[tuple[int, ...]]:
    return [c for c in itertools.product(range(min(m, t) + 1), repeat=n) if sum(c) == t]


def _acceptance(enc: EncoderSpec, inputs: Sequence[int], counts: Sequence[int], H: frozenset) -> Probability:
    """
    Pr[the first t shuffled messages lie in H] when party i contributes counts[i] of them. H is closed under
    reordering, so the parties' marginals can be concatenated in party order.
    """
    tuples: dict[tuple[int, ...], Probability] = {(): 1}
    for value, count in zip(inputs, counts, strict=True):
        if count == 0:
            continue
        marginal = enc.marginal(value, count)
        tuples = {
            head + tail: head_prob * tail_prob
            for head, head_prob in tuples.items()
            for tail, tail_prob in marginal.items()
        }
    return sum((prob for z, prob in tuples.items() if z in H), Fraction(0))


def general_distinguisher(enc: EncoderSpec, n: int, budget: int | None = None) -> DistinguisherRun:
    """
    Build the marginal test for any encoder and compute its exact advantage between S(0) and S(x) with
    x = (x*, ..., x*, -(n-1) x*).

    The test accepts when the first t shuffled messages lie in H. The permutation only matters through how many of
    those t positions fall in each party's block, which is hypergeometric: Pr[c] = prod_i C(m, c_i) / C(nm, t). With
    C the largest count, category I is C = t at a party other than the last, II is C = t at the last party and III
    is C < t.

    The named checks are:
        - minimality: every t' < t stays below its threshold.
        - single_party_advantage: every category I count vector has advantage exactly SD(D_0|t, D_x*|t).
        - single_party_probability: Pr[I] = (n-1) C(m, t) / C(nm, t).
        - last_party_advantage: every category II count vector has |advantage| <= SD(D_0|t, D_x*|t).
        - last_party_probability: Pr[II] = C(m, t) / C(nm, t).
        - mixed_advantage: every category III count vector has |advantage| < m / (10nm)^(4(m-C)).
        - mixed_probability: Pr[C = j] <= n C(m, t) / C(nm, t) (nm)^(3(t-j)) for every j < t.
        - total: the total advantage is at least 1 / (10nm)^(5m).

    Args:
        enc (EncoderSpec): the encoder.
        n (int): number of parties, at least 3.
        budget (int, optional): enumeration budget on l^m. Default: from config.

    Returns:
        (DistinguisherRun): run.
    """
    if type(n) is not int or n <= 2:
        raise ValueError(f"The marginal test needs n > 2 parties, got n={n}")
    m, q = enc.messages_per_party, enc.q
    check_budget(enc.alphabet_size**m, budget, f"Marginal tables with l={enc.alphabet_size}, m={m}")

    spec = find_marginal_spec(enc, n)
    t = spec.t
    x = tuple([spec.x_star] * (n - 1) + [(-(n - 1) * spec.x_star) % q])
    zero = (0,) * n
    subsets = maths.comb(n * m, t)

    category_probs = {category: Fraction(0) for category in CATEGORIES}
    weighted = {category: Fraction(0) if enc.is_exact else 0.0 for category in CATEGORIES}
    largest_count_probs: dict[int, Fraction] = {}
    checks = {
        "minimality": all(sd < Fraction(1, (10 * n * m) ** (4 * (m - j))) for j, sd in spec.smaller_sds.items()),
        "single_party_advantage": True,
        "last_party_advantage": True,
        "mixed_advantage": True,
    }
    tolerance = 0 if enc.is_exact else 1e-12
    for counts in _count_vectors(n, m, t):
        prob = Fraction(maths.prod(maths.comb(m, c) for c in counts), subsets)
        delta = _acceptance(enc, zero, counts, spec.H) - _acceptance(enc, x, counts, spec.H)
        largest = max(counts)
        if largest == t and counts[-1] != t:
            category = "I"
            checks["single_party_advantage"] &= abs(delta - spec.sd) <= tolerance
        elif largest == t:
            category = "II"
            checks["last_party_advantage"] &= abs(delta) <= spec.sd + tolerance
        else:
            category = "III"
            checks["mixed_advantage"] &= abs(delta) < Fraction(m, (10 * n * m) ** (4 * (m - largest)))
            largest_count_probs[largest] = largest_count_probs.get(largest, Fraction(0)) + prob
        category_probs[category] += prob
        weighted[category] += prob * delta

    single_party = Fraction(maths.comb(m, t), subsets)
    checks["single_party_probability"] = category_probs["I"] == (n - 1) * single_party
    checks["last_party_probability"] = category_probs["II"] == single_party
    checks["mixed_probability"] = all(
        largest_count_probs.get(j, 0) <= n * single_party * (n * m) ** (3 * (t - j)) for j in range(1, t)
    )
    assert sum(category_probs.values()) == 1

    total = sum(weighted.values())
    floor = Fraction(1, (10 * n * m) ** (5 * m))
    checks["total"] = total >= floor
    delta_by_category = {
        category: weighted[category] / category_probs[category] if category_probs[category] else 0
        for category in CATEGORIES
    }
    return DistinguisherRun(spec, x, category_probs, delta_by_category, total, floor, checks)
