import itertools
import math as maths
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction


def multinomial_coefficient(counts: Sequence[int]) -> int:
    """
    (a_1 + ... + a_k)! / (a_1! ... a_k!) in exact integer arithmetic. The empty tuple gives 1.
    """
    result = 1
    running = 0
    for count in counts:
        assert type(count) is int and count >= 0, f"counts must be non-negative ints, got {counts}"
        running += count
        result *= maths.comb(running, count)
    return result


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """
    Every ordered tuple of `parts` positive ints summing to `total`.
    """
    if parts < 1 or parts > total:
        return
    for cuts in itertools.combinations(range(1, total), parts - 1):
        bounds = (0, *cuts, total)
        yield tuple(bounds[i + 1] - bounds[i] for i in range(parts))


@dataclass(frozen=True)
class FactsReport:
    """
    Both sides of the two multinomial inequalities used by the rank deficit tail bound. Each field is a (lhs, rhs)
    pair with lhs >= rhs expected.

    Attributes:
        superadditive (tuple of int): multinomial(a + a') against multinomial(a) * multinomial(a').
        halved_power (tuple[int, Fraction]): multinomial(a) against (sum(a) / 2)^floor(k/2).
        halved_power_prime (tuple[int, Fraction]): the same inequality for a'.
    """

    superadditive: tuple[int, int]
    halved_power: tuple[int, Fraction]
    halved_power_prime: tuple[int, Fraction]

    @property
    def passed(self) -> bool:
        return all(lhs >= rhs for lhs, rhs in (self.superadditive, self.halved_power, self.halved_power_prime))


def _halved_power_sides(counts: Sequence[int]) -> tuple[int, Fraction]:
    return multinomial_coefficient(counts), Fraction(sum(counts), 2) ** (len(counts) // 2)


def multinomial_facts_check(a: Sequence[int], a_prime: Sequence[int]) -> FactsReport:
    """
    Evaluate both sides of the two multinomial inequalities, exactly.

    The second inequality needs positive entries: with a zero entry the left side can fall below the right, e.g.
    a = (3, 0) gives 1 < 3/2. Both sides are still reported.

    Args:
        a (list of int): non-negative counts.
        a_prime (list of int): non-negative counts, the same length as `a`.

    Returns:
        (FactsReport): report. The (lhs, rhs) pairs.
    """
    a = [int(value) for value in a]
    a_prime = [int(value) for value in a_prime]
    if len(a) != len(a_prime):
        raise ValueError(f"a and a_prime must have equal lengths, got {len(a)} and {len(a_prime)}")
    if any(value < 0 for value in a + a_prime):
        raise ValueError("Counts must be non-negative")

    superadditive = (
        multinomial_coefficient([left + right for left, right in zip(a, a_prime, strict=True)]),
        multinomial_coefficient(a) * multinomial_coefficient(a_prime),
    )
    return FactsReport(superadditive, _halved_power_sides(a), _halved_power_sides(a_prime))
