import math as maths
from collections.abc import Sequence
from typing import Any

from ..dp.params import derive_dp_params

# Earlier protocols for (epsilon, delta)-DP summation in the shuffled model, as formulas only. l is a free integer
# parameter of the first protocol, which has two operating points.
SYMBOLIC_ROWS = (
    {
        "reference": "Cheu et al. 2019",
        "messages_per_party": "eps*sqrt(n) | l",
        "message_bits": "1",
        "expected_error": "(1/eps)*log(n/delta) | sqrt(n)/l + (1/eps)*log(1/delta)",
    },
    {
        "reference": "Balle et al. 2019 (single message)",
        "messages_per_party": "1",
        "message_bits": "log n",
        "expected_error": "n^(1/6)*log^(1/3)(1/delta)/eps^(2/3)",
    },
    {
        "reference": "Ghazi et al. 2019",
        "messages_per_party": "log(n/(eps*delta))",
        "message_bits": "log(n/delta)",
        "expected_error": "(1/eps)*sqrt(log(1/delta))",
    },
    {
        "reference": "Balle et al. 2019 (multi message)",
        "messages_per_party": "log(n/delta)",
        "message_bits": "log n",
        "expected_error": "1/eps",
    },
    {
        "reference": "split-and-mix",
        "messages_per_party": "1 + log(1/delta)/log n",
        "message_bits": "log n",
        "expected_error": "1/eps",
    },
)
COMPUTED_REFERENCE = "split-and-mix"


def figure1_table(
    ns: Sequence[int], epsilons: Sequence[float], deltas: Sequence[float]
) -> list[dict[str, Any]]:
    """
    The comparison table of DP summation protocols. The split-and-mix row is computed for every (n, epsilon, delta) of
    the grid; the other rows are their formulas, marked `computed = False`.

    Args:
        ns (list of int): party counts, each at least 3.
        epsilons (list of float): privacy parameters epsilon.
        deltas (list of float): privacy parameters delta.

    Returns:
        (list of dict): rows. Computed rows in grid order (n outermost), then the symbolic rows.
    """
    rows = []
    for n in ns:
        for epsilon in epsilons:
            for delta in deltas:
                params = derive_dp_params(epsilon, delta, n)
                rows.append(
                    {
                        "reference": COMPUTED_REFERENCE,
                        "computed": True,
                        "n": n,
                        "epsilon": epsilon,
                        "delta": delta,
                        "q": params.q,
                        "sigma": params.sigma,
                        "messages_per_party": params.m,
                        "message_bits": params.bits_per_message,
                        "expected_error": 1 + 1 / epsilon,
                        "growth_form": 1 + maths.log2(1 / delta) / maths.log2(n),
                    }
                )
    rows.extend({**row, "computed": False} for row in SYMBOLIC_ROWS)
    return rows
