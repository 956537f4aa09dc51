from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from ..ffield.base import FieldElement, FieldError
from .base import ShareVector, encode, shuffle
from .params import ProtocolParams
from .transcript import Transcript


@dataclass(frozen=True)
class CorruptionView:
    """
    What a coalition of corrupted parties sees: the honest parties' shuffled messages plus its own shares. Security
    against the coalition is the security of a run with only the honest parties.

    Attributes:
        honest_transcript (Transcript): canonical transcript of the honest parties' messages.
        corrupted_shares (dict[int, ShareVector]): every corrupted party's shares, keyed by 0-based party index.
    """

    honest_transcript: Transcript
    corrupted_shares: dict[int, ShareVector] = field(default_factory=dict)

    @property
    def honest_count(self) -> int:
        return self.honest_transcript.params.n


def simulate_with_corruptions(
    inputs: Sequence[FieldElement],
    corrupted: set[int] | Sequence[int],
    params: ProtocolParams,
    rng: np.random.Generator,
) -> CorruptionView:
    """
    Run the encoder for every party, then shuffle only the honest parties' shares.

    Parties are encoded in index order whatever the corrupted set is, so a fixed seed gives the same shares for every
    choice of coalition.

    Args:
        inputs (list of FieldElement): one input per party, n in total.
        corrupted (set of int): 0-based indices of the corrupted parties.
        params (ProtocolParams): protocol parameters; params.n must equal len(inputs).
        rng (`np.random.Generator`): generator for encoding and shuffling.

    Returns:
        (CorruptionView): view. The coalition's view.
    """
    assert isinstance(params, ProtocolParams)
    if len(inputs) != params.n:
        raise ValueError(f"Expected {params.n} inputs, got {len(inputs)}")
    for x in inputs:
        if x.modulus != params.modulus:
            raise FieldError(f"Every input must be in F_{params.q}")
    corrupted = set(int(index) for index in corrupted)
    if not corrupted <= set(range(params.n)):
        raise ValueError(f"Corrupted indices must lie in [0, {params.n}), got {sorted(corrupted)}")
    if len(corrupted) == params.n:
        raise ValueError("At least one party must be honest")

    share_vectors = [encode(x, params.m, rng) for x in inputs]
    honest = [share_vectors[i] for i in range(params.n) if i not in corrupted]
    honest_transcript = shuffle(honest, rng)
    return CorruptionView(honest_transcript, {i: share_vectors[i] for i in sorted(corrupted)})
