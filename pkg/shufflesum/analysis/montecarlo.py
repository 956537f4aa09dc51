import math as maths
from collections.abc import Callable, Sequence

import numpy as np
import tqdm

from ..protocol.base import encode, shuffle
from ..protocol.params import ProtocolParams
from ..protocol.transcript import Transcript
from ..utils.rng import make_generator, spawn_seeds

Sampler = Callable[[np.random.Generator], Transcript]
# Acceptors get their own generator so that randomised distinguishers stay reproducible.
Acceptor = Callable[[Transcript, np.random.Generator], bool]


def mc_advantage(
    sampler1: Sampler, sampler2: Sampler, acceptor: Acceptor, trials: int, seed: int
) -> tuple[float, float]:
    """
    Monte Carlo advantage of a fixed distinguisher, a lower-bound estimate of the statistical distance.

    Args:
        sampler1 (callable): draws a transcript from the first distribution given a generator.
        sampler2 (callable): draws a transcript from the second distribution given a generator.
        acceptor (callable): the distinguisher, (transcript, rng) -> bool.
        trials (int): samples drawn from each distribution.
        seed (int): 64-bit seed.

    Returns:
        - (float): estimate. Pr[accept | sampler1] - Pr[accept | sampler2].
        - (float): stderr. Binomial standard error of the estimate.
    """
    if type(trials) is not int or trials < 1:
        raise ValueError(f"trials must be a positive int, got {trials}")

    seeds = spawn_seeds(seed, 4)
    accepted = []
    for side, sampler in enumerate((sampler1, sampler2)):
        sample_seed, accept_seed = seeds[2 * side : 2 * side + 2]
        sample_rng, accept_rng = make_generator(sample_seed), make_generator(accept_seed)
        count = 0
        for _ in tqdm.trange(trials, desc=f"Sampling distribution {side + 1}", unit="trial", disable=None):
            count += bool(acceptor(sampler(sample_rng), accept_rng))
        accepted.append(count / trials)

    p1, p2 = accepted
    stderr = maths.sqrt(p1 * (1 - p1) / trials + p2 * (1 - p2) / trials)
    return p1 - p2, stderr


def splitmix_sampler(x: Sequence[int], params: ProtocolParams) -> Sampler:
    """
    A sampler running encode then shuffle on fixed inputs.
    """
    elements = [params.modulus.element(value) for value in x]
    if len(elements) != params.n:
        raise ValueError(f"Expected {params.n} inputs, got {len(elements)}")

    def sample(rng: np.random.Generator) -> Transcript:
        return shuffle([encode(element, params.m, rng) for element in elements], rng)

    return sample


def multiset_acceptor(multiset: Sequence[int]) -> Acceptor:
    """
    Accept exactly one canonical transcript.
    """
    target = tuple(sorted(int(v) for v in multiset))
    return lambda transcript, rng: transcript.key() == target


def zero_sum_subset_acceptor(size: int) -> Acceptor:
    """
    Accept when `size` uniformly chosen messages sum to zero, the warm-up distinguisher with size = m.
    """
    assert type(size) is int and size >= 1

    def accept(transcript: Transcript, rng: np.random.Generator) -> bool:
        chosen = rng.choice(transcript.messages, size=size, replace=False)
        return int(chosen.sum()) % transcript.params.q == 0

    return accept
