import math as maths
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from ..ffield.base import field_sum
from ..protocol.base import ShareVector, encode, encode_batch
from ..protocol.transcript import Transcript
from .noise import NoiseMechanism
from .params import DpParams


def quantize(xs: np.ndarray | Sequence[float], scale: int, rng: np.random.Generator) -> np.ndarray:
    """
    Unbiased randomised rounding of reals in [0, 1] to integers in [0, scale]: x scale is rounded up with probability
    equal to its fractional part, so E[quantized] = x scale.

    Returns:
        (`(n) ndarray[int64]`): quantized. The rounded values.
    """
    xs = np.asarray(xs, dtype=np.float64)
    if np.any(~np.isfinite(xs)) or np.any(xs < 0) or np.any(xs > 1):
        raise ValueError("Inputs must be reals in [0, 1]")
    scaled = xs * scale
    floor = np.floor(scaled)
    round_up = rng.random(size=xs.shape) < scaled - floor
    return np.minimum(floor.astype(np.int64) + round_up, scale)


def noisy_inputs(
    xs: np.ndarray | Sequence[float], params: DpParams, noise: NoiseMechanism, rng: np.random.Generator
) -> np.ndarray:
    """
    Each party's quantized input plus its noise sample, as plain integers before reduction modulo q.
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=np.float64))
    return quantize(xs, params.scale, rng) + noise.sample(rng, xs.size)


def dp_encode(x: float, params: DpParams, noise: NoiseMechanism, rng: np.random.Generator) -> ShareVector:
    """
    One party's local randomiser: quantize, add noise, reduce modulo q and split-and-mix encode into params.m shares.

    Args:
        x (float): the party's input, in [0, 1].
        params (DpParams): parameters.
        noise (NoiseMechanism): the noise added by this party.
        rng (`np.random.Generator`): the party's generator.

    Returns:
        (ShareVector): shares.
    """
    assert isinstance(params, DpParams)
    assert isinstance(noise, NoiseMechanism)
    value = int(noisy_inputs([x], params, noise, rng)[0])
    return encode(params.modulus.element(value), params.m, rng)


def dp_encode_batch(
    xs: np.ndarray | Sequence[float], params: DpParams, noise: NoiseMechanism, rng: np.random.Generator
) -> np.ndarray:
    """
    Encode every party at once.

    Returns:
        (`(n x m) ndarray[int64]`): shares. Row i holds party i's shares.
    """
    return encode_batch(noisy_inputs(xs, params, noise, rng), params.m, params.modulus, rng)


def decode_total(total: int, q: int) -> int:
    """
    The representative of a residue in (-q/2, q/2].
    """
    total = int(total) % q
    return total - q if total > q // 2 else total


def dp_aggregate(transcript: Transcript, params: DpParams) -> float:
    """
    The analyzer: sum the transcript modulo q, read the sum as a signed integer in (-q/2, q/2] and divide by the scale.
    The noise is centred on zero, so no offset is removed.

    Returns:
        (float): estimate. The estimate of the real sum of the inputs.
    """
    assert isinstance(transcript, Transcript)
    if transcript.params.q != params.q or transcript.params.n != params.n:
        raise ValueError(
            f"Transcript has q={transcript.params.q}, n={transcript.params.n}, expected q={params.q}, n={params.n}"
        )
    return decode_total(field_sum(transcript.messages, params.q), params.q) / params.scale


@dataclass(frozen=True)
class PrivacyReport:
    """
    The (epsilon, delta) decomposition claimed by the construction. An accounting aid only.

    Attributes:
        epsilon (float), delta (float): the target.
        sigma (float): security parameter of the aggregation.
        delta_security (float): (1 + e^epsilon) 2^(-sigma-1), the cost of using secure aggregation instead of a
            trusted curator. Equal to delta / 4.
        delta_noise (float): mass moved by the noise truncation.
        delta_total (float): delta_noise + delta_security.
        m (int): messages per party.
        q (int): field size.
        bits_per_message (int): ceil(log2 q).
        noise_name (str): label of the aggregate noise.
        truncation_bound (int): largest per-party noise magnitude.
        worst_case_headroom (bool): n (scale + truncation_bound) < q / 2, so no input and noise combination can wrap
            around q.
    """

    epsilon: float
    delta: float
    sigma: float
    delta_security: float
    delta_noise: float
    delta_total: float
    m: int
    q: int
    bits_per_message: int
    noise_name: str
    truncation_bound: int
    worst_case_headroom: bool

    @property
    def within_budget(self) -> bool:
        return self.delta_total <= self.delta


def dp_privacy_accounting(params: DpParams, noise: NoiseMechanism) -> PrivacyReport:
    delta_security = (1 + maths.exp(params.epsilon)) * 2.0 ** (-params.sigma - 1)
    headroom = 2 * params.n * (params.scale + noise.truncation_bound) < params.q
    return PrivacyReport(
        params.epsilon,
        params.delta,
        params.sigma,
        delta_security,
        noise.delta_noise,
        noise.delta_noise + delta_security,
        params.m,
        params.q,
        params.bits_per_message,
        noise.aggregate_distribution_name,
        noise.truncation_bound,
        headroom,
    )
