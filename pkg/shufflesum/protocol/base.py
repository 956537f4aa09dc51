from __future__ import annotations

import math as maths
from collections.abc import Sequence

import numpy as np

from ..ffield.base import SMALL_MODULUS, FieldElement, FieldError, PrimeModulus, field_sum
from .params import ProtocolParams, as_modulus
from .transcript import Transcript

# Relative tolerance used when a computed log ratio lands on an integer, so that ceil(2.0000000000000004) stays 2.
_CEIL_TOLERANCE = 1e-9


class ShareVector:
    """
    The m shares one party sends. The shares sum to the party's declared input modulo q.

    Attributes:
        shares (`(m) ndarray[int64]`): read-only residues in [0, q), in the order the encoder produced them.
        declared_input (FieldElement): the party's input.
    """

    shares: np.ndarray
    declared_input: FieldElement

    def __init__(self, shares: np.ndarray | Sequence[int], declared_input: FieldElement) -> None:
        assert isinstance(declared_input, FieldElement)
        q = declared_input.modulus.q
        shares = np.array(shares, dtype=np.int64)
        if shares.ndim != 1 or shares.size == 0:
            raise ValueError(f"A share vector needs at least one share, got shape {shares.shape}")
        if np.any(shares < 0) or np.any(shares >= q):
            raise FieldError(f"Shares must lie in [0, {q})")
        if field_sum(shares, q) != declared_input.value:
            raise ValueError(f"Shares sum to {field_sum(shares, q)}, not the declared input {declared_input.value}")
        shares.flags.writeable = False
        self.shares = shares
        self.declared_input = declared_input

    @property
    def m(self) -> int:
        return int(self.shares.size)

    @property
    def modulus(self) -> PrimeModulus:
        return self.declared_input.modulus

    def elements(self) -> tuple[FieldElement, ...]:
        return tuple(FieldElement(int(share), self.modulus) for share in self.shares)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ShareVector):
            return NotImplemented
        return self.declared_input == other.declared_input and np.array_equal(self.shares, other.shares)

    def __repr__(self) -> str:
        return f"ShareVector({self.shares.tolist()} mod {self.modulus.q})"


def _row_sums_mod(array: np.ndarray, q: int) -> np.ndarray:
    if q < SMALL_MODULUS:
        return array.sum(axis=1, dtype=np.int64) % q
    return np.array([field_sum(row, q) for row in array], dtype=np.int64)


def encode(x: FieldElement, m: int, rng: np.random.Generator) -> ShareVector:
    """
    Split-and-mix encoder. Draw m - 1 independent uniform shares, then one correcting share so the shares sum to x.

    Args:
        x (FieldElement): the party's input.
        m (int): number of shares.
        rng (`np.random.Generator`): the party's generator.

    Returns:
        (ShareVector): shares. The m shares.
    """
    assert isinstance(x, FieldElement)
    assert isinstance(rng, np.random.Generator)
    if type(m) is not int or m < 1:
        raise ValueError(f"m must be a positive int, got {m}")

    q = x.modulus.q
    shares = np.empty(m, dtype=np.int64)
    shares[: m - 1] = rng.integers(0, q, size=m - 1, dtype=np.int64)
    shares[m - 1] = (x.value - field_sum(shares[: m - 1], q)) % q
    return ShareVector(shares, x)


def encode_batch(xs: np.ndarray | Sequence[int], m: int, q: PrimeModulus | int, rng: np.random.Generator) -> np.ndarray:
    """
    Encode every party's input at once, for harnesses with many parties.

    Args:
        xs (`(n) ndarray[int]`): party inputs, reduced modulo q.
        m (int): number of shares per party.
        q (PrimeModulus or int): the field.
        rng (`np.random.Generator`): generator.

    Returns:
        (`(n x m) ndarray[int64]`): shares. Row i holds party i's shares; each row sums to xs[i] mod q.
    """
    q = as_modulus(q).q
    if type(m) is not int or m < 1:
        raise ValueError(f"m must be a positive int, got {m}")
    xs = np.mod(np.asarray(xs, dtype=np.int64), q)
    assert xs.ndim == 1

    shares = np.empty((xs.size, m), dtype=np.int64)
    shares[:, : m - 1] = rng.integers(0, q, size=(xs.size, m - 1), dtype=np.int64)
    partial = _row_sums_mod(shares[:, : m - 1], q)
    shares[:, m - 1] = np.mod(xs - partial, q)
    return shares


def _check_share_vectors(share_vectors: Sequence[ShareVector]) -> tuple[int, PrimeModulus]:
    if len(share_vectors) == 0:
        raise ValueError("At least one share vector is needed")
    m = share_vectors[0].m
    modulus = share_vectors[0].modulus
    for share_vector in share_vectors:
        if share_vector.m != m:
            raise ValueError(f"All share vectors must have length {m}, got {share_vector.m}")
        if share_vector.modulus != modulus:
            raise FieldError(f"All share vectors must use modulus {modulus.q}, got {share_vector.modulus.q}")
    return m, modulus


def shuffle_messages(share_vectors: Sequence[ShareVector], rng: np.random.Generator) -> np.ndarray:
    """
    Concatenate every party's shares and apply one uniformly random permutation.

    Returns:
        (`(n * m) ndarray[int64]`): messages. The shuffled tuple.
    """
    _check_share_vectors(share_vectors)
    return rng.permutation(np.concatenate([share_vector.shares for share_vector in share_vectors]))


def shuffle(share_vectors: Sequence[ShareVector], rng: np.random.Generator) -> Transcript:
    """
    The shuffler. The output transcript is the canonical sorted multiset of all n * m messages, so it does not depend
    on the permutation drawn; the generator still advances as if the tuple were permuted.

    Args:
        share_vectors (list of ShareVector): one share vector per party.
        rng (`np.random.Generator`): the shuffler's generator.

    Returns:
        (Transcript): transcript. Canonical transcript of the n * m messages.
    """
    m, modulus = _check_share_vectors(share_vectors)
    messages = shuffle_messages(share_vectors, rng)
    return Transcript(np.sort(messages), ProtocolParams(len(share_vectors), m, modulus))


def analyze(transcript: Transcript) -> FieldElement:
    """
    The analyzer: the sum of all messages modulo q.
    """
    assert isinstance(transcript, Transcript)
    return FieldElement(field_sum(transcript.messages, transcript.params.q), transcript.params.modulus)


def required_messages(n: int, q: PrimeModulus | int, gamma: float) -> int:
    """
    Messages per party certified by the proof constants: m* = 4 + ceil(100 * log_{n/2}(q / gamma)).

    Args:
        n (int): number of parties, at least 3.
        q (PrimeModulus or int): field size.
        gamma (float): target statistical distance to the conditioned-uniform reference, in (0, 1].

    Returns:
        (int): m_star. Messages per party.
    """
    if type(n) is not int or n <= 2:
        raise ValueError(f"n must be >= 3 so that the log base n/2 is above 1, got n={n}")
    if not 0 < gamma <= 1:
        raise ValueError(f"gamma must be in (0, 1], got {gamma}")
    q = as_modulus(q).q

    exponent = 100 * (maths.log(q) - maths.log(gamma)) / maths.log(n / 2)
    nearest = round(exponent)
    if abs(exponent - nearest) <= _CEIL_TOLERANCE * max(1.0, abs(exponent)):
        return 4 + int(nearest)
    return 4 + maths.ceil(exponent)


def asymptotic_messages(n: int, q: PrimeModulus | int, sigma: float) -> float:
    """
    The constant-free growth form 1 + (sigma + log2 q) / log2 n, reported beside `required_messages`.
    """
    if type(n) is not int or n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    return 1 + (sigma + maths.log2(as_modulus(q).q)) / maths.log2(n)
