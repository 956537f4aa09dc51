from .base import (
    ShareVector,
    analyze,
    asymptotic_messages,
    encode,
    encode_batch,
    required_messages,
    shuffle,
    shuffle_messages,
)
from .corruption import CorruptionView, simulate_with_corruptions
from .params import ProtocolParams
from .transcript import Transcript

__all__ = [
    "CorruptionView",
    "ProtocolParams",
    "ShareVector",
    "Transcript",
    "analyze",
    "asymptotic_messages",
    "encode",
    "encode_batch",
    "required_messages",
    "shuffle",
    "shuffle_messages",
    "simulate_with_corruptions",
]
