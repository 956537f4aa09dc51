from __future__ import annotations

import json
from collections.abc import Sequence

import numpy as np

from ..ffield.base import FieldElement, FieldError
from .params import ProtocolParams, as_modulus


class Transcript:
    """
    What the analyzer receives: the multiset of all n * m messages, stored in canonical non-decreasing order.

    Attributes:
        messages (`(n * m) ndarray[int64]`): read-only sorted residues in [0, q).
        params (ProtocolParams): the run's parameters.
    """

    messages: np.ndarray
    params: ProtocolParams

    def __init__(self, messages: np.ndarray | Sequence[int], params: ProtocolParams) -> None:
        assert isinstance(params, ProtocolParams)
        messages = np.array(messages, dtype=np.int64)
        if messages.ndim != 1 or messages.size != params.message_count:
            raise ValueError(f"Expected {params.message_count} messages, got shape {messages.shape}")
        if np.any(messages < 0) or np.any(messages >= params.q):
            raise FieldError(f"Messages must lie in [0, {params.q})")
        if np.any(np.diff(messages) < 0):
            raise ValueError("Transcript messages must be in canonical non-decreasing order")
        messages.flags.writeable = False
        self.messages = messages
        self.params = params

    @classmethod
    def from_messages(cls, messages: np.ndarray | Sequence[int], params: ProtocolParams) -> Transcript:
        """
        Build the canonical transcript of messages given in any order.
        """
        return cls(np.sort(np.mod(np.asarray(messages, dtype=np.int64), params.q)), params)

    def key(self) -> tuple[int, ...]:
        """
        The canonical multiset as a hashable tuple, as used for distribution tables.
        """
        return tuple(self.messages.tolist())

    def elements(self) -> tuple[FieldElement, ...]:
        return tuple(FieldElement(value, self.params.modulus) for value in self.messages.tolist())

    def to_dict(self) -> dict[str, int | list[int]]:
        return {"q": self.params.q, "n": self.params.n, "m": self.params.m, "messages": self.messages.tolist()}

    @classmethod
    def from_dict(cls, content: dict) -> Transcript:
        for field_name in ("q", "n", "m", "messages"):
            if field_name not in content:
                raise ValueError(f"Transcript content is missing the field {field_name}")
        params = ProtocolParams(int(content["n"]), int(content["m"]), as_modulus(int(content["q"])))
        return cls(content["messages"], params)

    def save(self, file_path: str) -> None:
        """
        Write the transcript as a JSON text object {q, n, m, messages}.
        """
        with open(file_path, "w") as file:
            json.dump(self.to_dict(), file)

    @classmethod
    def load(cls, file_path: str) -> Transcript:
        with open(file_path, "r") as file:
            return cls.from_dict(json.load(file))

    def __len__(self) -> int:
        return int(self.messages.size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Transcript):
            return NotImplemented
        return (
            self.params.q == other.params.q
            and self.params.n == other.params.n
            and self.params.m == other.params.m
            and np.array_equal(self.messages, other.messages)
        )

    def __hash__(self) -> int:
        return hash((self.params.q, self.params.n, self.params.m, self.key()))

    def __repr__(self) -> str:
        return f"Transcript(n={self.params.n}, m={self.params.m}, q={self.params.q}, messages={self.key()})"
