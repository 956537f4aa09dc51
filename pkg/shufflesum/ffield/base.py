from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

# Deterministic Miller-Rabin witnesses, complete for every n < 3.3 * 10^24.
_MILLER_RABIN_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
# Share arrays are int64, so the modulus must fit in a signed 64-bit integer.
MAX_MODULUS = 2**63 - 1
# Below this bound a product of two residues fits in int64.
SMALL_MODULUS = 2**31

FieldOp = Literal["add", "sub", "mul", "neg", "inv"]


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    """
    Deterministic Miller-Rabin primality test for 64-bit integers.

    Args:
        n (int): integer to test.

    Returns:
        (bool): prime. True iff n is prime.
    """
    assert type(n) is int
    if n < 2:
        return False
    for small in _MILLER_RABIN_WITNESSES:
        if n % small == 0:
            return n == small
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MILLER_RABIN_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = pow(x, 2, n)
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeModulus:
    """
    The order q of a prime field F_q. Primality is checked at construction.
    """

    q: int

    def __post_init__(self) -> None:
        if type(self.q) is not int:
            raise TypeError(f"q must be an int, got {type(self.q)}")
        if self.q > MAX_MODULUS:
            raise FieldError(f"q must be below 2^63, got {self.q}")
        if not is_prime(self.q):
            raise FieldError(f"q must be a prime >= 2, got {self.q}")

    def element(self, value: int) -> FieldElement:
        return FieldElement(int(value) % self.q, self)

    def zero(self) -> FieldElement:
        return FieldElement(0, self)

    def elements(self) -> tuple[FieldElement, ...]:
        return tuple(FieldElement(value, self) for value in range(self.q))

    @property
    def bits(self) -> int:
        """Bits needed to send one element, ceil(log2 q)."""
        return (self.q - 1).bit_length()

    def __int__(self) -> int:
        return self.q


@dataclass(frozen=True)
class FieldElement:
    """
    An element of F_q, stored as its representative in [0, q).
    """

    value: int
    modulus: PrimeModulus

    def __post_init__(self) -> None:
        if type(self.value) is not int:
            raise TypeError(f"Field element value must be an int, got {type(self.value)}")
        if not 0 <= self.value < self.modulus.q:
            raise FieldError(f"Field element value must be in [0, {self.modulus.q}), got {self.value}")

    def _coerce(self, other: FieldElement | int) -> FieldElement:
        if isinstance(other, FieldElement):
            return other
        if isinstance(other, (int, np.integer)):
            return self.modulus.element(int(other))
        return NotImplemented

    def __add__(self, other: FieldElement | int) -> FieldElement:
        return field_arith(self, self._coerce(other), "add")

    __radd__ = __add__

    def __sub__(self, other: FieldElement | int) -> FieldElement:
        return field_arith(self, self._coerce(other), "sub")

    def __rsub__(self, other: int) -> FieldElement:
        return field_arith(self._coerce(other), self, "sub")

    def __mul__(self, other: FieldElement | int) -> FieldElement:
        return field_arith(self, self._coerce(other), "mul")

    __rmul__ = __mul__

    def __neg__(self) -> FieldElement:
        return field_arith(self, None, "neg")

    def __truediv__(self, other: FieldElement | int) -> FieldElement:
        return field_arith(self, field_arith(self._coerce(other), None, "inv"), "mul")

    def inverse(self) -> FieldElement:
        return field_arith(self, None, "inv")

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"FieldElement({self.value} mod {self.modulus.q})"


def next_prime_above(x: int) -> PrimeModulus:
    """
    Find the least prime strictly greater than x.

    Args:
        x (int): lower bound, at least 1.

    Returns:
        (PrimeModulus): modulus. The least prime p with p > x.
    """
    assert type(x) is int
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")

    candidate = x + 1
    while not is_prime(candidate):
        candidate += 1
    return PrimeModulus(candidate)


def field_arith(a: FieldElement, b: FieldElement | None, op: FieldOp) -> FieldElement:
    """
    Modular arithmetic on two field elements, or one for the unary ops `neg` and `inv`.

    Args:
        a (FieldElement): left operand.
        b (FieldElement or none): right operand. Ignored by `neg` and `inv`.
        op (str): one of "add", "sub", "mul", "neg", "inv".

    Returns:
        (FieldElement): result. The result in the same field.
    """
    assert isinstance(a, FieldElement)
    q = a.modulus.q

    if op == "neg":
        return FieldElement((-a.value) % q, a.modulus)
    if op == "inv":
        if a.value == 0:
            raise FieldError("Cannot invert zero")
        return FieldElement(pow(a.value, -1, q), a.modulus)

    if not isinstance(b, FieldElement):
        raise TypeError(f"Binary field op {op} needs a second FieldElement, got {type(b)}")
    if b.modulus != a.modulus:
        raise FieldError(f"Modulus mismatch: {a.modulus.q} and {b.modulus.q}")
    if op == "add":
        return FieldElement((a.value + b.value) % q, a.modulus)
    if op == "sub":
        return FieldElement((a.value - b.value) % q, a.modulus)
    if op == "mul":
        return FieldElement((a.value * b.value) % q, a.modulus)
    raise ValueError(f"Unknown field op {op}")


def field_sum(values: np.ndarray | list[int], q: int) -> int:
    """
    Sum residues modulo q without int64 overflow.

    Args:
        values (`(n) ndarray[int]` or list of int): residues in [0, q).
        q (int): modulus.

    Returns:
        (int): total. The sum reduced into [0, q).
    """
    values = np.asarray(values)
    if values.size == 0:
        return 0
    if values.dtype != object and q < SMALL_MODULUS and values.size < 2**31:
        return int(values.sum(dtype=np.int64) % q)
    return sum(int(v) for v in values.ravel()) % q


def array_dtype(q: int) -> type:
    """
    The numpy dtype for residue arrays that get multiplied: int64 when products fit, Python ints otherwise.
    """
    return np.int64 if q < SMALL_MODULUS else object
