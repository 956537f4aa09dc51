from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from .base import SMALL_MODULUS, FieldElement, FieldError, PrimeModulus, array_dtype


class FieldMatrix:
    """
    A matrix over F_q. Entries are residues in [0, q) held in a read-only numpy array, int64 when products of two
    entries fit in int64 and Python ints otherwise.

    Attributes:
        modulus (PrimeModulus): the field every entry lives in.
        entries (`(rows x cols) ndarray`): the residues.
    """

    modulus: PrimeModulus
    entries: np.ndarray

    def __init__(self, entries: np.ndarray | Sequence[Sequence[int]], modulus: PrimeModulus) -> None:
        assert isinstance(modulus, PrimeModulus)
        q = modulus.q
        array = np.asarray(entries)
        if array.ndim != 2:
            raise ValueError(f"A field matrix needs 2 dimensions, got shape {array.shape}")
        if array.dtype.kind in "iub" and q < SMALL_MODULUS:
            array = np.mod(array.astype(np.int64), q)
        else:
            reduced = [[int(v) % q for v in row] for row in array.tolist()]
            array = np.array(reduced, dtype=object).reshape(array.shape)
        self.entries = array.astype(array_dtype(q))
        self.entries.flags.writeable = False
        self.modulus = modulus

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[FieldElement]]) -> FieldMatrix:
        """
        Build a matrix from rows of FieldElements. All entries must share one modulus.
        """
        moduli = {element.modulus for row in rows for element in row}
        if len(moduli) != 1:
            raise FieldError(f"All entries must share one modulus, got {len(moduli)}")
        return cls([[element.value for element in row] for row in rows], moduli.pop())

    @classmethod
    def identity(cls, size: int, modulus: PrimeModulus) -> FieldMatrix:
        return cls(np.eye(size, dtype=np.int64), modulus)

    @classmethod
    def zeros(cls, rows: int, cols: int, modulus: PrimeModulus) -> FieldMatrix:
        return cls(np.zeros((rows, cols), dtype=np.int64), modulus)

    @property
    def rows(self) -> int:
        return int(self.entries.shape[0])

    @property
    def cols(self) -> int:
        return int(self.entries.shape[1])

    def entry(self, row: int, col: int) -> FieldElement:
        return FieldElement(int(self.entries[row, col]), self.modulus)

    def transpose(self) -> FieldMatrix:
        return FieldMatrix(self.entries.T, self.modulus)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return self.modulus == other.modulus and np.array_equal(self.entries, other.entries)

    def __repr__(self) -> str:
        return f"FieldMatrix({self.rows}x{self.cols} mod {self.modulus.q})"


def rank_mod_q(matrix: FieldMatrix) -> int:
    """
    Rank of a matrix over F_q by Gaussian elimination. Each pivot row is scaled by the modular inverse of its pivot,
    then eliminated from every row below.

    Args:
        matrix (FieldMatrix): the matrix.

    Returns:
        (int): rank. In [0, min(rows, cols)].
    """
    assert isinstance(matrix, FieldMatrix)

    q = matrix.modulus.q
    work = matrix.entries.copy()
    n_rows, n_cols = work.shape
    rank = 0
    for col in range(n_cols):
        if rank == n_rows:
            break
        nonzero = np.flatnonzero(work[rank:, col] != 0)
        if nonzero.size == 0:
            continue
        pivot = rank + int(nonzero[0])
        if pivot != rank:
            work[[rank, pivot]] = work[[pivot, rank]]
        inverse = pow(int(work[rank, col]), -1, q)
        work[rank] = (work[rank] * inverse) % q
        below = work[rank + 1 :, col].copy()
        rows_to_clear = np.flatnonzero(below != 0)
        if rows_to_clear.size:
            targets = rank + 1 + rows_to_clear
            work[targets] = (work[targets] - np.outer(below[rows_to_clear], work[rank]) % q) % q
        rank += 1
    return rank
