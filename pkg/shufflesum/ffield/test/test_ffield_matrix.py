import numpy as np
import pytest

from shufflesum.ffield import matrix
from shufflesum.ffield.base import FieldError, PrimeModulus
from shufflesum.ffield.matrix import FieldMatrix


def _oracle_rank(rows: list[list[int]], q: int) -> int:
    # Plain list row reduction, written independently of rank_mod_q.
    rows = [[v % q for v in row] for row in rows]
    rank = 0
    n_cols = len(rows[0]) if rows else 0
    for col in range(n_cols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                factor = rows[r][col] * pow(rows[rank][col], -1, q)
                rows[r] = [(x - factor * y) % q for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def test_rank_examples() -> None:
    f5 = PrimeModulus(5)
    assert matrix.rank_mod_q(FieldMatrix.identity(4, f5)) == 4
    assert matrix.rank_mod_q(FieldMatrix.zeros(3, 6, f5)) == 0
    assert matrix.rank_mod_q(FieldMatrix([[1, 2], [2, 4]], f5)) == 1
    # Independent over the rationals but not over F_2.
    f2 = PrimeModulus(2)
    assert matrix.rank_mod_q(FieldMatrix([[1, 1, 0], [0, 1, 1], [1, 0, 1]], f2)) == 2
    assert matrix.rank_mod_q(FieldMatrix([[1, 1, 0], [0, 1, 1], [1, 0, 1]], PrimeModulus(3))) == 3


def test_rank_properties() -> None:
    rng = np.random.RandomState(0)
    for q in (2, 3, 5, 7, 101):
        modulus = PrimeModulus(q)
        for _ in range(40):
            shape = tuple(rng.randint(1, 7, size=2))
            entries = rng.randint(0, q, size=shape)
            if rng.rand() < 0.3:
                entries[rng.randint(shape[0])] = 0
            mat = FieldMatrix(entries, modulus)
            rank = matrix.rank_mod_q(mat)
            assert 0 <= rank <= min(shape)
            assert rank == _oracle_rank(entries.tolist(), q)
            assert rank == matrix.rank_mod_q(mat.transpose())
            # Row swaps and nonzero row scaling keep the rank.
            permuted = entries[rng.permutation(shape[0])]
            scaled = (permuted * rng.randint(1, q, size=(shape[0], 1))) if q > 2 else permuted
            assert matrix.rank_mod_q(FieldMatrix(scaled, modulus)) == rank


def test_rank_large_modulus() -> None:
    big = PrimeModulus(2**61 - 1)
    mat = FieldMatrix([[1, 2, 3], [2, 4, 6], [2**61 - 2, 5, 7]], big)
    assert mat.entries.dtype == object
    assert matrix.rank_mod_q(mat) == 2


def test_field_matrix() -> None:
    f3 = PrimeModulus(3)
    mat = FieldMatrix.from_rows([[f3.element(1), f3.element(2)], [f3.element(4), f3.element(-1)]])
    assert mat.rows == 2 and mat.cols == 2
    assert mat.entry(1, 0).value == 1
    assert mat.entry(1, 1).value == 2
    assert mat.transpose().entry(0, 1).value == 1
    assert mat == FieldMatrix([[1, 2], [1, 2]], f3)
    with pytest.raises(ValueError):
        mat.entries[0, 0] = 0
    with pytest.raises(FieldError):
        FieldMatrix.from_rows([[f3.element(1), PrimeModulus(5).element(1)]])
    with pytest.raises(ValueError):
        FieldMatrix([1, 2, 3], f3)
