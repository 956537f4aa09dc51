from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import scipy.sparse
import scipy.sparse.csgraph

from ..ffield.base import PrimeModulus
from ..ffield.matrix import FieldMatrix, rank_mod_q
from ..protocol.params import as_modulus

Permutation = tuple[int, ...]


def check_permutation(pi: Sequence[int] | np.ndarray, size: int) -> Permutation:
    """
    Validate a permutation of [0, size) given as its image list, pi[j] = pi(j).

    Returns:
        (tuple of int): pi. The permutation as a tuple.
    """
    pi = tuple(int(value) for value in np.asarray(pi).ravel().tolist())
    if len(pi) != size or sorted(pi) != list(range(size)):
        raise ValueError(f"Expected a bijection on [0, {size}), got {pi}")
    return pi


def block_images(pi: Permutation, n: int, m: int) -> list[list[int]]:
    """
    The image pi({m i, ..., m i + m - 1}) of every party's block of positions, for parties i = 0, ..., n - 1.
    """
    return [list(pi[m * i : m * (i + 1)]) for i in range(n)]


def block_masks(pi: Permutation, n: int, m: int) -> list[int]:
    """
    Every party's block image as an integer bit mask over [0, mn).
    """
    masks = []
    for image in block_images(pi, n, m):
        mask = 0
        for position in image:
            mask |= 1 << position
        masks.append(mask)
    return masks


@dataclass(frozen=True)
class PermutationPairMatrix:
    """
    The 2n x mn matrix stacking A_pi over A_pi'. Row i of A_pi is the indicator vector of pi's image of party i's
    block of positions.

    Attributes:
        matrix (FieldMatrix): the 0/1 matrix over F_q.
        pi (tuple of int): first permutation of [0, mn).
        pi_prime (tuple of int): second permutation of [0, mn).
        n (int): number of parties.
        m (int): messages per party.
    """

    matrix: FieldMatrix
    pi: Permutation
    pi_prime: Permutation
    n: int
    m: int

    def __post_init__(self) -> None:
        entries = self.matrix.entries
        assert entries.shape == (2 * self.n, self.n * self.m)
        assert np.isin(entries, (0, 1)).all(), "Every entry must be 0 or 1"
        assert (entries.sum(axis=1) == self.m).all(), "Each row must have exactly m ones"
        assert (entries[: self.n].sum(axis=0) == 1).all(), "Top rows must partition the columns"
        assert (entries[self.n :].sum(axis=0) == 1).all(), "Bottom rows must partition the columns"

    @property
    def top(self) -> FieldMatrix:
        return FieldMatrix(self.matrix.entries[: self.n], self.matrix.modulus)

    @property
    def bottom(self) -> FieldMatrix:
        return FieldMatrix(self.matrix.entries[self.n :], self.matrix.modulus)


def build_pair_matrix(
    pi: Sequence[int], pi_prime: Sequence[int], n: int, m: int, q: PrimeModulus | int
) -> PermutationPairMatrix:
    """
    Build A_{pi, pi'}.

    Args:
        pi (list of int): first permutation of [0, mn) as its image list.
        pi_prime (list of int): second permutation of [0, mn).
        n (int): number of parties.
        m (int): messages per party.
        q (PrimeModulus or int): the field.

    Returns:
        (PermutationPairMatrix): matrix. The stacked indicator matrix.
    """
    if type(n) is not int or n < 1 or type(m) is not int or m < 1:
        raise ValueError(f"n and m must be positive ints, got n={n}, m={m}")
    pi = check_permutation(pi, n * m)
    pi_prime = check_permutation(pi_prime, n * m)

    entries = np.zeros((2 * n, n * m), dtype=np.int64)
    for i, (image, image_prime) in enumerate(zip(block_images(pi, n, m), block_images(pi_prime, n, m), strict=True)):
        entries[i, image] = 1
        entries[n + i, image_prime] = 1
    return PermutationPairMatrix(FieldMatrix(entries, as_modulus(q)), pi, pi_prime, n, m)


def rank_deficit(pair_matrix: PermutationPairMatrix) -> int:
    """
    defc = 2n - rank over F_q. At least 1, since the top rows and the bottom rows both sum to the all-ones row.
    """
    assert isinstance(pair_matrix, PermutationPairMatrix)
    return 2 * pair_matrix.n - rank_mod_q(pair_matrix.matrix)


def component_count(pi: Sequence[int], pi_prime: Sequence[int], n: int, m: int) -> int:
    """
    Number of connected components of the party overlap graph. Its 2n vertices are the top and bottom parties and
    every column joins the top party and the bottom party whose block images contain it.

    A_{pi, pi'} is the incidence matrix of this bipartite graph, so the count equals `rank_deficit` over every field.

    Args:
        pi (list of int): first permutation of [0, mn).
        pi_prime (list of int): second permutation of [0, mn).
        n (int): number of parties.
        m (int): messages per party.

    Returns:
        (int): components. In [1, n].
    """
    pi = np.asarray(check_permutation(pi, n * m))
    pi_prime = np.asarray(check_permutation(pi_prime, n * m))
    top_party = np.empty(n * m, dtype=np.int64)
    top_party[pi] = np.arange(n * m) // m
    bottom_party = np.empty(n * m, dtype=np.int64)
    bottom_party[pi_prime] = np.arange(n * m) // m

    graph = scipy.sparse.coo_matrix(
        (np.ones(n * m, dtype=np.int8), (top_party, n + bottom_party)), shape=(2 * n, 2 * n)
    ).tocsr()
    count, _ = scipy.sparse.csgraph.connected_components(graph, directed=False)
    return int(count)


def random_permutation_pair(rng: np.random.Generator, size: int) -> tuple[Permutation, Permutation]:
    return tuple(rng.permutation(size).tolist()), tuple(rng.permutation(size).tolist())
