import numpy as np

SEED_LIMIT = 2**64


def check_seed(seed: int) -> int:
    if type(seed) is not int and not isinstance(seed, np.integer):
        raise TypeError(f"seed must be an integer, got {type(seed)}")
    seed = int(seed)
    if not 0 <= seed < SEED_LIMIT:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def make_generator(seed: int | np.random.SeedSequence) -> np.random.Generator:
    """
    Build a counter-based Philox generator. Identical seeds give bit-identical streams on every platform.

    Args:
        seed (int or SeedSequence): 64-bit seed, or a child sequence from `spawn_seeds`.

    Returns:
        (`np.random.Generator`): rng. The seeded generator.
    """
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(check_seed(seed))
    return np.random.Generator(np.random.Philox(seed))


def spawn_seeds(seed: int, count: int) -> list[np.random.SeedSequence]:
    """
    Split one seed into `count` independent child sequences, used to give each parallel chunk its own generator.
    """
    assert type(count) is int
    assert count >= 0
    return np.random.SeedSequence(check_seed(seed)).spawn(count)


def chunk_sizes(total: int, chunk_size: int) -> list[int]:
    """
    Split `total` samples into consecutive chunks of at most `chunk_size`. The split only depends on the two counts.
    """
    assert type(total) is int
    assert type(chunk_size) is int
    assert chunk_size > 0
    full, remainder = divmod(total, chunk_size)
    sizes = [chunk_size] * full
    if remainder:
        sizes.append(remainder)
    return sizes
