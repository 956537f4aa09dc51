import itertools

import numpy as np
import pytest
import scipy.stats

from shufflesum.ffield.base import FieldError, PrimeModulus
from shufflesum.protocol import base
from shufflesum.protocol.params import ProtocolParams
from shufflesum.utils.rng import make_generator


def _run(inputs: list[int], m: int, q: int, seed: int) -> int:
    modulus = PrimeModulus(q)
    rng = make_generator(seed)
    share_vectors = [base.encode(modulus.element(x), m, rng) for x in inputs]
    return base.analyze(base.shuffle(share_vectors, rng)).value


def test_encode_examples() -> None:
    f5 = PrimeModulus(5)
    rng = make_generator(0)
    for x in f5.elements():
        share_vector = base.encode(x, 1, rng)
        assert share_vector.shares.tolist() == [x.value]
    share_vector = base.encode(f5.element(3), 3, rng)
    assert share_vector.m == 3
    assert int(share_vector.shares.sum()) % 5 == 3
    assert share_vector.declared_input.value == 3
    assert [e.value for e in share_vector.elements()] == share_vector.shares.tolist()

    # x = 0, q = 2, m = 2 gives (0, 0) or (1, 1).
    f2 = PrimeModulus(2)
    outcomes = {tuple(base.encode(f2.element(0), 2, rng).shares.tolist()) for _ in range(200)}
    assert outcomes == {(0, 0), (1, 1)}
    with pytest.raises(ValueError):
        base.encode(f5.element(1), 0, rng)


def test_encode_reproducible() -> None:
    f101 = PrimeModulus(101)
    first = base.encode(f101.element(7), 6, make_generator(42))
    second = base.encode(f101.element(7), 6, make_generator(42))
    assert first == second


def test_share_vector_invariant() -> None:
    f5 = PrimeModulus(5)
    base.ShareVector([1, 4], f5.element(0))
    with pytest.raises(ValueError):
        base.ShareVector([1, 3], f5.element(0))
    with pytest.raises(FieldError):
        base.ShareVector([5, 0], f5.element(0))
    with pytest.raises(ValueError):
        base.ShareVector([], f5.element(0))


def test_encoder_marginals_uniform() -> None:
    n_samples = 100_000
    for q in (3, 7):
        shares = base.encode_batch(np.zeros(n_samples, dtype=np.int64), 3, q, make_generator(q))
        assert np.all(shares.sum(axis=1) % q == 0)
        for position in range(3):
            counts = np.bincount(shares[:, position], minlength=q)
            assert scipy.stats.chisquare(counts).pvalue > 1e-3


def test_declared_input_is_function_of_shares() -> None:
    # For m >= 2 the ordered share tuples of different inputs overlap only if they have the same sum.
    f3 = PrimeModulus(3)
    for m in (1, 2, 3):
        seen = {}
        for shares in itertools.product(range(3), repeat=m):
            x = sum(shares) % 3
            share_vector = base.ShareVector(list(shares), f3.element(x))
            assert seen.setdefault(shares, share_vector.declared_input.value) == x


def test_shuffle_examples() -> None:
    f5 = PrimeModulus(5)
    rng = make_generator(1)
    single = base.ShareVector([4, 1, 0], f5.element(0))
    assert base.shuffle([single], rng).key() == (0, 1, 4)

    first = base.ShareVector([1, 4], f5.element(0))
    second = base.ShareVector([2, 3], f5.element(0))
    transcript = base.shuffle([first, second], rng)
    assert transcript.key() == (1, 2, 3, 4)
    assert base.shuffle([second, first], make_generator(99)) == transcript
    assert transcript.params.n == 2 and transcript.params.m == 2

    with pytest.raises(ValueError):
        base.shuffle([first, base.ShareVector([1, 1, 3], f5.element(0))], rng)
    with pytest.raises(FieldError):
        base.shuffle([first, base.ShareVector([1, 1], PrimeModulus(7).element(2))], rng)
    with pytest.raises(ValueError):
        base.shuffle([], rng)

    permuted = base.shuffle_messages([first, second], make_generator(5))
    assert sorted(permuted.tolist()) == [1, 2, 3, 4]


def test_analyze_examples() -> None:
    params = ProtocolParams.create(2, 2, 5)
    assert base.analyze(base.Transcript([0, 0, 0, 0], params)).value == 0
    for m in (1, 2, 5):
        assert _run([1, 2, 3], m, 7, seed=m) == 6
        assert _run([4, 4], m, 5, seed=m) == 3


def test_correctness_random_runs() -> None:
    rng = np.random.RandomState(0)
    for trial in range(2_000):
        n = int(rng.randint(1, 17))
        m = int(rng.randint(1, 9))
        q = int(rng.choice([2, 3, 5, 101]))
        inputs = rng.randint(0, q, size=n).tolist()
        assert _run(inputs, m, q, seed=trial) == sum(inputs) % q


@pytest.mark.integration
def test_correctness_random_runs_full() -> None:
    rng = np.random.RandomState(1)
    for trial in range(10_000):
        n = int(rng.randint(1, 17))
        m = int(rng.randint(1, 9))
        q = int(rng.choice([2, 3, 5, 101]))
        inputs = rng.randint(0, q, size=n).tolist()
        assert _run(inputs, m, q, seed=trial) == sum(inputs) % q


def test_encode_batch() -> None:
    shares = base.encode_batch([0, 1, 2, 3, 4], 4, 5, make_generator(3))
    assert shares.shape == (5, 4)
    assert (shares.sum(axis=1) % 5).tolist() == [0, 1, 2, 3, 4]
    big_q = 2**61 - 1
    shares = base.encode_batch([5, big_q - 1], 3, big_q, make_generator(3))
    assert [sum(int(v) for v in row) % big_q for row in shares] == [5, big_q - 1]
    single = base.encode_batch([2, 0], 1, 3, make_generator(3))
    assert single[:, 0].tolist() == [2, 0]


def test_required_messages() -> None:
    assert base.required_messages(4, 2, 0.5) == 204
    assert base.required_messages(4, 2, 1.0) == 104
    assert base.required_messages(4, PrimeModulus(2), 1.0) == 104
    with pytest.raises(ValueError):
        base.required_messages(2, 5, 0.5)
    with pytest.raises(ValueError):
        base.required_messages(4, 5, 0.0)
    with pytest.raises(ValueError):
        base.required_messages(4, 5, 1.5)

    previous = None
    for q in (2, 3, 5, 11, 101, 2003):
        value = base.required_messages(10, q, 0.01)
        assert previous is None or value >= previous
        previous = value
    previous = None
    for n in (3, 4, 8, 100, 1000):
        value = base.required_messages(n, 101, 0.01)
        assert previous is None or value <= previous
        previous = value
    assert base.required_messages(10, 101, 0.001) >= base.required_messages(10, 101, 0.01)


def test_asymptotic_messages() -> None:
    assert base.asymptotic_messages(4, 2, 1.0) == pytest.approx(2.0)
    assert base.asymptotic_messages(1024, 2003, 20.0) < base.asymptotic_messages(32, 2003, 20.0)
