import math as maths
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import tqdm

from .. import log
from ..ffield.base import field_sum
from ..protocol.base import encode_batch
from ..setup.config import Config
from ..utils.parallel import run_chunked
from .base import decode_total, noisy_inputs
from .noise import NoiseMechanism
from .params import DpParams

# Rounding of float input sums.
_FLOAT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class DpExperimentRecord:
    """
    Accuracy of private summation over repeated independent runs.

    Attributes:
        params (DpParams): parameters.
        noise_name (str): label of the aggregate noise.
        trials (int): number of runs.
        mean_error (float): mean of estimate - true sum.
        mean_error_stderr (float): its standard error.
        mean_abs_error (float): mean of |estimate - true sum|.
        mean_abs_error_stderr (float): its standard error.
        max_abs_error (float): largest |estimate - true sum|.
        wraparounds (int): runs whose noisy integer sum fell outside (-q/2, q/2] and decoded wrongly.
        target (float): 1 + 1 / epsilon, the order of the expected error.
        tolerance (float): error_tolerance_constant * target.
        slack (float): standard errors allowed between the mean error and 0.
    """

    params: DpParams
    noise_name: str
    trials: int
    mean_error: float
    mean_error_stderr: float
    mean_abs_error: float
    mean_abs_error_stderr: float
    max_abs_error: float
    wraparounds: int
    target: float
    tolerance: float
    slack: float

    @property
    def unbiased(self) -> bool:
        return abs(self.mean_error) <= self.slack * self.mean_error_stderr + _FLOAT_TOLERANCE

    @property
    def passed(self) -> bool:
        return self.wraparounds == 0 and self.mean_abs_error <= self.tolerance and self.unbiased


def _run_chunk(
    rng: np.random.Generator,
    trials: int,
    params: DpParams,
    noise: NoiseMechanism,
    xs: np.ndarray | None,
) -> tuple[np.ndarray, int]:
    errors = np.empty(trials, dtype=np.float64)
    wraparounds = 0
    for trial in tqdm.trange(trials, desc="Private sums", unit="run", disable=None, leave=False):
        inputs = rng.random(params.n) if xs is None else xs
        noisy = noisy_inputs(inputs, params, noise, rng)
        shares = encode_batch(noisy, params.m, params.modulus, rng)
        # The sum is invariant under the shuffle, so the batch path sums the share array directly.
        decoded = decode_total(field_sum(shares, params.q), params.q)
        true_noisy = int(noisy.sum())
        wraparounds += decoded != true_noisy
        errors[trial] = decoded / params.scale - float(np.sum(inputs))
    return errors, wraparounds


def dp_sum_experiment(
    params: DpParams,
    noise: NoiseMechanism,
    trials: int,
    seed: int,
    xs: Sequence[float] | None = None,
    n_jobs: int | None = None,
    error_tolerance_constant: float | None = None,
    chunk_size: int | None = None,
    slack: float | None = None,
) -> DpExperimentRecord:
    """
    Run private summation end to end `trials` times and summarise the error of the decoded sum.

    Args:
        params (DpParams): parameters.
        noise (NoiseMechanism): per-party noise.
        trials (int): number of independent runs.
        seed (int): 64-bit seed.
        xs (list of float, optional): fixed inputs in [0, 1], one per party. Default: fresh uniform inputs every run.
        n_jobs (int, optional): joblib workers. Default: from config.
        error_tolerance_constant (float, optional): tolerance on the mean absolute error in units of 1 + 1/epsilon.
            Default: config `[dp] error_tolerance_constant`.
        chunk_size (int, optional): runs per seeded chunk. Default: from config.
        slack (float, optional): standard errors allowed between the mean error and 0. Default: from config.

    Returns:
        (DpExperimentRecord): record.
    """
    assert isinstance(params, DpParams)
    assert isinstance(noise, NoiseMechanism)
    if xs is not None:
        xs = np.asarray(xs, dtype=np.float64)
        if xs.shape != (params.n,):
            raise ValueError(f"Expected {params.n} inputs, got shape {xs.shape}")
        if np.any(xs < 0) or np.any(xs > 1):
            raise ValueError("Inputs must be reals in [0, 1]")
    if error_tolerance_constant is None:
        error_tolerance_constant = Config.get_default_for("dp", "error_tolerance_constant")
    if slack is None:
        slack = Config.get_default_for("statistics", "stderr_slack")

    log.info(f"Running {trials} private sums with n={params.n}, m={params.m}, q={params.q}")
    chunks = run_chunked(_run_chunk, trials, seed, params, noise, xs, n_jobs=n_jobs, chunk_size=chunk_size)
    errors = np.concatenate([chunk_errors for chunk_errors, _ in chunks])
    wraparounds = sum(chunk_wraps for _, chunk_wraps in chunks)
    if wraparounds:
        log.warn(f"{wraparounds} of {trials} private sums wrapped around q={params.q}")

    abs_errors = np.abs(errors)
    spread = maths.sqrt(trials)
    target = 1 + 1 / params.epsilon
    return DpExperimentRecord(
        params=params,
        noise_name=noise.aggregate_distribution_name,
        trials=trials,
        mean_error=float(errors.mean()),
        mean_error_stderr=float(errors.std()) / spread,
        mean_abs_error=float(abs_errors.mean()),
        mean_abs_error_stderr=float(abs_errors.std()) / spread,
        max_abs_error=float(abs_errors.max()),
        wraparounds=int(wraparounds),
        target=target,
        tolerance=error_tolerance_constant * target,
        slack=float(slack),
    )
