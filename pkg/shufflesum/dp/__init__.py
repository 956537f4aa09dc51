from .base import (
    PrivacyReport,
    decode_total,
    dp_aggregate,
    dp_encode,
    dp_encode_batch,
    dp_privacy_accounting,
    quantize,
)
from .harness import DpExperimentRecord, dp_sum_experiment
from .noise import NoiseMechanism, polya_noise, zero_noise
from .params import DpParams, derive_dp_params

__all__ = [
    "DpExperimentRecord",
    "DpParams",
    "NoiseMechanism",
    "PrivacyReport",
    "decode_total",
    "derive_dp_params",
    "dp_aggregate",
    "dp_encode",
    "dp_encode_batch",
    "dp_privacy_accounting",
    "dp_sum_experiment",
    "polya_noise",
    "quantize",
    "zero_noise",
]
