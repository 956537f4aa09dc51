from ._version import __version__
from .dp import derive_dp_params, dp_sum_experiment
from .protocol import ProtocolParams, analyze, encode, required_messages, shuffle
from .runner import run

__all__ = [
    "__version__",
    "ProtocolParams",
    "analyze",
    "derive_dp_params",
    "dp_sum_experiment",
    "encode",
    "required_messages",
    "run",
    "shuffle",
]
