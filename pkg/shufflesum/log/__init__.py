from .base import debug, error, error_catch, info, set_log_config, warn

__all__ = ["debug", "error", "error_catch", "info", "set_log_config", "warn"]
