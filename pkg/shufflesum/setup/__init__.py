from .config import Config
from .config_section import ConfigSection

__all__ = ["Config", "ConfigSection"]
