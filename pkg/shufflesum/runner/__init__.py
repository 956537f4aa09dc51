from .base import build_parser, run
from .figure1 import figure1_table
from .records import ExperimentRecord, render_records, write_records

__all__ = ["ExperimentRecord", "build_parser", "figure1_table", "render_records", "run", "write_records"]
