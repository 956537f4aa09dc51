import io
import json
import math as maths
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, TextIO

import numpy as np
import pandas
import tabulate

SCHEMA_VERSION = 1
SIGNIFICANT_DIGITS = 12
FORMATS = ("json", "csv", "table")
_LEADING_COLUMNS = ("schema", "subcommand", "seed", "pass")


@dataclass(frozen=True)
class ExperimentRecord:
    """
    One result line of a runner subcommand.

    Attributes:
        subcommand (str): the subcommand that produced the record.
        params (dict[str, any]): the parameters it ran with.
        seed (int or none): the 64-bit seed, None for deterministic computations.
        results (dict[str, any]): named results. Numbers, rationals, lists and nested dictionaries.
        passed (bool): every asserted inequality of the record held.
    """

    subcommand: str
    params: dict[str, Any]
    seed: int | None
    results: dict[str, Any]
    passed: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema": SCHEMA_VERSION,
            "subcommand": self.subcommand,
            "params": format_value(self.params),
            "seed": self.seed,
            "results": format_value(self.results),
            "pass": bool(self.passed),
        }


def _round(value: float) -> float | str:
    if not maths.isfinite(value):
        return str(value)
    return float(f"{value:.{SIGNIFICANT_DIGITS}g}")


def format_value(value: Any) -> Any:
    """
    Convert a result into plain JSON values. Floats keep 12 significant digits; a Fraction becomes
    {"value": its rounded float, "exact": "num/den"}.
    """
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, Fraction):
        try:
            approximate = _round(float(value))
        except OverflowError:
            approximate = None
        return {"value": approximate, "exact": f"{value.numerator}/{value.denominator}"}
    if isinstance(value, (float, np.floating)):
        return _round(float(value))
    if isinstance(value, Mapping):
        return {str(key): format_value(item) for key, item in value.items()}
    if isinstance(value, (set, frozenset)):
        return [format_value(item) for item in sorted(value)]
    if isinstance(value, (list, tuple, np.ndarray)):
        return [format_value(item) for item in value]
    if value is None or isinstance(value, str):
        return value
    return str(value)


def _flatten(content: Mapping[str, Any], prefix: str = "") -> dict[str, Any]:
    flat = {}
    for key, value in content.items():
        name = f"{prefix}{key}"
        if isinstance(value, Mapping):
            flat.update(_flatten(value, f"{name}."))
        elif isinstance(value, list):
            flat[name] = json.dumps(value, sort_keys=True, separators=(",", ":"))
        else:
            flat[name] = value
    return flat


def flat_rows(records: Iterable[ExperimentRecord]) -> pandas.DataFrame:
    """
    One row per record with dotted column names such as `results.sd.exact`. Columns missing from a record are empty.
    """
    rows = [_flatten(record.to_dict()) for record in records]
    columns = list(_LEADING_COLUMNS) + sorted({key for row in rows for key in row} - set(_LEADING_COLUMNS))
    return pandas.DataFrame(rows, columns=columns, dtype=object)


def render_records(records: list[ExperimentRecord], output_format: str) -> str:
    """
    Serialise records as line-delimited JSON, CSV or a text table. The output only depends on the records.
    """
    if output_format not in FORMATS:
        raise ValueError(f"Output format must be one of {', '.join(FORMATS)}, got {output_format}")
    if output_format == "json":
        return "".join(json.dumps(record.to_dict(), sort_keys=True, separators=(",", ":")) + "\n" for record in records)
    table = flat_rows(records)
    if output_format == "csv":
        buffer = io.StringIO()
        table.to_csv(buffer, index=False, lineterminator="\n")
        return buffer.getvalue()
    return tabulate.tabulate(table.fillna("").values.tolist(), headers=list(table.columns), tablefmt="github") + "\n"


def write_records(records: list[ExperimentRecord], output_format: str, out: str | TextIO) -> None:
    text = render_records(records, output_format)
    if isinstance(out, str):
        with open(out, "w", encoding="utf-8") as file:
            file.write(text)
    else:
        out.write(text)
