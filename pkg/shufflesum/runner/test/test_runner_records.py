import io
import json
from fractions import Fraction

import numpy as np
import pytest

from shufflesum.runner import records
from shufflesum.runner.records import ExperimentRecord


def _example_records() -> list[ExperimentRecord]:
    return [
        ExperimentRecord("sd-exact", {"n": 2, "x": (0, 0)}, None, {"sd": Fraction(1, 2), "m": 2}, True),
        ExperimentRecord("sd-mc", {"n": 3}, 7, {"advantage": 0.1234567890123456, "trials": 10}, False),
    ]


def test_format_value() -> None:
    assert records.format_value(Fraction(1, 3)) == {"value": 0.333333333333, "exact": "1/3"}
    assert records.format_value(Fraction(10**400, 3))["value"] is None
    assert records.format_value(2 / 3) == 0.666666666667
    assert records.format_value(np.int64(5)) == 5
    assert type(records.format_value(np.int64(5))) is int
    assert records.format_value(np.bool_(True)) is True
    assert records.format_value(np.array([1, 2])) == [1, 2]
    assert records.format_value({3, 1, 2}) == [1, 2, 3]
    assert records.format_value({"a": (1, Fraction(1, 2))}) == {"a": [1, {"value": 0.5, "exact": "1/2"}]}
    assert records.format_value(None) is None


def test_record_to_dict() -> None:
    content = _example_records()[0].to_dict()
    assert content["schema"] == records.SCHEMA_VERSION == 1
    assert content["subcommand"] == "sd-exact"
    assert content["seed"] is None
    assert content["pass"] is True
    assert content["results"]["sd"] == {"value": 0.5, "exact": "1/2"}
    assert content["params"]["x"] == [0, 0]


def test_render_json() -> None:
    text = records.render_records(_example_records(), "json")
    lines = text.splitlines()
    assert len(lines) == 2
    second = json.loads(lines[1])
    assert second["results"]["advantage"] == 0.123456789012
    assert second["seed"] == 7
    assert second["pass"] is False
    assert text == records.render_records(_example_records(), "json")


def test_render_csv() -> None:
    text = records.render_records(_example_records(), "csv")
    lines = text.splitlines()
    assert len(lines) == 3
    header = lines[0].split(",")
    assert header[:4] == ["schema", "subcommand", "seed", "pass"]
    assert "results.sd.exact" in header
    assert "params.x" in header
    assert header[4:] == sorted(header[4:])
    assert "1/2" in lines[1]


def test_render_table() -> None:
    text = records.render_records(_example_records(), "table")
    assert text.startswith("| schema")
    assert "sd-mc" in text


def test_render_invalid_format() -> None:
    with pytest.raises(ValueError):
        records.render_records(_example_records(), "xml")


def test_write_records(tmp_path) -> None:
    stream = io.StringIO()
    records.write_records(_example_records(), "json", stream)
    file_path = str(tmp_path / "records.jsonl")
    records.write_records(_example_records(), "json", file_path)
    with open(file_path, "r", encoding="utf-8") as file:
        assert file.read() == stream.getvalue()
