import pytest

from shufflesum.setup.config_section import ConfigSection


def test_ConfigSection() -> None:
    section = ConfigSection("enumeration", {"budget": 100, "rational_state_limit": None})

    as_dict = section.to_dict()
    assert type(as_dict) is dict
    assert set(as_dict.keys()) == {"budget", "rational_state_limit"}
    assert as_dict["budget"] == 100
    assert as_dict["rational_state_limit"] is None
    assert section.name == "enumeration"
    assert "budget" in section
    assert "seed" not in section
    assert section.get_parameter_names() == ["budget", "rational_state_limit"]
    assert section["budget"] == 100

    section["budget"] = 5
    assert section["budget"] == 5
    assert section["rational_state_limit"] is None
    # The returned dict is a copy.
    assert as_dict["budget"] == 100
    assert section.to_dict()["budget"] == 5

    with pytest.raises(ValueError):
        section["missing"]
    with pytest.raises(TypeError):
        section[0]
    with pytest.raises(AssertionError):
        section["missing"] = 1
