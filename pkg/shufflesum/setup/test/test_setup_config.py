import os
import tempfile

import pytest

from shufflesum.setup.config import Config


def test_get_default_for() -> None:
    assert Config.get_default_for("enumeration", "budget") == 100_000_000
    assert Config.get_default_for("enumeration", "rational_state_limit") == 1_000_000
    assert Config.get_default_for("partitions", "budget") == 20_000_000
    assert Config.get_default_for("statistics", "stderr_slack") == 5.0
    assert Config.get_default_for("parallel", "n_jobs") is None
    assert Config.get_default_for("notifications", "log_name") is None
    assert Config.get_default_for("notifications", "allow_notifications") is False
    with pytest.raises(ValueError):
        Config.get_default_for("enumeration", "not_a_parameter")
    with pytest.raises(ValueError):
        Config.get_default_for("not_a_section", "budget")


def test_load_defaults_only() -> None:
    config = Config()
    config.load()
    assert config.get_section_names() == ["notifications", "enumeration", "partitions", "statistics", "parallel", "dp"]
    assert config["dp"]["truncation_delta_fraction"] == 0.5
    assert config["parallel"]["chunk_size"] == 2000
    with pytest.raises(ValueError):
        config["missing"]


def test_load_user_file() -> None:
    tmp_dir = tempfile.TemporaryDirectory()
    config_path = os.path.join(tmp_dir.name, "user.ini")
    with open(config_path, "w") as file:
        file.write("[enumeration]\nbudget = 1_000\n\n[parallel]\nn_jobs = 3\nunknown_thing = 4\n")

    config = Config()
    config.load(config_path)
    assert config["enumeration"]["budget"] == 1000
    assert config["enumeration"]["rational_state_limit"] == 1_000_000
    assert config["parallel"]["n_jobs"] == 3
    assert "unknown_thing" not in config["parallel"]
    tmp_dir.cleanup()


def test_load_rejects_bad_values() -> None:
    tmp_dir = tempfile.TemporaryDirectory()
    bad_type_path = os.path.join(tmp_dir.name, "bad_type.ini")
    with open(bad_type_path, "w") as file:
        file.write("[enumeration]\nbudget = lots\n")
    bad_range_path = os.path.join(tmp_dir.name, "bad_range.ini")
    with open(bad_range_path, "w") as file:
        file.write("[dp]\ntruncation_delta_fraction = 1.5\n")
    bad_section_path = os.path.join(tmp_dir.name, "bad_section.ini")
    with open(bad_section_path, "w") as file:
        file.write("[extra]\nvalue = 1\n")

    with pytest.raises(Config.ParamError):
        Config().load(bad_type_path)
    with pytest.raises(Config.ParamError):
        Config().load(bad_range_path)
    with pytest.raises(Config.SectionError):
        Config().load(bad_section_path)
    with pytest.raises(FileNotFoundError):
        Config().load(os.path.join(tmp_dir.name, "nope.ini"))
    tmp_dir.cleanup()


def test_format_param() -> None:
    config = Config()
    assert config.format_param("a", "s", " -4 ", "int") == -4
    assert config.format_param("a", "s", "", "maybe_int") is None
    assert config.pre_check_param("a", "s", "", "maybe_int")
    assert not config.pre_check_param("a", "s", "", "int")
    with pytest.raises(Config.ParamError):
        config.format_param("a", "s", "x", "int")
    assert config.format_param("a", "s", "1e-3", "number") == 0.001
    assert config.format_param("a", "s", "TRUE", "bool") is True
    assert config.pre_check_param("a", "s", "12_000", "int")
    assert not config.pre_check_param("a", "s", "1.5", "int")
    assert config.post_check_param("a", "s", 0.5, "positive_lt1") == (True, None)
    assert config.post_check_param("a", "s", 1.0, "positive_lt1") == (False, "< 1")
    assert config.post_check_param("a", "s", None, "positive") == (True, None)
