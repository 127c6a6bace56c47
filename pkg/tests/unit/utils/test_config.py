# tests/unit/utils/test_config.py
import logging

import pytest
import yaml

from l1sections.config import PROJECT_ROOT, deep_merge_dicts, load_config
from l1sections.exceptions import ConfigurationError
from l1sections.utils.logging import setup_logging


def write_yaml(path, data):
    path.write_text(yaml.safe_dump(data), encoding="utf-8")
    return path


def test_deep_merge_keeps_untouched_branches():
    base = {"a": {"x": 1, "y": 2}, "b": 3}
    merged = deep_merge_dicts(base, {"a": {"y": 5}, "c": 4})
    assert merged == {"a": {"x": 1, "y": 5}, "b": 3, "c": 4}
    assert base["a"]["y"] == 2


def test_packaged_defaults_load():
    config = load_config(str(PROJECT_ROOT / "config" / "default.yaml"), env="default")
    assert config["assembly"]["min_N"] == 256
    assert config["sensing"]["solver_methods"][0] == "highs-ds"
    assert config["output"]["directory"] == str(PROJECT_ROOT / "output")


def test_environment_file_is_merged(tmp_path):
    primary = write_yaml(tmp_path / "base.yaml", {"analysis": {"samples": 10, "max_n": 64}, "logging": {"file": ""}})
    write_yaml(tmp_path / "ci.yaml", {"analysis": {"samples": 99}})
    config = load_config(str(primary), env="ci")
    assert config["analysis"] == {"samples": 99, "max_n": 64}


def test_missing_environment_file_warns(tmp_path, caplog):
    primary = write_yaml(tmp_path / "base.yaml", {"analysis": {"samples": 10}})
    with caplog.at_level(logging.WARNING):
        config = load_config(str(primary), env="staging")
    assert config["analysis"]["samples"] == 10
    assert "staging" in caplog.text


def test_bad_configuration_files(tmp_path):
    with pytest.raises(ConfigurationError, match="not found"):
        load_config(str(tmp_path / "absent.yaml"))
    listing = tmp_path / "list.yaml"
    listing.write_text("- 1\n- 2\n", encoding="utf-8")
    with pytest.raises(ConfigurationError, match="not a valid YAML dictionary"):
        load_config(str(listing))
    broken = tmp_path / "broken.yaml"
    broken.write_text("a: [1, 2\n", encoding="utf-8")
    with pytest.raises(ConfigurationError, match="Error parsing YAML"):
        load_config(str(broken))


def test_setup_logging_writes_to_the_configured_file(tmp_path):
    log_file = tmp_path / "logs" / "run.log"
    root = logging.getLogger()
    saved_handlers, saved_level = root.handlers[:], root.level
    try:
        logger = setup_logging({"level": "debug", "console": False, "file": str(log_file)})
        logging.getLogger("l1sections.tests").debug("file handler message")
        for handler in root.handlers:
            handler.flush()
    finally:
        for handler in root.handlers[:]:
            handler.close()
            root.removeHandler(handler)
        for handler in saved_handlers:
            root.addHandler(handler)
        root.setLevel(saved_level)
    assert logger.name == "l1sections"
    assert "file handler message" in log_file.read_text(encoding="utf-8")
    assert logging.getLogger("galois").level == logging.WARNING


def test_per_logger_levels_go_below_the_root_level(tmp_path):
    log_file = tmp_path / "run.log"
    root = logging.getLogger()
    traced = logging.getLogger("l1sections.analysis.spread")
    saved_handlers, saved_level = root.handlers[:], root.level
    try:
        setup_logging({
            "level": "WARNING", "console": False, "file": str(log_file),
            "levels": {"l1sections.analysis.spread": "DEBUG"},
        })
        traced.debug("block trace")
        logging.getLogger("l1sections.main").info("hidden info")
        for handler in root.handlers:
            handler.flush()
    finally:
        traced.setLevel(logging.NOTSET)
        for handler in root.handlers[:]:
            handler.close()
            root.removeHandler(handler)
        for handler in saved_handlers:
            root.addHandler(handler)
        root.setLevel(saved_level)
    text = log_file.read_text(encoding="utf-8")
    assert "block trace" in text
    assert "hidden info" not in text
