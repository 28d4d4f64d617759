import logging

import pytest

from core.config import DEFAULT_SEED, CompileOptions, load_config, seed_from_env
from core.errors import CompileError, NetParseError, QBCError
from core.logging_utils import resolve_level, setup_logging


def test_environment_overrides(monkeypatch, tmp_path):
    monkeypatch.setenv("QBC_RUNTIME_CACHE", str(tmp_path / "cache"))
    monkeypatch.setenv("QBC_ISOMETRY_TOL", "1e-6")
    monkeypatch.setenv("QBC_STRICT", "off")
    config = load_config()
    assert config.runtime_cache.is_dir()
    assert config.isometry_tol == 1e-6
    assert config.strict_files is False

    options = CompileOptions.from_config(config, mode="e1", isometry_tol=None)
    assert options.isometry_tol == 1e-6
    assert options.mode == "e1"


def test_errors_carry_stage_and_exit_code():
    err = CompileError("boom", stage="merge")
    assert str(err) == "[merge] boom"
    assert err.exit_code == 4
    assert NetParseError("x").stage == "parse"
    assert isinstance(err, QBCError)


def test_seed_comes_from_environment(monkeypatch):
    monkeypatch.setenv("QBC_SEED", "7")
    assert load_config().seed == 7
    assert seed_from_env() == 7
    monkeypatch.delenv("QBC_SEED")
    assert load_config().seed == DEFAULT_SEED


def test_log_level_from_environment_filters_file_log(monkeypatch, tmp_path):
    monkeypatch.setenv("QBC_LOG_LEVEL", "warning")
    config = load_config()
    assert config.log_level == "WARNING"

    log_path = tmp_path / "logs" / "qbc.log"
    logger = setup_logging(log_path, config.log_level)
    try:
        assert logger.level == logging.WARNING
        logger.info("hidden line")
        logger.warning("kept line")
        for handler in logger.handlers:
            handler.flush()
        text = log_path.read_text(encoding="utf-8")
        assert "kept line" in text
        assert "hidden line" not in text
        assert setup_logging(log_path, "DEBUG") is logger
        assert sum(getattr(h, "baseFilename", "") == str(log_path) for h in logger.handlers) == 1
    finally:
        for handler in [h for h in logger.handlers if getattr(h, "baseFilename", "") == str(log_path)]:
            logger.removeHandler(handler)
            handler.close()
        logger.setLevel(logging.INFO)


def test_unknown_log_level_is_rejected():
    assert resolve_level("debug") == logging.DEBUG
    assert resolve_level(logging.ERROR) == logging.ERROR
    with pytest.raises(ValueError, match="unknown log level"):
        resolve_level("loud")
