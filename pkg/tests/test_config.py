"""
Tests for secretary_cutoffs.infrastructure.config module
"""

import logging

import pytest

from secretary_cutoffs.infrastructure.config import LOG_FILE_ENV, LOG_LEVEL_ENV, LoggingConfig


class TestLoggingConfig:
    """Tests for LoggingConfig"""

    @pytest.mark.parametrize("explicit, env, expected", [("debug", "ERROR", "DEBUG"), (None, "warning", "WARNING"), (None, "loud", "INFO"), (None, None, "INFO")])
    def test_resolve_level(self, monkeypatch, explicit, env, expected):
        """Test explicit level, then environment, then INFO"""
        if env is None:
            monkeypatch.delenv(LOG_LEVEL_ENV, raising=False)
        else:
            monkeypatch.setenv(LOG_LEVEL_ENV, env)

        assert LoggingConfig.resolve_level(explicit) == expected

    def test_setup_package_logger(self):
        """Test the package logger gets its level and a stderr handler"""
        LoggingConfig.setup("WARNING")
        logger = logging.getLogger(LoggingConfig.LOGGER_NAME)

        assert logger.level == logging.WARNING
        assert logger.propagate is False
        assert any(isinstance(handler, logging.StreamHandler) for handler in logger.handlers)

    def test_setup_log_file(self, tmp_path, monkeypatch):
        """Test SECRETARY_LOG_FILE adds a rotating file handler"""
        log_file = tmp_path / "logs" / "run.log"
        monkeypatch.setenv(LOG_FILE_ENV, str(log_file))
        LoggingConfig.setup_default("INFO")

        LoggingConfig.get_logger("secretary_cutoffs.test").info("hello")
        for handler in logging.getLogger(LoggingConfig.LOGGER_NAME).handlers:
            handler.flush()

        assert "hello" in log_file.read_text()
