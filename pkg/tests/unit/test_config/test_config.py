import logging
import os
from unittest.mock import patch

from app.config import Settings, configure_logging


class TestSettings:
    """Test cases for environment configuration"""

    def test_defaults(self):
        """Test defaults without MCMP variables"""
        with patch.dict(os.environ, {}, clear=True):
            settings = Settings()
        assert settings.max_iterations == 1000
        assert settings.separation_interval == 10
        assert settings.rounding_interval == 100
        assert settings.epsilon == 1e-4
        assert settings.tighten == "cycles+oddwheels"
        assert settings.time_limit == 3600.0
        assert settings.log_level == "WARNING"
        assert settings.database_url.replace("\\", "/").endswith("/mcmp_runs.db")

    def test_environment_overrides(self):
        """Test that environment variables are cast to their types"""
        environment = {
            "MCMP_MAX_ITERATIONS": "25",
            "MCMP_EPSILON": "0.5",
            "MCMP_TIGHTEN": "cycles",
            "DATABASE_URL": "sqlite:///test.db",
        }
        with patch.dict(os.environ, environment):
            settings = Settings()
        assert settings.max_iterations == 25
        assert settings.epsilon == 0.5
        assert settings.tighten == "cycles"
        assert settings.database_url == "sqlite:///test.db"


def test_configure_logging_sets_level():
    """Test that the root logger follows the requested level"""
    root = logging.getLogger()
    previous = root.level
    try:
        configure_logging("debug")
        assert root.level == logging.DEBUG
    finally:
        root.setLevel(previous)
