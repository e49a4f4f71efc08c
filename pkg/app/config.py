"""Application settings read from the environment or a ``.env`` file."""

import logging
import os
from pathlib import Path

from decouple import config


class Settings:
    """Solver defaults and service configuration."""

    def __init__(self):
        self.max_iterations = config("MCMP_MAX_ITERATIONS", default=1000, cast=int)
        self.separation_interval = config("MCMP_SEPARATION_INTERVAL", default=10, cast=int)
        self.rounding_interval = config("MCMP_ROUNDING_INTERVAL", default=100, cast=int)
        self.epsilon = config("MCMP_EPSILON", default=1e-4, cast=float)
        self.tighten = config("MCMP_TIGHTEN", default="cycles+oddwheels")
        self.time_limit = config("MCMP_TIME_LIMIT", default=3600.0, cast=float)
        self.log_level = config("MCMP_LOG_LEVEL", default="WARNING")
        self.database_url = config("DATABASE_URL", default=f"sqlite:///{Path(os.getcwd()) / 'mcmp_runs.db'}")


settings = Settings()


def configure_logging(level: str | int | None = None) -> None:
    """Send log records to stderr at the given level (default: ``MCMP_LOG_LEVEL``)."""
    level = level or settings.log_level
    if isinstance(level, str):
        level = level.upper()
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )
