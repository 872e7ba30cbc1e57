"""Environment-driven settings.

Values come from the process environment, optionally seeded from a `.env`
file next to the program:

- MEANKING_THREADS: cap on sweep worker threads (default min(8, cpu count))
- MEANKING_TOL: default comparison tolerance (default 1e-10)
- MEANKING_LOG_LEVEL: CLI log level (default WARNING)
"""

import logging
import os
from functools import lru_cache
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError, field_validator


def resource_path(relative_path):
    """Absolute path of a file in the project root, falling back to the working directory."""
    root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    candidate = os.path.join(root, relative_path)
    if os.path.exists(candidate):
        return candidate
    return os.path.join(os.path.abspath("."), relative_path)


# Load .env from the correct location
load_dotenv(resource_path(".env"))

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-10


class Settings(BaseModel):
    threads: Optional[int] = Field(default=None, ge=1)
    tolerance: float = Field(default=DEFAULT_TOLERANCE, gt=0)
    log_level: str = "WARNING"

    @field_validator("log_level")
    @classmethod
    def _upper_level(cls, value: str) -> str:
        value = value.upper()
        if value not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"unknown log level: {value}")
        return value

    def worker_count(self) -> int:
        if self.threads is not None:
            return self.threads
        return min(8, os.cpu_count() or 1)


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    raw = {
        "threads": os.getenv("MEANKING_THREADS") or None,
        "tolerance": os.getenv("MEANKING_TOL") or DEFAULT_TOLERANCE,
        "log_level": os.getenv("MEANKING_LOG_LEVEL") or "WARNING",
    }
    try:
        return Settings(**raw)
    except ValidationError as e:
        logger.warning("⚠️ Ignoring invalid MEANKING_* settings: %s", e)
        return Settings()


def default_tolerance() -> float:
    return get_settings().tolerance
