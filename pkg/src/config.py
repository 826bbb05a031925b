"""
Toolkit settings

Environment-driven defaults for the command-line surface.
"""

import logging
import os
from dataclasses import dataclass, field

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass
class Settings:
    """Defaults read from SPMTC_* environment variables (or a .env file)."""

    log_level: str = field(default_factory=lambda: os.environ.get("SPMTC_LOG_LEVEL", "WARNING").upper())

    workers_text: str = field(default_factory=lambda: os.environ.get("SPMTC_WORKERS", "1").strip())

    output_dir: str = field(default_factory=lambda: os.environ.get("SPMTC_OUTPUT_DIR", "results"))

    def validate(self) -> list[str]:
        """Return a list of problems; empty when the settings are usable."""
        errors = []
        if self.log_level not in LOG_LEVELS:
            errors.append(f"SPMTC_LOG_LEVEL must be one of {', '.join(LOG_LEVELS)}, got {self.log_level!r}")
        if not self.workers_text.isdigit() or self.workers < 1:
            errors.append(f"SPMTC_WORKERS must be a positive integer, got {self.workers_text!r}")
        return errors

    @property
    def workers(self) -> int:
        return int(self.workers_text) if self.workers_text.isdigit() else 1

    @property
    def logging_level(self) -> int:
        return getattr(logging, self.log_level, logging.WARNING)

    @classmethod
    def from_env(cls) -> "Settings":
        return cls()


# Global settings instance
settings = Settings.from_env()
