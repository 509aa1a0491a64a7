"""Configuration management for fairscore."""

import os
from pathlib import Path
from dotenv import load_dotenv

from fairscore.errors import ConfigError

# Load environment variables from .env file
load_dotenv()

PRESETS_DIR = Path(__file__).resolve().parent / "presets"


def _optional_int(name: str) -> int | None:
    value = os.getenv(name)
    return int(value) if value not in (None, "") else None


class Config:
    """Library and CLI defaults, overridable through the environment."""

    # Repair
    BIN_WIDTH = float(os.getenv("FAIRSCORE_BIN_WIDTH", "1.0"))
    THETA = float(os.getenv("FAIRSCORE_THETA", "1.0"))
    # None -> population size capped at MAX_GRID_SIZE, "exact" -> common refinement
    GRID_SIZE = os.getenv("FAIRSCORE_GRID_SIZE") or None
    MAX_GRID_SIZE = 100_000
    MIN_GROUP_SIZE = int(os.getenv("FAIRSCORE_MIN_GROUP_SIZE", "30"))

    # Evaluation
    THRESHOLD = float(os.getenv("FAIRSCORE_THRESHOLD", "0.8"))
    K_STEP = _optional_int("FAIRSCORE_K_STEP")
    LARGE_POPULATION = 50_000
    K_STEP_LARGE = 1_000
    K_STEP_SMALL = 100

    # Runs
    SEED = int(os.getenv("FAIRSCORE_SEED", "2019"))
    WORKERS = int(os.getenv("FAIRSCORE_WORKERS", "4"))
    OUTPUT_DIR = Path(os.getenv("FAIRSCORE_OUTPUT_DIR", "output"))

    # Logging
    LOG_LEVEL = os.getenv("FAIRSCORE_LOG_LEVEL", "INFO")
    LOG_JSON = os.getenv("FAIRSCORE_LOG_JSON", "0") == "1"

    # Serialization
    SIGNIFICANT_DIGITS = 12

    @classmethod
    def validate(cls):
        """Validate configuration values."""
        if not cls.BIN_WIDTH > 0:
            raise ConfigError(f"FAIRSCORE_BIN_WIDTH must be positive, got {cls.BIN_WIDTH}")
        if not 0.0 <= cls.THETA <= 1.0:
            raise ConfigError(f"FAIRSCORE_THETA must lie in [0, 1], got {cls.THETA}")
        if not 0.0 < cls.THRESHOLD <= 1.0:
            raise ConfigError(f"FAIRSCORE_THRESHOLD must lie in (0, 1], got {cls.THRESHOLD}")
        if cls.WORKERS < 1:
            raise ConfigError(f"FAIRSCORE_WORKERS must be at least 1, got {cls.WORKERS}")
        if cls.MIN_GROUP_SIZE < 1:
            raise ConfigError(f"FAIRSCORE_MIN_GROUP_SIZE must be at least 1, got {cls.MIN_GROUP_SIZE}")
        if cls.K_STEP is not None and cls.K_STEP < 1:
            raise ConfigError(f"FAIRSCORE_K_STEP must be at least 1, got {cls.K_STEP}")
        parse_grid_size(cls.GRID_SIZE)

    @classmethod
    def default_k_step(cls, population_size: int) -> int:
        """k-grid step: configured value, else 1,000 for large populations and 100 otherwise."""
        if cls.K_STEP is not None:
            return cls.K_STEP
        return cls.K_STEP_LARGE if population_size >= cls.LARGE_POPULATION else cls.K_STEP_SMALL

    @classmethod
    def default_grid_size(cls, population_size: int) -> int:
        return max(1, min(population_size, cls.MAX_GRID_SIZE))


def parse_grid_size(value) -> int | str | None:
    """Parse a grid size setting: None, the literal ``exact``, or a positive integer."""
    if value is None or value == "":
        return None
    if isinstance(value, str):
        if value.strip().lower() == "exact":
            return "exact"
        try:
            value = int(value)
        except ValueError:
            raise ConfigError(f"grid size must be a positive integer or 'exact', got {value!r}") from None
    if value < 1:
        raise ConfigError(f"grid size must be a positive integer or 'exact', got {value!r}")
    return value
