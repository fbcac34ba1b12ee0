"""Configuration module.

Settings are layered: built-in defaults, then ``BLOWUPRANK_*`` environment
variables (a ``.env`` file in the working directory is loaded first), then an
optional YAML file.
"""

import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv
from joblib import cpu_count
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from blowuprank.core import ConfigError

ENV_PREFIX = "BLOWUPRANK_"
DEFAULT_EXHAUSTIVE_CAP = 1 << 24
DEFAULT_RANDOM_BUDGET = 10_000
_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class SearchConfig(BaseModel):
    """Budget for one search call."""

    model_config = ConfigDict(frozen=True)

    cap: int = Field(default=DEFAULT_EXHAUSTIVE_CAP, ge=1)
    threads: int = Field(default=1, ge=1)
    budget: int = Field(default=DEFAULT_RANDOM_BUDGET, ge=1)
    seed: int = Field(default=0, ge=0, lt=1 << 64)


class Settings(BaseModel):
    """Toolkit settings."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    exhaustive_cap: int = Field(default=DEFAULT_EXHAUSTIVE_CAP, ge=1)
    threads: int = Field(default_factory=lambda: max(1, cpu_count()), ge=1)
    random_budget: int = Field(default=DEFAULT_RANDOM_BUDGET, ge=1)
    seed: int = Field(default=0, ge=0, lt=1 << 64)
    log_level: str = "WARNING"
    log_json: bool = False

    @field_validator("log_level")
    @classmethod
    def _check_level(cls, value: str) -> str:
        level = value.upper()
        if level not in _LOG_LEVELS:
            raise ValueError(f"unknown log level {value!r}")
        return level

    def search_config(self, **overrides: Any) -> SearchConfig:
        """Build a search budget from these settings.

        Args:
            **overrides: Explicit values for ``cap``, ``threads``, ``budget``
                or ``seed``; ``None`` values are ignored.

        Returns:
            Search configuration
        """
        values: Dict[str, Any] = {
            "cap": self.exhaustive_cap,
            "threads": self.threads,
            "budget": self.random_budget,
            "seed": self.seed,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        try:
            return SearchConfig(**values)
        except ValidationError as e:
            raise ConfigError(
                "Invalid search configuration", {"values": values}, e
            ) from e


def _from_environment() -> Dict[str, Any]:
    values: Dict[str, Any] = {}
    for name in Settings.model_fields:
        raw = os.environ.get(ENV_PREFIX + name.upper())
        if raw is not None:
            values[name] = raw
    return values


def _from_yaml(path: Path) -> Dict[str, Any]:
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8"))
    except (OSError, yaml.YAMLError) as e:
        raise ConfigError(
            "Failed to read configuration file", {"path": str(path)}, e
        ) from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(
            "Configuration file must contain a mapping", {"path": str(path)}
        )
    return data


def load_settings(path: Optional[Path] = None, **overrides: Any) -> Settings:
    """Load settings.

    Args:
        path: Optional YAML configuration file
        **overrides: Values that win over every other layer

    Returns:
        Validated settings

    Raises:
        ConfigError: If a layer cannot be read or a value is invalid
    """
    load_dotenv()
    values = _from_environment()
    if path is not None:
        values.update(_from_yaml(path))
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return Settings(**values)
    except ValidationError as e:
        raise ConfigError("Invalid settings", {"errors": e.error_count()}, e) from e


__all__ = [
    "DEFAULT_EXHAUSTIVE_CAP",
    "ConfigError",
    "SearchConfig",
    "Settings",
    "load_settings",
]
