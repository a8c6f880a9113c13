"""
Environment configuration for drinfeld-lab
Runtime limits for enumeration and sampling, logging, worker counts and the
on-disk cache location are read from DRINFELD_LAB_* environment variables
(or a local .env file).
"""

import logging
import os
from pathlib import Path
from typing import List

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

logger = logging.getLogger(__name__)


def _default_cache_dir() -> str:
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(Path.home(), ".cache")
    return os.path.join(base, "drinfeld-lab")


class Settings(BaseSettings):
    """
    Application settings with environment-specific configuration
    """

    model_config = SettingsConfigDict(
        env_prefix="DRINFELD_LAB_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    app_version: str = "1.0.0"

    # Logging Configuration
    log_level: str = Field(default="INFO")
    log_format: str = Field(default="%(asctime)s - %(name)s - %(levelname)s - %(message)s")

    # Cache Configuration
    cache_dir: str = Field(default_factory=_default_cache_dir)
    cache_enabled: bool = Field(default=True)

    # Parallel place sweeps
    default_workers: int = Field(default=1, ge=1)
    experiment_timeout_seconds: int = Field(default=3600, ge=1)

    # Enumeration caps
    group_closure_cap: int = Field(default=10**7, ge=1)
    gl_enumeration_cap: int = Field(default=10**5, ge=1)
    density_enumeration_cap: int = Field(default=10**7, ge=1)
    ambient_cap_factor: int = Field(default=24, ge=1)

    # Kummer density thresholds
    density_min_places: int = Field(default=30, ge=1)
    density_warn_sigma: float = Field(default=3.0, gt=0)
    density_fail_sigma: float = Field(default=4.0, gt=0)

    # Property checks
    random_cases: int = Field(default=50, ge=1)

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validate log level."""
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if v.upper() not in valid_levels:
            raise ValueError(f"Log level must be one of: {valid_levels}")
        return v.upper()

    def validate_environment(self) -> List[str]:
        """
        Validate environment configuration.

        Returns:
            List of validation errors (empty if valid)
        """
        errors = []

        if self.density_fail_sigma < self.density_warn_sigma:
            errors.append("Density failure threshold must not be below the warning threshold")

        if self.cache_enabled:
            cache_path = Path(self.cache_dir)
            if cache_path.exists() and not cache_path.is_dir():
                errors.append(f"Cache path {self.cache_dir} exists and is not a directory")

        if self.gl_enumeration_cap > self.group_closure_cap:
            errors.append("GL enumeration cap must not exceed the group closure cap")

        return errors


# Global settings instance
settings = Settings()


def get_settings() -> Settings:
    """Get the global settings instance."""
    return settings


def reload_settings() -> Settings:
    """Reload settings from environment variables."""
    global settings
    settings = Settings()
    return settings
