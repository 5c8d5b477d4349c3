"""Process settings loaded from environment variables."""

import logging
import os
from functools import lru_cache
from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Process-wide settings (run configs live in cli.run_config)."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
        populate_by_name=True,
    )

    # Execution
    threads: int = Field(default=1, ge=1, alias="GDVAE_THREADS")
    output_dir: str = Field(default="runs", alias="GDVAE_OUTPUT_DIR")
    log_level: str = Field(default="INFO", alias="GDVAE_LOG_LEVEL")

    # Manifold seeding
    point_cloud_resolution: int = Field(
        default=64, ge=2, alias="GDVAE_POINT_CLOUD_RESOLUTION"
    )

    def resolve_threads(self, cli_value: int | None) -> int:
        """
        Worker count for trial-level parallelism.

        Args:
            cli_value: Value of ``--threads`` if given

        Returns:
            The flag when set, otherwise ``GDVAE_THREADS``, never more than the CPU count
        """
        requested = cli_value if cli_value is not None else self.threads
        return max(1, min(requested, os.cpu_count() or 1))

    def resolve_output_dir(self, cli_value: str | None) -> Path:
        """Output directory from ``--out`` or ``GDVAE_OUTPUT_DIR``."""
        return Path(cli_value if cli_value else self.output_dir)

    def logging_level(self) -> int:
        level = logging.getLevelName(self.log_level.upper())
        return level if isinstance(level, int) else logging.INFO


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Get process settings."""
    return Settings()
