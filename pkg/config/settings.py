import os
from pathlib import Path
from typing import Any, Dict, Optional
from pydantic import BaseModel, Field
from pydantic_settings import BaseSettings

BUNDLED_DATA_DIR = str(Path(__file__).resolve().parent.parent / "data")


class Configuration(BaseModel):
    """The configurable fields for the quadratic algebra toolkit."""

    # Data Configuration
    data_dir: str = Field(
        default=BUNDLED_DATA_DIR,
        title="Data Directory",
        description="Directory holding systems.json, witnesses.json and grid.json"
    )

    # Contraction Search Configuration
    default_bound: int = Field(
        default=3,
        title="Default Exponent Bound",
        description="Largest |exponent| tried by the monomial contraction search"
    )

    laurent_bound: int = Field(
        default=16,
        title="Laurent Exponent Bound",
        description="Largest |exponent| a Laurent scalar may carry"
    )

    max_free_entries: int = Field(
        default=3,
        title="Max Free Entries",
        description="Cap on free coefficient positions in one search candidate"
    )

    # Sampling Configuration
    seed: int = Field(
        default=20170101,
        title="Seed",
        description="Seed for sampled group elements and polynomials"
    )

    # Runtime Configuration
    log_level: str = Field(
        default="WARNING",
        title="Log Level",
        description="Root log level: DEBUG, INFO, WARNING, ERROR"
    )

    max_workers: int = Field(
        default=4,
        title="Max Workers",
        description="Thread pool size for per-cell grid verification"
    )

    @classmethod
    def from_overrides(cls, overrides: Optional[Dict[str, Any]] = None) -> "Configuration":
        """Create a Configuration from the current settings plus per-run overrides."""
        values = get_configuration().model_dump()
        values.update({k: v for k, v in (overrides or {}).items() if v is not None})
        return cls(**values)


class Settings(BaseSettings):
    """Settings using pydantic-settings for environment variable loading."""

    # QUADALG_DATA overrides the bundled data directory
    quadalg_data: str = BUNDLED_DATA_DIR

    default_bound: int = 3
    laurent_bound: int = 16
    max_free_entries: int = 3
    seed: int = 20170101
    log_level: str = "WARNING"  # "DEBUG", "INFO", "WARNING", "ERROR"
    max_workers: int = 4

    class Config:
        env_file = ".env"
        extra = "ignore"  # Ignore extra environment variables


# Global settings instance
settings = Settings()


def get_configuration() -> Configuration:
    """Get configuration instance from current settings."""
    return Configuration(
        data_dir=os.environ.get("QUADALG_DATA", settings.quadalg_data),
        default_bound=settings.default_bound,
        laurent_bound=settings.laurent_bound,
        max_free_entries=settings.max_free_entries,
        seed=settings.seed,
        log_level=settings.log_level,
        max_workers=settings.max_workers,
    )
