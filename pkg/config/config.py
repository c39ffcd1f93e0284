"""Configuration management using Pydantic Settings."""

from typing import Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="UVAA_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Logging Configuration
    log_level: str = Field(
        default="INFO",
        description="Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)",
    )
    log_dir: Optional[str] = Field(
        default=None,
        description="Directory for rotating log files; console only when unset",
    )

    # Optimizer Configuration
    population_size: int = Field(
        default=50,
        ge=2,
        description="Number of candidate solutions per iteration",
    )
    max_iterations: int = Field(
        default=300,
        ge=1,
        description="Maximum number of optimizer iterations",
    )
    archive_capacity: Optional[int] = Field(
        default=None,
        ge=1,
        description="Pareto archive capacity (defaults to the population size)",
    )
    niche_radius_fraction: float = Field(
        default=0.05,
        gt=0.0,
        le=1.0,
        description="Niche radius as a fraction of the archive's objective range",
    )
    delta1: float = Field(default=0.9, gt=0.0, le=1.0, description="Threshold factor for f1")
    delta2: float = Field(default=0.9, gt=0.0, le=1.0, description="Threshold factor for f2")
    delta3: float = Field(default=0.9, gt=0.0, le=1.0, description="Threshold factor for f3")
    walk_step_scale: float = Field(
        default=5.0,
        gt=0.0,
        description="Metres per step of the random-walk initialisation",
    )

    # Antenna Simulation Configuration
    grid_step_deg: float = Field(
        default=5.0,
        gt=0.0,
        le=10.0,
        description="Direction grid resolution in degrees (both angles)",
    )
    mainlobe_deg: float = Field(
        default=10.0,
        gt=0.0,
        lt=90.0,
        description="Mainlobe exclusion half-angle in degrees",
    )

    # Scenario Generation
    ground_margin: float = Field(
        default=1000.0,
        ge=0.0,
        description="Metres of surrounding ground beyond both swarm areas for eavesdroppers",
    )

    # Execution
    threads: Optional[int] = Field(
        default=None,
        ge=1,
        description="Worker threads for population evaluation (default: all cores)",
    )

    # Robustness Study Defaults
    phase_q1: float = Field(default=1e-10, ge=0.0, description="Oscillator noise q1")
    phase_q2: float = Field(default=1e-12, ge=0.0, description="Oscillator noise q2")
    phase_delta_t: float = Field(
        default=1e-3,
        gt=0.0,
        description="Time since last phase synchronisation (s)",
    )

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, value: str) -> str:
        """Validate and normalize log level."""
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        value_upper = value.upper()
        if value_upper not in valid_levels:
            raise ValueError(f"Log level must be one of {valid_levels}")
        return value_upper


# Singleton instance
_settings_instance = None


def get_settings() -> Settings:
    """Get or create settings singleton instance."""
    global _settings_instance
    if _settings_instance is None:
        _settings_instance = Settings()
    return _settings_instance
