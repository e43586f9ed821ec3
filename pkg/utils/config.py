"""Configuration management using pydantic-settings."""
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Simulator defaults loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_file=".env",
        case_sensitive=False,
        populate_by_name=True,
        extra="ignore",
    )

    # Output
    output_dir: str = Field(default="out", alias="CAPSIM_OUTPUT_DIR")
    log_level: str = Field(default="INFO", alias="CAPSIM_LOG_LEVEL")

    # Checkers
    check_op_bound: int = Field(default=12, alias="CAPSIM_CHECK_OP_BOUND")

    # Link layer: retry interval = retry_factor * d (never below one tick)
    retry_factor: int = Field(default=5, alias="CAPSIM_RETRY_FACTOR")

    # Local-fallback register timeout = factor * d
    fallback_timeout_factor: int = Field(default=10, alias="CAPSIM_FALLBACK_TIMEOUT_FACTOR")

    # Latency classification
    independent_slope: float = Field(default=0.05, alias="CAPSIM_INDEPENDENT_SLOPE")
    sensitive_slope: float = Field(default=0.5, alias="CAPSIM_SENSITIVE_SLOPE")
    warmup_ops: int = Field(default=2, alias="CAPSIM_WARMUP_OPS")

    # Sweeps (1 = run points sequentially)
    sweep_workers: int = Field(default=1, alias="CAPSIM_SWEEP_WORKERS")

    # Availability
    default_sla: int = Field(default=500, alias="CAPSIM_DEFAULT_SLA")


# Global settings instance
settings = Settings()
