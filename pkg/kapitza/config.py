"""
Configuration Management
========================

Centralized numerical defaults using Pydantic Settings with environment
variable support (prefix ``KAPITZA_``).
"""

from functools import lru_cache
from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import Field


class Settings(BaseSettings):
    """Library and CLI settings loaded from environment variables."""
    
    model_config = SettingsConfigDict(
        env_prefix="KAPITZA_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )
    
    # -------------------------------------------------------------------------
    # Spatial Grid
    # -------------------------------------------------------------------------
    grid_half_width: float = Field(default=40.0, gt=0, description="Half width L of the box [-L, L]")
    grid_points: int = Field(default=401, ge=3, description="Number of grid nodes Nx")
    
    # -------------------------------------------------------------------------
    # Eigensolver & Matrix Exponential
    # -------------------------------------------------------------------------
    eig_max_dimension: int = Field(
        default=4096,
        description="Largest matrix handed to the dense eigensolver",
    )
    eig_residual_tolerance: float = Field(
        default=1e-8,
        description="Bound on |A v - lambda v| relative to the Frobenius norm of A",
    )
    expm_residual_tolerance: float = Field(
        default=1e-9,
        description="Bound on the matrix-exponential action residual",
    )
    
    # -------------------------------------------------------------------------
    # Floquet Analysis
    # -------------------------------------------------------------------------
    harmonic_cutoff: int = Field(default=2, ge=1, description="Harmonics -N..N kept in the expansion")
    bound_localization_threshold: float = Field(
        default=0.6,
        gt=0,
        lt=1,
        description="Minimum weight inside |x| <= L/2 for a state to count as bound",
    )
    bound_imag_tolerance: float = Field(
        default=1e-6,
        description="Largest |Im eps| / omega for a quasi-energy to count as real",
    )
    scan_imag_threshold: float = Field(
        default=1e-3,
        description="Absolute max |Im eps| below which a scanned spectrum counts as real",
    )
    scan_workers: int = Field(default=4, ge=1, description="Worker threads for frequency scans")
    
    # -------------------------------------------------------------------------
    # Time Stepping
    # -------------------------------------------------------------------------
    evolve_steps_per_period: int = Field(
        default=500,
        ge=200,
        description="Crank-Nicolson steps per drive period when dt is not given",
    )
    trajectory_divergence_limit: float = Field(
        default=1e3,
        description="Largest |theta| before a pendulum trajectory is declared diverged",
    )
    norm_divergence_limit: float = Field(
        default=1e6,
        description="Largest wavefunction norm before an evolution is declared diverged",
    )
    
    # -------------------------------------------------------------------------
    # Logging
    # -------------------------------------------------------------------------
    log_level: str = Field(default="INFO", description="Logging level")
    log_format: str = Field(default="json", description="Log format: json or console")


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
