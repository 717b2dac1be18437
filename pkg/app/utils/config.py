"""
Proxima: descriptive proximity on planar CW spaces
Configuration management module
"""

from functools import lru_cache

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Application settings and configuration."""

    # Application
    app_name: str = "Proxima"
    app_version: str = "1.0.0"
    debug: bool = False
    log_level: str = "WARNING"

    # Reproducibility
    seed: int = 7

    # Description comparison
    real_tolerance: float = 1e-9

    # Axiom checking and random sampling
    default_trials: int = 1000
    sample_max_cells: int = 8
    random_complexes: int = 200

    # Shipped documents
    data_directory: str = "data"

    # SVG rendering
    render_width: int = 640
    render_height: int = 480
    render_margin: int = 20
    interior_fill: str = "#7fc97f"
    contour_stroke: str = "#1b5e20"
    boundary_fill: str = "#fdb462"
    stroke_width: float = 1.0

    class Config:
        env_file = ".env"
        env_prefix = "PROXIMA_"
        case_sensitive = False


@lru_cache()
def get_settings() -> Settings:
    """Get cached application settings."""
    return Settings()


# Global settings instance
settings = get_settings()
