"""
Configuration management
"""
from pydantic_settings import BaseSettings
from typing import ClassVar, List, Optional


class Settings(BaseSettings):
    """Application settings"""

    # Numerical tolerances
    TOL: float = 1e-10
    RANK_TOL: Optional[float] = None
    PENROSE_TOL: float = 1e-8
    DELTA: float = 1e-6

    # IRLS defaults
    IRLS_MAX_ITERS: int = 10
    IRLS_WEIGHT_FLOOR: float = 1e-5
    MINIMAX_P: float = 50.0
    SPARSE_MAX_ITERS: int = 100

    # Output
    OUTPUT_FORMAT: str = "csv"
    OUTPUT_PRECISION: int = 17

    # Logging
    LOG_LEVEL: str = "WARNING"

    model_config = {
        "env_prefix": "LPSOLVE_",
        "env_file": ".env",
        "case_sensitive": True,
        "env_parse_none_str": "null",
        "extra": "ignore",
    }

    SUPPORTED_FORMATS: ClassVar[List[str]] = ["csv", "json"]

    def get_output_format(self) -> str:
        """Get output format - falls back to csv on unknown values"""
        fmt = (self.OUTPUT_FORMAT or "").strip().lower()
        if fmt in self.SUPPORTED_FORMATS:
            return fmt
        return "csv"


settings = Settings()
