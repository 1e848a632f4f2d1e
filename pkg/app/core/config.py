"""
Configuration module for the Freiman rectifier.
Loads environment variables and provides centralized configuration.
"""

from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    # Application
    APP_TITLE: str = "Freiman Rectifier"
    APP_VERSION: str = "1.0.0"
    APP_DESCRIPTION: str = "Exact rectification of small subsets of F_p into number-field towers"
    DEBUG: bool = False
    LOG_LEVEL: str = "INFO"

    # Reproducibility
    DEFAULT_SEED: int = 20130917

    # Profiles
    DEFAULT_K: int = 2
    DEFAULT_T: Optional[int] = None  # None means t = k

    # Pipeline behaviour
    FORCE: bool = False
    MAX_ENUMERATION: int = 2_000_000  # bounded polynomials per job
    MAX_INVERSE_LIFT: int = 2  # points in A u A^-1 the inverse transfer will rectify
    LEDGER_EXACT_BITS: int = 1 << 22  # beyond this u_i is tracked by log2 lower bound
    FACTOR_SHIFT_ATTEMPTS: int = 16
    GENERATOR_PREFIX: str = "b"

    # Output
    OUTPUT_FORMAT: str = "text"  # text | json
    INCLUDE_TIMING: bool = True

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"
        case_sensitive = True


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


# Exponents n with 2^n - 1 prime, up to 607
MERSENNE_EXPONENTS: List[int] = [
    2, 3, 5, 7, 13, 17, 19, 31, 61, 89, 107, 127, 521, 607,
]

# Indices n with 2^(2^n) + 1 prime
FERMAT_INDICES: List[int] = [0, 1, 2, 3, 4]

# Transfer modes: (norm cap, degree cap) of the relations each transfer relies on.
# polynomial-image derives its profile from the chosen f at run time.
TRANSFER_PROFILES: Dict[str, Tuple[int, int]] = {
    "sumproduct": (4, 2),   # a+b-c-d, ab-cd
    "incidence": (3, 2),    # a*y + b*x + c
    "inverse": (4, 3),      # bcd + acd - abd - abc on A and A^-1
}

# Relation text used in reports for each transfer mode
TRANSFER_RELATIONS: Dict[str, List[str]] = {
    "sumproduct": ["x1 + x2 - x3 - x4", "x1*x2 - x3*x4"],
    "incidence": ["x1*x2 + x3*x4 + x5"],
    "inverse": ["x1*x2 - 1", "x2*x3*x4 + x1*x3*x4 - x1*x2*x4 - x1*x2*x3"],
    "polynomial-image": ["f(x1) + f(x2) - f(x3) - f(x4)"],
}
