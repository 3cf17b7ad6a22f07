"""Configuration management for the binary form height toolkit."""

import os
from dataclasses import dataclass


@dataclass
class PrecisionConfig:
    """Numeric precision for root finding, logarithms and relation gates."""

    root_tolerance: float = 1e-9
    relation_tolerance: float = 1e-6
    precision_bits: int = 53  # > 53 switches archimedean logs to mpmath
    newton_iterations: int = 60
    backward_error: float = 1e-8


@dataclass
class OptimizerConfig:
    """Configuration for the Chow-norm minimization over SU(2)\\SL2(C)."""

    gradient_tolerance: float = 1e-10
    balanced_tolerance: float = 1e-8
    max_iterations: int = 2000
    restarts: int = 4  # coefficient objective only


@dataclass
class SearchConfig:
    """Budget for the minimal-height descent over GL2(Z) words."""

    word_length: int = 12
    entry_bound: int = 10**6
    node_budget: int = 1500


@dataclass
class EnumerationConfig:
    """Configuration for corpus enumeration and verification runs."""

    lattice_cap: int = 2_000_000
    workers: int = 1
    chunk_size: int = 256
    schema_version: str = "hforms-1"


@dataclass
class Config:
    """Main configuration container."""

    precision: PrecisionConfig
    optimizer: OptimizerConfig
    search: SearchConfig
    enumeration: EnumerationConfig

    @classmethod
    def from_env(cls) -> "Config":
        """Load configuration from environment variables with fallbacks."""
        precision_config = PrecisionConfig(
            root_tolerance=float(os.getenv("HFORMS_ROOT_TOLERANCE", "1e-9")),
            relation_tolerance=float(os.getenv("HFORMS_RELATION_TOLERANCE", "1e-6")),
            precision_bits=int(os.getenv("HFORMS_PRECISION_BITS", "53")),
            newton_iterations=int(os.getenv("HFORMS_NEWTON_ITERATIONS", "60")),
            backward_error=float(os.getenv("HFORMS_BACKWARD_ERROR", "1e-8")),
        )

        optimizer_config = OptimizerConfig(
            gradient_tolerance=float(os.getenv("HFORMS_GRADIENT_TOLERANCE", "1e-10")),
            balanced_tolerance=float(os.getenv("HFORMS_BALANCED_TOLERANCE", "1e-8")),
            max_iterations=int(os.getenv("HFORMS_MAX_ITERATIONS", "2000")),
            restarts=int(os.getenv("HFORMS_RESTARTS", "4")),
        )

        search_config = SearchConfig(
            word_length=int(os.getenv("HFORMS_WORD_LENGTH", "12")),
            entry_bound=int(os.getenv("HFORMS_ENTRY_BOUND", str(10**6))),
            node_budget=int(os.getenv("HFORMS_NODE_BUDGET", "1500")),
        )

        enumeration_config = EnumerationConfig(
            lattice_cap=int(os.getenv("HFORMS_LATTICE_CAP", "2000000")),
            workers=max(1, int(os.getenv("HFORMS_WORKERS", "1"))),
            chunk_size=int(os.getenv("HFORMS_CHUNK_SIZE", "256")),
            schema_version=os.getenv("HFORMS_SCHEMA_VERSION", "hforms-1"),
        )

        return cls(
            precision=precision_config,
            optimizer=optimizer_config,
            search=search_config,
            enumeration=enumeration_config,
        )


# Global configuration instance
config = Config.from_env()
