"""
Matroid Strata Configuration
============================
Environment-driven defaults (via .env) plus the validated runtime Config
used by the CLI, the API and batch runs.
"""

import os
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field

load_dotenv()


def _flag(name: str, default: str) -> bool:
    return os.getenv(name, default).strip().lower() in {"1", "true", "yes", "on"}


# Groebner / reduction caps
MAX_DEGREE = int(os.getenv("MAX_DEGREE", "40"))
MAX_BASIS_SIZE = int(os.getenv("MAX_BASIS_SIZE", "2000"))
REDUCTION_BUDGET = int(os.getenv("REDUCTION_BUDGET", "200"))
MAX_REFERENCE_CIRCUITS = int(os.getenv("MAX_REFERENCE_CIRCUITS", "8"))

# Workers and caches
WORKERS = int(os.getenv("WORKERS", str(os.cpu_count() or 1)))
CACHE_PATH = os.getenv("CACHE_PATH", ".verdicts.jsonl")

# Catalog files (external, never vendored)
CATALOG_DIR = os.getenv("CATALOG_DIR", "catalogs")
CATALOG_SUBSET_ORDER = os.getenv("CATALOG_SUBSET_ORDER", "colex")

# Matroids are checked against basis exchange on construction
VALIDATE_MATROIDS = _flag("VALIDATE_MATROIDS", "true")

LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")

API_VERSION = "1.0.0"


# =============================================================================
# RUNTIME CONFIG
# =============================================================================

class ResourceCaps(BaseModel):
    """Hard limits for Groebner and reduction work."""

    max_degree: int = Field(default=MAX_DEGREE, gt=0)
    max_basis: int = Field(default=MAX_BASIS_SIZE, gt=0)
    budget: int = Field(default=REDUCTION_BUDGET, gt=0)

    model_config = {"frozen": True}


class Config(BaseModel):
    caps: ResourceCaps = Field(default_factory=ResourceCaps)
    workers: int = Field(default=max(WORKERS, 1), ge=1)
    cache_path: Optional[Path] = Path(CACHE_PATH) if CACHE_PATH else None
    catalog_paths: list[Path] = Field(default_factory=list)

    model_config = {"frozen": True}

    @classmethod
    def from_env(cls) -> "Config":
        catalog_dir = Path(CATALOG_DIR)
        paths = sorted(catalog_dir.glob("*.txt")) if catalog_dir.is_dir() else []
        return cls(catalog_paths=paths)

    def with_overrides(
        self,
        max_degree: Optional[int] = None,
        max_basis: Optional[int] = None,
        budget: Optional[int] = None,
        workers: Optional[int] = None,
        cache_path: Optional[str] = None,
    ) -> "Config":
        """Apply CLI overrides; values are re-validated."""
        caps = self.caps.model_dump()
        for key, value in (("max_degree", max_degree), ("max_basis", max_basis), ("budget", budget)):
            if value is not None:
                caps[key] = value
        data = self.model_dump()
        data["caps"] = caps
        if workers is not None:
            data["workers"] = workers
        if cache_path is not None:
            data["cache_path"] = Path(cache_path)
        return Config.model_validate(data)


def default_caps() -> ResourceCaps:
    return ResourceCaps()
