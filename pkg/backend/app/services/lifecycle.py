"""
Application Lifecycle Management
================================
Startup and shutdown for the computation services.

Usage in main.py:
    from app.services.lifecycle import lifespan

    app = FastAPI(lifespan=lifespan)
"""

import logging
from contextlib import asynccontextmanager

from fastapi import FastAPI

from app.config import LOG_LEVEL, Config


@asynccontextmanager
async def lifespan(app: FastAPI):
    # ==========================================================================
    # STARTUP
    # ==========================================================================
    print("🚀 Starting up matroid strata services...")

    from app.services import polynomials, workers

    logging.getLogger("app").setLevel(getattr(logging, LOG_LEVEL.upper(), logging.INFO))

    config = Config.from_env()
    app.state.config = config
    caps = config.caps
    print(f"   ✓ Resource caps: degree {caps.max_degree}, basis {caps.max_basis}, budget {caps.budget}")

    if config.catalog_paths:
        print(f"   ✓ {len(config.catalog_paths)} catalog files found")
    else:
        print("   ⚠️ No catalog files found; catalog uploads still work")

    print("✅ All services ready")

    yield

    # ==========================================================================
    # SHUTDOWN
    # ==========================================================================
    print("🛑 Shutting down services...")

    workers.shutdown_executor()
    print("   ✓ Thread pool shut down")

    polynomials.factor_polynomial.cache_clear()
    print("   ✓ Caches cleared")

    print("✅ Shutdown complete")
