"""
Shared route plumbing: run a computation off the event loop and translate
domain errors into HTTP responses.
"""

import logging

from fastapi import HTTPException

from app.services.groebner import ResourceLimitExceeded
from app.services.workers import run_cpu_bound

logger = logging.getLogger(__name__)


async def compute(func, *args, **kwargs):
    try:
        return await run_cpu_bound(func, *args, **kwargs)
    except ResourceLimitExceeded as e:
        raise HTTPException(status_code=422, detail=f"undecided: {e}")
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.exception("computation failed")
        raise HTTPException(status_code=500, detail=f"Computation failed: {type(e).__name__}")
