"""
Catalog Route
=============
Upload a catalog file (one '*'/'0' encoding per line, optional "d n count"
header) and get per-stage counts plus the surviving entries.
"""

from typing import Optional

from fastapi import APIRouter, File, HTTPException, Query, UploadFile

from app.config import CATALOG_SUBSET_ORDER, Config
from app.routes.compute import compute
from app.services import catalog

router = APIRouter(prefix="/catalog", tags=["catalog"])

MAX_UPLOAD_BYTES = 50 * 1024 * 1024


def _filter(text: str, d: Optional[int], n: Optional[int], order: str, stages: list[str]) -> dict:
    entries = catalog.read_catalog_text(text, d, n, order)
    # one worker: the API already runs this on its own thread pool
    report = catalog.batch(entries, stages, Config.from_env().with_overrides(workers=1), order)
    return {**report.to_json(), "entries": report.summaries}


@router.post("/filter")
async def filter_catalog(
    file: UploadFile = File(...),
    stages: str = Query("simple,connected", description=f"comma separated, from {','.join(catalog.STAGES)}"),
    d: Optional[int] = Query(None, ge=1),
    n: Optional[int] = Query(None, ge=1),
    order: str = Query(CATALOG_SUBSET_ORDER, pattern="^(colex|lex|revlex)$"),
):
    contents = await file.read()
    if len(contents) > MAX_UPLOAD_BYTES:
        raise HTTPException(status_code=413, detail="File too large. Maximum 50MB.")
    try:
        text = contents.decode("utf-8")
    except UnicodeDecodeError:
        raise HTTPException(status_code=400, detail="Catalog files must be UTF-8 text.")
    return await compute(_filter, text, d, n, order, [s.strip() for s in stages.split(",") if s.strip()])
