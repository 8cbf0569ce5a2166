"""
Classification Route
"""

from fastapi import APIRouter

from app.config import MAX_REFERENCE_CIRCUITS
from app.models import ClassifyRequest
from app.routes.compute import compute
from app.services.smoothness import classify

router = APIRouter(tags=["classify"])


def _classify(request: ClassifyRequest) -> dict:
    Q = request.matroid.to_matroid()
    return classify(Q, request.caps.to_caps(), request.max_circuits or MAX_REFERENCE_CIRCUITS).to_json()


@router.post("/classify")
async def classify_matroid(request: ClassifyRequest):
    return await compute(_classify, request)
