"""
Presentation Routes
===================
Build a stratum / realization presentation, or reduce one.
"""

from fastapi import APIRouter

from app.models import PresentationRequest, ReduceRequest
from app.routes.compute import compute
from app.services.presentation import ReferenceCircuit, realization_presentation, stratum_presentation
from app.services.reduction import reduce

router = APIRouter(prefix="/presentations", tags=["presentations"])


def _present(request: PresentationRequest) -> dict:
    Q = request.matroid.to_matroid()
    if request.kind == "stratum":
        return stratum_presentation(Q, request.reference).to_json()
    reference = ReferenceCircuit.of(request.reference, Q.n) if request.reference else None
    return realization_presentation(Q, reference).to_json()


def _reduce(request: ReduceRequest) -> dict:
    return reduce(request.presentation.to_presentation(), caps=request.caps.to_caps()).to_json()


@router.post("")
async def create_presentation(request: PresentationRequest):
    return await compute(_present, request)


@router.post("/reduce")
async def reduce_presentation(request: ReduceRequest):
    return await compute(_reduce, request)
