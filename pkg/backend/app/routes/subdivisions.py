"""
Subdivision Routes
==================
Star subdivisions of paving matroids and the exact witness valuations.
"""

from fastapi import APIRouter, Query

from app.models import StarRequest
from app.routes.compute import compute
from app.services import subdivision

router = APIRouter(prefix="/subdivisions", tags=["subdivisions"])


def _star(request: StarRequest) -> dict:
    Q = request.matroid.to_matroid()
    star = subdivision.star_subdivision(Q)
    data = star.to_json()
    center = request.center_dimension
    if center is None:
        center = subdivision.center_dimension(Q)
    if center is not None:
        data["dimension"] = subdivision.limit_dimension(star, center).to_json()
    return data


@router.post("/star")
async def star_subdivision(request: StarRequest):
    return await compute(_star, request)


@router.get("/witness")
async def witness(d: int = Query(3, ge=1), n: int = Query(12, ge=1)):
    report = await compute(subdivision.witness_valuations, d, n)
    return report.to_json()
