"""
Matroid Routes
==============
Combinatorial endpoints: structure summary, corank vector and cells,
reduction plans and flag extensions.
"""

from fastapi import APIRouter

from app.models import CorankRequest, FlagRequest, MatroidIn, MatroidRequest
from app.routes.compute import compute
from app.services import planner, subdivision

router = APIRouter(prefix="/matroids", tags=["matroids"])


def _info(m: MatroidIn) -> dict:
    return planner.describe(m.to_matroid())


def _corank(m: MatroidIn, probe) -> dict:
    w = subdivision.corank_vector(m.to_matroid())
    data = {"corank": w.to_json()}
    if probe is not None:
        data["cell"] = subdivision.cell_matroid(w, probe).to_json()
    return data


def _plan(m: MatroidIn) -> dict:
    return planner.plan(m.to_matroid()).to_json()


def _flag(m: MatroidIn, verify: bool) -> dict:
    return planner.flag_extension(m.to_matroid(), verify=verify).to_json()


@router.post("/info")
async def matroid_info(request: MatroidRequest):
    return await compute(_info, request.matroid)


@router.post("/corank")
async def matroid_corank(request: CorankRequest):
    return await compute(_corank, request.matroid, request.probe)


@router.post("/plan")
async def matroid_plan(request: MatroidRequest):
    return await compute(_plan, request.matroid)


@router.post("/flag")
async def matroid_flag(request: FlagRequest):
    return await compute(_flag, request.matroid, request.verify)
