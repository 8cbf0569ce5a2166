"""
Matroid Strata API - Main Application
"""

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from app.config import API_VERSION
from app.models import HealthResponse
from app.routes import catalog, classify, matroids, presentations, subdivisions
from app.services.lifecycle import lifespan

app = FastAPI(
    title="Matroid Strata API",
    description="Realization spaces, strata and subdivisions of matroids in exact arithmetic",
    version=API_VERSION,
    lifespan=lifespan,
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=[
        "http://localhost:4321",
        "http://localhost:5173",
        "http://127.0.0.1:4321",
        "http://127.0.0.1:5173",
    ],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(matroids.router, prefix="/api")
app.include_router(presentations.router, prefix="/api")
app.include_router(classify.router, prefix="/api")
app.include_router(subdivisions.router, prefix="/api")
app.include_router(catalog.router, prefix="/api")


@app.get("/health", response_model=HealthResponse)
async def health():
    return {"status": "ok", "version": API_VERSION}
