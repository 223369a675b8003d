#!/usr/bin/env python3
"""
Darboux Cyclide Reconstruction API
Exposes contour analysis, reconstruction and the forward oracle over HTTP
"""

import logging

import uvicorn
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware

from errors import DarbouxError, ResourceLimitError
from schemas import AnalyzeRequest, ForwardRequest, ReconstructRequest, RoundtripRequest
from services.reconstruction_service import VERSION, parse_camera, reconstruction_service
from utils.config import get_settings
from utils.logging_utils import setup_logging

settings = get_settings()
setup_logging(settings.log_level, settings.log_json)
logger = logging.getLogger(__name__)

app = FastAPI(
    title="Darboux Cyclide Reconstruction API",
    description="Exact reconstruction of Darboux cyclides from their apparent contours",
    version=VERSION
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


def _http_error(e: DarbouxError) -> HTTPException:
    status = 413 if isinstance(e, ResourceLimitError) else 400
    return HTTPException(status_code=status, detail={"error": e.__class__.__name__, "message": e.message})


@app.get("/api/health")
async def health():
    """Service status, version and effective settings"""
    return reconstruction_service.health().to_json_dict()


@app.post("/api/analyze")
async def analyze(request: AnalyzeRequest):
    """Cluster table of an apparent contour"""
    try:
        U = reconstruction_service.parse_input(request.polynomial)
        report = await reconstruction_service.run_in_background(
            reconstruction_service.analyze, U, request.seed, request.guess_limit, request.isolated_bound)
        return report.to_json_dict()
    except DarbouxError as e:
        logger.error(f"Error analyzing contour: {e}")
        raise _http_error(e)


@app.post("/api/reconstruct")
async def reconstruct(request: ReconstructRequest):
    """All guess reports; 200 with solved=false when every guess fails"""
    try:
        U = reconstruction_service.parse_input(request.polynomial)
        run = await reconstruction_service.run_in_background(
            reconstruction_service.reconstruct, U, request.seed, request.guess_limit,
            request.isolated_bound, request.jobs)
        return run.to_json_dict()
    except DarbouxError as e:
        logger.error(f"Error reconstructing surface: {e}")
        raise _http_error(e)


@app.post("/api/forward")
async def forward(request: ForwardRequest):
    """A seeded cyclide with its camera and exact apparent contour"""
    try:
        camera = parse_camera(request.camera) if request.camera else None
        instance = await reconstruction_service.run_in_background(
            reconstruction_service.forward, request.seed, request.case, camera)
        return instance.to_json_dict()
    except DarbouxError as e:
        logger.error(f"Error generating instance: {e}")
        raise _http_error(e)


@app.post("/api/roundtrip")
async def roundtrip(request: RoundtripRequest):
    """Generate, reconstruct and compare with the hidden cyclide"""
    try:
        verdict = await reconstruction_service.run_in_background(
            reconstruction_service.roundtrip, request.seed, request.case, request.guess_limit,
            request.isolated_bound, request.jobs)
        return verdict.to_json_dict()
    except DarbouxError as e:
        logger.error(f"Error in roundtrip: {e}")
        raise _http_error(e)


if __name__ == "__main__":
    uvicorn.run(
        app,
        host=settings.api_host,
        port=settings.api_port,
        log_level="info"
    )
