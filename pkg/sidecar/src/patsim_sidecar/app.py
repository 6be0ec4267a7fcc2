"""FastAPI surface: /info, /healthz, and /embed.

Error contract: 400 for malformed requests, 413 when a batch exceeds the
limit, 503 when the encoder is not loaded. /embed is referentially
transparent for a fixed (model revision, text, pooled flag).
"""

from __future__ import annotations

import logging

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .config import SidecarConfig
from .encoders import build_encoder

logger = logging.getLogger("patsim_sidecar")

MAX_BATCH = 64


class EmbedRequest(BaseModel):
    texts: list[str]
    pooled: bool | None = None


class EmbedResponse(BaseModel):
    model_id: str
    dimension: int
    matrices: list[list[list[float]]]
    token_counts: list[int]


def create_app(config: SidecarConfig | None = None) -> FastAPI:
    config = config or SidecarConfig.load()
    app = FastAPI(title="patsim-sidecar", docs_url=None, redoc_url=None)

    encoder = None
    load_error: str | None = None
    try:
        encoder = build_encoder(config)
        logger.info("encoder ready: %s (d=%d)", encoder.model_id, encoder.dimension)
    except Exception as exc:  # keep serving /healthz; report 503 elsewhere
        load_error = f"{type(exc).__name__}: {exc}"
        logger.error("encoder failed to load: %s", load_error)

    @app.exception_handler(RequestValidationError)
    async def malformed_request(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "encoder_loaded": encoder is not None}

    @app.get("/info")
    def info():
        if encoder is None:
            return JSONResponse(status_code=503, content={"detail": f"encoder not loaded: {load_error}"})
        return {
            "model_id": encoder.model_id,
            "dimension": encoder.dimension,
            "max_tokens": encoder.max_tokens,
            "pooled_default": config.pooled_default,
        }

    @app.post("/embed")
    def embed(request: EmbedRequest):
        if encoder is None:
            return JSONResponse(status_code=503, content={"detail": f"encoder not loaded: {load_error}"})
        if not request.texts:
            return JSONResponse(status_code=400, content={"detail": "texts must be non-empty"})
        if any(not t.strip() for t in request.texts):
            return JSONResponse(status_code=400, content={"detail": "every text must be non-empty"})
        if len(request.texts) > MAX_BATCH:
            return JSONResponse(
                status_code=413,
                content={"detail": f"batch of {len(request.texts)} exceeds limit {MAX_BATCH}"},
            )
        pooled = config.pooled_default if request.pooled is None else request.pooled
        matrices, counts = encoder.encode(request.texts, pooled)
        return EmbedResponse(
            model_id=encoder.model_id,
            dimension=encoder.dimension,
            matrices=[m.tolist() for m in matrices],
            token_counts=counts,
        )

    return app
