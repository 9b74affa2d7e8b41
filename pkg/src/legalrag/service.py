"""HTTP surface: a small JSON API over the query engine, plus static UI files.

Every error leaves as {"error": {"code", "message"}} with a matching status
so clients never have to guess at the envelope shape.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.concurrency import run_in_threadpool
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from starlette.exceptions import HTTPException as StarletteHTTPException

from .errors import (
    BudgetExceeded,
    EmptyQuestion,
    MalformedProviderReply,
    ProviderUnavailable,
)
from .query_engine import LANGUAGE_LINES, EngineConfig, answer_question
from .vector_index import VectorIndex


@dataclass
class ServiceState:
    index: VectorIndex
    embedder: object
    backend: object
    config: EngineConfig = field(default_factory=EngineConfig)
    corpus_stats: dict = field(
        default_factory=lambda: {"documents": 0, "articles": 0, "qa_pairs": 0}
    )


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": {"code": code, "message": message}})


def create_app(state: ServiceState, static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="legalrag", docs_url=None, redoc_url=None)

    @app.exception_handler(Exception)
    async def unhandled(request: Request, exc: Exception) -> JSONResponse:
        return _error(500, "internal", str(exc))

    @app.exception_handler(StarletteHTTPException)
    async def http_error(request: Request, exc: StarletteHTTPException) -> JSONResponse:
        codes = {404: "not_found", 405: "method_not_allowed"}
        code = codes.get(exc.status_code, f"http_{exc.status_code}")
        return _error(exc.status_code, code, str(exc.detail))

    @app.get("/api/health")
    async def health() -> JSONResponse:
        return JSONResponse({"status": "ok", "index_entries": len(state.index)})

    @app.get("/api/corpus/stats")
    async def corpus_stats() -> JSONResponse:
        return JSONResponse({**state.corpus_stats, "index_entries": len(state.index)})

    @app.post("/api/chat")
    async def chat(request: Request) -> JSONResponse:
        # Parse by hand so malformed input gets the same envelope as
        # domain errors instead of framework validation output.
        try:
            body = await request.json()
        except Exception:
            return _error(400, "bad_request", "request body must be valid JSON")
        if not isinstance(body, dict):
            return _error(400, "bad_request", "request body must be a JSON object")
        question = body.get("question")
        if not isinstance(question, str) or not question.strip():
            return _error(400, "empty_question", "question must be a non-empty string")
        hint = body.get("language_hint")
        if hint is not None and hint not in LANGUAGE_LINES:
            return _error(
                400, "bad_request", f"language_hint must be one of {sorted(LANGUAGE_LINES)}"
            )
        try:
            answer = await run_in_threadpool(
                answer_question,
                question,
                state.index,
                state.embedder,
                state.backend,
                state.config,
                hint,
            )
        except EmptyQuestion as exc:
            return _error(400, "empty_question", str(exc))
        except BudgetExceeded as exc:
            return _error(400, "budget_exceeded", str(exc))
        except ProviderUnavailable as exc:
            return _error(503, "provider_unavailable", str(exc))
        except MalformedProviderReply as exc:
            return _error(502, "malformed_provider_reply", str(exc))
        return JSONResponse(
            {
                "answer": answer.text,
                "sources": answer.source_rows(),
                "timing_ms": answer.timing_ms,
            }
        )

    if static_dir is not None:
        # Mounted last so /api/* keeps priority.
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
