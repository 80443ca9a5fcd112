"""REST service: validated uploads, async jobs, results, cleanup."""

from __future__ import annotations

import json
import logging
import shutil
import threading
from concurrent.futures import ThreadPoolExecutor
from contextlib import asynccontextmanager
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable

from fastapi import FastAPI, File, Form, Request, UploadFile
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse, Response
from fastapi.staticfiles import StaticFiles

from ..deck.container import ZIP_MAGIC, convert_legacy_deck
from ..errors import (
    InvalidCustomization,
    InvalidFileType,
    NotReady,
    SlideforgeError,
    TooLarge,
    UnknownJob,
    UnsupportedFormat,
)
from ..kb.index import VectorIndex
from ..textbook.customization import CustomizationSpec
from .cache import TtlCache
from .cleanup import DEFAULT_MAX_AGE_SECONDS, cleanup_tick
from .config import AppConfig, UploadPolicy, build_clients
from .jobs import TERMINAL_STATES, JobStore
from .pipeline import PipelineClients, run_pipeline

logger = logging.getLogger("slideforge.service")

_ERROR_STATUS = {
    InvalidFileType: (400, "INVALID_FILE_TYPE"),
    UnsupportedFormat: (400, "UNSUPPORTED_FORMAT"),
    TooLarge: (413, "TOO_LARGE"),
    InvalidCustomization: (422, "INVALID_CUSTOMIZATION"),
    UnknownJob: (404, "UNKNOWN_JOB"),
    NotReady: (409, "NOT_READY"),
}


def _error_response(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": {"code": code, "message": message}})


def validate_upload(filename: str, data: bytes, policy: UploadPolicy,
                    ppt_converter: str = "") -> bytes:
    """Enforce the upload policy before any parsing; returns deck bytes.

    Legacy .ppt uploads are converted when a converter command is
    configured and rejected otherwise.
    """
    suffix = Path(filename).suffix.lower()
    if suffix not in policy.allowed_extensions:
        raise InvalidFileType(f"extension {suffix or '<none>'} not allowed; "
                              f"accepted: {', '.join(policy.allowed_extensions)}")
    if len(data) > policy.max_bytes:
        raise TooLarge(f"upload is {len(data)} bytes; limit is {policy.max_bytes}")
    if suffix == ".ppt":
        if not ppt_converter:
            raise InvalidFileType(
                "legacy .ppt uploads need a configured converter; re-save as .pptx or set ppt_converter"
            )
        return convert_legacy_deck(data, ppt_converter)
    if policy.require_zip_magic and data[:4] != ZIP_MAGIC:
        raise InvalidFileType("file does not start with the ZIP magic expected of .pptx")
    return data


def create_app(
    config: AppConfig | None = None,
    clients: PipelineClients | None = None,
    kb: VectorIndex | None = None,
    now: Callable[[], datetime] | None = None,
    cache: TtlCache | None = None,
) -> FastAPI:
    config = config or AppConfig()
    clients = clients or build_clients(config)
    if kb is None and config.kb_path and Path(config.kb_path).exists():
        kb = VectorIndex.load(config.kb_path)
    cache = cache or TtlCache(ttl_seconds=config.cache_ttl_seconds)

    config.workdir.mkdir(parents=True, exist_ok=True)
    store = JobStore(config.workdir)
    store.scan_existing()

    @asynccontextmanager
    async def _lifespan(app: FastAPI):
        yield
        cleanup_stop.set()
        executor.shutdown(wait=False)

    app = FastAPI(title="slideforge", version="0.1.0", lifespan=_lifespan)
    app.state.config = config
    app.state.store = store
    app.state.cache = cache
    app.state.clients = clients
    app.state.kb = kb
    executor = ThreadPoolExecutor(max_workers=config.job_workers,
                                  thread_name_prefix="slideforge-job")
    app.state.executor = executor
    cleanup_stop = threading.Event()
    app.state.cleanup_stop = cleanup_stop

    def _cleanup_loop():
        import time

        while not cleanup_stop.wait(900.0):
            try:
                cleanup_tick(store, time.time())
                cache.purge_expired()
            except Exception:  # keep the janitor alive
                logger.exception("cleanup tick failed")

    threading.Thread(target=_cleanup_loop, name="slideforge-cleanup", daemon=True).start()

    @app.exception_handler(SlideforgeError)
    async def _domain_errors(request: Request, exc: SlideforgeError):
        for err_type, (status, code) in _ERROR_STATUS.items():
            if isinstance(exc, err_type):
                return _error_response(status, code, str(exc))
        logger.warning("domain error on %s: %s", request.url.path, exc)
        return _error_response(500, "INTERNAL", str(exc))

    @app.exception_handler(RequestValidationError)
    async def _validation_errors(request: Request, exc: RequestValidationError):
        return _error_response(422, "INVALID_REQUEST", str(exc.errors()[:3]))

    @app.get("/healthz")
    async def healthz():
        return PlainTextResponse("ok")

    @app.get("/api/models")
    async def list_models():
        ids = ["stub-echo", *config.models.keys()]
        return {"models": sorted(set(ids))}

    @app.post("/api/jobs", status_code=202)
    async def create_job(file: UploadFile = File(...), customization: str = Form("{}")):
        data = await file.read()
        deck_bytes = validate_upload(file.filename or "", data, config.upload,
                                     config.ppt_converter)
        try:
            custom_doc = json.loads(customization) if customization.strip() else {}
        except json.JSONDecodeError as exc:
            raise InvalidCustomization(f"customization is not valid JSON: {exc}") from exc
        spec = CustomizationSpec.from_dict(custom_doc)
        if not clients.llm.knows(spec.model_id):
            raise InvalidCustomization(f"model {spec.model_id!r} is not registered")

        job = store.create()
        job_dir = store.job_dir(job.id)
        job_dir.mkdir(parents=True, exist_ok=True)
        upload_name = Path(file.filename or "deck.pptx").name
        if upload_name.lower().endswith(".ppt"):
            upload_name += "x"  # converted on the way in
        upload_path = job_dir / upload_name
        upload_path.write_bytes(deck_bytes)

        executor.submit(
            run_pipeline, job.id, upload_path, spec, store, clients,
            kb, config.retrieval, cache, now,
        )
        return JSONResponse(status_code=202, content={"job_id": job.id})

    @app.get("/api/jobs/{job_id}")
    async def get_status(job_id: str):
        return store.get(job_id).to_api()

    @app.get("/api/jobs/{job_id}/result")
    async def get_result(job_id: str, format: str = "markdown"):
        job = store.get(job_id)
        if format == "markdown":
            if job.state != "done":
                raise NotReady(f"job is {job.state}; markdown requires done")
            path = store.job_dir(job_id) / job.artifact_paths.get("book_md", "book.md")
            return Response(content=path.read_bytes(), media_type="text/markdown; charset=utf-8")
        if format == "deck-json":
            rel = job.artifact_paths.get("deck_json")
            if rel is None:
                raise NotReady(f"job is {job.state}; extraction has not completed")
            path = store.job_dir(job_id) / rel
            return Response(content=path.read_bytes(), media_type="application/json")
        return _error_response(400, "INVALID_FORMAT",
                               f"format must be markdown or deck-json, got {format!r}")

    @app.delete("/api/jobs/{job_id}", status_code=204)
    async def delete_job(job_id: str):
        job = store.get(job_id)
        if job.state not in TERMINAL_STATES:
            raise NotReady(f"job is {job.state}; only terminal jobs can be deleted")
        directory = store.job_dir(job_id)
        if directory.exists():
            shutil.rmtree(directory, ignore_errors=True)
        store.remove(job_id)
        return Response(status_code=204)

    @app.post("/api/cleanup", status_code=200)
    async def cleanup_now(max_age_seconds: float = DEFAULT_MAX_AGE_SECONDS):
        import time

        deleted = cleanup_tick(store, time.time(), max_age_seconds)
        return {"deleted": deleted}

    if config.static_dir and Path(config.static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(config.static_dir), html=True), name="ui")

    return app
