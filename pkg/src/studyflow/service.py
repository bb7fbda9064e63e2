"""HTTP API for submitting simulation runs and fetching their datasets.

Versioned under /api/v1. CSV inputs are uploaded once and referenced by
content digest; a run submission is (params, students digest, curriculum
digest) and answers 202 immediately. Runs execute on a small worker pool
while clients poll GET /runs/{id} until status is done, then fetch datasets.

Environment knobs: STUDYFLOW_ARCHIVE (run store root), STUDYFLOW_MAX_UPLOAD
(bytes), STUDYFLOW_WORKERS, STUDYFLOW_CORS_ORIGIN, STUDYFLOW_STATIC (built
frontend to serve at /).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from contextlib import asynccontextmanager
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .analytics import DATASET_NAMES, media_type
from .etl import EtlError
from .params import default_params, params_from_flat, params_to_flat
from .runner import perform_run
from .store import FORMATS, RunStore

DEFAULT_MAX_UPLOAD = 10 * 1024 * 1024
INPUT_KINDS = ("students", "curriculum")


def _error_response(status: int, errors: list) -> JSONResponse:
    return JSONResponse(status_code=status, content={"errors": errors})


def _field_error(field: str, code: str, message: str) -> dict:
    return {"field": field, "code": code, "message": message}


def execute_run(store: RunStore, run_id: str, flat_params: dict) -> None:
    """Worker-pool job: pending -> running -> done/failed."""
    store.mark_running(run_id)
    desc = store.get_run(run_id)
    try:
        params, errors = params_from_flat(flat_params)
        if errors:  # validated at submission; re-check for store reloads
            raise ValueError("; ".join(e.message for e in errors))
        students = store.get_input(desc.inputs["students"])
        curriculum = store.get_input(desc.inputs["curriculum"])
        artifacts = perform_run(params, students, curriculum)
        store.finish_run(run_id, artifacts.exports)
    except EtlError as exc:
        store.fail_run(run_id, f"input error: {exc}")
    except Exception as exc:  # noqa: BLE001 - a run failure must not kill the pool
        store.fail_run(run_id, f"{type(exc).__name__}: {exc}")


def create_app(
    archive: Optional[str] = None,
    max_upload_bytes: Optional[int] = None,
    workers: Optional[int] = None,
    static_dir: Optional[str] = None,
) -> FastAPI:
    archive = archive or os.environ.get("STUDYFLOW_ARCHIVE", "archive")
    max_upload = max_upload_bytes or int(
        os.environ.get("STUDYFLOW_MAX_UPLOAD", DEFAULT_MAX_UPLOAD)
    )
    pool_size = workers or int(os.environ.get("STUDYFLOW_WORKERS", "2"))
    cors_origin = os.environ.get("STUDYFLOW_CORS_ORIGIN", "*")
    static_dir = static_dir or os.environ.get("STUDYFLOW_STATIC")

    store = RunStore(archive)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        yield
        app.state.executor.shutdown(wait=False)

    app = FastAPI(title="studyflow", version="0.1.0", lifespan=lifespan)
    app.state.store = store
    app.state.executor = ThreadPoolExecutor(max_workers=pool_size)

    app.add_middleware(
        CORSMiddleware,
        allow_origins=[cors_origin],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.get("/api/v1/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.get("/api/v1/defaults")
    def defaults() -> dict:
        return {"params": params_to_flat(default_params()), "datasets": list(DATASET_NAMES)}

    @app.post("/api/v1/inputs/{kind}", status_code=201)
    async def upload_input(kind: str, request: Request):
        if kind not in INPUT_KINDS:
            return _error_response(404, [_field_error("kind", "unknown", f"no input kind {kind!r}")])
        declared = request.headers.get("content-length")
        if declared and declared.isdigit() and int(declared) > max_upload:
            return _error_response(413, [_field_error("body", "too_large", "upload exceeds limit")])
        body = await request.body()
        if len(body) > max_upload:
            return _error_response(413, [_field_error("body", "too_large", "upload exceeds limit")])
        if not body:
            return _error_response(400, [_field_error("body", "empty", "empty upload")])
        digest = store.put_input(body)
        return {"kind": kind, "digest": digest, "size": len(body)}

    @app.post("/api/v1/runs", status_code=202)
    async def submit_run(request: Request):
        try:
            payload = await request.json()
        except ValueError:
            return _error_response(400, [_field_error("body", "invalid_json", "body is not JSON")])
        if not isinstance(payload, dict):
            return _error_response(400, [_field_error("body", "invalid_json", "body must be an object")])

        errors: list = []
        flat = payload.get("params")
        if flat is None:
            flat = {}
        if not isinstance(flat, dict):
            errors.append(_field_error("params", "wrong_type", "params must be an object"))
            flat = {}
        digests = {}
        for kind in INPUT_KINDS:
            digest = payload.get(kind)
            if not isinstance(digest, str) or not digest:
                errors.append(_field_error(kind, "missing", f"{kind} digest is required"))
            elif not store.has_input(digest):
                errors.append(_field_error(kind, "unknown_digest", f"no uploaded input {digest}"))
            else:
                digests[kind] = digest

        params, param_errors = params_from_flat(flat)
        errors.extend(e.to_dict() for e in param_errors)
        if errors:
            return _error_response(400, errors)

        desc = store.create_run(params_to_flat(params), digests)
        app.state.executor.submit(execute_run, store, desc.run_id, desc.params)
        # the worker may already have flipped the shared descriptor to
        # "running", so answer with the accepted state, not a racy read
        return {"run_id": desc.run_id, "status": "pending"}

    @app.get("/api/v1/runs/{run_id}")
    def run_status(run_id: str):
        desc = store.get_run(run_id)
        if desc is None:
            return _error_response(404, [_field_error("run_id", "unknown", f"no run {run_id}")])
        return desc.to_dict()

    @app.get("/api/v1/runs/{run_id}/datasets/{name}")
    def run_dataset(run_id: str, name: str, format: str = "json"):
        desc = store.get_run(run_id)
        if desc is None:
            return _error_response(404, [_field_error("run_id", "unknown", f"no run {run_id}")])
        if name not in DATASET_NAMES:
            return _error_response(404, [_field_error("name", "unknown", f"no dataset {name!r}")])
        if format not in FORMATS:
            return _error_response(400, [_field_error("format", "invalid_choice", "format must be csv or json")])
        if desc.status != "done":
            return JSONResponse(
                status_code=409,
                content={"errors": [_field_error("status", "not_done", f"run is {desc.status}")],
                         "status": desc.status},
            )
        data = store.dataset_bytes(run_id, name, format)
        return Response(content=data, media_type=media_type(format))

    if static_dir and Path(static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
