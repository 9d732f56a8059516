"""HTTP API over a project directory, backing the interactive studio.

All state lives in the project files; the service only orchestrates.  Reads
are served directly from disk.  Mutating pipeline runs (optimize, refine,
heatmap) become jobs on a single FIFO worker so concurrent requests are
serialized per project; blind-zone fixes run synchronously under the same
mutation lock.  Errors use one shape: ``{"error": {"code", "message"}}``.
"""
from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass
from numbers import Number
from typing import Callable

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from starlette.exceptions import HTTPException as StarletteHTTPException

from wayfinder import __version__
from wayfinder.config import config_to_doc, parse_config
from wayfinder.graph import LayoutError
from wayfinder.project import ProjectStore

__all__ = ["create_app"]


@dataclass
class _Job:
    id: str
    kind: str
    status: str = "queued"  # queued | running | done | error
    progress: dict | None = None
    result: dict | None = None
    error: str | None = None

    def to_doc(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "status": self.status,
            "progress": self.progress,
            "result": self.result,
            "error": self.error,
        }


class _JobRunner:
    """One daemon worker draining a FIFO queue; at most one mutating
    operation runs at a time (the mutation lock also covers synchronous
    blind-zone fixes)."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._wakeup = threading.Condition(self._lock)
        self._queue: deque[tuple[_Job, Callable[[_Job], dict]]] = deque()
        self.jobs: dict[str, _Job] = {}
        self._counter = 0
        self._worker: threading.Thread | None = None
        self.mutation_lock = threading.Lock()

    def submit(self, kind: str, fn: Callable[[_Job], dict]) -> _Job:
        with self._lock:
            self._counter += 1
            job = _Job(id=f"job-{self._counter}", kind=kind)
            self.jobs[job.id] = job
            self._queue.append((job, fn))
            if self._worker is None or not self._worker.is_alive():
                self._worker = threading.Thread(
                    target=self._drain, name="wayfinder-jobs", daemon=True
                )
                self._worker.start()
            self._wakeup.notify()
        return job

    def _drain(self) -> None:
        while True:
            with self._lock:
                while not self._queue:
                    self._wakeup.wait()
                job, fn = self._queue.popleft()
                job.status = "running"
            try:
                with self.mutation_lock:
                    result = fn(job)
            except Exception as exc:  # job errors surface via polling
                job.error = str(exc)
                job.status = "error"
            else:
                job.result = result
                job.status = "done"


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse({"error": {"code": code, "message": message}}, status_code=status)


async def _body_object(request: Request) -> dict:
    if not await request.body():
        return {}
    try:
        data = await request.json()
    except ValueError:
        raise LayoutError("request body must be valid JSON") from None
    if not isinstance(data, dict):
        raise LayoutError("request body must be a JSON object")
    return data


def create_app(project_dir, static_dir=None) -> FastAPI:
    """App over one project directory; optionally serves a built UI from
    ``static_dir`` at the root path."""
    store = ProjectStore(project_dir)
    runner = _JobRunner()
    app = FastAPI(title="wayfinder", version=__version__)

    @app.exception_handler(StarletteHTTPException)
    async def http_error(_request, exc):
        return _error(exc.status_code, "http_error", str(exc.detail))

    @app.exception_handler(LayoutError)
    async def layout_error(_request, exc):
        return _error(400, "invalid", str(exc))

    # -- reads --

    @app.get("/api/v1/layout")
    def get_layout():
        try:
            return store.load_layout_doc()
        except LayoutError as exc:
            return _error(404, "not_found", str(exc))

    @app.get("/api/v1/config")
    def get_config():
        return config_to_doc(store.load_config())

    @app.get("/api/v1/scheme")
    def get_scheme():
        try:
            return store.load_scheme_doc()
        except LayoutError as exc:
            return _error(404, "not_found", str(exc))

    @app.get("/api/v1/placement")
    def get_placement():
        try:
            return store.load_signs_doc()
        except LayoutError as exc:
            return _error(404, "not_found", str(exc))

    @app.get("/api/v1/field/{destination}")
    def get_field(destination: str):
        try:
            return store.load_field_doc(destination)
        except LayoutError as exc:
            return _error(404, "not_found", str(exc))

    @app.get("/api/v1/jobs")
    def list_jobs():
        return {"jobs": [job.to_doc() for job in runner.jobs.values()]}

    @app.get("/api/v1/jobs/{job_id}")
    def get_job(job_id: str):
        job = runner.jobs.get(job_id)
        if job is None:
            return _error(404, "not_found", f"unknown job '{job_id}'")
        return job.to_doc()

    # -- config and jobs --

    @app.post("/api/v1/config")
    async def post_config(request: Request):
        body = await _body_object(request)
        config = parse_config(body)
        store.save_config(config)
        return config_to_doc(config)

    async def _maybe_update_config(request: Request) -> dict:
        body = await _body_object(request)
        if "config" in body:
            store.save_config(parse_config(body["config"]))
        return body

    @app.post("/api/v1/optimize")
    async def post_optimize(request: Request):
        await _maybe_update_config(request)
        store.load_layout()  # fail fast with 400 before queueing

        def run(job: _Job) -> dict:
            def progress(iteration: int, best: float) -> None:
                job.progress = {"iteration": iteration, "best_cost": best}

            return store.run_optimize(progress)

        return runner.submit("optimize", run).to_doc()

    @app.post("/api/v1/refine")
    async def post_refine(request: Request):
        await _maybe_update_config(request)
        store.load_scheme_doc()  # require an optimized scheme up front

        def run(job: _Job) -> dict:
            def progress(iteration: int, best: float) -> None:
                job.progress = {"iteration": iteration, "best_cost": best}

            return store.run_refine(progress)

        return runner.submit("refine", run).to_doc()

    @app.post("/api/v1/heatmap")
    async def post_heatmap(request: Request):
        body = await _body_object(request)
        destination = body.get("destination")
        if destination is not None and not isinstance(destination, str):
            raise LayoutError("'destination' must be a string")
        store.load_signs_doc()  # require a placement up front

        def run(job: _Job) -> dict:
            def progress(done: int, total: int) -> None:
                job.progress = {"completed": done, "total": total}

            return store.run_heatmap(destination, progress)

        return runner.submit("heatmap", run).to_doc()

    @app.post("/api/v1/blindzone-fix")
    async def post_blindzone_fix(request: Request):
        body = await _body_object(request)
        for key in ("x", "y"):
            if not isinstance(body.get(key), Number) or isinstance(body.get(key), bool):
                raise LayoutError(f"'{key}' must be a number")
        destination = body.get("destination")
        if not isinstance(destination, str):
            raise LayoutError("'destination' must be a string")
        with runner.mutation_lock:
            return store.run_fix(float(body["x"]), float(body["y"]), destination)

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
