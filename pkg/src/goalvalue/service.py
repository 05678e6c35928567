"""Local JSON-over-HTTP façade over the analysis engine for the companion UI."""
from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Query, Request, Response
from fastapi.responses import JSONResponse

from . import canonical
from .analysis import MissingPrioritiesError, explain, run_analysis
from .canonical import LoadError
from .fuzzy import Level
from .model import GoalModel, Prioritization
from .pistar import PiStarParseError, import_pistar
from .propagation import InvalidModelError, PropagationConfig
from .store import SessionStore, SnapshotNotFoundError

MAX_IMAGE_BYTES = 10 * 1024 * 1024

_IMAGE_SIGNATURES = {
    b"\x89PNG\r\n\x1a\n": ("image/png", "png"),
    b"\xff\xd8\xff": ("image/jpeg", "jpg"),
    b"GIF87a": ("image/gif", "gif"),
    b"GIF89a": ("image/gif", "gif"),
}


def _sniff_image(data: bytes) -> tuple[str, str] | None:
    for signature, info in _IMAGE_SIGNATURES.items():
        if data.startswith(signature):
            return info
    return None


@dataclass
class Session:
    model: GoalModel
    draft: Prioritization
    lock: threading.Lock = field(default_factory=threading.Lock)
    image: tuple[str, Path] | None = None  # (media type, file path)


def _error(status: int, message: str, **extra) -> JSONResponse:
    return JSONResponse({"detail": message, **extra}, status_code=status)


def create_app(store_root: str | Path) -> FastAPI:
    app = FastAPI(title="goalvalue service")
    store = SessionStore(store_root)
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()

    def get_session(model_id: str) -> Session | None:
        with registry_lock:
            session = sessions.get(model_id)
        if session is not None:
            return session
        # lazily restore a model persisted by an earlier process
        path = store.root / model_id / "model.json"
        if not path.exists():
            return None
        model, prioritization = canonical.load(path.read_text())
        session = Session(model=model, draft=prioritization)
        with registry_lock:
            return sessions.setdefault(model_id, session)

    def persist_session(session: Session) -> None:
        directory = store.root / session.model.id
        directory.mkdir(parents=True, exist_ok=True)
        (directory / "model.json").write_text(
            canonical.save(session.model, session.draft)
        )

    @app.post("/models", status_code=201)
    async def import_model(request: Request):
        raw = await request.body()
        text = raw.decode("utf-8", errors="replace")
        try:
            document = json.loads(text)
        except json.JSONDecodeError as exc:
            return _error(400, f"invalid JSON at line {exc.lineno}, column {exc.colno}")
        if isinstance(document, dict) and "formatVersion" in document:
            try:
                model, prioritization = canonical.load(text)
            except LoadError as exc:
                return _error(400, str(exc), path=exc.path)
            from .model import validate

            report = validate(model, prioritization)
        else:
            try:
                model, report = import_pistar(text)
            except PiStarParseError as exc:
                return _error(400, str(exc), location=exc.location)
            prioritization = Prioritization()
        session = Session(model=model, draft=prioritization)
        with registry_lock:
            sessions[model.id] = session
        persist_session(session)
        return {"modelId": model.id, "validation": report.to_json()}

    @app.get("/models/{model_id}")
    def get_model(model_id: str):
        session = get_session(model_id)
        if session is None:
            return _error(404, f"unknown model {model_id!r}")
        return {
            "modelId": model_id,
            "model": canonical.model_to_json(session.model),
            "draft": canonical.prioritization_to_json(session.draft),
            "latestVersion": store.latest_version(model_id),
            "image": f"/models/{model_id}/image" if session.image else None,
        }

    @app.put("/models/{model_id}/priorities")
    async def set_priorities(model_id: str, request: Request):
        session = get_session(model_id)
        if session is None:
            return _error(404, f"unknown model {model_id!r}")
        try:
            body = await request.json()
        except json.JSONDecodeError:
            return _error(400, "invalid JSON body")
        if not isinstance(body, dict):
            return _error(422, "body must be an object")

        elements = session.model.all_elements()
        actor_ids = {a.id for a in session.model.actors}
        dependum_ids = session.model.dependum_ids()
        incoming_priorities: dict[str, tuple[Level, Level]] = {}
        incoming_weights: dict[str, Level] = {}
        try:
            for eid, entry in body.get("elementPriorities", {}).items():
                if eid in dependum_ids:
                    return _error(422, f"dependum {eid!r} cannot be prioritized")
                if eid not in elements:
                    return _error(422, f"unknown element {eid!r}")
                incoming_priorities[eid] = (
                    Level.from_label(entry["importance"]),
                    Level.from_label(entry["confidence"]),
                )
            for aid, label in body.get("stakeholderWeights", {}).items():
                if aid not in actor_ids:
                    return _error(422, f"unknown actor {aid!r}")
                incoming_weights[aid] = Level.from_label(label)
        except (KeyError, TypeError, ValueError) as exc:
            return _error(422, f"invalid prioritization entry: {exc}")

        # all entries validated: merge atomically
        with session.lock:
            session.draft.element_priorities.update(incoming_priorities)
            session.draft.stakeholder_weights.update(incoming_weights)
            persist_session(session)
            draft = canonical.prioritization_to_json(session.draft)
        return {"modelId": model_id, "draft": draft}

    @app.post("/models/{model_id}/analyze")
    async def analyze_model(model_id: str, request: Request):
        session = get_session(model_id)
        if session is None:
            return _error(404, f"unknown model {model_id!r}")
        raw = await request.body()
        body = json.loads(raw) if raw else {}
        if not isinstance(body, dict):
            return _error(422, "body must be an object")
        try:
            config = PropagationConfig(
                lambda_=float(body.get("lambda", 0.9)),
                epsilon=float(body.get("epsilon", 1e-9)),
                max_iterations=int(body.get("maxIterations", 10000)),
            )
        except (TypeError, ValueError) as exc:
            return _error(422, f"invalid configuration: {exc}")
        created_at = "1970-01-01T00:00:00+00:00" if body.get("deterministic") else None

        with session.lock:
            owned = session.model.owned_elements()
            missing = sorted(
                eid for eid in owned if eid not in session.draft.element_priorities
            )
            if missing:
                return _error(409, "prioritization incomplete", missing=missing)
            try:
                result, _ = run_analysis(
                    session.model, session.draft, config, created_at
                )
            except (InvalidModelError, MissingPrioritiesError) as exc:
                return _error(409, str(exc))
            version = store.record(model_id, session.draft, result)
        payload = result.to_json()
        payload["version"] = version
        return payload

    @app.get("/models/{model_id}/results/{version}")
    def get_result(model_id: str, version: int):
        if get_session(model_id) is None:
            return _error(404, f"unknown model {model_id!r}")
        try:
            snapshot = store.snapshot(model_id, version)
        except SnapshotNotFoundError as exc:
            return _error(404, str(exc.args[0]))
        return snapshot

    @app.get("/models/{model_id}/elements/{element_id}/provenance")
    def get_provenance(model_id: str, element_id: str, version: int):
        session = get_session(model_id)
        if session is None:
            return _error(404, f"unknown model {model_id!r}")
        try:
            snapshot = store.snapshot(model_id, version)
        except SnapshotNotFoundError as exc:
            return _error(404, str(exc.args[0]))
        prioritization = canonical.prioritization_from_json(
            snapshot["prioritization"]
        )
        echo = snapshot["configEcho"]
        config = PropagationConfig(
            lambda_=echo["lambda"],
            epsilon=echo["epsilon"],
            max_iterations=echo["maxIterations"],
        )
        result, prop = run_analysis(
            session.model, prioritization, config, snapshot["createdAt"]
        )
        try:
            entries = explain(result, session.model, prop, element_id)
        except (KeyError, ValueError):
            return _error(404, f"unknown element {element_id!r}")
        return {
            "modelId": model_id,
            "elementId": element_id,
            "version": version,
            "provenance": [e.to_json() for e in entries],
        }

    @app.get("/models/{model_id}/history")
    def get_history(model_id: str):
        if get_session(model_id) is None:
            return _error(404, f"unknown model {model_id!r}")
        return {
            "modelId": model_id,
            "history": [e.to_json() for e in store.history(model_id)],
        }

    @app.get("/models/{model_id}/diff")
    def get_diff(
        model_id: str,
        from_version: int = Query(alias="from"),
        to_version: int = Query(alias="to"),
    ):
        if get_session(model_id) is None:
            return _error(404, f"unknown model {model_id!r}")
        try:
            diff = store.diff(model_id, from_version, to_version)
        except SnapshotNotFoundError as exc:
            return _error(404, str(exc.args[0]))
        return diff.to_json()

    @app.post("/models/{model_id}/image", status_code=201)
    async def upload_image(model_id: str, request: Request):
        session = get_session(model_id)
        if session is None:
            return _error(404, f"unknown model {model_id!r}")
        data = await request.body()
        if len(data) > MAX_IMAGE_BYTES:
            return _error(413, f"image exceeds {MAX_IMAGE_BYTES} bytes")
        sniffed = _sniff_image(data)
        if sniffed is None:
            return _error(415, "body is not a supported image (png, jpeg, gif)")
        media_type, extension = sniffed
        directory = store.root / model_id
        directory.mkdir(parents=True, exist_ok=True)
        path = directory / f"image.{extension}"
        path.write_bytes(data)
        with session.lock:
            session.image = (media_type, path)
        return {"modelId": model_id, "url": f"/models/{model_id}/image"}

    @app.get("/models/{model_id}/image")
    def get_image(model_id: str):
        session = get_session(model_id)
        if session is None:
            return _error(404, f"unknown model {model_id!r}")
        if session.image is None:
            # fall back to an image uploaded by an earlier process
            for extension, media_type in (
                ("png", "image/png"),
                ("jpg", "image/jpeg"),
                ("gif", "image/gif"),
            ):
                path = store.root / model_id / f"image.{extension}"
                if path.exists():
                    session.image = (media_type, path)
                    break
        if session.image is None:
            return _error(404, "no image uploaded")
        media_type, path = session.image
        return Response(content=path.read_bytes(), media_type=media_type)

    return app
