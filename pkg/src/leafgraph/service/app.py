"""HTTP/WebSocket front for the session store.

Sessions are mutable only through the event endpoint; maps are immutable
content-addressed documents. The stream socket delivers events with their
seq at least once; clients reconcile with the ``since`` parameter.
"""

from __future__ import annotations

import asyncio
import os
import uuid
from contextlib import asynccontextmanager
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query, WebSocket, WebSocketDisconnect
from fastapi.middleware.cors import CORSMiddleware

from .. import analytics
from ..errors import (
    ConfigError,
    CorruptLogError,
    InvalidReferenceError,
    StaleEditError,
    UnknownSessionError,
)
from .models import (
    AttachMapRequest,
    AttachMapResult,
    CreateSessionRequest,
    EventAck,
    EventRequest,
    MapTallyModel,
    SessionCreated,
    StateResponse,
    StickerModel,
    TallyResponse,
)
from .store import SessionStore


@dataclass
class ServiceConfig:
    port: int = 8400
    data_dir: Path = Path("./leafgraph-data")
    cors_origins: tuple[str, ...] = ()

    @classmethod
    def from_env(cls, **overrides) -> "ServiceConfig":
        port = overrides.get("port") or int(os.environ.get("LEAFGRAPH_PORT", "8400"))
        data_dir = Path(
            overrides.get("data_dir")
            or os.environ.get("LEAFGRAPH_DATA_DIR", "./leafgraph-data")
        )
        cors = overrides.get("cors_origins")
        if cors is None:
            raw = os.environ.get("LEAFGRAPH_CORS", "")
            cors = tuple(o.strip() for o in raw.split(",") if o.strip())
        if not (0 < port < 65536):
            raise ConfigError(f"port out of range: {port}")
        return cls(port=port, data_dir=data_dir, cors_origins=tuple(cors))


class _StreamHub:
    """Fans appended events out to websocket subscribers.

    Appends may happen in worker threads; delivery hops onto the event
    loop with call_soon_threadsafe.
    """

    def __init__(self):
        self._subscribers: dict[str, set[asyncio.Queue]] = {}
        self._loop: asyncio.AbstractEventLoop | None = None

    def bind_loop(self, loop: asyncio.AbstractEventLoop) -> None:
        self._loop = loop

    def subscribe(self, session_id: str) -> asyncio.Queue:
        queue: asyncio.Queue = asyncio.Queue()
        self._subscribers.setdefault(session_id, set()).add(queue)
        return queue

    def unsubscribe(self, session_id: str, queue: asyncio.Queue) -> None:
        self._subscribers.get(session_id, set()).discard(queue)

    def publish(self, session_id: str, event: dict) -> None:
        loop = self._loop
        if loop is None or loop.is_closed():
            return
        for queue in tuple(self._subscribers.get(session_id, ())):
            loop.call_soon_threadsafe(queue.put_nowait, event)


def _http_error(exc: Exception) -> HTTPException:
    if isinstance(exc, UnknownSessionError):
        return HTTPException(status_code=404, detail=str(exc))
    if isinstance(exc, StaleEditError):
        return HTTPException(status_code=409, detail=str(exc))
    if isinstance(exc, (InvalidReferenceError, CorruptLogError)):
        return HTTPException(status_code=400, detail=str(exc))
    return HTTPException(status_code=500, detail=str(exc))


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig.from_env()
    store = SessionStore(config.data_dir)
    hub = _StreamHub()
    store.add_listener(hub.publish)

    @asynccontextmanager
    async def lifespan(_: FastAPI):
        hub.bind_loop(asyncio.get_running_loop())
        yield

    app = FastAPI(title="leafgraph session service", lifespan=lifespan)
    app.state.store = store
    app.state.config = config
    if config.cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(config.cors_origins),
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.post("/sessions", response_model=SessionCreated)
    def create_session(body: CreateSessionRequest):
        try:
            session_id = store.create_session(body.session_id, body.title)
        except InvalidReferenceError as exc:
            raise _http_error(exc)
        return SessionCreated(session_id=session_id, seq=1)

    @app.post("/sessions/{session_id}/maps", response_model=AttachMapResult)
    def attach_map(session_id: str, body: AttachMapRequest):
        try:
            if body.map is not None:
                map_hash = store.store_map(body.map)
            elif body.map_hash:
                if not store.has_map(body.map_hash):
                    raise InvalidReferenceError(f"no map stored under {body.map_hash!r}")
                map_hash = body.map_hash
            else:
                raise InvalidReferenceError("attach needs a map document or a map_hash")
            seq = store.append(
                session_id,
                {"type": "attach_map", "map_id": body.map_id, "map_hash": map_hash},
            )
        except Exception as exc:
            raise _http_error(exc)
        return AttachMapResult(seq=seq, map_id=body.map_id, map_hash=map_hash)

    @app.post("/sessions/{session_id}/events", response_model=EventAck)
    def append_event(session_id: str, body: EventRequest):
        payload = body.model_dump(exclude_none=True)
        if payload["type"] == "place_sticker" and not payload.get("sticker_id"):
            payload["sticker_id"] = uuid.uuid4().hex[:10]
        try:
            seq = store.append(session_id, payload)
        except Exception as exc:
            raise _http_error(exc)
        return EventAck(seq=seq, sticker_id=payload.get("sticker_id"))

    @app.get("/sessions/{session_id}/state", response_model=StateResponse)
    def session_state(session_id: str, since: int = Query(default=0, ge=0)):
        try:
            state = store.state(session_id)
            events = store.events_since(session_id, since)
        except Exception as exc:
            raise _http_error(exc)
        stickers = [
            StickerModel(**s.to_doc())
            for _, s in sorted(state.stickers.items())
        ]
        return StateResponse(
            session_id=state.session_id,
            title=state.title,
            latest_seq=state.latest_seq,
            maps=dict(sorted(state.maps.items())),
            stickers=stickers,
            preferences=dict(sorted(state.preferences.items())),
            events=events,
        )

    @app.get("/sessions/{session_id}/tally", response_model=TallyResponse)
    def session_tally(session_id: str):
        try:
            state = store.state(session_id)
        except Exception as exc:
            raise _http_error(exc)
        tallies = analytics.tally(state)
        return TallyResponse(
            session_id=session_id,
            maps={
                map_id: MapTallyModel(
                    requirements=t.requirements,
                    solutions=t.solutions,
                    preference_votes=t.preference_votes,
                )
                for map_id, t in tallies.items()
            },
        )

    @app.get("/maps/{map_hash}")
    def get_map(map_hash: str):
        try:
            return store.load_map(map_hash)
        except InvalidReferenceError as exc:
            raise HTTPException(status_code=404, detail=str(exc))

    @app.websocket("/sessions/{session_id}/stream")
    async def stream(ws: WebSocket, since: int = Query(default=0, ge=0)):
        session_id = ws.path_params["session_id"]
        await ws.accept()
        queue = hub.subscribe(session_id)
        try:
            backlog = await asyncio.to_thread(store.events_since, session_id, since)
        except UnknownSessionError:
            hub.unsubscribe(session_id, queue)
            await ws.close(code=4404)
            return
        last_sent = since
        try:
            for event in backlog:
                await ws.send_json(event)
                last_sent = event["seq"]
            while True:
                event = await queue.get()
                if event["seq"] <= last_sent:
                    continue  # already delivered via backlog
                await ws.send_json(event)
                last_sent = event["seq"]
        except WebSocketDisconnect:
            pass
        finally:
            hub.unsubscribe(session_id, queue)

    return app


def serve(config: ServiceConfig) -> None:
    """Run the service until interrupted."""
    import uvicorn

    app = create_app(config)
    uvicorn.run(app, host="0.0.0.0", port=config.port, log_level="info")
