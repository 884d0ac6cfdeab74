"""Append-only session logs and their replay.

Every session is one newline-delimited JSON file: one event per line, with
a gap-free ``seq`` starting at 1. The in-memory state is always the fold
of that log; the store keeps an incrementally updated copy per session
purely as an optimization, and tests assert it equals a fresh replay.

Mutations to one session are serialized under a per-session lock and
fsynced before the sequence number is returned, so acknowledged events
survive a process restart.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import threading
import uuid
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Iterable

from ..documents import canonical_dumps
from ..errors import (
    CorruptLogError,
    InvalidReferenceError,
    StaleEditError,
    StorageUnavailableError,
    UnknownSessionError,
)

STICKER_KINDS = ("requirement", "solution")

EVENT_TYPES = (
    "create_session",
    "attach_map",
    "place_sticker",
    "edit_sticker",
    "delete_sticker",
    "cast_preference",
)


@dataclass(frozen=True)
class Sticker:
    sticker_id: str
    session_id: str
    map_id: str
    kind: str
    text: str
    position: tuple[float, float]
    author: str
    created_at: str
    anchored_terms: tuple[str, ...] = ()
    answers: str | None = None

    def to_doc(self) -> dict:
        doc = {
            "sticker_id": self.sticker_id,
            "session_id": self.session_id,
            "map_id": self.map_id,
            "kind": self.kind,
            "text": self.text,
            "position": list(self.position),
            "author": self.author,
            "created_at": self.created_at,
            "anchored_terms": list(self.anchored_terms),
        }
        if self.answers is not None:
            doc["answers"] = self.answers
        return doc


@dataclass
class SessionState:
    session_id: str
    title: str = ""
    latest_seq: int = 0
    maps: dict[str, str] = field(default_factory=dict)  # map_id -> content hash
    stickers: dict[str, Sticker] = field(default_factory=dict)  # live only
    preferences: dict[str, str] = field(default_factory=dict)  # participant -> map_id
    used_sticker_ids: set[str] = field(default_factory=set)
    sticker_seq: dict[str, int] = field(default_factory=dict)  # last mutating seq


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise InvalidReferenceError(message)


def apply_event(state: SessionState, event: dict) -> None:
    """Fold one event into the state, validating references as it goes."""
    etype = event.get("type")
    seq = event.get("seq")
    if etype not in EVENT_TYPES:
        raise InvalidReferenceError(f"unknown event type: {etype!r}")
    if not isinstance(seq, int) or seq != state.latest_seq + 1:
        raise CorruptLogError(
            f"sequence gap: expected {state.latest_seq + 1}, got {seq!r}"
        )

    if etype == "create_session":
        _require(state.latest_seq == 0, "create_session must be the first event")
        state.title = event.get("title", "")
    elif etype == "attach_map":
        _require(bool(event.get("map_id")), "attach_map needs map_id")
        _require(bool(event.get("map_hash")), "attach_map needs map_hash")
        state.maps[event["map_id"]] = event["map_hash"]
    elif etype == "place_sticker":
        sticker_id = event.get("sticker_id", "")
        _require(bool(sticker_id), "place_sticker needs sticker_id")
        _require(sticker_id not in state.used_sticker_ids, f"sticker id {sticker_id!r} already used")
        _require(event.get("kind") in STICKER_KINDS, f"bad sticker kind {event.get('kind')!r}")
        _require(event.get("map_id") in state.maps, f"map {event.get('map_id')!r} not attached")
        position = event.get("position", ())
        _require(
            len(position) == 2 and all(math.isfinite(float(c)) for c in position),
            "sticker position must be two finite coordinates",
        )
        answers = event.get("answers")
        if answers is not None:
            _require(event["kind"] == "solution", "only solutions answer requirements")
            target = state.stickers.get(answers)
            _require(
                target is not None and target.kind == "requirement",
                f"answers target {answers!r} is not a live requirement",
            )
        state.stickers[sticker_id] = Sticker(
            sticker_id=sticker_id,
            session_id=state.session_id,
            map_id=event["map_id"],
            kind=event["kind"],
            text=event.get("text", ""),
            position=(float(position[0]), float(position[1])),
            author=event.get("author", ""),
            created_at=event.get("ts", ""),
            anchored_terms=tuple(event.get("anchored_terms", ())),
            answers=answers,
        )
        state.used_sticker_ids.add(sticker_id)
        state.sticker_seq[sticker_id] = seq
    elif etype == "edit_sticker":
        sticker = state.stickers.get(event.get("sticker_id", ""))
        _require(sticker is not None, f"edit target {event.get('sticker_id')!r} is not live")
        _require(event.get("author") == sticker.author, "only the author may edit a sticker")
        base_seq = event.get("base_seq")
        if base_seq is not None and base_seq < state.sticker_seq[sticker.sticker_id]:
            raise StaleEditError(
                f"sticker {sticker.sticker_id!r} changed at seq "
                f"{state.sticker_seq[sticker.sticker_id]}, edit based on {base_seq}"
            )
        updates: dict = {}
        if "text" in event:
            updates["text"] = event["text"]
        if "position" in event:
            position = event["position"]
            _require(
                len(position) == 2 and all(math.isfinite(float(c)) for c in position),
                "sticker position must be two finite coordinates",
            )
            updates["position"] = (float(position[0]), float(position[1]))
        if "anchored_terms" in event:
            updates["anchored_terms"] = tuple(event["anchored_terms"])
        state.stickers[sticker.sticker_id] = replace(sticker, **updates)
        state.sticker_seq[sticker.sticker_id] = seq
    elif etype == "delete_sticker":
        sticker = state.stickers.get(event.get("sticker_id", ""))
        _require(sticker is not None, f"delete target {event.get('sticker_id')!r} is not live")
        _require(event.get("author") == sticker.author, "only the author may delete a sticker")
        del state.stickers[sticker.sticker_id]
        state.sticker_seq[sticker.sticker_id] = seq
    elif etype == "cast_preference":
        _require(bool(event.get("participant")), "cast_preference needs participant")
        _require(event.get("map_id") in state.maps, f"map {event.get('map_id')!r} not attached")
        state.preferences[event["participant"]] = event["map_id"]

    state.latest_seq = seq


def replay(events: Iterable[dict], session_id: str) -> SessionState:
    """Deterministic fold of an event sequence into a session state."""
    state = SessionState(session_id=session_id)
    for event in events:
        try:
            apply_event(state, event)
        except CorruptLogError:
            raise
        except InvalidReferenceError as exc:
            raise CorruptLogError(f"invalid event at seq {event.get('seq')}: {exc}") from exc
    return state


def parse_log(text: str, session_id: str) -> list[dict]:
    events = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            events.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise CorruptLogError(f"{session_id}: line {lineno} is not JSON: {exc}") from exc
    return events


def replay_file(path: Path, session_id: str | None = None) -> SessionState:
    path = Path(path)
    sid = session_id or path.stem
    return replay(parse_log(path.read_text("utf-8"), sid), sid)


def _now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%fZ")


class SessionStore:
    """Durable multi-session event store over one data directory."""

    def __init__(self, data_dir: Path):
        self.data_dir = Path(data_dir)
        self.sessions_dir = self.data_dir / "sessions"
        self.maps_dir = self.data_dir / "maps"
        try:
            self.sessions_dir.mkdir(parents=True, exist_ok=True)
            self.maps_dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise StorageUnavailableError(f"cannot prepare {self.data_dir}: {exc}") from exc
        self._states: dict[str, SessionState] = {}
        self._events: dict[str, list[dict]] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()
        self._listeners: list[Callable[[str, dict], None]] = []

    # -- listeners ---------------------------------------------------------

    def add_listener(self, callback: Callable[[str, dict], None]) -> None:
        """callback(session_id, event) fires after each durable append."""
        self._listeners.append(callback)

    # -- sessions ----------------------------------------------------------

    def _log_path(self, session_id: str) -> Path:
        return self.sessions_dir / f"{session_id}.ndjson"

    def _lock(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(session_id, threading.Lock())

    def session_ids(self) -> list[str]:
        return sorted(p.stem for p in self.sessions_dir.glob("*.ndjson"))

    def create_session(self, session_id: str | None = None, title: str = "") -> str:
        session_id = session_id or uuid.uuid4().hex[:12]
        with self._lock(session_id):
            if self._log_path(session_id).exists():
                raise InvalidReferenceError(f"session {session_id!r} already exists")
            self._states[session_id] = SessionState(session_id=session_id)
            self._events[session_id] = []
            self._append_locked(session_id, {"type": "create_session", "title": title})
        return session_id

    def _load_locked(self, session_id: str) -> None:
        if session_id in self._states:
            return
        path = self._log_path(session_id)
        if not path.exists():
            raise UnknownSessionError(session_id)
        events = parse_log(path.read_text("utf-8"), session_id)
        self._states[session_id] = replay(events, session_id)
        self._events[session_id] = events

    def _append_locked(self, session_id: str, payload: dict) -> int:
        state = self._states[session_id]
        event = dict(payload)
        event["seq"] = state.latest_seq + 1
        event.setdefault("ts", _now())
        # validate against a copy first: a rejected event must not corrupt state
        probe = _copy_state(state)
        apply_event(probe, event)
        line = json.dumps(event, ensure_ascii=False, sort_keys=True)
        with open(self._log_path(session_id), "a", encoding="utf-8") as fh:
            fh.write(line + "\n")
            fh.flush()
            os.fsync(fh.fileno())
        apply_event(state, event)
        self._events[session_id].append(event)
        for listener in self._listeners:
            listener(session_id, event)
        return event["seq"]

    def append(self, session_id: str, payload: dict) -> int:
        """Validate, durably append, and return the event's seq."""
        with self._lock(session_id):
            self._load_locked(session_id)
            return self._append_locked(session_id, payload)

    def state(self, session_id: str) -> SessionState:
        with self._lock(session_id):
            self._load_locked(session_id)
            return _copy_state(self._states[session_id])

    def events_since(self, session_id: str, since: int = 0) -> list[dict]:
        with self._lock(session_id):
            self._load_locked(session_id)
            return [e for e in self._events[session_id] if e["seq"] > since]

    # -- maps ----------------------------------------------------------------

    def store_map(self, doc: dict) -> str:
        payload = canonical_dumps(doc).encode("utf-8")
        digest = hashlib.sha256(payload).hexdigest()
        path = self.maps_dir / f"{digest}.json"
        if not path.exists():
            tmp = path.with_suffix(".tmp")
            tmp.write_bytes(payload)
            tmp.replace(path)
        return digest

    def load_map(self, digest: str) -> dict:
        path = self.maps_dir / f"{digest}.json"
        if not path.exists():
            raise InvalidReferenceError(f"no map stored under {digest!r}")
        return json.loads(path.read_text("utf-8"))

    def has_map(self, digest: str) -> bool:
        return (self.maps_dir / f"{digest}.json").exists()


def _copy_state(state: SessionState) -> SessionState:
    return SessionState(
        session_id=state.session_id,
        title=state.title,
        latest_seq=state.latest_seq,
        maps=dict(state.maps),
        stickers=dict(state.stickers),
        preferences=dict(state.preferences),
        used_sticker_ids=set(state.used_sticker_ids),
        sticker_seq=dict(state.sticker_seq),
    )
