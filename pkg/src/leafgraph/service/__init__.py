"""Event-sourced session service: storage, wire models, HTTP/WebSocket app."""

from .store import SessionStore, SessionState, Sticker, replay, replay_file

__all__ = ["SessionStore", "SessionState", "Sticker", "replay", "replay_file"]
