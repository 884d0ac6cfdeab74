"""Pydantic request/response models for the HTTP API."""

from __future__ import annotations

from typing import Annotated, Literal, Union

from pydantic import BaseModel, Field


class CreateSessionRequest(BaseModel):
    session_id: str | None = Field(default=None, pattern=r"^[A-Za-z0-9_-]{1,64}$")
    title: str = ""


class SessionCreated(BaseModel):
    session_id: str
    seq: int


class AttachMapRequest(BaseModel):
    map_id: str = Field(min_length=1, max_length=64)
    map: dict | None = None
    map_hash: str | None = None


class AttachMapResult(BaseModel):
    seq: int
    map_id: str
    map_hash: str


class PlaceStickerEvent(BaseModel):
    type: Literal["place_sticker"]
    sticker_id: str | None = None
    map_id: str
    kind: Literal["requirement", "solution"]
    text: str = ""
    position: tuple[float, float]
    author: str
    anchored_terms: list[str] = Field(default_factory=list)
    answers: str | None = None


class EditStickerEvent(BaseModel):
    type: Literal["edit_sticker"]
    sticker_id: str
    author: str
    text: str | None = None
    position: tuple[float, float] | None = None
    anchored_terms: list[str] | None = None
    base_seq: int | None = None


class DeleteStickerEvent(BaseModel):
    type: Literal["delete_sticker"]
    sticker_id: str
    author: str


class CastPreferenceEvent(BaseModel):
    type: Literal["cast_preference"]
    participant: str
    map_id: str


EventRequest = Annotated[
    Union[PlaceStickerEvent, EditStickerEvent, DeleteStickerEvent, CastPreferenceEvent],
    Field(discriminator="type"),
]


class EventAck(BaseModel):
    seq: int
    sticker_id: str | None = None


class StickerModel(BaseModel):
    sticker_id: str
    session_id: str
    map_id: str
    kind: str
    text: str
    position: tuple[float, float]
    author: str
    created_at: str
    anchored_terms: list[str]
    answers: str | None = None


class StateResponse(BaseModel):
    session_id: str
    title: str
    latest_seq: int
    maps: dict[str, str]
    stickers: list[StickerModel]
    preferences: dict[str, str]
    events: list[dict]


class MapTallyModel(BaseModel):
    requirements: int
    solutions: int
    preference_votes: int


class TallyResponse(BaseModel):
    session_id: str
    maps: dict[str, MapTallyModel]
