"""Quantitative reports over maps and replayed sessions.

Covers the three measurements the live sessions rely on: how many (and
which kind of) terms each source entity is connected to on a map, sticker
tallies per map, and how close stickers sit to functional versus index
terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import MissingClassError, NoAnchorsError, NoStickersError
from .keygraph import ANCHOR_PREFIX, KeyGraphMap, NodeRole
from .translator import FunctionalityLevel, Lexicon, classify_variable


@dataclass(frozen=True)
class EntityDegrees:
    degree: int
    situational_degree: int


@dataclass(frozen=True)
class DegreeReport:
    """Per-entity adjacency counts on a map.

    ``degree`` counts distinct non-anchor terms adjacent to the entity's
    anchor node; ``situational_degree`` counts the subset the lexicon
    classifies as non-index (functional or state-like).
    """

    per_entity: dict[int, EntityDegrees]

    def to_doc(self) -> dict:
        return {
            str(entity_id): {
                "degree": d.degree,
                "situational_degree": d.situational_degree,
            }
            for entity_id, d in sorted(self.per_entity.items())
        }


def _is_situational(term: str, lex: Lexicon) -> bool:
    return classify_variable(term, lex) is not FunctionalityLevel.INDEX


def degree_report(graph_map: KeyGraphMap, lex: Lexicon) -> DegreeReport:
    anchors = [n for n in graph_map.nodes if n.role is NodeRole.ENTITY_ANCHOR]
    if not anchors:
        raise NoAnchorsError("map carries no entity anchors")
    anchor_terms = {n.term for n in anchors}
    per_entity: dict[int, EntityDegrees] = {}
    for node in anchors:
        adjacent = sorted(graph_map.adjacency(node.term) - anchor_terms)
        situational = [t for t in adjacent if _is_situational(t, lex)]
        entity_id = int(node.term.removeprefix(ANCHOR_PREFIX))
        per_entity[entity_id] = EntityDegrees(
            degree=len(adjacent), situational_degree=len(situational)
        )
    return DegreeReport(per_entity=per_entity)


@dataclass(frozen=True)
class MapTally:
    requirements: int
    solutions: int
    preference_votes: int


def tally(state) -> dict[str, MapTally]:
    """Live sticker and preference counts per map id.

    ``state`` is a replayed session state (see service.store); maps with
    no activity still appear when attached. Preference votes count each
    participant's current vote once.
    """
    map_ids = set(state.maps)
    map_ids.update(s.map_id for s in state.stickers.values())
    map_ids.update(state.preferences.values())
    out: dict[str, MapTally] = {}
    for map_id in sorted(map_ids):
        live = [s for s in state.stickers.values() if s.map_id == map_id]
        out[map_id] = MapTally(
            requirements=sum(1 for s in live if s.kind == "requirement"),
            solutions=sum(1 for s in live if s.kind == "solution"),
            preference_votes=sum(1 for v in state.preferences.values() if v == map_id),
        )
    return out


def tally_doc(state) -> dict:
    return {
        map_id: {
            "requirements": t.requirements,
            "solutions": t.solutions,
            "preference_votes": t.preference_votes,
        }
        for map_id, t in tally(state).items()
    }


@dataclass(frozen=True)
class StickerDistance:
    sticker_id: str
    nearest_functional: str
    dist_functional: float
    nearest_nonfunctional: str
    dist_nonfunctional: float


@dataclass(frozen=True)
class ProximityReport:
    mean_dist_functional: float
    mean_dist_nonfunctional: float
    per_sticker: tuple[StickerDistance, ...]

    def to_doc(self) -> dict:
        return {
            "mean_dist_functional": round(self.mean_dist_functional, 6),
            "mean_dist_nonfunctional": round(self.mean_dist_nonfunctional, 6),
            "per_sticker": [
                {
                    "sticker_id": r.sticker_id,
                    "nearest_functional": r.nearest_functional,
                    "dist_functional": round(r.dist_functional, 6),
                    "nearest_nonfunctional": r.nearest_nonfunctional,
                    "dist_nonfunctional": round(r.dist_nonfunctional, 6),
                }
                for r in self.per_sticker
            ],
        }


def sticker_proximity(
    graph_map: KeyGraphMap, stickers, lex: Lexicon
) -> ProximityReport:
    """Distance from each sticker to the nearest term of each class.

    Terms classified non-index by the lexicon form the functional class,
    index terms the non-functional one; entity anchors belong to neither.
    Distances are Euclidean in map units, so the report is invariant under
    rigid motions of the layout.
    """
    stickers = list(stickers)
    if not stickers:
        raise NoStickersError("no stickers to measure")
    functional: list = []
    nonfunctional: list = []
    for node in graph_map.nodes:
        if node.role is NodeRole.ENTITY_ANCHOR:
            continue
        (functional if _is_situational(node.term, lex) else nonfunctional).append(node)
    if not functional or not nonfunctional:
        raise MissingClassError(
            "proximity needs both functional and non-functional terms on the map"
        )

    def nearest(nodes, x: float, y: float):
        best = min(nodes, key=lambda n: (math.dist((x, y), n.position), n.term))
        return best.term, math.dist((x, y), best.position)

    records = []
    for sticker in stickers:
        x, y = sticker.position
        f_term, f_dist = nearest(functional, x, y)
        n_term, n_dist = nearest(nonfunctional, x, y)
        records.append(
            StickerDistance(
                sticker_id=sticker.sticker_id,
                nearest_functional=f_term,
                dist_functional=f_dist,
                nearest_nonfunctional=n_term,
                dist_nonfunctional=n_dist,
            )
        )
    return ProximityReport(
        mean_dist_functional=sum(r.dist_functional for r in records) / len(records),
        mean_dist_nonfunctional=sum(r.dist_nonfunctional for r in records) / len(records),
        per_sticker=tuple(records),
    )
