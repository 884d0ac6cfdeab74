"""Parsing and canonical serialization of catalog documents.

Documents are JSON objects validated against the schemas shipped in
``leafgraph/schemas``. Serialization is deterministic: sorted keys, sorted
nodes/edges, LF line endings, positions rounded to six decimals; a parsed
entity serializes to the same bytes no matter how its source document was
ordered.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any, Iterable

import jsonschema

from .errors import (
    DanglingEdgeError,
    DocumentError,
    DuplicateVariableNameError,
    EmptyLabelError,
    FrameMemberMissingError,
    InvalidEntityError,
    MalformedDocumentError,
    MissingFieldError,
)
from .model import (
    DataJacket,
    DataLeaf,
    EdgeKind,
    ElementKind,
    Entity,
    FeatureConcept,
    Frame,
    ScenarioEdge,
    ScenarioGraph,
    ScenarioNode,
    graph_from_chains,
    validate,
)
from .normalize import normalize_label

_ROUND = 6


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    text = resources.files("leafgraph.schemas").joinpath(f"{name}.json").read_text("utf-8")
    return json.loads(text)


@lru_cache(maxsize=None)
def _validator(name: str) -> jsonschema.Validator:
    schema = load_schema(name)
    registry = None
    try:
        from referencing import Registry, Resource

        registry = Registry().with_resources(
            (f"leafgraph/{n}.json", Resource.from_contents(load_schema(n)))
            for n in ("graph", "jacket", "leaf", "fc", "lexicon", "map")
        )
    except ImportError:
        pass
    cls = jsonschema.validators.validator_for(schema)
    if registry is not None:
        return cls(schema, registry=registry)
    return cls(schema)


def _check_schema(doc: Any, name: str, required: Iterable[str]) -> None:
    if not isinstance(doc, dict):
        raise MalformedDocumentError(f"expected a JSON object, got {type(doc).__name__}")
    for key in required:
        if key not in doc:
            raise MissingFieldError(key)
    errors = sorted(_validator(name).iter_errors(doc), key=str)
    if errors:
        first = errors[0]
        raise MalformedDocumentError(f"{name} document invalid: {first.message}")


def _parse_graph(doc: dict) -> ScenarioGraph:
    nodes: list[ScenarioNode] = []
    for raw in doc.get("nodes", ()):
        label = normalize_label(raw["label"])
        if not label:
            raise EmptyLabelError(f"node {raw['node_id']!r} has an empty label")
        position = tuple(float(c) for c in raw["position"]) if "position" in raw else None
        nodes.append(
            ScenarioNode(
                node_id=raw["node_id"],
                label=label,
                kind=ElementKind(raw.get("kind", "situation")),
                display=raw.get("display", raw["label"]).strip() or label,
                position=position,
            )
        )
    ids = {n.node_id for n in nodes}
    if len(ids) != len(nodes):
        raise MalformedDocumentError("duplicate node ids in graph")
    edges: list[ScenarioEdge] = []
    for raw in doc.get("edges", ()):
        src, dst = raw["src"], raw["dst"]
        if src not in ids or dst not in ids:
            raise DanglingEdgeError(src, dst)
        if src == dst:
            raise MalformedDocumentError(f"self-loop on node {src!r}")
        edges.append(
            ScenarioEdge(
                src=src,
                dst=dst,
                directed=raw.get("directed", True),
                kind=EdgeKind(raw.get("kind", "unspecified")),
            )
        )
    return ScenarioGraph.build(nodes, edges)


def _graph_with_chains(doc: dict) -> ScenarioGraph:
    graph = _parse_graph(doc.get("graph", {}))
    chains = doc.get("chains", ())
    if chains:
        graph = graph_from_chains(list(chains), base=graph)
    return graph


def parse_data_jacket(doc: dict) -> DataJacket:
    """Build a DataJacket from its JSON document form."""
    _check_schema(doc, "jacket", required=("id", "title"))
    variables = tuple(doc.get("variables", ()))
    seen: set[str] = set()
    for v in variables:
        key = normalize_label(v)
        if not key:
            raise EmptyLabelError(f"blank variable name {v!r}")
        if key in seen:
            raise DuplicateVariableNameError(v)
        seen.add(key)
    return DataJacket(
        id=doc["id"],
        title=doc["title"],
        abstract=doc.get("abstract", ""),
        variables=variables,
        analysis=doc.get("analysis"),
        outcome=doc.get("outcome"),
        anticipation=doc.get("anticipation"),
        comments=doc.get("comments"),
    )


def parse_data_leaf(doc: dict) -> DataLeaf:
    """Build a DataLeaf; ``chains`` shorthand expands into the graph."""
    _check_schema(doc, "leaf", required=("id", "title"))
    return DataLeaf(
        id=doc["id"],
        title=doc["title"],
        abstract=doc.get("abstract", ""),
        graph=_graph_with_chains(doc),
        boundary_variables=tuple(doc.get("boundary_variables", ())),
        source_jacket=doc.get("source_jacket"),
    )


def parse_feature_concept(doc: dict) -> FeatureConcept:
    """Build a FeatureConcept; frames must reference existing nodes."""
    _check_schema(doc, "fc", required=("id", "title"))
    graph = _graph_with_chains(doc)
    ids = graph.node_ids()
    frames: list[Frame] = []
    for raw in doc.get("frames", ()):
        for member in raw["members"]:
            if member not in ids:
                raise FrameMemberMissingError(raw["frame_id"], member)
        frames.append(
            Frame(
                frame_id=raw["frame_id"],
                label=raw.get("label", raw["frame_id"]),
                member_nodes=frozenset(raw["members"]),
            )
        )
    return FeatureConcept(
        id=doc["id"],
        title=doc["title"],
        abstract=doc.get("abstract", ""),
        graph=graph,
        frames=tuple(frames),
        version=doc.get("version", 0),
    )


# --- canonical document form -------------------------------------------------


def _round(x: float) -> float:
    return round(float(x), _ROUND)


def graph_to_doc(graph: ScenarioGraph) -> dict:
    nodes = []
    for n in graph.nodes:
        node: dict[str, Any] = {
            "node_id": n.node_id,
            "label": n.label,
            "kind": n.kind.value,
            "display": n.display,
        }
        if n.position is not None:
            node["position"] = [_round(n.position[0]), _round(n.position[1])]
        nodes.append(node)
    edges = [
        {"src": e.src, "dst": e.dst, "directed": e.directed, "kind": e.kind.value}
        for e in graph.edges
    ]
    return {"nodes": nodes, "edges": edges}


def entity_to_doc(entity: Entity) -> dict:
    """Canonical document form of an entity (chains always expanded)."""
    if isinstance(entity, DataJacket):
        doc: dict[str, Any] = {
            "id": entity.id,
            "title": entity.title,
            "abstract": entity.abstract,
            "variables": list(entity.variables),
        }
        for key in ("analysis", "outcome", "anticipation", "comments"):
            value = getattr(entity, key)
            if value is not None:
                doc[key] = value
        return doc
    if isinstance(entity, DataLeaf):
        doc = {
            "id": entity.id,
            "title": entity.title,
            "abstract": entity.abstract,
            "graph": graph_to_doc(entity.graph),
            "boundary_variables": list(entity.boundary_variables),
        }
        if entity.source_jacket is not None:
            doc["source_jacket"] = entity.source_jacket
        return doc
    if isinstance(entity, FeatureConcept):
        return {
            "id": entity.id,
            "title": entity.title,
            "abstract": entity.abstract,
            "graph": graph_to_doc(entity.graph),
            "frames": [
                {
                    "frame_id": f.frame_id,
                    "label": f.label,
                    "members": sorted(f.member_nodes),
                }
                for f in entity.frames
            ],
            "version": entity.version,
        }
    raise TypeError(f"not a catalog entity: {type(entity).__name__}")


def canonical_dumps(doc: Any) -> str:
    """Deterministic JSON text: sorted keys, two-space indent, LF endings."""
    return json.dumps(doc, ensure_ascii=False, sort_keys=True, indent=2) + "\n"


def serialize(entity: Entity) -> bytes:
    """Canonical UTF-8 bytes for a valid entity.

    Raises InvalidEntityError when the entity fails its invariants, so
    malformed values can never reach disk.
    """
    violations = validate(entity)
    if violations:
        raise InvalidEntityError(violations)
    return canonical_dumps(entity_to_doc(entity)).encode("utf-8")


def parse_entity(doc: dict) -> Entity:
    """Dispatch on document shape: frames/version -> concept, graph/chains -> leaf."""
    if not isinstance(doc, dict):
        raise MalformedDocumentError("expected a JSON object")
    if "frames" in doc or "version" in doc:
        return parse_feature_concept(doc)
    if "graph" in doc or "chains" in doc or "boundary_variables" in doc or "source_jacket" in doc:
        return parse_data_leaf(doc)
    return parse_data_jacket(doc)


# --- directory catalogs -------------------------------------------------------


def _load_json(path: Path) -> dict:
    try:
        return json.loads(path.read_text("utf-8"))
    except json.JSONDecodeError as exc:
        raise MalformedDocumentError(f"{path}: {exc}") from exc


def load_jackets(directory: Path) -> list[DataJacket]:
    return [parse_data_jacket(_load_json(p)) for p in sorted(Path(directory).glob("*.json"))]


def load_leaves(directory: Path) -> list[DataLeaf]:
    return [parse_data_leaf(_load_json(p)) for p in sorted(Path(directory).glob("*.json"))]


def load_feature_concept(path: Path) -> FeatureConcept:
    return parse_feature_concept(_load_json(Path(path)))


def write_entity(entity: Entity, path: Path) -> None:
    Path(path).write_bytes(serialize(entity))


__all__ = [
    "parse_data_jacket",
    "parse_data_leaf",
    "parse_feature_concept",
    "parse_entity",
    "entity_to_doc",
    "graph_to_doc",
    "canonical_dumps",
    "serialize",
    "load_jackets",
    "load_leaves",
    "load_feature_concept",
    "write_entity",
    "load_schema",
    "DocumentError",
]
