"""Core value types: scenario graphs, data jackets, data leaves, feature concepts.

All types are immutable values; graphs are canonicalized on construction
(nodes sorted by id, undirected edges with lexicographic endpoint order,
edges sorted) so that equal content compares equal regardless of input
ordering.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Sequence, Union

from .errors import MalformedChainError
from .normalize import normalize_label


class ElementKind(str, Enum):
    """What a scenario node stands for."""

    EVENT = "event"
    SITUATION = "situation"
    ENTITY = "entity"
    ACTION = "action"


class EdgeKind(str, Enum):
    """Relationship expressed by a scenario edge."""

    CAUSALITY = "causality"
    ORDER = "order"
    CONTINUITY = "continuity"
    RELEVANCE = "relevance"
    UNSPECIFIED = "unspecified"


@dataclass(frozen=True)
class ScenarioNode:
    """One node of a scenario graph.

    ``label`` is the normalized form used for identity and matching;
    ``display`` keeps the original casing for rendering.
    """

    node_id: str
    label: str
    kind: ElementKind = ElementKind.SITUATION
    display: str = ""
    position: tuple[float, float] | None = None

    def __post_init__(self):
        if not self.display:
            object.__setattr__(self, "display", self.label)


@dataclass(frozen=True)
class ScenarioEdge:
    src: str
    dst: str
    directed: bool = True
    kind: EdgeKind = EdgeKind.UNSPECIFIED

    def canonical(self) -> "ScenarioEdge":
        """Undirected edges store endpoints in lexicographic order."""
        if not self.directed and self.dst < self.src:
            return replace(self, src=self.dst, dst=self.src)
        return self


def _edge_sort_key(e: ScenarioEdge):
    return (e.src, e.dst, e.kind.value, not e.directed)


@dataclass(frozen=True)
class ScenarioGraph:
    """A set of scenario nodes plus a multiset of edges between them."""

    nodes: tuple[ScenarioNode, ...] = ()
    edges: tuple[ScenarioEdge, ...] = ()

    @classmethod
    def build(
        cls,
        nodes: Iterable[ScenarioNode],
        edges: Iterable[ScenarioEdge] = (),
    ) -> "ScenarioGraph":
        canon_nodes = tuple(sorted(nodes, key=lambda n: n.node_id))
        canon_edges = tuple(
            sorted((e.canonical() for e in edges), key=_edge_sort_key)
        )
        return cls(nodes=canon_nodes, edges=canon_edges)

    def node_ids(self) -> set[str]:
        return {n.node_id for n in self.nodes}

    def get_node(self, node_id: str) -> ScenarioNode | None:
        for n in self.nodes:
            if n.node_id == node_id:
                return n
        return None

    def labels(self) -> set[str]:
        return {n.label for n in self.nodes}

    def relevance_distance(self, a: str, b: str) -> float:
        """Distance between two nodes as a relevance measure.

        Euclidean in map units when both nodes carry positions; otherwise
        the unweighted shortest-path hop count (edges treated as
        undirected), infinity when disconnected.
        """
        na, nb = self.get_node(a), self.get_node(b)
        if na is None or nb is None:
            raise KeyError(f"unknown node: {a if na is None else b}")
        if na.position is not None and nb.position is not None:
            return math.dist(na.position, nb.position)
        if a == b:
            return 0.0
        adjacency: dict[str, set[str]] = {n.node_id: set() for n in self.nodes}
        for e in self.edges:
            adjacency[e.src].add(e.dst)
            adjacency[e.dst].add(e.src)
        frontier, seen, hops = {a}, {a}, 0
        while frontier:
            hops += 1
            frontier = {m for n in frontier for m in adjacency[n]} - seen
            if b in frontier:
                return float(hops)
            seen |= frontier
        return math.inf


@dataclass(frozen=True)
class DataJacket:
    """Variable-list metadata for one dataset (no dataset contents)."""

    id: int
    title: str
    abstract: str = ""
    variables: tuple[str, ...] = ()
    analysis: str | None = None
    outcome: str | None = None
    anticipation: str | None = None
    comments: str | None = None


@dataclass(frozen=True)
class DataLeaf:
    """Scenario-graph metadata for one dataset.

    ``boundary_variables`` are the source variables annotated on the leaf
    border; when ``source_jacket`` is set they must be a subset of that
    jacket's variables.
    """

    id: int
    title: str
    abstract: str = ""
    graph: ScenarioGraph = field(default_factory=ScenarioGraph)
    boundary_variables: tuple[str, ...] = ()
    source_jacket: int | None = None


@dataclass(frozen=True)
class Frame:
    """A context grouping of nodes inside a feature concept."""

    frame_id: str
    label: str
    member_nodes: frozenset[str] = frozenset()


@dataclass(frozen=True)
class FeatureConcept:
    """Purpose-level scenario sketch the leaf catalog is meant to cover."""

    id: int
    title: str
    abstract: str = ""
    graph: ScenarioGraph = field(default_factory=ScenarioGraph)
    frames: tuple[Frame, ...] = ()
    version: int = 0


Entity = Union[DataJacket, DataLeaf, FeatureConcept]


# --- chain notation -------------------------------------------------------
#
# Shorthand for authoring scenario graphs: "a -> b -> c" is a directed path;
# commas separate parallel chains within one string.

_ARROW_SPLIT = "→"  # canonical arrow


def parse_chain_text(text: str) -> list[list[str]]:
    """Split chain shorthand into label sequences.

    Accepts both the arrow character and "->"; raises MalformedChainError
    for empty segments, single-label "chains", and consecutive repeats
    (which would form self-loops).
    """
    out: list[list[str]] = []
    for part in text.replace("->", _ARROW_SPLIT).split(","):
        part = part.strip()
        if not part:
            raise MalformedChainError(f"empty chain in {text!r}")
        labels = [seg.strip() for seg in part.split(_ARROW_SPLIT)]
        if any(not seg for seg in labels):
            raise MalformedChainError(f"empty label in chain {part!r}")
        if len(labels) < 2:
            raise MalformedChainError(f"chain needs at least two labels: {part!r}")
        normalized = [normalize_label(seg) for seg in labels]
        for prev, cur in zip(normalized, normalized[1:]):
            if prev == cur:
                raise MalformedChainError(f"self-loop in chain {part!r}: {cur!r}")
        out.append(labels)
    return out


def graph_from_chains(
    chain_texts: Sequence[str],
    base: ScenarioGraph | None = None,
    kind: ElementKind = ElementKind.SITUATION,
) -> ScenarioGraph:
    """Expand chain shorthand into a graph, merging nodes by normalized label.

    Labels that already exist in ``base`` (by normalized form) reuse that
    node; new nodes get their normalized label as node id. Edges are
    directed and unspecified.
    """
    nodes: dict[str, ScenarioNode] = {}
    by_label: dict[str, str] = {}
    if base is not None:
        for n in base.nodes:
            nodes[n.node_id] = n
            by_label.setdefault(n.label, n.node_id)
    edges: list[ScenarioEdge] = list(base.edges) if base is not None else []

    def node_for(raw: str) -> str:
        label = normalize_label(raw)
        if not label:
            raise MalformedChainError(f"label empty after normalization: {raw!r}")
        if label in by_label:
            return by_label[label]
        node_id = label
        if node_id in nodes:
            raise MalformedChainError(
                f"chain label {label!r} collides with node id of a different label"
            )
        nodes[node_id] = ScenarioNode(node_id=node_id, label=label, kind=kind, display=raw.strip())
        by_label[label] = node_id
        return node_id

    for text in chain_texts:
        for labels in parse_chain_text(text):
            ids = [node_for(raw) for raw in labels]
            for src, dst in zip(ids, ids[1:]):
                if src == dst:
                    raise MalformedChainError(f"self-loop in chain: {src!r}")
                edges.append(ScenarioEdge(src=src, dst=dst))
    return ScenarioGraph.build(nodes.values(), edges)


def decompose_chains(graph: ScenarioGraph) -> list[list[str]]:
    """Decompose the directed edges into maximal paths of node labels.

    Every directed edge is consumed exactly once; traversal is greedy with
    lexicographic tie-breaking so the decomposition is deterministic. Nodes
    touched by no directed edge come last as singleton paths. The union of
    path labels therefore equals the graph's label set.
    """
    order = {n.node_id: n for n in graph.nodes}
    out_edges: dict[str, list[int]] = {n.node_id: [] for n in graph.nodes}
    in_remaining: Counter[str] = Counter()
    directed = [e for e in graph.edges if e.directed]
    for i, e in enumerate(directed):
        out_edges[e.src].append(i)
        in_remaining[e.dst] += 1
    for lst in out_edges.values():
        lst.sort(key=lambda i: directed[i].dst)
    consumed = [False] * len(directed)
    out_next = {nid: 0 for nid in out_edges}

    def has_out(nid: str) -> bool:
        return out_next[nid] < len(out_edges[nid])

    paths: list[list[str]] = []
    covered: set[str] = set()
    while any(not c for c in consumed):
        starts = [nid for nid in sorted(out_edges) if has_out(nid) and in_remaining[nid] == 0]
        if not starts:
            # only cycles remain; break at the smallest id with pending edges
            starts = [nid for nid in sorted(out_edges) if has_out(nid)]
        cur = starts[0]
        path = [cur]
        while has_out(cur):
            idx = out_edges[cur][out_next[cur]]
            out_next[cur] += 1
            consumed[idx] = True
            nxt = directed[idx].dst
            in_remaining[nxt] -= 1
            path.append(nxt)
            cur = nxt
        paths.append([order[nid].label for nid in path])
        covered.update(path)
    for nid in sorted(order):
        if nid not in covered:
            paths.append([order[nid].label])
    return paths


# --- invariant checking -----------------------------------------------------


@dataclass(frozen=True)
class Violation:
    """One failed invariant on an entity; violations are data, not errors."""

    code: str
    field: str
    message: str


def _graph_violations(graph: ScenarioGraph, where: str) -> list[Violation]:
    out: list[Violation] = []
    seen_ids: set[str] = set()
    for n in graph.nodes:
        if n.node_id in seen_ids:
            out.append(Violation("DuplicateNodeId", f"{where}.nodes", f"node id {n.node_id!r} repeats"))
        seen_ids.add(n.node_id)
        if not n.label or normalize_label(n.label) != n.label:
            out.append(Violation("LabelNotNormalized", f"{where}.nodes", f"label {n.label!r} on node {n.node_id!r}"))
        if n.position is not None and not all(math.isfinite(c) for c in n.position):
            out.append(Violation("NonFinitePosition", f"{where}.nodes", f"node {n.node_id!r}"))
    for e in graph.edges:
        if e.src == e.dst:
            out.append(Violation("SelfLoop", f"{where}.edges", f"{e.src!r} -> {e.dst!r}"))
        for endpoint in (e.src, e.dst):
            if endpoint not in seen_ids:
                out.append(Violation("DanglingEdge", f"{where}.edges", f"missing endpoint {endpoint!r}"))
        if not e.directed and e.dst < e.src:
            out.append(Violation("EdgeNotCanonical", f"{where}.edges", f"{e.src!r} -- {e.dst!r}"))
    return out


def validate(
    entity: Entity,
    jackets: dict[int, DataJacket] | None = None,
) -> list[Violation]:
    """Check every type invariant; an empty list means the entity is valid.

    ``jackets`` supplies catalog context for the leaf boundary-variable
    check; without it that check is skipped.
    """
    out: list[Violation] = []
    if isinstance(entity, DataJacket):
        seen: set[str] = set()
        for v in entity.variables:
            if not normalize_label(v):
                out.append(Violation("EmptyVariableName", "variables", f"variable {v!r}"))
            key = normalize_label(v)
            if key in seen:
                out.append(Violation("DuplicateVariableName", "variables", f"variable {v!r}"))
            seen.add(key)
        if not entity.title.strip():
            out.append(Violation("EmptyTitle", "title", "title is blank"))
        return out

    if isinstance(entity, DataLeaf):
        out.extend(_graph_violations(entity.graph, "graph"))
        if entity.source_jacket is not None and jackets is not None:
            jacket = jackets.get(entity.source_jacket)
            if jacket is None:
                out.append(
                    Violation("UnknownSourceJacket", "source_jacket", f"jacket {entity.source_jacket} not in catalog")
                )
            else:
                allowed = {normalize_label(v) for v in jacket.variables}
                for v in entity.boundary_variables:
                    if normalize_label(v) not in allowed:
                        out.append(
                            Violation(
                                "BoundaryVariableNotInJacket",
                                "boundary_variables",
                                f"variable {v!r} absent from jacket {entity.source_jacket}",
                            )
                        )
        return out

    if isinstance(entity, FeatureConcept):
        out.extend(_graph_violations(entity.graph, "graph"))
        ids = entity.graph.node_ids()
        seen_frames: set[str] = set()
        for f in entity.frames:
            if f.frame_id in seen_frames:
                out.append(Violation("DuplicateFrameId", "frames", f"frame {f.frame_id!r} repeats"))
            seen_frames.add(f.frame_id)
            for m in sorted(f.member_nodes):
                if m not in ids:
                    out.append(Violation("FrameMemberMissing", "frames", f"frame {f.frame_id!r} member {m!r}"))
        if entity.version < 0:
            out.append(Violation("NegativeVersion", "version", f"version {entity.version}"))
        return out

    raise TypeError(f"not a catalog entity: {type(entity).__name__}")
