"""Fitting a leaf catalog around a feature concept.

The concept is divided into islands (authored frames, or connected
components of its structural edges), leaves are matched node-by-node via
label similarity, shared nodes across several leaves become bridges, and
uncovered regions are reported as draft leaf stubs to register next.

Wrapping never rewrites the concept: node set and edge multiset are
preserved exactly; only the version counter advances.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .documents import entity_to_doc
from .errors import BadThresholdError
from .model import (
    DataLeaf,
    EdgeKind,
    ElementKind,
    FeatureConcept,
    Frame,
    ScenarioEdge,
    ScenarioGraph,
    ScenarioNode,
)
from .normalize import normalize_label

STRUCTURAL_EDGE_KINDS = frozenset(
    {EdgeKind.CAUSALITY, EdgeKind.ORDER, EdgeKind.CONTINUITY, EdgeKind.UNSPECIFIED}
)
DEFAULT_THRESHOLD = 0.5


def divide_into_islands(fc: FeatureConcept) -> list[Frame]:
    """Authored frames when present; otherwise one frame per connected
    component over structural (non-relevance) edges."""
    if fc.frames:
        return list(fc.frames)
    parent = {n.node_id: n.node_id for n in fc.graph.nodes}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in fc.graph.edges:
        if e.kind in STRUCTURAL_EDGE_KINDS:
            ra, rb = find(e.src), find(e.dst)
            if ra != rb:
                parent[ra] = rb
    components: dict[str, list[str]] = {}
    for node_id in sorted(parent):
        components.setdefault(find(node_id), []).append(node_id)
    label_of = {n.node_id: n.label for n in fc.graph.nodes}
    groups = sorted(components.values(), key=lambda members: min(members))
    return [
        Frame(
            frame_id=f"island-{i}",
            label=min(label_of[m] for m in members),
            member_nodes=frozenset(members),
        )
        for i, members in enumerate(groups, start=1)
    ]


def similarity(a: str, b: str) -> float:
    """Jaccard index over whitespace-token sets of normalized labels."""
    ta = set(normalize_label(a).split())
    tb = set(normalize_label(b).split())
    if not ta and not tb:
        return 1.0
    if not ta or not tb:
        return 0.0
    return len(ta & tb) / len(ta | tb)


@dataclass(frozen=True)
class NodeMatch:
    fc_node: str
    dl_id: int
    dl_node: str
    similarity: float


@dataclass(frozen=True)
class WrappedFC:
    fc: FeatureConcept
    assignments: tuple[NodeMatch, ...]
    bridges: tuple[str, ...]
    uncovered: tuple[str, ...]

    def matched_nodes(self) -> set[str]:
        return {m.fc_node for m in self.assignments}


def wrap(
    fc: FeatureConcept,
    leaves: list[DataLeaf],
    threshold: float = DEFAULT_THRESHOLD,
) -> WrappedFC:
    """Match concept nodes against leaf nodes at the given similarity bar.

    Per (concept node, leaf) pair only the best-matching leaf node is kept
    (ties go to the lowest node id). Nodes matched by two or more distinct
    leaves are bridges; unmatched nodes are reported uncovered.
    """
    if not (0.0 < threshold <= 1.0):
        raise BadThresholdError(threshold)
    assignments: list[NodeMatch] = []
    for fc_node in fc.graph.nodes:
        for leaf in leaves:
            best: NodeMatch | None = None
            for dl_node in leaf.graph.nodes:
                score = similarity(fc_node.label, dl_node.label)
                if score < threshold:
                    continue
                if (
                    best is None
                    or score > best.similarity
                    or (score == best.similarity and dl_node.node_id < best.dl_node)
                ):
                    best = NodeMatch(
                        fc_node=fc_node.node_id,
                        dl_id=leaf.id,
                        dl_node=dl_node.node_id,
                        similarity=score,
                    )
            if best is not None:
                assignments.append(best)
    by_node: dict[str, set[int]] = {}
    for m in assignments:
        by_node.setdefault(m.fc_node, set()).add(m.dl_id)
    bridges = tuple(sorted(node for node, ids in by_node.items() if len(ids) >= 2))
    uncovered = tuple(
        sorted(n.node_id for n in fc.graph.nodes if n.node_id not in by_node)
    )
    return WrappedFC(
        fc=replace(fc, version=fc.version + 1),
        assignments=tuple(assignments),
        bridges=bridges,
        uncovered=uncovered,
    )


def coverage(wrapped: WrappedFC) -> float:
    """Fraction of concept nodes with at least one match; empty concept is 1.0."""
    total = len(wrapped.fc.graph.nodes)
    if total == 0:
        return 1.0
    return len(wrapped.matched_nodes()) / total


def _topological_labels(graph: ScenarioGraph, members: set[str]) -> list[str]:
    """Topological order of a node subset over its directed edges, smallest
    label first among ready nodes; cycles break at the smallest remaining."""
    label_of = {n.node_id: n.label for n in graph.nodes}
    indeg = {m: 0 for m in members}
    succ: dict[str, list[str]] = {m: [] for m in members}
    for e in graph.edges:
        if e.directed and e.src in members and e.dst in members:
            indeg[e.dst] += 1
            succ[e.src].append(e.dst)
    order: list[str] = []
    remaining = set(members)
    while remaining:
        ready = sorted(
            (m for m in remaining if indeg[m] == 0), key=lambda m: (label_of[m], m)
        )
        pick = ready[0] if ready else sorted(remaining, key=lambda m: (label_of[m], m))[0]
        order.append(pick)
        remaining.discard(pick)
        for nxt in succ[pick]:
            if nxt in remaining:
                indeg[nxt] -= 1
    return [label_of[m] for m in order]


def gap_report(wrapped: WrappedFC) -> list[DataLeaf]:
    """Draft leaf stubs, one per connected uncovered region of the concept.

    Each stub strings the region's labels into a single scenario chain in
    topological order and gets a fresh negative placeholder id so it can
    be edited and registered later.
    """
    uncovered = set(wrapped.uncovered)
    if not uncovered:
        return []
    graph = wrapped.fc.graph
    parent = {m: m for m in uncovered}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in graph.edges:
        if e.src in uncovered and e.dst in uncovered:
            ra, rb = find(e.src), find(e.dst)
            if ra != rb:
                parent[ra] = rb
    regions: dict[str, set[str]] = {}
    for m in uncovered:
        regions.setdefault(find(m), set()).add(m)
    label_of = {n.node_id: n.label for n in graph.nodes}
    ordered_regions = sorted(regions.values(), key=lambda ms: min(label_of[m] for m in ms))

    stubs: list[DataLeaf] = []
    for i, members in enumerate(ordered_regions, start=1):
        labels = _topological_labels(graph, members)
        kind_of = {n.label: n.kind for n in graph.nodes if n.node_id in members}
        stub_nodes: dict[str, ScenarioNode] = {}
        stub_edges: list[ScenarioEdge] = []
        for label in labels:
            stub_nodes.setdefault(
                label,
                ScenarioNode(
                    node_id=label,
                    label=label,
                    kind=kind_of.get(label, ElementKind.SITUATION),
                ),
            )
        for prev, cur in zip(labels, labels[1:]):
            if prev != cur:
                stub_edges.append(ScenarioEdge(src=prev, dst=cur))
        stub_graph = ScenarioGraph.build(stub_nodes.values(), stub_edges)
        stubs.append(
            DataLeaf(
                id=-i,
                title="draft: " + " / ".join(labels[:3]),
                abstract="suggested leaf for an uncovered concept region",
                graph=stub_graph,
            )
        )
    return stubs


def fit_report_doc(wrapped: WrappedFC, threshold: float) -> dict:
    """Wire form of a wrapping run (schema: fit_report.json)."""
    stubs = gap_report(wrapped)
    return {
        "fc_id": wrapped.fc.id,
        "fc_version": wrapped.fc.version,
        "threshold": threshold,
        "coverage": coverage(wrapped),
        "assignments": [
            {
                "fc_node": m.fc_node,
                "dl_id": m.dl_id,
                "dl_node": m.dl_node,
                "similarity": round(m.similarity, 6),
            }
            for m in sorted(
                wrapped.assignments, key=lambda m: (m.fc_node, m.dl_id, m.dl_node)
            )
        ],
        "bridges": list(wrapped.bridges),
        "uncovered": list(wrapped.uncovered),
        "gap_stubs": [entity_to_doc(stub) for stub in stubs],
    }
