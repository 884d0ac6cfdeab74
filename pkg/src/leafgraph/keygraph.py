"""Connectivity maps over a catalog: term islands plus bridging keys.

The pipeline turns a corpus of leaf (or jacket) documents into a map:

1. frequent terms become *foundation* nodes (black);
2. the strongest co-occurrence links among foundations form *islands*;
3. remaining terms are scored by how strongly they touch several islands,
   and the best become *key* nodes (red) bridging those islands;
4. each source entity appears as an *anchor* node linked to its own terms.

All statistics are rank-based with lexicographic tie-breaking, so the map
is a deterministic function of (entities, params, seed) and is invariant
under replicating the corpus.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import EmptyCorpusError, EmptyInputError
from .model import DataJacket, DataLeaf, decompose_chains
from .normalize import normalize_label, word_tokens

ANCHOR_PREFIX = "#"


def anchor_term(entity_id: int) -> str:
    return f"{ANCHOR_PREFIX}{entity_id}"


@dataclass(frozen=True)
class CorpusDocument:
    entity_id: int
    sentences: tuple[tuple[str, ...], ...]


@dataclass(frozen=True)
class Corpus:
    """Sentence-structured view of a catalog.

    Every sentence carries its document's anchor term, so anchors co-occur
    with exactly the terms of their own entity. Anchor terms never compete
    for foundation or key roles.
    """

    documents: tuple[CorpusDocument, ...]
    anchor_terms: frozenset[str]

    def term_source(self) -> dict[str, set[int]]:
        sources: dict[str, set[int]] = {}
        for doc in self.documents:
            for sentence in doc.sentences:
                for term in sentence:
                    sources.setdefault(term, set()).add(doc.entity_id)
        return sources

    def sentences(self) -> Iterable[tuple[str, ...]]:
        for doc in self.documents:
            yield from doc.sentences

    def terms(self) -> set[str]:
        return {t for s in self.sentences() for t in s}

    def replicate(self, k: int) -> "Corpus":
        return Corpus(documents=self.documents * k, anchor_terms=self.anchor_terms)


def _leaf_sentences(leaf: DataLeaf) -> list[list[str]]:
    return [list(path) for path in decompose_chains(leaf.graph)]


def _jacket_sentences(jacket: DataJacket) -> list[list[str]]:
    sentences = []
    title_terms = word_tokens(jacket.title)
    if title_terms:
        sentences.append(title_terms)
    variable_terms = [normalize_label(v) for v in jacket.variables]
    if variable_terms:
        sentences.append(variable_terms)
    return sentences


def build_corpus(entities: Sequence[DataLeaf | DataJacket]) -> Corpus:
    """One document per entity; leaf chains or jacket title/variable lists
    become sentences, each carrying the entity's anchor term."""
    if not entities:
        raise EmptyInputError("no entities to index")
    documents = []
    anchors = set()
    for entity in entities:
        anchor = anchor_term(entity.id)
        anchors.add(anchor)
        raw = (
            _leaf_sentences(entity)
            if isinstance(entity, DataLeaf)
            else _jacket_sentences(entity)
        )
        sentences = [tuple([anchor, *s]) for s in raw if s]
        if not sentences:
            sentences = [(anchor,)]
        documents.append(CorpusDocument(entity_id=entity.id, sentences=tuple(sentences)))
    return Corpus(documents=tuple(documents), anchor_terms=frozenset(anchors))


# --- statistics -------------------------------------------------------------


class AssocTable:
    """Symmetric sentence-level co-occurrence strengths.

    assoc(a, b) sums min(count_s(a), count_s(b)) over sentences; it is
    undefined (zero) on the diagonal.
    """

    def __init__(self, pairs: Mapping[tuple[str, str], int]):
        self._pairs = dict(pairs)

    def get(self, a: str, b: str) -> int:
        if a == b:
            return 0
        key = (a, b) if a < b else (b, a)
        return self._pairs.get(key, 0)

    def items(self):
        return self._pairs.items()

    def __eq__(self, other):
        return isinstance(other, AssocTable) and self._pairs == other._pairs


def cooccurrence(corpus: Corpus) -> AssocTable:
    pairs: Counter[tuple[str, str]] = Counter()
    for sentence in corpus.sentences():
        counts = Counter(sentence)
        terms = sorted(counts)
        for i, a in enumerate(terms):
            for b in terms[i + 1 :]:
                pairs[(a, b)] += min(counts[a], counts[b])
    return AssocTable(pairs)


def term_frequencies(corpus: Corpus) -> Counter[str]:
    freq: Counter[str] = Counter()
    for sentence in corpus.sentences():
        freq.update(sentence)
    return freq


def extract_foundations(corpus: Corpus, nf: int) -> list[str]:
    """Top-nf non-anchor terms by total frequency; ties alphabetical."""
    freq = term_frequencies(corpus)
    ranked = sorted(
        (t for t in freq if t not in corpus.anchor_terms),
        key=lambda t: (-freq[t], t),
    )
    return ranked[:nf]


def _top_links(
    foundations: Sequence[str], assoc: AssocTable, nl: int
) -> list[tuple[str, str, int]]:
    """The nl strongest positive foundation pairs, strongest first."""
    fset = set(foundations)
    candidates = [
        (a, b, w)
        for (a, b), w in assoc.items()
        if w > 0 and a in fset and b in fset
    ]
    candidates.sort(key=lambda x: (-x[2], x[0], x[1]))
    return candidates[:nl]


def build_islands(
    foundations: Sequence[str], assoc: AssocTable, nl: int
) -> list[tuple[str, ...]]:
    """Partition foundations into islands: connected components of the
    top-nl link graph; unlinked foundations are singleton islands."""
    parent = {t: t for t in foundations}

    def find(t: str) -> str:
        while parent[t] != t:
            parent[t] = parent[parent[t]]
            t = parent[t]
        return t

    for a, b, _ in _top_links(foundations, assoc, nl):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    groups: dict[str, list[str]] = {}
    for t in foundations:
        groups.setdefault(find(t), []).append(t)
    islands = [tuple(sorted(members)) for members in groups.values()]
    islands.sort(key=lambda g: g[0])
    return islands


def score_keys(corpus: Corpus, islands: Sequence[tuple[str, ...]]) -> dict[str, float]:
    """Bridge scores for every non-foundation, non-anchor term.

    based(w, g) accumulates min(count of w, count of island-g terms) per
    sentence; neighbors(g) accumulates island-g term counts in sentences
    that also mention something outside g. The score combines the per-
    island ratios as 1 - prod(1 - based/neighbors): high when w sits next
    to several islands at once.
    """
    island_sets = [frozenset(g) for g in islands]
    foundation_terms = frozenset(t for g in island_sets for t in g)
    neighbors = [0] * len(island_sets)
    based: dict[str, list[int]] = {}

    for sentence in corpus.sentences():
        counts = Counter(sentence)
        total = sum(counts.values())
        for gi, g in enumerate(island_sets):
            g_count = sum(c for t, c in counts.items() if t in g)
            if g_count == 0:
                continue
            if total - g_count > 0:
                neighbors[gi] += g_count
            for term, c in counts.items():
                if term in foundation_terms or term in corpus.anchor_terms:
                    continue
                based.setdefault(term, [0] * len(island_sets))[gi] += min(c, g_count)

    scores: dict[str, float] = {}
    for term in corpus.terms():
        if term in foundation_terms or term in corpus.anchor_terms:
            continue
        rates = based.get(term, [0] * len(island_sets))
        product = 1.0
        for gi in range(len(island_sets)):
            product *= 1.0 - rates[gi] / max(neighbors[gi], 1)
        scores[term] = 1.0 - product
    return scores


def touched_islands(
    corpus: Corpus, term: str, islands: Sequence[tuple[str, ...]]
) -> list[int]:
    """Indices of islands this term shares at least one sentence with."""
    island_sets = [frozenset(g) for g in islands]
    touched = set()
    for sentence in corpus.sentences():
        if term not in sentence:
            continue
        present = set(sentence)
        for gi, g in enumerate(island_sets):
            if present & g:
                touched.add(gi)
    return sorted(touched)


# --- map assembly -------------------------------------------------------------


class NodeRole(str, Enum):
    FOUNDATION = "foundation"
    KEY = "key"
    ENTITY_ANCHOR = "entity_anchor"


_ROLE_COLOR = {
    NodeRole.FOUNDATION: "black",
    NodeRole.KEY: "red",
    NodeRole.ENTITY_ANCHOR: "anchor",
}


class LinkKind(str, Enum):
    ISLAND = "island_link"
    BRIDGE = "bridge_link"


@dataclass(frozen=True)
class MapNode:
    term: str
    role: NodeRole
    sources: tuple[int, ...]
    position: tuple[float, float] = (0.0, 0.0)

    @property
    def display_color(self) -> str:
        return _ROLE_COLOR[self.role]


@dataclass(frozen=True)
class MapEdge:
    a: str
    b: str
    weight: float
    kind: LinkKind

    def canonical(self) -> "MapEdge":
        if self.b < self.a:
            return MapEdge(a=self.b, b=self.a, weight=self.weight, kind=self.kind)
        return self


@dataclass(frozen=True)
class MapParams:
    nf: int = 30
    nl: int = 30
    nk: int = 12

    def __post_init__(self):
        if min(self.nf, self.nl, self.nk) < 1:
            raise ValueError("map parameters must be >= 1")

    @classmethod
    def from_doc(cls, doc: dict) -> "MapParams":
        return cls(nf=doc.get("nf", 30), nl=doc.get("nl", 30), nk=doc.get("nk", 12))

    @classmethod
    def from_file(cls, path: Path) -> "MapParams":
        return cls.from_doc(json.loads(Path(path).read_text("utf-8")))

    def to_doc(self) -> dict:
        return {"nf": self.nf, "nl": self.nl, "nk": self.nk}


@dataclass(frozen=True)
class KeyGraphMap:
    nodes: tuple[MapNode, ...]
    edges: tuple[MapEdge, ...]
    islands: tuple[tuple[str, ...], ...]
    params: MapParams
    seed: int

    def node(self, term: str) -> MapNode | None:
        for n in self.nodes:
            if n.term == term:
                return n
        return None

    def terms_by_role(self, role: NodeRole) -> set[str]:
        return {n.term for n in self.nodes if n.role == role}

    def adjacency(self, term: str) -> set[str]:
        out = set()
        for e in self.edges:
            if e.a == term:
                out.add(e.b)
            elif e.b == term:
                out.add(e.a)
        return out

    def with_positions(self, positions: Mapping[str, tuple[float, float]]) -> "KeyGraphMap":
        nodes = tuple(
            MapNode(
                term=n.term,
                role=n.role,
                sources=n.sources,
                position=positions.get(n.term, n.position),
            )
            for n in self.nodes
        )
        return KeyGraphMap(
            nodes=nodes, edges=self.edges, islands=self.islands, params=self.params, seed=self.seed
        )


def assemble_map(corpus: Corpus, params: MapParams, seed: int = 0) -> KeyGraphMap:
    """Run the full pipeline and lay the result out deterministically."""
    from .layout import layout  # local import to keep module load cheap

    if not corpus.documents or not any(corpus.sentences()):
        raise EmptyCorpusError("corpus has no sentences")

    assoc = cooccurrence(corpus)
    foundations = extract_foundations(corpus, params.nf)
    islands = build_islands(foundations, assoc, params.nl)
    scores = score_keys(corpus, islands)

    key_candidates = []
    for term, score in scores.items():
        if score <= 0.0:
            continue
        touched = touched_islands(corpus, term, islands)
        if len(touched) >= 2:
            key_candidates.append((term, score, touched))
    key_candidates.sort(key=lambda x: (-x[1], x[0]))
    keys = key_candidates[: params.nk]

    sources = corpus.term_source()
    nodes: list[MapNode] = []
    for term in foundations:
        nodes.append(
            MapNode(term=term, role=NodeRole.FOUNDATION, sources=tuple(sorted(sources[term])))
        )
    for term, _score, _touched in keys:
        nodes.append(
            MapNode(term=term, role=NodeRole.KEY, sources=tuple(sorted(sources[term])))
        )

    edges: dict[tuple[str, str, LinkKind], MapEdge] = {}

    def add_edge(a: str, b: str, weight: float, kind: LinkKind):
        edge = MapEdge(a=a, b=b, weight=float(weight), kind=kind).canonical()
        edges.setdefault((edge.a, edge.b, edge.kind), edge)

    for a, b, w in _top_links(foundations, assoc, params.nl):
        add_edge(a, b, w, LinkKind.ISLAND)
    for term, _score, touched in keys:
        for gi in touched:
            best = min(islands[gi], key=lambda f: (-assoc.get(term, f), f))
            if assoc.get(term, best) > 0:
                add_edge(term, best, assoc.get(term, best), LinkKind.BRIDGE)

    on_map = {n.term for n in nodes}
    anchored: set[int] = set()
    for doc in corpus.documents:
        if doc.entity_id in anchored:  # replicated corpora repeat documents
            continue
        anchored.add(doc.entity_id)
        anchor = anchor_term(doc.entity_id)
        nodes.append(
            MapNode(term=anchor, role=NodeRole.ENTITY_ANCHOR, sources=(doc.entity_id,))
        )
        doc_terms = {t for s in doc.sentences for t in s if t != anchor}
        for term in sorted(doc_terms & on_map):
            add_edge(anchor, term, assoc.get(anchor, term), LinkKind.BRIDGE)

    nodes.sort(key=lambda n: n.term)
    ordered_edges = tuple(sorted(edges.values(), key=lambda e: (e.a, e.b, e.kind.value)))
    assembled = KeyGraphMap(
        nodes=tuple(nodes),
        edges=ordered_edges,
        islands=tuple(islands),
        params=params,
        seed=seed,
    )
    return layout(assembled, seed)
