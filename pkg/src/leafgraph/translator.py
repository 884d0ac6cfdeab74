"""Classify jacket variables by functionality level and draft scenario leaves.

A lexicon maps variable-name patterns to one of three levels:

* ``index``      -- bookkeeping variables (ids, dates, counts); they emit no
                    nodes and stay as boundary annotations only.
* ``functional``  -- variables readable as a function of time/place whose
                    high/low values name states ("temperature" -> hot/cold).
* ``state_like``  -- variables whose values already name an event or
                    situation directly.

Patterns match as contiguous word-token subsequences of the normalized
variable name; the longest pattern wins, ties break lexicographically.
Unknown variables conservatively fall back to ``index``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path

from .documents import canonical_dumps, entity_to_doc, load_schema
from .errors import (
    EmptyNameError,
    InvalidJacketError,
    MalformedDocumentError,
    NoStatesDefinedError,
    NotFunctionalError,
)
from .model import (
    DataJacket,
    DataLeaf,
    ElementKind,
    ScenarioGraph,
    ScenarioNode,
    graph_from_chains,
    validate,
)
from .normalize import normalize_label, word_tokens

import jsonschema


class FunctionalityLevel(str, Enum):
    INDEX = "index"
    FUNCTIONAL = "functional"
    STATE_LIKE = "state_like"


_ROLE_KIND = {
    "verb": ElementKind.ACTION,
    "adjective": ElementKind.SITUATION,
    "event": ElementKind.EVENT,
}


@dataclass(frozen=True)
class StateSpec:
    label: str
    kind: ElementKind = ElementKind.SITUATION


@dataclass(frozen=True)
class LexiconEntry:
    pattern: str
    level: FunctionalityLevel
    states: tuple[StateSpec, ...] = ()
    role: str | None = None

    def default_kind(self) -> ElementKind:
        return _ROLE_KIND.get(self.role or "", ElementKind.SITUATION)


@dataclass(frozen=True)
class ChainTemplate:
    """A scenario skeleton injected when all required patterns are present."""

    name: str
    requires: tuple[str, ...]
    chains: tuple[str, ...]


@dataclass(frozen=True)
class Lexicon:
    entries: tuple[LexiconEntry, ...] = ()
    templates: tuple[ChainTemplate, ...] = ()
    _tokens: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        tokens = {e.pattern: tuple(word_tokens(e.pattern)) for e in self.entries}
        object.__setattr__(self, "_tokens", tokens)

    @classmethod
    def from_doc(cls, doc: dict) -> "Lexicon":
        errors = sorted(
            jsonschema.Draft202012Validator(load_schema("lexicon")).iter_errors(doc),
            key=str,
        )
        if errors:
            raise MalformedDocumentError(f"lexicon invalid: {errors[0].message}")
        entries: dict[str, LexiconEntry] = {}
        for raw_pattern, raw in doc["entries"].items():
            pattern = normalize_label(raw_pattern)
            if pattern in entries:
                raise MalformedDocumentError(f"duplicate lexicon pattern {pattern!r}")
            role = raw.get("role")
            default_kind = _ROLE_KIND.get(role or "", ElementKind.SITUATION)
            states = tuple(
                StateSpec(
                    label=normalize_label(s["label"]),
                    kind=ElementKind(s["kind"]) if "kind" in s else default_kind,
                )
                for s in raw.get("states", ())
            )
            level = FunctionalityLevel(raw["level"])
            if level is FunctionalityLevel.FUNCTIONAL and not states:
                raise MalformedDocumentError(
                    f"functional pattern {pattern!r} defines no states"
                )
            entries[pattern] = LexiconEntry(pattern=pattern, level=level, states=states, role=role)
        templates = tuple(
            ChainTemplate(
                name=t["name"],
                requires=tuple(normalize_label(r) for r in t["requires"]),
                chains=tuple(t["chains"]),
            )
            for t in doc.get("templates", ())
        )
        return cls(entries=tuple(entries.values()), templates=templates)

    @classmethod
    def from_file(cls, path: Path) -> "Lexicon":
        return cls.from_doc(json.loads(Path(path).read_text("utf-8")))

    @classmethod
    def default(cls) -> "Lexicon":
        text = resources.files("leafgraph.data").joinpath("lexicon.json").read_text("utf-8")
        return cls.from_doc(json.loads(text))

    def lookup(self, name: str) -> LexiconEntry | None:
        """Best entry whose pattern tokens appear contiguously in the name."""
        tokens = word_tokens(name)
        best: LexiconEntry | None = None
        best_key: tuple[int, str] | None = None
        for entry in self.entries:
            ptoks = self._tokens[entry.pattern]
            if not ptoks or not _contains(tokens, ptoks):
                continue
            key = (-len(entry.pattern), entry.pattern)
            if best_key is None or key < best_key:
                best, best_key = entry, key
        return best


def _contains(tokens: list[str], sub: tuple[str, ...]) -> bool:
    n = len(sub)
    return any(tuple(tokens[i : i + n]) == sub for i in range(len(tokens) - n + 1))


def classify_variable(name: str, lex: Lexicon) -> FunctionalityLevel:
    """Functionality level of a variable name; unknown names are index."""
    if not name or not normalize_label(name):
        raise EmptyNameError(f"variable name is empty: {name!r}")
    entry = lex.lookup(name)
    return entry.level if entry is not None else FunctionalityLevel.INDEX


def derive_states(name: str, lex: Lexicon) -> list[ScenarioNode]:
    """State nodes named by a functional variable, in lexicon order."""
    level = classify_variable(name, lex)
    if level is not FunctionalityLevel.FUNCTIONAL:
        raise NotFunctionalError(name)
    entry = lex.lookup(name)
    assert entry is not None
    if not entry.states:
        raise NoStatesDefinedError(name)
    return [
        ScenarioNode(node_id=s.label, label=s.label, kind=s.kind)
        for s in entry.states
    ]


@dataclass(frozen=True)
class NodeProvenance:
    """Where a generated node came from: a variable, an entry, or a template."""

    node_id: str
    origin: str  # "variable" | "lexicon" | "template"
    reference: str
    variable: str | None = None


@dataclass(frozen=True)
class TranslationReport:
    leaf: DataLeaf
    unmapped_variables: tuple[str, ...]
    provenance: tuple[NodeProvenance, ...]

    def to_doc(self) -> dict:
        return {
            "leaf": entity_to_doc(self.leaf),
            "unmapped_variables": list(self.unmapped_variables),
            "provenance": [
                {
                    "node_id": p.node_id,
                    "origin": p.origin,
                    "reference": p.reference,
                    **({"variable": p.variable} if p.variable is not None else {}),
                }
                for p in sorted(self.provenance, key=lambda p: p.node_id)
            ],
        }

    def dumps(self) -> str:
        return canonical_dumps(self.to_doc())


def translate(dj: DataJacket, lex: Lexicon) -> TranslationReport:
    """Draft a scenario leaf from a jacket's variable list.

    The draft keeps the jacket's id/title/abstract, annotates every source
    variable on the leaf border, expands functional variables into their
    states, turns state-like variables into nodes, and injects template
    chains once their required patterns are all present. Index variables
    never become nodes. The result is a reviewable draft: variables the
    lexicon does not know are listed for a human pass.
    """
    violations = validate(dj)
    if violations:
        raise InvalidJacketError("; ".join(v.code for v in violations))

    nodes: dict[str, ScenarioNode] = {}
    provenance: dict[str, NodeProvenance] = {}
    unmapped: list[str] = []
    variable_tokens = [word_tokens(v) for v in dj.variables]

    def add_node(node: ScenarioNode, origin: str, reference: str, variable: str | None):
        if node.label in nodes:
            return
        nodes[node.label] = node
        provenance[node.label] = NodeProvenance(
            node_id=node.node_id, origin=origin, reference=reference, variable=variable
        )

    for variable in dj.variables:
        entry = lex.lookup(variable)
        if entry is None:
            unmapped.append(variable)
            continue
        if entry.level is FunctionalityLevel.INDEX:
            continue  # boundary annotation only
        if entry.level is FunctionalityLevel.FUNCTIONAL:
            for state in derive_states(variable, lex):
                add_node(state, "lexicon", entry.pattern, variable)
            continue
        # state-like: entry states, or the variable itself as a node
        if entry.states:
            for s in entry.states:
                add_node(
                    ScenarioNode(node_id=s.label, label=s.label, kind=s.kind),
                    "lexicon",
                    entry.pattern,
                    variable,
                )
        else:
            label = normalize_label(variable)
            add_node(
                ScenarioNode(node_id=label, label=label, kind=entry.default_kind(), display=variable.strip()),
                "variable",
                variable,
                variable,
            )

    graph = ScenarioGraph.build(nodes.values())
    for template in lex.templates:
        required_present = all(
            any(_contains(toks, tuple(word_tokens(req))) for toks in variable_tokens)
            for req in template.requires
        )
        if not required_present:
            continue
        before = graph.labels()
        graph = graph_from_chains(list(template.chains), base=graph)
        for label in sorted(graph.labels() - before):
            provenance[label] = NodeProvenance(
                node_id=label, origin="template", reference=template.name
            )

    leaf = DataLeaf(
        id=dj.id,
        title=dj.title,
        abstract=dj.abstract,
        graph=graph,
        boundary_variables=dj.variables,
        source_jacket=dj.id,
    )
    return TranslationReport(
        leaf=leaf,
        unmapped_variables=tuple(unmapped),
        provenance=tuple(provenance[label] for label in sorted(provenance)),
    )
