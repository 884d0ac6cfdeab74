import math

import pytest
from hypothesis import given, strategies as st

from leafgraph.errors import MalformedChainError
from leafgraph.model import (
    DataJacket,
    DataLeaf,
    EdgeKind,
    ElementKind,
    FeatureConcept,
    Frame,
    ScenarioEdge,
    ScenarioGraph,
    ScenarioNode,
    decompose_chains,
    graph_from_chains,
    parse_chain_text,
    validate,
)
from leafgraph.normalize import normalize_label


def brute_expand(chain_texts):
    """Reference chain expansion: labels merge by normalized form."""
    nodes, edges = set(), []
    for text in chain_texts:
        for part in text.replace("->", "→").split(","):
            labels = [normalize_label(x) for x in part.split("→")]
            nodes.update(labels)
            edges.extend(zip(labels, labels[1:]))
    return nodes, edges


class TestChains:
    def test_two_chain_expansion(self):
        graph = graph_from_chains(["x → y, y → z"])
        assert {n.node_id for n in graph.nodes} == {"x", "y", "z"}
        assert {(e.src, e.dst) for e in graph.edges} == {("x", "y"), ("y", "z")}

    def test_self_loop_rejected(self):
        with pytest.raises(MalformedChainError):
            parse_chain_text("a → a")

    def test_ascii_arrow_accepted(self):
        assert parse_chain_text("a -> b") == [["a", "b"]]

    def test_empty_segment_rejected(self):
        with pytest.raises(MalformedChainError):
            parse_chain_text("a → → b")
        with pytest.raises(MalformedChainError):
            parse_chain_text("season → rain →")

    def test_single_label_rejected(self):
        with pytest.raises(MalformedChainError):
            parse_chain_text("alone")

    def test_repeated_label_merges(self):
        graph = graph_from_chains(["cold → hot → cold"])
        assert len(graph.nodes) == 2
        assert {(e.src, e.dst) for e in graph.edges} == {("cold", "hot"), ("hot", "cold")}

    @given(
        st.lists(
            st.lists(
                st.sampled_from(["alpha", "beta", "gamma", "delta", "epsilon"]),
                min_size=2,
                max_size=5,
            ),
            min_size=1,
            max_size=4,
        )
    )
    def test_expansion_matches_reference(self, label_lists):
        # drop consecutive repeats, which the parser rejects as self-loops
        cleaned = []
        for labels in label_lists:
            out = [labels[0]]
            for lab in labels[1:]:
                if lab != out[-1]:
                    out.append(lab)
            if len(out) >= 2:
                cleaned.append(out)
        if not cleaned:
            return
        texts = [" → ".join(labels) for labels in cleaned]
        graph = graph_from_chains(texts)
        want_nodes, want_edges = brute_expand(texts)
        assert graph.labels() == want_nodes
        assert sorted((e.src, e.dst) for e in graph.edges) == sorted(want_edges)

    def test_chain_label_count_property(self):
        # n labels -> n-1 edges, nodes merged by normalized form
        graph = graph_from_chains(["a → b → c → a → d"])
        assert len(graph.edges) == 4
        assert len(graph.nodes) == 4


class TestDecompose:
    def test_paths_cover_labels(self, catalog_leaves):
        for leaf in catalog_leaves:
            paths = decompose_chains(leaf.graph)
            assert {t for p in paths for t in p} == leaf.graph.labels()

    def test_every_directed_edge_used_once(self):
        graph = graph_from_chains(["a → b", "a → c", "c → d"])
        paths = decompose_chains(graph)
        steps = [(p[i], p[i + 1]) for p in paths for i in range(len(p) - 1)]
        assert sorted(steps) == sorted((e.src, e.dst) for e in graph.edges)

    def test_isolated_nodes_become_singletons(self):
        node = ScenarioNode(node_id="lonely", label="lonely")
        graph = ScenarioGraph.build([node])
        assert decompose_chains(graph) == [["lonely"]]

    def test_cycle_is_decomposed(self):
        graph = graph_from_chains(["a → b → a"])
        paths = decompose_chains(graph)
        assert paths == [["a", "b", "a"]]

    def test_deterministic_greedy_order(self):
        graph = graph_from_chains(["s → b", "s → a", "s → c"])
        assert decompose_chains(graph) == [["s", "a"], ["s", "b"], ["s", "c"]]


class TestGraphValues:
    def test_undirected_edges_canonicalized(self):
        nodes = [ScenarioNode(node_id=i, label=i) for i in ("a", "b")]
        e = ScenarioEdge(src="b", dst="a", directed=False, kind=EdgeKind.RELEVANCE)
        graph = ScenarioGraph.build(nodes, [e])
        assert graph.edges[0].src == "a" and graph.edges[0].dst == "b"

    def test_equality_ignores_input_order(self):
        nodes = [ScenarioNode(node_id=i, label=i) for i in ("a", "b", "c")]
        edges = [ScenarioEdge(src="a", dst="b"), ScenarioEdge(src="b", dst="c")]
        g1 = ScenarioGraph.build(nodes, edges)
        g2 = ScenarioGraph.build(reversed(nodes), reversed(edges))
        assert g1 == g2

    def test_relevance_distance_euclidean_when_positioned(self):
        nodes = [
            ScenarioNode(node_id="a", label="a", position=(0.0, 0.0)),
            ScenarioNode(node_id="b", label="b", position=(3.0, 4.0)),
        ]
        graph = ScenarioGraph.build(nodes)
        assert graph.relevance_distance("a", "b") == pytest.approx(5.0)

    def test_relevance_distance_hops_without_positions(self):
        graph = graph_from_chains(["a → b → c"])
        assert graph.relevance_distance("a", "c") == 2.0
        assert math.isinf(
            ScenarioGraph.build(
                [ScenarioNode(node_id=i, label=i) for i in ("a", "b")]
            ).relevance_distance("a", "b")
        )


def naive_violation_codes(entity, jackets=None):
    """Independent invariant checker: recompute every violation directly."""
    codes = []
    if isinstance(entity, DataJacket):
        seen = set()
        for v in entity.variables:
            n = normalize_label(v)
            if not n:
                codes.append("EmptyVariableName")
            if n in seen:
                codes.append("DuplicateVariableName")
            seen.add(n)
        if not entity.title.strip():
            codes.append("EmptyTitle")
        return codes
    graph = entity.graph
    ids = [n.node_id for n in graph.nodes]
    if len(set(ids)) != len(ids):
        codes.append("DuplicateNodeId")
    for n in graph.nodes:
        if not n.label or normalize_label(n.label) != n.label:
            codes.append("LabelNotNormalized")
        if n.position is not None and not all(math.isfinite(c) for c in n.position):
            codes.append("NonFinitePosition")
    for e in graph.edges:
        if e.src == e.dst:
            codes.append("SelfLoop")
        codes.extend("DanglingEdge" for x in (e.src, e.dst) if x not in set(ids))
        if not e.directed and e.dst < e.src:
            codes.append("EdgeNotCanonical")
    if isinstance(entity, DataLeaf):
        if entity.source_jacket is not None and jackets is not None:
            jacket = jackets.get(entity.source_jacket)
            if jacket is None:
                codes.append("UnknownSourceJacket")
            else:
                allowed = {normalize_label(v) for v in jacket.variables}
                codes.extend(
                    "BoundaryVariableNotInJacket"
                    for v in entity.boundary_variables
                    if normalize_label(v) not in allowed
                )
    if isinstance(entity, FeatureConcept):
        frame_ids = [f.frame_id for f in entity.frames]
        if len(set(frame_ids)) != len(frame_ids):
            codes.append("DuplicateFrameId")
        for f in entity.frames:
            codes.extend(
                "FrameMemberMissing" for m in f.member_nodes if m not in set(ids)
            )
        if entity.version < 0:
            codes.append("NegativeVersion")
    return codes


class TestValidate:
    def test_clean_fixture_leaves_have_no_violations(self, catalog_leaves, catalog_jackets):
        jackets = {j.id: j for j in catalog_jackets}
        for leaf in catalog_leaves:
            assert validate(leaf, jackets=jackets) == []

    def test_boundary_variable_not_in_jacket(self):
        jacket = DataJacket(id=1, title="t", variables=("a", "b"))
        leaf = DataLeaf(id=2, title="t", boundary_variables=("a", "zz"), source_jacket=1)
        codes = [v.code for v in validate(leaf, jackets={1: jacket})]
        assert codes == ["BoundaryVariableNotInJacket"]

    def test_matches_independent_checker_on_corrupt_entities(self):
        bad_graph = ScenarioGraph(
            nodes=(
                ScenarioNode(node_id="a", label="a"),
                ScenarioNode(node_id="b", label="  B "),
                ScenarioNode(node_id="b", label="b"),
            ),
            edges=(
                ScenarioEdge(src="a", dst="zz"),
                ScenarioEdge(src="b", dst="a", directed=False),
            ),
        )
        cases = [
            DataJacket(id=1, title=" ", variables=("x", "X", "")),
            DataLeaf(id=2, title="t", graph=bad_graph, boundary_variables=("q",), source_jacket=9),
            FeatureConcept(
                id=3,
                title="t",
                graph=bad_graph,
                frames=(
                    Frame(frame_id="f", label="f", member_nodes=frozenset({"nope"})),
                    Frame(frame_id="f", label="f2", member_nodes=frozenset()),
                ),
                version=-1,
            ),
        ]
        jackets = {}
        for entity in cases:
            got = sorted(v.code for v in validate(entity, jackets=jackets))
            want = sorted(naive_violation_codes(entity, jackets=jackets))
            assert got == want

    def test_violations_name_field(self):
        jacket = DataJacket(id=1, title="t", variables=("x", "x"))
        v = validate(jacket)[0]
        assert v.field == "variables" and v.code == "DuplicateVariableName"
