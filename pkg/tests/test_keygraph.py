import random

import pytest

from leafgraph.documents import parse_data_jacket, parse_data_leaf
from leafgraph.errors import EmptyCorpusError, EmptyInputError
from leafgraph.keygraph import (
    AssocTable,
    Corpus,
    CorpusDocument,
    MapParams,
    NodeRole,
    anchor_term,
    assemble_map,
    build_corpus,
    build_islands,
    cooccurrence,
    extract_foundations,
    score_keys,
    touched_islands,
)

from conftest import random_corpus
from oracles import brute_assoc, brute_foundations, brute_islands, brute_key_scores


def corpus_of(*sentences) -> Corpus:
    doc = CorpusDocument(entity_id=1, sentences=tuple(tuple(s) for s in sentences))
    return Corpus(documents=(doc,), anchor_terms=frozenset())


class TestBuildCorpus:
    def test_one_document_per_leaf_with_anchor(self, catalog_leaves):
        corpus = build_corpus(catalog_leaves)
        assert len(corpus.documents) == len(catalog_leaves)
        for leaf, doc in zip(catalog_leaves, corpus.documents):
            anchor = anchor_term(leaf.id)
            assert all(anchor in s for s in doc.sentences)
            terms = {t for s in doc.sentences for t in s if t != anchor}
            assert terms == leaf.graph.labels()

    def test_single_two_node_chain(self):
        leaf = parse_data_leaf({"id": 9, "title": "t", "chains": ["a → b"]})
        corpus = build_corpus([leaf])
        assert len(corpus.documents) == 1
        assert corpus.documents[0].sentences == ((anchor_term(9), "a", "b"),)

    def test_crime_leaf_single_sentence(self, catalog_leaves):
        doc = next(
            d for d in build_corpus(catalog_leaves).documents if d.entity_id == 6058
        )
        assert len(doc.sentences) == 1
        sentence = doc.sentences[0]
        assert sentence[0] == anchor_term(6058)
        assert sentence[1] == "situation-of(time of day)"
        assert sentence[-2:] == ("crime", "damage")
        assert "light" in sentence and "dark" in sentence

    def test_jacket_mode_title_and_variable_sentences(self, catalog_jackets):
        corpus = build_corpus(catalog_jackets)
        doc = next(d for d in corpus.documents if d.entity_id == 6059)
        assert len(doc.sentences) == 2
        assert doc.sentences[0][1:] == ("tokyo", "weather", "data")
        assert "average daily temperature" in doc.sentences[1]

    def test_empty_input(self):
        with pytest.raises(EmptyInputError):
            build_corpus([])

    def test_empty_graph_leaf_yields_lone_anchor(self):
        leaf = parse_data_leaf({"id": 3, "title": "t"})
        corpus = build_corpus([leaf])
        assert corpus.documents[0].sentences == ((anchor_term(3),),)


class TestCooccurrence:
    def test_repeated_pair(self):
        table = cooccurrence(corpus_of(["a", "b"], ["a", "b"]))
        assert table.get("a", "b") == 2

    def test_single_term_sentence_is_empty_table(self):
        table = cooccurrence(corpus_of(["solo"]))
        assert dict(table.items()) == {}

    def test_document_duplication_doubles_assoc(self):
        base = corpus_of(["a", "b", "c"], ["b", "c"])
        doubled = base.replicate(2)
        t1, t2 = cooccurrence(base), cooccurrence(doubled)
        for (a, b), w in t1.items():
            assert t2.get(a, b) == 2 * w

    def test_multiplicity_uses_min_count(self):
        table = cooccurrence(corpus_of(["a", "a", "b"]))
        assert table.get("a", "b") == 1

    def test_symmetry_on_random_corpora(self):
        rng = random.Random(5)
        for _ in range(50):
            corpus = random_corpus(rng)
            table = cooccurrence(corpus)
            terms = sorted(corpus.terms())
            for a in terms:
                for b in terms:
                    if a != b:
                        assert table.get(a, b) == table.get(b, a)


class TestFoundations:
    def test_saturation_returns_all(self):
        corpus = corpus_of(["a", "b", "c"])
        assert extract_foundations(corpus, 5) == ["a", "b", "c"]

    def test_ties_break_lexicographically(self):
        corpus = corpus_of(["b", "a"], ["a", "b"], ["c"])
        assert extract_foundations(corpus, 2) == ["a", "b"]

    def test_anchors_never_compete(self, catalog_leaves):
        corpus = build_corpus(catalog_leaves)
        foundations = extract_foundations(corpus, 100)
        assert not set(foundations) & corpus.anchor_terms

    def test_rank_invariance_under_replication(self):
        rng = random.Random(11)
        for _ in range(25):
            corpus = random_corpus(rng)
            nf = rng.randint(1, 6)
            assert extract_foundations(corpus, nf) == extract_foundations(
                corpus.replicate(3), nf
            )


class TestIslands:
    def test_zero_assoc_gives_singletons(self):
        corpus = corpus_of(["a"], ["b"], ["c"])
        islands = build_islands(["a", "b", "c"], cooccurrence(corpus), 5)
        assert islands == [("a",), ("b",), ("c",)]

    def test_strongest_pairs_form_components(self):
        table = AssocTable({("a", "b"): 5, ("b", "c"): 4, ("d", "e"): 3})
        islands = build_islands(["a", "b", "c", "d", "e"], table, 3)
        assert islands == [("a", "b", "c"), ("d", "e")]

    def test_partition_property(self):
        rng = random.Random(3)
        for _ in range(50):
            corpus = random_corpus(rng)
            foundations = extract_foundations(corpus, rng.randint(1, 6))
            islands = build_islands(foundations, cooccurrence(corpus), rng.randint(1, 6))
            flat = [t for g in islands for t in g]
            assert sorted(flat) == sorted(foundations)


class TestKeyScores:
    def test_disconnected_term_scores_zero(self):
        corpus = corpus_of(["a", "b"], ["w"])
        islands = build_islands(["a", "b"], cooccurrence(corpus), 2)
        assert score_keys(corpus, islands)["w"] == 0.0

    def test_single_island_ratio(self):
        # hand computation: g = {a, b} one island.
        #   s1 = [a, b, w]: based=min(1, 2)=1, g-count 2 with non-g present -> +2
        #   s2 = [b, w]:    based=1,            g-count 1 -> +1
        #   s3 = [a, c]:    w absent,           g-count 1 -> +1
        # based(w,g)=2, neighbors(g)=4, key(w) = 1 - (1 - 2/4) = 0.5
        corpus = corpus_of(["a", "b", "w"], ["b", "w"], ["a", "c"])
        islands = [("a", "b")]
        assert score_keys(corpus, islands)["w"] == pytest.approx(0.5)

    def test_scores_stay_in_unit_interval(self):
        rng = random.Random(17)
        for _ in range(100):
            corpus = random_corpus(rng)
            foundations = extract_foundations(corpus, rng.randint(1, 4))
            islands = build_islands(foundations, cooccurrence(corpus), rng.randint(1, 4))
            for score in score_keys(corpus, islands).values():
                assert 0.0 <= score <= 1.0

    def test_monotone_in_repeated_mentions(self):
        # adding another w occurrence to a sentence that already has w
        # leaves neighbors unchanged and can only raise based(w, *)
        rng = random.Random(23)
        checked = 0
        while checked < 40:
            corpus = random_corpus(rng)
            foundations = extract_foundations(corpus, rng.randint(1, 4))
            islands = build_islands(foundations, cooccurrence(corpus), rng.randint(1, 4))
            scores = score_keys(corpus, islands)
            candidates = [t for t in scores if any(t in s for s in corpus.sentences())]
            if not candidates:
                continue
            w = rng.choice(candidates)
            doc = corpus.documents[0]
            new_sentences = tuple(
                s + (w,) if w in s else s for s in doc.sentences
            )
            grown = Corpus(
                documents=(CorpusDocument(entity_id=1, sentences=new_sentences),),
                anchor_terms=frozenset(),
            )
            grown_scores = score_keys(grown, islands)
            assert grown_scores[w] >= scores[w] - 1e-12
            checked += 1


class TestOracleEquivalence:
    def test_statistics_match_brute_force(self):
        rng = random.Random(404)
        for _ in range(100):
            corpus = random_corpus(rng)
            sentences = list(corpus.sentences())
            nf, nl = rng.randint(1, 6), rng.randint(1, 6)

            table = cooccurrence(corpus)
            want = brute_assoc(sentences)
            got = {pair: w for pair, w in table.items() if w > 0}
            assert got == want

            foundations = extract_foundations(corpus, nf)
            assert foundations == brute_foundations(sentences, set(), nf)

            islands = build_islands(foundations, table, nl)
            assert islands == brute_islands(set(foundations), sentences, nl)

            scores = score_keys(corpus, islands)
            want_scores = brute_key_scores(sentences, islands, set())
            assert set(scores) == set(want_scores)
            for term, score in scores.items():
                assert round(score, 12) == round(want_scores[term], 12)


class TestAssembleMap:
    def test_demo_catalog_red_term_and_anchor_links(self, catalog_leaves, fixtures_dir):
        params = MapParams.from_file(fixtures_dir / "catalog" / "params.json")
        graph_map = assemble_map(build_corpus(catalog_leaves), params, seed=7)
        assert "hot" in graph_map.terms_by_role(NodeRole.KEY)
        assert graph_map.node("hot").display_color == "red"
        anchor_adjacent = graph_map.adjacency(anchor_term(6059))
        situational = {"hot", "cold", "dark", "light", "damp"}
        assert situational <= anchor_adjacent

    def test_single_term_corpus(self):
        leaf = parse_data_leaf(
            {"id": 4, "title": "t", "graph": {"nodes": [{"node_id": "solo", "label": "solo"}]}}
        )
        graph_map = assemble_map(build_corpus([leaf]), MapParams(), seed=1)
        roles = {n.term: n.role for n in graph_map.nodes}
        assert roles == {
            "solo": NodeRole.FOUNDATION,
            anchor_term(4): NodeRole.ENTITY_ANCHOR,
        }
        non_anchor_edges = [e for e in graph_map.edges if not e.a.startswith("#")]
        assert non_anchor_edges == []

    def test_same_seed_same_map(self, catalog_leaves):
        corpus = build_corpus(catalog_leaves)
        m1 = assemble_map(corpus, MapParams(), seed=13)
        m2 = assemble_map(corpus, MapParams(), seed=13)
        assert m1 == m2

    def test_bridge_edges_touch_two_islands(self, catalog_leaves, fixtures_dir):
        params = MapParams.from_file(fixtures_dir / "catalog" / "params.json")
        corpus = build_corpus(catalog_leaves)
        graph_map = assemble_map(corpus, params, seed=7)
        island_of = {
            t: gi for gi, g in enumerate(graph_map.islands) for t in g
        }
        for key in graph_map.terms_by_role(NodeRole.KEY):
            touched = {
                island_of[other]
                for other in graph_map.adjacency(key)
                if other in island_of
            }
            assert len(touched) >= 2

    def test_island_links_stay_inside_one_island(self, catalog_leaves):
        graph_map = assemble_map(build_corpus(catalog_leaves), MapParams(), seed=7)
        island_of = {t: gi for gi, g in enumerate(graph_map.islands) for t in g}
        for e in graph_map.edges:
            if e.kind.value == "island_link":
                assert island_of[e.a] == island_of[e.b]

    def test_scale_invariance(self, catalog_leaves):
        corpus = build_corpus(catalog_leaves)
        base = assemble_map(corpus, MapParams(), seed=7)
        for k in (2, 5):
            grown = assemble_map(corpus.replicate(k), MapParams(), seed=7)
            assert grown.islands == base.islands
            assert grown.terms_by_role(NodeRole.FOUNDATION) == base.terms_by_role(
                NodeRole.FOUNDATION
            )
            assert grown.terms_by_role(NodeRole.KEY) == base.terms_by_role(NodeRole.KEY)
            assert {(e.a, e.b, e.kind) for e in grown.edges} == {
                (e.a, e.b, e.kind) for e in base.edges
            }

    def test_empty_corpus_rejected(self):
        corpus = Corpus(documents=(), anchor_terms=frozenset())
        with pytest.raises(EmptyCorpusError):
            assemble_map(corpus, MapParams(), seed=0)

    def test_touched_islands_found_by_shared_sentences(self):
        corpus = corpus_of(["a", "w"], ["b", "w"], ["c"])
        islands = [("a",), ("b",), ("c",)]
        assert touched_islands(corpus, "w", islands) == [0, 1]
