import random
from pathlib import Path

import pytest

from leafgraph.documents import load_jackets, load_leaves
from leafgraph.keygraph import Corpus, CorpusDocument
from leafgraph.translator import Lexicon

REPO = Path(__file__).resolve().parents[1]
FIXTURES = REPO / "fixtures"


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "acceptance(name): criterion-level acceptance check"
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker and report.when == "call":
        label = marker.kwargs.get("name", item.name)
        status = "PASS" if report.passed else "FAIL"
        print(f"\nacceptance {status}: {label}")


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def lexicon() -> Lexicon:
    return Lexicon.default()


@pytest.fixture(scope="session")
def catalog_leaves():
    return load_leaves(FIXTURES / "catalog" / "leaves")


@pytest.fixture(scope="session")
def catalog_jackets():
    return load_jackets(FIXTURES / "catalog" / "jackets")


def random_corpus(rng: random.Random, max_terms: int = 8, max_sentences: int = 6) -> Corpus:
    """Small anchor-free corpus for oracle comparisons."""
    vocabulary = [chr(ord("a") + i) for i in range(rng.randint(1, max_terms))]
    n_sentences = rng.randint(1, max_sentences)
    sentences = []
    for _ in range(n_sentences):
        length = rng.randint(1, 5)
        sentences.append(tuple(rng.choice(vocabulary) for _ in range(length)))
    doc = CorpusDocument(entity_id=1, sentences=tuple(sentences))
    return Corpus(documents=(doc,), anchor_terms=frozenset())
