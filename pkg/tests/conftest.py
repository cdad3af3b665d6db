from __future__ import annotations

import json
from pathlib import Path

import pytest

from semtopo import corpus

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return GOLDEN


@pytest.fixture(scope="session")
def corpus_text() -> str:
    return (FIXTURES / "corpus.txt").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def stopwords() -> frozenset[str]:
    return corpus.read_stopwords(FIXTURES / "stopwords.txt")


@pytest.fixture(scope="session")
def records(corpus_text, stopwords):
    config = corpus.PreprocessConfig(stopwords=stopwords)
    return corpus.segment(corpus_text, config)


@pytest.fixture(scope="session")
def corpus_oracle() -> dict:
    return json.loads((FIXTURES / "corpus_oracle.json").read_text())


@pytest.fixture(scope="session")
def mentions_oracle() -> list[dict]:
    return json.loads((FIXTURES / "mentions_oracle.json").read_text())


