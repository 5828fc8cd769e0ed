from __future__ import annotations

import sys
from pathlib import Path

import pytest

# Make the sibling test helper modules importable as plain names.
sys.path.insert(0, str(Path(__file__).parent))

from narq.indexing import build_collection_index, build_concept_index, build_predicate_index
from narq.ingestion import load_concepts, load_documents, load_predicates

DATA_DIR = Path(__file__).parent / "data"
TOY_DIR = DATA_DIR / "toy"
BENCH_DIR = DATA_DIR / "bench"


@pytest.fixture(scope="session")
def toy_ontology():
    return load_concepts(TOY_DIR / "concepts.jsonl")


@pytest.fixture(scope="session")
def toy_hierarchy():
    return load_predicates(TOY_DIR / "predicates.jsonl")


@pytest.fixture(scope="session")
def toy_docs():
    return load_documents(TOY_DIR / "documents.jsonl")


@pytest.fixture(scope="session")
def toy_concept_index(toy_ontology):
    return build_concept_index(toy_ontology)


@pytest.fixture(scope="session")
def toy_predicate_index(toy_hierarchy):
    return build_predicate_index(toy_hierarchy)


@pytest.fixture(scope="session")
def toy_index(toy_docs, toy_ontology, toy_hierarchy):
    return build_collection_index(toy_docs, toy_ontology, toy_hierarchy)
