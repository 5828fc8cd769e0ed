"""Label indexes and the inverted document collection index.

The collection index is materialized eagerly: a document annotated with a
concept is indexed under every super-concept, and a document with an extracted
statement is indexed under every combination of endpoint super-concepts and
predicate generalizations. Subsumption queries then hit the index directly.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import NarqError, UnknownConceptError, UnknownPredicateError
from .model import ConceptId, Document, DocumentAnnotations, Statement
from .ontology import ConceptOntology, PredicateHierarchy
from .tokenization import DEFAULT_TOKENIZER, TokenizerOptions, tokenize

LabelIndex = dict[str, frozenset[str]]

SNAPSHOT_VERSION = 1


def normalize_label(raw: str) -> str:
    """Lowercase, strip, and collapse internal whitespace runs to single spaces."""
    return " ".join(raw.lower().split())


def build_concept_index(ontology: ConceptOntology) -> LabelIndex:
    """Map every normalized label and synonym to the concept ids carrying it.

    Homonymous labels map to multiple ids.
    """
    index: dict[str, set[str]] = {}
    for concept in ontology:
        for label in concept.labels:
            index.setdefault(normalize_label(label), set()).add(concept.id)
    return {label: frozenset(ids) for label, ids in index.items()}


def build_predicate_index(hierarchy: PredicateHierarchy) -> LabelIndex:
    """Map every normalized predicate label and synonym to the predicate ids carrying it."""
    index: dict[str, set[str]] = {}
    for predicate in hierarchy:
        for label in predicate.labels:
            index.setdefault(normalize_label(label), set()).add(predicate.id)
    return {label: frozenset(ids) for label, ids in index.items()}


@dataclass(frozen=True)
class CollectionIndex:
    """Inverted indexes term -> docs, concept -> docs, statement -> docs.

    Posting lists are sorted doc-id tuples; concept and statement postings are
    closed under the ontology (see module docstring). Immutable after build.
    """

    term_postings: Mapping[str, tuple[str, ...]]
    concept_postings: Mapping[ConceptId, tuple[str, ...]]
    statement_postings: Mapping[Statement, tuple[str, ...]]
    doc_count: int
    doc_ids: tuple[str, ...]
    tokenizer: TokenizerOptions = field(default=DEFAULT_TOKENIZER)

    def support_term(self, term: str) -> int:
        return len(self.term_postings.get(term, ()))

    def support_concept(self, concept_id: ConceptId) -> int:
        return len(self.concept_postings.get(concept_id, ()))

    def support_statement(self, statement: Statement) -> int:
        return len(self.statement_postings.get(statement, ()))


def build_collection_index(
    docs: Iterable[tuple[Document, DocumentAnnotations]],
    ontology: ConceptOntology,
    hierarchy: PredicateHierarchy,
    tokenizer_options: TokenizerOptions = DEFAULT_TOKENIZER,
    statement_closure_exclude: frozenset[ConceptId] = frozenset(),
) -> CollectionIndex:
    """Build the collection index from annotated documents.

    statement_closure_exclude names concepts (typically a synthetic top concept)
    that statement-endpoint closure must not expand to; closing statements up to
    a universal root would make them match nearly everything. Concept postings
    are never restricted.
    """
    term_postings: dict[str, set[str]] = {}
    concept_postings: dict[str, set[str]] = {}
    statement_postings: dict[Statement, set[str]] = {}
    doc_ids: list[str] = []
    seen: set[str] = set()

    for doc, ann in docs:
        if doc.doc_id in seen:
            raise NarqError(f"duplicate document id {doc.doc_id!r}")
        if ann.doc_id != doc.doc_id:
            raise NarqError(
                f"annotation doc id {ann.doc_id!r} does not match document {doc.doc_id!r}"
            )
        seen.add(doc.doc_id)
        doc_ids.append(doc.doc_id)

        for token in tokenize(doc.text(), tokenizer_options):
            term_postings.setdefault(token, set()).add(doc.doc_id)

        for cid in ann.detected_concepts:
            if cid not in ontology:
                raise UnknownConceptError(cid, f"annotation of document {doc.doc_id!r}")
            concept_postings.setdefault(cid, set()).add(doc.doc_id)
            for ancestor in ontology.concept_ancestors(cid):
                concept_postings.setdefault(ancestor, set()).add(doc.doc_id)

        for stmt in ann.extracted_statements:
            if stmt.predicate not in hierarchy:
                raise UnknownPredicateError(
                    stmt.predicate, f"statement {stmt.as_tuple()} of document {doc.doc_id!r}"
                )
            subjects = {stmt.subject} | set(ontology.concept_ancestors(stmt.subject))
            objects = {stmt.object} | set(ontology.concept_ancestors(stmt.object))
            subjects -= statement_closure_exclude
            objects -= statement_closure_exclude
            subjects.add(stmt.subject)
            objects.add(stmt.object)
            predicates = {stmt.predicate} | set(
                hierarchy.predicate_generalizations(stmt.predicate)
            )
            for s in subjects:
                for o in objects:
                    if s == o:
                        continue  # a statement cannot relate a concept to itself
                    for p in predicates:
                        statement_postings.setdefault(Statement(s, p, o), set()).add(doc.doc_id)

    return CollectionIndex(
        term_postings={t: tuple(sorted(ds)) for t, ds in sorted(term_postings.items())},
        concept_postings={c: tuple(sorted(ds)) for c, ds in sorted(concept_postings.items())},
        statement_postings={s: tuple(sorted(ds)) for s, ds in sorted(statement_postings.items())},
        doc_count=len(doc_ids),
        doc_ids=tuple(sorted(doc_ids)),
        tokenizer=tokenizer_options,
    )


def save_snapshot(index: CollectionIndex, path) -> None:
    """Write a line-oriented snapshot of the index for fast reload.

    First line is a header; every following line is one posting record. The
    encoding round-trips bit-exactly: saving a loaded snapshot reproduces it.
    """
    with open(path, "w", encoding="utf-8") as fh:
        header = {
            "version": SNAPSHOT_VERSION,
            "doc_count": index.doc_count,
            "doc_ids": list(index.doc_ids),
            "tokenizer": {
                "remove_stopwords": index.tokenizer.remove_stopwords,
                "replace_punctuation": index.tokenizer.replace_punctuation,
            },
        }
        fh.write(json.dumps(header, sort_keys=True) + "\n")
        for term in sorted(index.term_postings):
            record = {"kind": "term", "key": term, "docs": list(index.term_postings[term])}
            fh.write(json.dumps(record, sort_keys=True) + "\n")
        for cid in sorted(index.concept_postings):
            record = {"kind": "concept", "key": cid, "docs": list(index.concept_postings[cid])}
            fh.write(json.dumps(record, sort_keys=True) + "\n")
        for stmt in sorted(index.statement_postings):
            record = {
                "kind": "statement",
                "key": list(stmt.as_tuple()),
                "docs": list(index.statement_postings[stmt]),
            }
            fh.write(json.dumps(record, sort_keys=True) + "\n")


def load_snapshot(path) -> CollectionIndex:
    """Load an index snapshot written by save_snapshot."""
    term_postings: dict[str, tuple[str, ...]] = {}
    concept_postings: dict[str, tuple[str, ...]] = {}
    statement_postings: dict[Statement, tuple[str, ...]] = {}
    with open(path, "r", encoding="utf-8") as fh:
        header = json.loads(fh.readline())
        if header.get("version") != SNAPSHOT_VERSION:
            raise NarqError(f"unsupported snapshot version {header.get('version')!r}")
        tokenizer = TokenizerOptions(
            remove_stopwords=header["tokenizer"]["remove_stopwords"],
            replace_punctuation=header["tokenizer"]["replace_punctuation"],
        )
        for line in fh:
            record = json.loads(line)
            docs = tuple(record["docs"])
            if record["kind"] == "term":
                term_postings[record["key"]] = docs
            elif record["kind"] == "concept":
                concept_postings[record["key"]] = docs
            elif record["kind"] == "statement":
                statement_postings[Statement(*record["key"])] = docs
            else:
                raise NarqError(f"unknown snapshot record kind {record['kind']!r}")
    return CollectionIndex(
        term_postings=term_postings,
        concept_postings=concept_postings,
        statement_postings=statement_postings,
        doc_count=header["doc_count"],
        doc_ids=tuple(header["doc_ids"]),
        tokenizer=tokenizer,
    )
