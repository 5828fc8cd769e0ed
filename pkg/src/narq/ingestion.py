"""File formats: ontologies, annotated documents, benchmark topics, qrels.

Documents, concepts, predicates, and topics are UTF-8 JSON-lines files; qrels
use the standard whitespace-separated 4-column layout. These formats are the
repository's data contract.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

from .errors import InvalidQueryError, ParseError
from .model import Concept, Document, DocumentAnnotations, Predicate, Statement
from .ontology import ConceptOntology, PredicateHierarchy

Qrels = dict[str, dict[str, int]]


@dataclass(frozen=True)
class Topic:
    topic_id: str
    query_string: str


def _iter_json_lines(path):
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(path, line_no, f"invalid JSON: {exc.msg}") from None
            if not isinstance(record, dict):
                raise ParseError(path, line_no, "expected a JSON object")
            yield line_no, record


def _require(record: dict, key: str, path, line_no: int):
    if key not in record:
        raise ParseError(path, line_no, f"missing required field {key!r}")
    return record[key]


def load_concepts(path) -> ConceptOntology:
    """Load a concept ontology from JSON lines.

    Record shape: {"id", "preferred_label", "synonyms": [..], "parents": [..]}.
    Validates that parents resolve and the graph is acyclic.
    """
    concepts = []
    for line_no, record in _iter_json_lines(path):
        try:
            concepts.append(
                Concept(
                    id=str(_require(record, "id", path, line_no)),
                    preferred_label=str(_require(record, "preferred_label", path, line_no)),
                    synonyms=tuple(str(s) for s in record.get("synonyms", [])),
                    parents=tuple(str(p) for p in record.get("parents", [])),
                )
            )
        except InvalidQueryError as exc:
            raise ParseError(path, line_no, str(exc)) from None
    return ConceptOntology(concepts)


def save_concepts(ontology: ConceptOntology, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for cid in sorted(ontology.concepts):
            concept = ontology.concepts[cid]
            record = {
                "id": concept.id,
                "preferred_label": concept.preferred_label,
                "synonyms": list(concept.synonyms),
                "parents": list(concept.parents),
            }
            fh.write(json.dumps(record, sort_keys=True) + "\n")


def load_predicates(path) -> PredicateHierarchy:
    """Load a predicate hierarchy from JSON lines.

    Record shape: {"id", "label", "synonyms": [..], "parent"?}. When any parent
    link is present, a single root predicate must exist.
    """
    predicates = []
    for line_no, record in _iter_json_lines(path):
        parent = record.get("parent")
        try:
            predicates.append(
                Predicate(
                    id=str(_require(record, "id", path, line_no)),
                    label=str(_require(record, "label", path, line_no)),
                    synonyms=tuple(str(s) for s in record.get("synonyms", [])),
                    parent=str(parent) if parent is not None else None,
                )
            )
        except InvalidQueryError as exc:
            raise ParseError(path, line_no, str(exc)) from None
    return PredicateHierarchy(predicates)


def save_predicates(hierarchy: PredicateHierarchy, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for pid in sorted(hierarchy.predicates):
            predicate = hierarchy.predicates[pid]
            record = {
                "id": predicate.id,
                "label": predicate.label,
                "synonyms": list(predicate.synonyms),
            }
            if predicate.parent is not None:
                record["parent"] = predicate.parent
            fh.write(json.dumps(record, sort_keys=True) + "\n")


def load_documents(path) -> list[tuple[Document, DocumentAnnotations]]:
    """Load annotated documents from JSON lines.

    Record shape: {"doc_id", "title", "abstract", "fulltext"?, "concepts": [..],
    "statements": [[s, p, o], ..]}. Statement endpoints must appear among the
    record's concepts.
    """
    out: list[tuple[Document, DocumentAnnotations]] = []
    for line_no, record in _iter_json_lines(path):
        try:
            doc = Document(
                doc_id=str(_require(record, "doc_id", path, line_no)),
                title=str(_require(record, "title", path, line_no)),
                abstract=str(_require(record, "abstract", path, line_no)),
                fulltext=record.get("fulltext"),
            )
            statements = []
            for raw in record.get("statements", []):
                if not isinstance(raw, (list, tuple)) or len(raw) != 3:
                    raise ParseError(path, line_no, f"statement {raw!r} is not an [s, p, o] triple")
                statements.append(Statement(str(raw[0]), str(raw[1]), str(raw[2])))
            ann = DocumentAnnotations(
                doc_id=doc.doc_id,
                detected_concepts=frozenset(str(c) for c in record.get("concepts", [])),
                extracted_statements=frozenset(statements),
            )
        except InvalidQueryError as exc:
            raise ParseError(path, line_no, str(exc)) from None
        out.append((doc, ann))
    return out


def save_documents(docs: Iterable[tuple[Document, DocumentAnnotations]], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc, ann in docs:
            record = {
                "doc_id": doc.doc_id,
                "title": doc.title,
                "abstract": doc.abstract,
                "concepts": sorted(ann.detected_concepts),
                "statements": [list(s.as_tuple()) for s in sorted(ann.extracted_statements)],
            }
            if doc.fulltext is not None:
                record["fulltext"] = doc.fulltext
            fh.write(json.dumps(record, sort_keys=True) + "\n")


def load_topics(path) -> list[Topic]:
    """Load benchmark topics: {"topic_id", "query_string"} per line."""
    topics = []
    for line_no, record in _iter_json_lines(path):
        topics.append(
            Topic(
                topic_id=str(_require(record, "topic_id", path, line_no)),
                query_string=str(_require(record, "query_string", path, line_no)),
            )
        )
    return topics


def save_topics(topics: Iterable[Topic], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for topic in topics:
            record = {"topic_id": topic.topic_id, "query_string": topic.query_string}
            fh.write(json.dumps(record, sort_keys=True) + "\n")


def load_qrels(path) -> Qrels:
    """Load relevance judgments in the 4-column TREC layout.

    Columns: topic_id, iteration (ignored), doc_id, relevance. Relevance 1 or
    higher counts as relevant downstream.
    """
    qrels: Qrels = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 4:
                raise ParseError(path, line_no, f"expected 4 columns, got {len(parts)}")
            topic_id, _iteration, doc_id, raw_rel = parts
            try:
                relevance = int(raw_rel)
            except ValueError:
                raise ParseError(path, line_no, f"relevance {raw_rel!r} is not an integer") from None
            if relevance < 0:
                raise ParseError(path, line_no, f"relevance must be non-negative, got {relevance}")
            qrels.setdefault(topic_id, {})[doc_id] = relevance
    return qrels


def save_qrels(qrels: Qrels, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for topic_id in sorted(qrels):
            for doc_id in sorted(qrels[topic_id]):
                fh.write(f"{topic_id} 0 {doc_id} {qrels[topic_id][doc_id]}\n")
