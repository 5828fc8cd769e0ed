"""Domain vocabulary: concepts, predicates, statements, documents, narrative queries.

All types are immutable values; they can be shared freely across threads.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import InvalidQueryError

# Concept and predicate ids are opaque strings (ontology accessions, relation names).
ConceptId = str
PredicateId = str


def _check_identifier(value: str, what: str) -> None:
    if not value:
        raise InvalidQueryError(f"{what} must be non-empty")


def _check_term(text: str) -> None:
    _check_identifier(text, "term")
    if any(ch.isspace() for ch in text):
        raise InvalidQueryError(f"term {text!r} contains whitespace")
    if text != text.lower():
        raise InvalidQueryError(f"term {text!r} is not lowercase")


@dataclass(frozen=True)
class Concept:
    """An ontology entry with a preferred label, synonyms, and super-concept links."""

    id: ConceptId
    preferred_label: str
    synonyms: tuple[str, ...] = ()
    parents: tuple[ConceptId, ...] = ()

    def __post_init__(self):
        _check_identifier(self.id, "concept id")
        if not self.preferred_label:
            raise InvalidQueryError(f"concept {self.id!r} has an empty preferred label")
        if self.id in self.parents:
            raise InvalidQueryError(f"concept {self.id!r} lists itself as a parent")
        object.__setattr__(self, "synonyms", tuple(self.synonyms))
        object.__setattr__(self, "parents", tuple(self.parents))

    @property
    def labels(self) -> tuple[str, ...]:
        return (self.preferred_label, *self.synonyms)


@dataclass(frozen=True)
class Predicate:
    """A relationship label, optionally a specialization of a more general predicate."""

    id: PredicateId
    label: str
    synonyms: tuple[str, ...] = ()
    parent: Optional[PredicateId] = None

    def __post_init__(self):
        _check_identifier(self.id, "predicate id")
        if not self.label:
            raise InvalidQueryError(f"predicate {self.id!r} has an empty label")
        if self.parent == self.id:
            raise InvalidQueryError(f"predicate {self.id!r} lists itself as its parent")
        object.__setattr__(self, "synonyms", tuple(self.synonyms))

    @property
    def labels(self) -> tuple[str, ...]:
        return (self.label, *self.synonyms)


@dataclass(frozen=True, order=True)
class Statement:
    """A directed (subject, predicate, object) triple between two concepts."""

    subject: ConceptId
    predicate: PredicateId
    object: ConceptId

    def __post_init__(self):
        _check_identifier(self.subject, "statement subject")
        _check_identifier(self.predicate, "statement predicate")
        _check_identifier(self.object, "statement object")
        if self.subject == self.object:
            raise InvalidQueryError(
                f"statement subject and object must differ, got {self.subject!r} twice"
            )

    def as_tuple(self) -> tuple[str, str, str]:
        return (self.subject, self.predicate, self.object)


@dataclass(frozen=True)
class Document:
    """A retrievable text: title plus abstract, optionally a full text."""

    doc_id: str
    title: str
    abstract: str
    fulltext: Optional[str] = None

    def __post_init__(self):
        if not self.doc_id:
            raise InvalidQueryError("document id must be non-empty")

    def text(self) -> str:
        parts = [self.title, self.abstract]
        if self.fulltext:
            parts.append(self.fulltext)
        return " ".join(parts)


@dataclass(frozen=True)
class DocumentAnnotations:
    """Concepts detected in a document and statements extracted from it."""

    doc_id: str
    detected_concepts: frozenset[ConceptId] = frozenset()
    extracted_statements: frozenset[Statement] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "detected_concepts", frozenset(self.detected_concepts))
        object.__setattr__(self, "extracted_statements", frozenset(self.extracted_statements))
        for stmt in self.extracted_statements:
            for endpoint in (stmt.subject, stmt.object):
                if endpoint not in self.detected_concepts:
                    raise InvalidQueryError(
                        f"document {self.doc_id!r}: statement {stmt.as_tuple()} uses concept "
                        f"{endpoint!r} that is not among the detected concepts"
                    )


@dataclass(frozen=True)
class NarrativeQuery:
    """A query asking for statements, concepts, and terms, all of which must match.

    The concept set always contains every statement endpoint, so it is the full
    concept inventory of the query. At most one statement may exist per ordered
    concept pair.
    """

    statements: frozenset[Statement] = frozenset()
    concepts: frozenset[ConceptId] = frozenset()
    terms: frozenset[str] = frozenset()

    def __post_init__(self):
        statements = frozenset(self.statements)
        concepts = frozenset(self.concepts)
        terms = frozenset(self.terms)

        pairs = set()
        for stmt in statements:
            pair = (stmt.subject, stmt.object)
            if pair in pairs:
                raise InvalidQueryError(
                    f"two statements share the ordered concept pair {pair}; "
                    "only a single predicate is allowed between two concepts"
                )
            pairs.add(pair)
            concepts = concepts | {stmt.subject, stmt.object}
        for cid in concepts:
            _check_identifier(cid, "concept id")
        for term in terms:
            _check_term(term)

        object.__setattr__(self, "statements", statements)
        object.__setattr__(self, "concepts", concepts)
        object.__setattr__(self, "terms", terms)

    def is_empty(self) -> bool:
        return not (self.statements or self.concepts or self.terms)

    def predicates(self) -> frozenset[PredicateId]:
        return frozenset(s.predicate for s in self.statements)


EMPTY_QUERY = NarrativeQuery()

# Delimiters used by canonical_serialize. Ids and terms that contain them are
# escaped, which keeps the serialization injective for arbitrary identifiers.
_ESCAPES = (("\\", "\\\\"), ("|", "\\p"), (";", "\\s"), (",", "\\c"))


def _escape(value: str) -> str:
    for raw, escaped in _ESCAPES:
        value = value.replace(raw, escaped)
    return value


def canonical_serialize(query: NarrativeQuery) -> str:
    """Serialize a query to its canonical string form.

    Statements are sorted by (subject, predicate, object), concepts and terms
    lexicographically; sections are joined with fixed delimiters. Equal queries
    serialize identically and distinct queries never collide.
    """
    stmts = ";".join(
        f"{_escape(s.subject)},{_escape(s.predicate)},{_escape(s.object)}"
        for s in sorted(query.statements)
    )
    concepts = ";".join(_escape(c) for c in sorted(query.concepts))
    terms = ";".join(_escape(t) for t in sorted(query.terms))
    return f"S:{stmts}|C:{concepts}|T:{terms}"


def make_query(
    statements: Iterable[Statement] = (),
    concepts: Iterable[ConceptId] = (),
    terms: Iterable[str] = (),
) -> NarrativeQuery:
    """Convenience constructor accepting any iterables."""
    return NarrativeQuery(
        statements=frozenset(statements),
        concepts=frozenset(concepts),
        terms=frozenset(terms),
    )
