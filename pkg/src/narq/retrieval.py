"""Boolean match semantics and query answering over the collection index."""
from __future__ import annotations

from dataclasses import dataclass

from .indexing import CollectionIndex
from .model import ConceptId, Document, DocumentAnnotations, NarrativeQuery, Statement
from .ontology import ConceptOntology, PredicateHierarchy
from .tokenization import DEFAULT_TOKENIZER, TokenizerOptions, tokenize


@dataclass(frozen=True)
class DocumentView:
    """One document's terms, concepts, and statements with closure applied."""

    doc_id: str
    terms: frozenset[str]
    concepts: frozenset[ConceptId]
    statements: frozenset[Statement]


def closed_document_view(
    doc: Document,
    ann: DocumentAnnotations,
    ontology: ConceptOntology,
    hierarchy: PredicateHierarchy,
    tokenizer_options: TokenizerOptions = DEFAULT_TOKENIZER,
    statement_closure_exclude: frozenset[ConceptId] = frozenset(),
) -> DocumentView:
    """Materialize a single document's closed annotation view."""
    concepts: set[str] = set()
    for cid in ann.detected_concepts:
        concepts.add(cid)
        concepts.update(ontology.concept_ancestors(cid))

    statements: set[Statement] = set()
    for stmt in ann.extracted_statements:
        subjects = ({stmt.subject} | set(ontology.concept_ancestors(stmt.subject)))
        objects = ({stmt.object} | set(ontology.concept_ancestors(stmt.object)))
        subjects -= statement_closure_exclude
        objects -= statement_closure_exclude
        subjects.add(stmt.subject)
        objects.add(stmt.object)
        predicates = {stmt.predicate} | set(hierarchy.predicate_generalizations(stmt.predicate))
        for s in subjects:
            for o in objects:
                if s == o:
                    continue
                for p in predicates:
                    statements.add(Statement(s, p, o))

    return DocumentView(
        doc_id=doc.doc_id,
        terms=frozenset(tokenize(doc.text(), tokenizer_options)),
        concepts=frozenset(concepts),
        statements=frozenset(statements),
    )


def matches(view: DocumentView, query: NarrativeQuery) -> bool:
    """True iff the document contains every statement, concept, and term of the query."""
    return (
        query.statements <= view.statements
        and query.concepts <= view.concepts
        and query.terms <= view.terms
    )


def answers(query: NarrativeQuery, index: CollectionIndex) -> list[str]:
    """All matching doc ids, ascending.

    The empty query matches every document. Components absent from the index
    yield an empty intersection.
    """
    if query.is_empty():
        return list(index.doc_ids)

    postings: list[tuple[str, ...]] = []
    for stmt in query.statements:
        postings.append(index.statement_postings.get(stmt, ()))
    for cid in query.concepts:
        postings.append(index.concept_postings.get(cid, ()))
    for term in query.terms:
        postings.append(index.term_postings.get(term, ()))

    # Intersect starting from the smallest posting list; order has no semantic effect.
    postings.sort(key=len)
    if not postings[0]:
        return []
    result = set(postings[0])
    for posting in postings[1:]:
        result.intersection_update(posting)
        if not result:
            return []
    return sorted(result)


def result_count(query: NarrativeQuery, index: CollectionIndex) -> int:
    """Number of matching documents; cheap enough for candidate cards."""
    return len(answers(query, index))
