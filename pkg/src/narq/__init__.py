"""narq: keyword queries translated into narrative graph-pattern queries.

Pipeline: load an ontology and annotated documents, build the materialized
collection index, translate keyword queries into all supported narrative
queries, pick candidates with the selection strategies, and answer the chosen
query with Boolean graph-pattern retrieval.
"""

from .errors import (
    CycleError,
    EmptyCandidateSetError,
    InvalidQueryError,
    MultipleRootsError,
    NarqError,
    NoJudgmentsError,
    ParseError,
    QueryExplosionError,
    TokenLimitError,
    UnknownConceptError,
    UnknownPredicateError,
)
from .indexing import (
    CollectionIndex,
    build_collection_index,
    build_concept_index,
    build_predicate_index,
    load_snapshot,
    normalize_label,
    save_snapshot,
)
from .ingestion import (
    Topic,
    load_concepts,
    load_documents,
    load_predicates,
    load_qrels,
    load_topics,
)
from .model import (
    Concept,
    ConceptId,
    Document,
    DocumentAnnotations,
    NarrativeQuery,
    Predicate,
    PredicateId,
    Statement,
    canonical_serialize,
    make_query,
)
from .ontology import ConceptOntology, PredicateHierarchy
from .retrieval import DocumentView, answers, closed_document_view, matches, result_count
from .strategies import (
    Candidate,
    StrategyOptions,
    candidate_panel,
    select_mixed,
    select_most_supported,
    select_specific,
)
from .tokenization import ENGLISH_STOPWORDS, TokenizerOptions, tokenize
from .translation import (
    GeneratedQuery,
    MappingResult,
    TokenSpan,
    TranslationOptions,
    TranslationResult,
    generate_queries,
    map_tokens,
    translate,
)

__version__ = "0.1.0"

__all__ = [
    "Candidate",
    "CollectionIndex",
    "Concept",
    "ConceptId",
    "ConceptOntology",
    "CycleError",
    "Document",
    "DocumentAnnotations",
    "DocumentView",
    "EmptyCandidateSetError",
    "ENGLISH_STOPWORDS",
    "GeneratedQuery",
    "InvalidQueryError",
    "MappingResult",
    "MultipleRootsError",
    "NarqError",
    "NarrativeQuery",
    "NoJudgmentsError",
    "ParseError",
    "Predicate",
    "PredicateHierarchy",
    "PredicateId",
    "QueryExplosionError",
    "Statement",
    "StrategyOptions",
    "TokenLimitError",
    "TokenSpan",
    "TokenizerOptions",
    "Topic",
    "TranslationOptions",
    "TranslationResult",
    "UnknownConceptError",
    "UnknownPredicateError",
    "answers",
    "build_collection_index",
    "build_concept_index",
    "build_predicate_index",
    "candidate_panel",
    "canonical_serialize",
    "closed_document_view",
    "generate_queries",
    "load_concepts",
    "load_documents",
    "load_predicates",
    "load_qrels",
    "load_snapshot",
    "load_topics",
    "make_query",
    "map_tokens",
    "matches",
    "normalize_label",
    "result_count",
    "save_snapshot",
    "select_mixed",
    "select_most_supported",
    "select_specific",
    "tokenize",
    "translate",
]
