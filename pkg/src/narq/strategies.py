"""Selection strategies choosing which generated queries to show to users."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import EmptyCandidateSetError
from .indexing import CollectionIndex
from .model import NarrativeQuery, canonical_serialize
from .ontology import PredicateHierarchy
from .retrieval import result_count


@dataclass(frozen=True)
class StrategyOptions:
    """rank_descending picks the survivor with the most results (the default);
    set it to False to prefer the smallest non-empty result set instead."""

    rank_descending: bool = True


DEFAULT_STRATEGY = StrategyOptions()


@dataclass(frozen=True)
class Candidate:
    """One panel entry: the selecting strategy, the query, and its result count."""

    strategy: str
    query: NarrativeQuery
    result_count: int


def _count_map(queries: Iterable[NarrativeQuery], index: CollectionIndex):
    counted: list[tuple[NarrativeQuery, str, int]] = []
    seen: set[str] = set()
    for query in queries:
        key = canonical_serialize(query)
        if key in seen:
            continue
        seen.add(key)
        counted.append((query, key, result_count(query, index)))
    return counted


def _pick(counted: Sequence[tuple[NarrativeQuery, str, int]], descending: bool):
    # Ties break toward the lexicographically smaller canonical serialization.
    if descending:
        return min(counted, key=lambda item: (-item[2], item[1]))
    return min(counted, key=lambda item: (item[2], item[1]))


def select_most_supported(
    queries: Sequence[NarrativeQuery], index: CollectionIndex
) -> NarrativeQuery:
    """The query returning the most documents; usually a term/concept-only query."""
    if not queries:
        raise EmptyCandidateSetError("most-supported selection needs at least one query")
    return _pick(_count_map(queries, index), descending=True)[0]


def select_mixed(
    queries: Sequence[NarrativeQuery],
    index: CollectionIndex,
    options: StrategyOptions = DEFAULT_STRATEGY,
) -> Optional[NarrativeQuery]:
    """Best query among those that contain a statement and return results.

    Any predicate is allowed. Returns None when no query qualifies.
    """
    survivors = [
        item
        for item in _count_map(queries, index)
        if item[0].statements and item[2] >= 1
    ]
    if not survivors:
        return None
    return _pick(survivors, options.rank_descending)[0]


def select_specific(
    queries: Sequence[NarrativeQuery],
    index: CollectionIndex,
    hierarchy: PredicateHierarchy,
    options: StrategyOptions = DEFAULT_STRATEGY,
) -> Optional[NarrativeQuery]:
    """Like the mixed selection, but statements must use specialized predicates.

    Without a predicate hierarchy there is no specialization to prefer and the
    selection coincides with the mixed one.
    """
    if not hierarchy.has_hierarchy:
        return select_mixed(queries, index, options)
    survivors = [
        item
        for item in _count_map(queries, index)
        if item[0].statements
        and item[2] >= 1
        and all(hierarchy.specificity_depth(s.predicate) >= 1 for s in item[0].statements)
    ]
    if not survivors:
        return None
    return _pick(survivors, options.rank_descending)[0]


def candidate_panel(
    queries: Sequence[NarrativeQuery],
    index: CollectionIndex,
    hierarchy: PredicateHierarchy,
    options: StrategyOptions = DEFAULT_STRATEGY,
) -> list[Candidate]:
    """Up to three candidates in specific, mixed, most-supported order.

    Strategies that select nothing are omitted; duplicate selections collapse
    into the most specific strategy's card.
    """
    selections: list[tuple[str, Optional[NarrativeQuery]]] = [
        ("specific", select_specific(queries, index, hierarchy, options)),
        ("mixed", select_mixed(queries, index, options)),
        ("most-supported", select_most_supported(queries, index) if queries else None),
    ]
    panel: list[Candidate] = []
    seen: set[str] = set()
    for strategy, query in selections:
        if query is None:
            continue
        key = canonical_serialize(query)
        if key in seen:
            continue
        seen.add(key)
        panel.append(Candidate(strategy, query, result_count(query, index)))
    return panel
