"""Keyword-to-narrative-query translation.

Two phases. The mapping phase aligns token spans with concept and predicate
labels and proposes statements between the mapped concepts that the collection
actually supports. The generation phase enumerates every unambiguous way to
consume the tokens (concept span, predicate span, or term), branches over the
supported statements, and filters out queries whose predicate mappings are left
without a statement.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional

from .errors import QueryExplosionError, TokenLimitError
from .indexing import CollectionIndex, LabelIndex, normalize_label
from .model import (
    ConceptId,
    NarrativeQuery,
    PredicateId,
    Statement,
    canonical_serialize,
    make_query,
)
from .tokenization import DEFAULT_TOKENIZER, TokenizerOptions, tokenize

# Upper bound on enumeration work; far beyond anything reachable under the
# default caps, it exists so pathological inputs fail loudly instead of hanging.
_MAX_ENUMERATION_STEPS = 10_000_000


@dataclass(frozen=True)
class TranslationOptions:
    """Knobs of the translation algorithm.

    tau is the minimum support threshold: components included in at most tau
    documents are excluded from generated queries.
    """

    tau: int = 0
    consider_permutations: bool = False
    max_tokens: int = 12
    max_queries: int = 10_000

    def __post_init__(self):
        if self.tau < 0:
            raise ValueError("tau must be non-negative")
        if self.max_tokens <= 0 or self.max_queries <= 0:
            raise ValueError("caps must be positive")


DEFAULT_TRANSLATION = TranslationOptions()


@dataclass(frozen=True)
class TokenSpan:
    """A selection of token positions with its surface text.

    Indices are contiguous and ascending unless permutations are enabled.
    """

    indices: tuple[int, ...]
    surface: str

    def __post_init__(self):
        if not self.indices:
            raise ValueError("a token span cannot be empty")
        object.__setattr__(self, "indices", tuple(self.indices))

    @property
    def index_set(self) -> frozenset[int]:
        return frozenset(self.indices)


@dataclass(frozen=True, eq=False)
class MappingResult:
    """Output of the mapping phase.

    checked_spans records every span the phase looked up, in enumeration order;
    tests and instrumentation rely on it.
    """

    tokens: tuple[str, ...]
    concept_mappings: Mapping[TokenSpan, frozenset[ConceptId]]
    predicate_mappings: Mapping[TokenSpan, frozenset[PredicateId]]
    possible_statements: tuple[Statement, ...]
    checked_spans: tuple[TokenSpan, ...]

    def mapped_concepts(self) -> frozenset[ConceptId]:
        out: set[str] = set()
        for ids in self.concept_mappings.values():
            out.update(ids)
        return frozenset(out)


@dataclass(frozen=True)
class GeneratedQuery:
    """One generated narrative query plus how the input tokens were consumed.

    excluded_tokens lists tokens dropped by the support filter, in input order;
    the UI surfaces them so users see which keywords were not reflected.
    """

    query: NarrativeQuery
    excluded_tokens: tuple[str, ...]
    concept_spans: tuple[tuple[TokenSpan, ConceptId], ...] = ()
    predicate_spans: tuple[tuple[TokenSpan, PredicateId], ...] = ()
    term_indices: tuple[int, ...] = ()
    excluded_indices: tuple[int, ...] = ()

    @property
    def canonical(self) -> str:
        return canonical_serialize(self.query)


_EMPTY_MAPPING = MappingResult(
    tokens=(),
    concept_mappings={},
    predicate_mappings={},
    possible_statements=(),
    checked_spans=(),
)


@dataclass(frozen=True, eq=False)
class TranslationResult:
    """All generated queries for one keyword input, in canonical order."""

    tokens: tuple[str, ...]
    mapping: MappingResult
    queries: tuple[GeneratedQuery, ...]
    truncated: bool = False

    def narrative_queries(self) -> list[NarrativeQuery]:
        return [g.query for g in self.queries]


EMPTY_TRANSLATION = TranslationResult(tokens=(), mapping=_EMPTY_MAPPING, queries=())


def _label_token_bound(*indexes: LabelIndex) -> int:
    """Longest label length in tokens; bounds permutation span size."""
    bound = 1
    for index in indexes:
        for label in index:
            bound = max(bound, len(label.split()))
    return bound


def enumerate_spans(
    tokens: tuple[str, ...],
    consider_permutations: bool,
    max_span_len: Optional[int] = None,
) -> list[TokenSpan]:
    """All contiguous windows; with permutations, also every ordered arrangement
    of a token subset up to max_span_len."""
    n = len(tokens)
    spans: list[TokenSpan] = []
    seen: set[tuple[int, ...]] = set()
    for start in range(n):
        for end in range(start + 1, n + 1):
            indices = tuple(range(start, end))
            spans.append(TokenSpan(indices, " ".join(tokens[start:end])))
            seen.add(indices)
    if consider_permutations:
        bound = min(n, max_span_len if max_span_len is not None else n)
        for size in range(2, bound + 1):
            for combo in itertools.combinations(range(n), size):
                for perm in itertools.permutations(combo):
                    if perm in seen:
                        continue
                    seen.add(perm)
                    spans.append(TokenSpan(perm, " ".join(tokens[i] for i in perm)))
    return spans


def map_tokens(
    tokens: list[str] | tuple[str, ...],
    concept_index: LabelIndex,
    predicate_index: LabelIndex,
    collection_index: CollectionIndex,
    opts: TranslationOptions = DEFAULT_TRANSLATION,
) -> MappingResult:
    """Mapping phase: align token spans with vocabulary labels.

    Concepts with support <= tau are removed. Predicates map purely by label;
    whether they survive is decided later by the statement filter. Possible
    statements are every ordered pair of mapped concepts combined with every
    predicate, kept when the collection supports them.
    """
    tokens = tuple(tokens)
    if len(tokens) > opts.max_tokens:
        raise TokenLimitError(len(tokens), opts.max_tokens)

    bound = _label_token_bound(concept_index, predicate_index)
    spans = enumerate_spans(tokens, opts.consider_permutations, bound)

    concept_mappings: dict[TokenSpan, frozenset[str]] = {}
    predicate_mappings: dict[TokenSpan, frozenset[str]] = {}
    for span in spans:
        key = normalize_label(span.surface)
        concept_ids = concept_index.get(key)
        if concept_ids:
            supported = frozenset(
                c for c in concept_ids if collection_index.support_concept(c) > opts.tau
            )
            if supported:
                concept_mappings[span] = supported
        predicate_ids = predicate_index.get(key)
        if predicate_ids:
            predicate_mappings[span] = frozenset(predicate_ids)

    mapped_concepts = sorted({c for ids in concept_mappings.values() for c in ids})
    all_predicates = sorted({p for ids in predicate_index.values() for p in ids})
    possible: list[Statement] = []
    for subject in mapped_concepts:
        for obj in mapped_concepts:
            if subject == obj:
                continue
            for pid in all_predicates:
                stmt = Statement(subject, pid, obj)
                if collection_index.support_statement(stmt) > opts.tau:
                    possible.append(stmt)
    possible.sort()

    return MappingResult(
        tokens=tokens,
        concept_mappings=concept_mappings,
        predicate_mappings=predicate_mappings,
        possible_statements=tuple(possible),
        checked_spans=tuple(spans),
    )


def _span_choices(
    mapping: MappingResult,
) -> list[tuple[TokenSpan, tuple[tuple[str, str], ...]]]:
    """Per span, the orderly list of ("concept"|"predicate", id) targets."""
    spans: dict[TokenSpan, list[tuple[str, str]]] = {}
    for span, ids in mapping.concept_mappings.items():
        spans.setdefault(span, []).extend(("concept", cid) for cid in sorted(ids))
    for span, ids in mapping.predicate_mappings.items():
        spans.setdefault(span, []).extend(("predicate", pid) for pid in sorted(ids))
    ordered = sorted(spans.items(), key=lambda item: item[0].indices)
    return [(span, tuple(choices)) for span, choices in ordered]


def _assignments(
    span_choices: list[tuple[TokenSpan, tuple[tuple[str, str], ...]]],
    budget: list[int],
) -> Iterator[tuple[tuple[TokenSpan, str, str], ...]]:
    """Every selection of non-overlapping spans with one target each.

    The no-mapping option comes first, so the all-terms assignment is yielded
    before anything else.
    """

    def recurse(pos: int, used: frozenset[int], chosen):
        budget[0] -= 1
        if budget[0] < 0:
            raise QueryExplosionError(
                "query generation exceeded the internal enumeration bound"
            )
        if pos == len(span_choices):
            yield tuple(chosen)
            return
        span, choices = span_choices[pos]
        yield from recurse(pos + 1, used, chosen)
        if not (span.index_set & used):
            for kind, target in choices:
                chosen.append((span, kind, target))
                yield from recurse(pos + 1, used | span.index_set, chosen)
                chosen.pop()

    yield from recurse(0, frozenset(), [])


def generate_queries(
    mapping: MappingResult,
    collection_index: CollectionIndex,
    opts: TranslationOptions = DEFAULT_TRANSLATION,
) -> TranslationResult:
    """Generation phase: enumerate assignments, integrate statements, filter.

    1. Branch over every non-overlapping span selection and every homonym,
       always including the option not to map a span.
    2. Unmapped tokens become terms; terms with support <= tau are dropped from
       the query but recorded per query.
    3. Branch over every combination of applicable supported statements, at
       most one predicate per ordered concept pair.
    4. Drop queries where a predicate-mapped token has no matching statement.

    Output is deduplicated by canonical serialization, sorted canonically, and
    truncated at max_queries.
    """
    tokens = mapping.tokens
    span_choices = _span_choices(mapping)
    budget = [_MAX_ENUMERATION_STEPS]
    records: dict[str, GeneratedQuery] = {}

    for assignment in _assignments(span_choices, budget):
        used: set[int] = set()
        concept_spans: list[tuple[TokenSpan, str]] = []
        predicate_spans: list[tuple[TokenSpan, str]] = []
        for span, kind, target in assignment:
            used.update(span.indices)
            if kind == "concept":
                concept_spans.append((span, target))
            else:
                predicate_spans.append((span, target))

        term_indices: list[int] = []
        excluded_indices: list[int] = []
        for i, token in enumerate(tokens):
            if i in used:
                continue
            if collection_index.support_term(token) > opts.tau:
                term_indices.append(i)
            else:
                excluded_indices.append(i)

        concepts = frozenset(cid for _, cid in concept_spans)
        terms = frozenset(tokens[i] for i in term_indices)
        mapped_predicates = [pid for _, pid in predicate_spans]

        applicable = [
            s
            for s in mapping.possible_statements
            if s.subject in concepts and s.object in concepts
        ]
        by_pair: dict[tuple[str, str], list[Statement]] = {}
        for stmt in applicable:
            by_pair.setdefault((stmt.subject, stmt.object), []).append(stmt)
        pair_options: list[list[Optional[Statement]]] = [
            [None, *group] for _, group in sorted(by_pair.items())
        ]

        for picks in itertools.product(*pair_options):
            budget[0] -= 1
            if budget[0] < 0:
                raise QueryExplosionError(
                    "query generation exceeded the internal enumeration bound"
                )
            statements = frozenset(s for s in picks if s is not None)
            included_predicates = {s.predicate for s in statements}
            if any(pid not in included_predicates for pid in mapped_predicates):
                continue
            query = make_query(statements, concepts, terms)
            if query.is_empty():
                continue  # translation never emits the fully empty query
            key = canonical_serialize(query)
            if key in records:
                continue
            records[key] = GeneratedQuery(
                query=query,
                excluded_tokens=tuple(tokens[i] for i in excluded_indices),
                concept_spans=tuple(concept_spans),
                predicate_spans=tuple(predicate_spans),
                term_indices=tuple(term_indices),
                excluded_indices=tuple(excluded_indices),
            )

    ordered = [records[key] for key in sorted(records)]
    truncated = len(ordered) > opts.max_queries
    if truncated:
        ordered = ordered[: opts.max_queries]
    return TranslationResult(
        tokens=tokens,
        mapping=mapping,
        queries=tuple(ordered),
        truncated=truncated,
    )


def translate(
    keywords: str,
    concept_index: LabelIndex,
    predicate_index: LabelIndex,
    collection_index: CollectionIndex,
    tokenizer: TokenizerOptions = DEFAULT_TOKENIZER,
    opts: TranslationOptions = DEFAULT_TRANSLATION,
) -> TranslationResult:
    """Tokenize, map, and generate; the full keyword-to-query pipeline."""
    tokens = tokenize(keywords, tokenizer)
    if not tokens:
        return EMPTY_TRANSLATION
    mapping = map_tokens(tokens, concept_index, predicate_index, collection_index, opts)
    return generate_queries(mapping, collection_index, opts)
