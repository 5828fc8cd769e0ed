"""Benchmark harness: judged-only P/R/F1, best-query search, strategy hits.

Retrieval here is strictly Boolean, so instead of rank metrics the harness
reports precision, recall, and F1 over judged documents only. Per topic it
translates the query string into all narrative queries, finds the ones that
maximize each metric, and checks whether the selection strategies would have
picked one of them, exactly or within one edit.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .errors import NarqError, NoJudgmentsError
from .indexing import (
    CollectionIndex,
    LabelIndex,
    build_collection_index,
    build_concept_index,
    build_predicate_index,
    normalize_label,
)
from .ingestion import Topic, load_concepts, load_documents, load_predicates, load_qrels, load_topics
from .model import NarrativeQuery, canonical_serialize, make_query
from .ontology import ConceptOntology, PredicateHierarchy
from .retrieval import answers
from .strategies import (
    DEFAULT_STRATEGY,
    StrategyOptions,
    select_mixed,
    select_most_supported,
    select_specific,
)
from .tokenization import DEFAULT_TOKENIZER, TokenizerOptions, tokenize
from .translation import DEFAULT_TRANSLATION, TranslationOptions, translate

REPORT_SCHEMA_VERSION = 1

METRIC_NAMES = ("precision", "recall", "f1")
SECTION_NAMES = ("exact", "one_edit_terms_concepts", "one_edit_predicates")
STRATEGY_NAMES = ("specific", "mixed", "most_supported")
BEST_COLUMNS = ("term_baseline", "best_precision", "best_recall", "best_f1")


@dataclass(frozen=True)
class Metrics:
    precision: float
    recall: float
    f1: float

    def get(self, name: str) -> float:
        return getattr(self, name)

    def as_dict(self) -> dict[str, float]:
        return {"precision": self.precision, "recall": self.recall, "f1": self.f1}


ZERO_METRICS = Metrics(0.0, 0.0, 0.0)


def judged_metrics(retrieved: Iterable[str], topic_qrels: Mapping[str, int]) -> Metrics:
    """Precision, recall, and F1 restricted to judged documents.

    Unjudged retrieved documents are ignored entirely, following the judged-only
    convention of bpref-style evaluation.
    """
    if not topic_qrels:
        raise NoJudgmentsError("<unknown>")
    retrieved_set = set(retrieved)
    judged = set(topic_qrels)
    relevant = {doc for doc, rel in topic_qrels.items() if rel >= 1}
    retrieved_judged = retrieved_set & judged
    true_positives = len(retrieved_set & relevant)
    precision = true_positives / len(retrieved_judged) if retrieved_judged else 0.0
    recall = true_positives / len(relevant) if relevant else 0.0
    f1 = 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)
    return Metrics(precision, recall, f1)


@dataclass(frozen=True)
class EvalOptions:
    tokenizer: TokenizerOptions = field(default=DEFAULT_TOKENIZER)
    translation: TranslationOptions = field(default=DEFAULT_TRANSLATION)
    strategy: StrategyOptions = field(default=DEFAULT_STRATEGY)
    # One-edit comparison in terms/concepts: require the moved element's term
    # text to match a label of the concept. Disable for the looser reading.
    one_edit_requires_label_match: bool = True


DEFAULT_EVAL = EvalOptions()


def term_baseline_query(topic_string: str, tokenizer: TokenizerOptions) -> NarrativeQuery:
    """The Boolean term query used as baseline: every token as a required term.

    No support filtering is applied; a term absent from the index simply makes
    the conjunction empty.
    """
    return make_query(terms=tokenize(topic_string, tokenizer))


def term_baseline(
    topic_string: str,
    index: CollectionIndex,
    topic_qrels: Mapping[str, int],
    tokenizer: TokenizerOptions = DEFAULT_TOKENIZER,
) -> Metrics:
    query = term_baseline_query(topic_string, tokenizer)
    return judged_metrics(answers(query, index), topic_qrels)


def within_one_predicate_edit(a: NarrativeQuery, b: NarrativeQuery) -> bool:
    """Identical queries, or identical except one statement's predicate differs."""
    if a == b:
        return True
    if a.concepts != b.concepts or a.terms != b.terms:
        return False
    extra_a = a.statements - b.statements
    extra_b = b.statements - a.statements
    if len(extra_a) != 1 or len(extra_b) != 1:
        return False
    sa = next(iter(extra_a))
    sb = next(iter(extra_b))
    return sa.subject == sb.subject and sa.object == sb.object and sa.predicate != sb.predicate


def within_one_term_concept_edit(
    a: NarrativeQuery,
    b: NarrativeQuery,
    ontology: Optional[ConceptOntology] = None,
    require_label_match: bool = True,
) -> bool:
    """Identical queries, or one element moved between term and concept status.

    One side carries an extra concept, the other the corresponding extra term;
    by default the term text must match one of the concept's labels.
    """
    if a == b:
        return True
    if a.statements != b.statements:
        return False
    for x, y in ((a, b), (b, a)):
        extra_concepts = x.concepts - y.concepts
        extra_terms = y.terms - x.terms
        if (
            len(extra_concepts) == 1
            and len(extra_terms) == 1
            and not (y.concepts - x.concepts)
            and not (x.terms - y.terms)
        ):
            if not require_label_match:
                return True
            concept_id = next(iter(extra_concepts))
            term = next(iter(extra_terms))
            if ontology is None or concept_id not in ontology:
                continue
            labels = {normalize_label(l) for l in ontology.get(concept_id).labels}
            if term in labels:
                return True
    return False


@dataclass(frozen=True)
class BestSet:
    """All argmax queries for one metric, with the metrics of the canonical-first one."""

    value: float
    queries: tuple[str, ...]
    representative: Metrics

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "queries": list(self.queries),
            "representative": self.representative.as_dict(),
        }


EMPTY_BEST = BestSet(value=0.0, queries=(), representative=ZERO_METRICS)


@dataclass(frozen=True, eq=False)
class TopicResult:
    topic_id: str
    query_string: str
    term_baseline: Metrics
    query_metrics: tuple[tuple[str, Metrics], ...]
    best: dict[str, BestSet]
    selections: dict[str, Optional[str]]
    hits: dict[str, dict[str, bool]]
    truncated: bool

    def as_dict(self) -> dict:
        return {
            "topic_id": self.topic_id,
            "query_string": self.query_string,
            "term_baseline": self.term_baseline.as_dict(),
            "generated_queries": [
                {"query": canonical, **metrics.as_dict()}
                for canonical, metrics in self.query_metrics
            ],
            "best": {name: best.as_dict() for name, best in self.best.items()},
            "selections": dict(self.selections),
            "hits": {s: dict(flags) for s, flags in self.hits.items()},
            "truncated": self.truncated,
        }


def best_metric_queries(
    query_metrics: Sequence[tuple[NarrativeQuery, Metrics]],
) -> dict[str, BestSet]:
    """For each metric, every query achieving the maximum value."""
    best: dict[str, BestSet] = {}
    for name in METRIC_NAMES:
        if not query_metrics:
            best[name] = EMPTY_BEST
            continue
        top = max(metrics.get(name) for _, metrics in query_metrics)
        winners = sorted(
            (
                (canonical_serialize(query), metrics)
                for query, metrics in query_metrics
                if metrics.get(name) == top
            ),
            key=lambda item: item[0],
        )
        best[name] = BestSet(
            value=top,
            queries=tuple(canonical for canonical, _ in winners),
            representative=winners[0][1],
        )
    return best


def strategy_hits(
    selections: Mapping[str, Optional[NarrativeQuery]],
    best_queries: Mapping[str, Sequence[NarrativeQuery]],
    ontology: Optional[ConceptOntology] = None,
    opts: EvalOptions = DEFAULT_EVAL,
) -> dict[str, dict[str, bool]]:
    """Exact-hit and one-edit flags per metric, plus the 'any' union."""
    picked = [q for q in selections.values() if q is not None]
    hits: dict[str, dict[str, bool]] = {}
    for section in SECTION_NAMES:
        flags: dict[str, bool] = {}
        for metric in METRIC_NAMES:
            found = False
            for selection in picked:
                for best in best_queries.get(metric, ()):
                    if section == "exact":
                        found = selection == best
                    elif section == "one_edit_terms_concepts":
                        found = within_one_term_concept_edit(
                            selection, best, ontology, opts.one_edit_requires_label_match
                        )
                    else:
                        found = within_one_predicate_edit(selection, best)
                    if found:
                        break
                if found:
                    break
            flags[metric] = found
        flags["any"] = any(flags[m] for m in METRIC_NAMES)
        hits[section] = flags
    return hits


def evaluate_topic(
    topic: Topic,
    topic_qrels: Mapping[str, int],
    concept_index: LabelIndex,
    predicate_index: LabelIndex,
    collection_index: CollectionIndex,
    ontology: ConceptOntology,
    hierarchy: PredicateHierarchy,
    opts: EvalOptions = DEFAULT_EVAL,
) -> TopicResult:
    if not topic_qrels:
        raise NoJudgmentsError(topic.topic_id)

    baseline = term_baseline(topic.query_string, collection_index, topic_qrels, opts.tokenizer)

    translation = translate(
        topic.query_string,
        concept_index,
        predicate_index,
        collection_index,
        tokenizer=opts.tokenizer,
        opts=opts.translation,
    )
    queries = translation.narrative_queries()
    evaluated = [
        (query, judged_metrics(answers(query, collection_index), topic_qrels))
        for query in queries
    ]
    best = best_metric_queries(evaluated)

    selections: dict[str, Optional[NarrativeQuery]] = {
        "specific": select_specific(queries, collection_index, hierarchy, opts.strategy),
        "mixed": select_mixed(queries, collection_index, opts.strategy),
        "most_supported": select_most_supported(queries, collection_index) if queries else None,
    }

    by_canonical = {canonical_serialize(q): q for q in queries}
    best_objects = {
        name: [by_canonical[c] for c in best[name].queries] for name in METRIC_NAMES
    }
    hits = strategy_hits(selections, best_objects, ontology, opts)

    return TopicResult(
        topic_id=topic.topic_id,
        query_string=topic.query_string,
        term_baseline=baseline,
        query_metrics=tuple(
            (canonical_serialize(query), metrics) for query, metrics in evaluated
        ),
        best=best,
        selections={
            name: canonical_serialize(query) if query is not None else None
            for name, query in selections.items()
        },
        hits=hits,
        truncated=translation.truncated,
    )


@dataclass(frozen=True, eq=False)
class EvalReport:
    """Aggregated benchmark results; layout mirrors the model-quality and
    strategy-hit tables of the evaluation protocol."""

    topic_count: int
    topics: tuple[TopicResult, ...]
    model_quality: dict[str, dict[str, float]]
    strategy_hit_counts: dict[str, dict[str, int]]

    def as_dict(self) -> dict:
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "topic_count": self.topic_count,
            "model_quality": {
                "rows": list(METRIC_NAMES),
                "columns": list(BEST_COLUMNS),
                "values": {m: dict(cols) for m, cols in self.model_quality.items()},
            },
            "strategy_hits": {
                "sections": list(SECTION_NAMES),
                "columns": [*(f"best_{m}" for m in METRIC_NAMES), "any"],
                "counts": {s: dict(cols) for s, cols in self.strategy_hit_counts.items()},
            },
            "topics": [t.as_dict() for t in self.topics],
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2) + "\n"

    def to_text(self) -> str:
        lines = []
        lines.append(f"Topics evaluated: {self.topic_count}")
        lines.append("")
        lines.append("Model quality (judged-only means over topics)")
        header = f"{'Metric':<12}" + "".join(f"{c:>16}" for c in BEST_COLUMNS)
        lines.append(header)
        for metric in METRIC_NAMES:
            row = f"{metric:<12}"
            for column in BEST_COLUMNS:
                row += f"{self.model_quality[metric][column]:>16.4f}"
            lines.append(row)
        lines.append("")
        lines.append("Strategy hits (topics where a best-metric query was selected)")
        columns = [*(f"best_{m}" for m in METRIC_NAMES), "any"]
        header = f"{'Section':<28}{'|Q|':>6}" + "".join(f"{c:>16}" for c in columns)
        lines.append(header)
        for section in SECTION_NAMES:
            row = f"{section:<28}{self.topic_count:>6}"
            for column in columns:
                row += f"{self.strategy_hit_counts[section][column]:>16}"
            lines.append(row)
        return "\n".join(lines) + "\n"


def _aggregate(topics: Sequence[TopicResult]) -> EvalReport:
    count = len(topics)

    def mean(values: Iterable[float]) -> float:
        values = list(values)
        return sum(values) / len(values) if values else 0.0

    model_quality: dict[str, dict[str, float]] = {}
    for metric in METRIC_NAMES:
        columns: dict[str, float] = {}
        columns["term_baseline"] = mean(t.term_baseline.get(metric) for t in topics)
        for target in METRIC_NAMES:
            columns[f"best_{target}"] = mean(
                t.best[target].representative.get(metric) for t in topics
            )
        model_quality[metric] = columns

    hit_counts: dict[str, dict[str, int]] = {}
    for section in SECTION_NAMES:
        columns = {}
        for metric in METRIC_NAMES:
            columns[f"best_{metric}"] = sum(1 for t in topics if t.hits[section][metric])
        columns["any"] = sum(1 for t in topics if t.hits[section]["any"])
        hit_counts[section] = columns

    return EvalReport(
        topic_count=count,
        topics=tuple(topics),
        model_quality=model_quality,
        strategy_hit_counts=hit_counts,
    )


@dataclass(frozen=True)
class BenchmarkPaths:
    documents: str
    concepts: str
    predicates: str
    topics: str
    qrels: str


def run_benchmark(paths: BenchmarkPaths, opts: EvalOptions = DEFAULT_EVAL) -> EvalReport:
    """Load a benchmark, evaluate every topic, and aggregate the report."""
    ontology = load_concepts(paths.concepts)
    hierarchy = load_predicates(paths.predicates)
    docs = load_documents(paths.documents)
    topics = load_topics(paths.topics)
    qrels = load_qrels(paths.qrels)

    concept_index = build_concept_index(ontology)
    predicate_index = build_predicate_index(hierarchy)
    collection_index = build_collection_index(
        docs, ontology, hierarchy, tokenizer_options=opts.tokenizer
    )

    results = [
        evaluate_topic(
            topic,
            qrels.get(topic.topic_id, {}),
            concept_index,
            predicate_index,
            collection_index,
            ontology,
            hierarchy,
            opts,
        )
        for topic in topics
    ]
    return _aggregate(results)


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="narq-eval",
        description="Run the narrative-query retrieval benchmark on a corpus.",
    )
    parser.add_argument("--docs", required=True, help="Annotated documents (JSON lines).")
    parser.add_argument("--concepts", required=True, help="Concept ontology (JSON lines).")
    parser.add_argument("--predicates", required=True, help="Predicate hierarchy (JSON lines).")
    parser.add_argument("--topics", required=True, help="Benchmark topics (JSON lines).")
    parser.add_argument("--qrels", required=True, help="Relevance judgments (4-column qrels).")
    parser.add_argument("--tau", type=int, default=0, help="Minimum support threshold.")
    parser.add_argument(
        "--permutations", action="store_true", help="Consider keyword permutations when mapping."
    )
    parser.add_argument(
        "--punct", action="store_true", help="Replace punctuation with spaces when tokenizing."
    )
    parser.add_argument(
        "--keep-stopwords", action="store_true", help="Do not remove stopwords when tokenizing."
    )
    parser.add_argument("--out", help="Write the JSON report to this path.")
    args = parser.parse_args(argv)

    opts = EvalOptions(
        tokenizer=TokenizerOptions(
            remove_stopwords=not args.keep_stopwords,
            replace_punctuation=args.punct,
        ),
        translation=TranslationOptions(
            tau=args.tau, consider_permutations=args.permutations
        ),
    )
    paths = BenchmarkPaths(
        documents=args.docs,
        concepts=args.concepts,
        predicates=args.predicates,
        topics=args.topics,
        qrels=args.qrels,
    )
    try:
        report = run_benchmark(paths, opts)
    except (NarqError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    sys.stdout.write(report.to_text())
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(report.to_json())
    return 0


if __name__ == "__main__":
    sys.exit(main())
