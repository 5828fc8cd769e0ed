"""HTTP facade for the interactive loop: translate keywords, run a chosen query.

The API is stateless: candidate selection happens client-side and the selected
query is posted back verbatim. All responses are pure functions of the loaded
corpus and the request body.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from typing import Any, Optional

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .errors import NarqError, TokenLimitError
from .indexing import (
    CollectionIndex,
    LabelIndex,
    build_collection_index,
    build_concept_index,
    build_predicate_index,
)
from .ingestion import load_concepts, load_documents, load_predicates
from .model import Document, NarrativeQuery, Statement, canonical_serialize, make_query
from .ontology import ConceptOntology, PredicateHierarchy
from .retrieval import answers
from .strategies import DEFAULT_STRATEGY, StrategyOptions, candidate_panel
from .tokenization import TokenizerOptions, tokenize
from .translation import TranslationOptions, translate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ServiceConfig:
    """Server configuration; every field can also be set via NARQ_* env vars."""

    documents: str = ""
    concepts: str = ""
    predicates: str = ""
    host: str = "127.0.0.1"
    port: int = 8000
    tau: int = 0
    consider_permutations: bool = False
    replace_punctuation: bool = False
    remove_stopwords: bool = True
    max_tokens: int = 12
    max_queries: int = 10_000

    def tokenizer(self) -> TokenizerOptions:
        return TokenizerOptions(
            remove_stopwords=self.remove_stopwords,
            replace_punctuation=self.replace_punctuation,
        )

    def translation(self) -> TranslationOptions:
        return TranslationOptions(
            tau=self.tau,
            consider_permutations=self.consider_permutations,
            max_tokens=self.max_tokens,
            max_queries=self.max_queries,
        )


def _env_bool(name: str, default: bool) -> bool:
    raw = os.environ.get(name)
    if raw is None:
        return default
    return raw.strip().lower() in ("1", "true", "yes", "on")


def config_from_env(base: ServiceConfig = ServiceConfig()) -> ServiceConfig:
    env = os.environ
    return ServiceConfig(
        documents=env.get("NARQ_DOCS", base.documents),
        concepts=env.get("NARQ_CONCEPTS", base.concepts),
        predicates=env.get("NARQ_PREDICATES", base.predicates),
        host=env.get("NARQ_HOST", base.host),
        port=int(env.get("NARQ_PORT", base.port)),
        tau=int(env.get("NARQ_TAU", base.tau)),
        consider_permutations=_env_bool("NARQ_PERMUTATIONS", base.consider_permutations),
        replace_punctuation=_env_bool("NARQ_PUNCT", base.replace_punctuation),
        remove_stopwords=_env_bool("NARQ_STOPWORDS", base.remove_stopwords),
        max_tokens=int(env.get("NARQ_MAX_TOKENS", base.max_tokens)),
        max_queries=int(env.get("NARQ_MAX_QUERIES", base.max_queries)),
    )


class MalformedRequest(ValueError):
    """Request body failed validation; maps to a 400 response."""


class Engine:
    """Bundles the loaded corpus, the built indexes, and the default options."""

    def __init__(
        self,
        ontology: ConceptOntology,
        hierarchy: PredicateHierarchy,
        docs,
        tokenizer: Optional[TokenizerOptions] = None,
        translation: Optional[TranslationOptions] = None,
        strategy: StrategyOptions = DEFAULT_STRATEGY,
    ):
        self.ontology = ontology
        self.hierarchy = hierarchy
        self.tokenizer = tokenizer or TokenizerOptions()
        self.translation_options = translation or TranslationOptions()
        self.strategy = strategy
        self.documents: dict[str, Document] = {doc.doc_id: doc for doc, _ in docs}
        self.concept_index: LabelIndex = build_concept_index(ontology)
        self.predicate_index: LabelIndex = build_predicate_index(hierarchy)
        self.collection_index: CollectionIndex = build_collection_index(
            docs, ontology, hierarchy, tokenizer_options=self.tokenizer
        )

    @classmethod
    def from_config(cls, config: ServiceConfig) -> "Engine":
        logger.info("loading corpus: %s", config.documents)
        ontology = load_concepts(config.concepts)
        hierarchy = load_predicates(config.predicates)
        docs = load_documents(config.documents)
        engine = cls(
            ontology,
            hierarchy,
            docs,
            tokenizer=config.tokenizer(),
            translation=config.translation(),
        )
        logger.info(
            "index ready: %d documents, %d concepts",
            engine.collection_index.doc_count,
            len(ontology),
        )
        return engine

    def _labels_for(self, query: NarrativeQuery) -> dict[str, dict[str, str]]:
        concept_labels = {
            cid: self.ontology.get(cid).preferred_label
            for cid in sorted(query.concepts)
            if cid in self.ontology
        }
        predicate_labels = {
            pid: self.hierarchy.get(pid).label
            for pid in sorted(query.predicates())
            if pid in self.hierarchy
        }
        return {"concepts": concept_labels, "predicates": predicate_labels}

    def serialize_query(self, query: NarrativeQuery) -> dict[str, Any]:
        return {
            "statements": [list(s.as_tuple()) for s in sorted(query.statements)],
            "concepts": sorted(query.concepts),
            "terms": sorted(query.terms),
        }

    def translate_panel(self, keywords: str, overrides: Optional[dict] = None) -> dict[str, Any]:
        """Translate keywords and assemble the candidate cards."""
        opts = self._merged_options(overrides or {})
        result = translate(
            keywords,
            self.concept_index,
            self.predicate_index,
            self.collection_index,
            tokenizer=self.tokenizer,
            opts=opts,
        )
        excluded_by_canonical = {g.canonical: list(g.excluded_tokens) for g in result.queries}
        panel = candidate_panel(
            result.narrative_queries(), self.collection_index, self.hierarchy, self.strategy
        )
        candidates = [
            {
                "strategy": candidate.strategy,
                "query": self.serialize_query(candidate.query),
                "labels": self._labels_for(candidate.query),
                "result_count": candidate.result_count,
                "excluded_tokens": excluded_by_canonical.get(
                    canonical_serialize(candidate.query), []
                ),
            }
            for candidate in panel
        ]
        if not candidates and result.tokens:
            # Nothing could be generated: every token is unsupported. Surface one
            # degenerate card so the UI can show which tokens were excluded.
            empty = make_query()
            candidates.append(
                {
                    "strategy": "fallback",
                    "query": self.serialize_query(empty),
                    "labels": {"concepts": {}, "predicates": {}},
                    "result_count": self.collection_index.doc_count,
                    "excluded_tokens": list(result.tokens),
                }
            )
        return {"candidates": candidates, "truncated": result.truncated}

    def _merged_options(self, overrides: dict) -> TranslationOptions:
        base = self.translation_options
        if not isinstance(overrides, dict):
            raise MalformedRequest("options must be an object")
        known = {"tau", "permutations", "max_tokens", "max_queries"}
        unknown = set(overrides) - known
        if unknown:
            raise MalformedRequest(f"unknown options: {', '.join(sorted(unknown))}")
        try:
            return TranslationOptions(
                tau=int(overrides.get("tau", base.tau)),
                consider_permutations=bool(
                    overrides.get("permutations", base.consider_permutations)
                ),
                max_tokens=int(overrides.get("max_tokens", base.max_tokens)),
                max_queries=int(overrides.get("max_queries", base.max_queries)),
            )
        except (TypeError, ValueError) as exc:
            raise MalformedRequest(f"invalid options: {exc}") from None

    def parse_query(self, payload: Any) -> NarrativeQuery:
        """Build a narrative query from its wire form, validating vocabulary ids."""
        if not isinstance(payload, dict):
            raise MalformedRequest("query must be an object")
        unknown = set(payload) - {"statements", "concepts", "terms"}
        if unknown:
            raise MalformedRequest(f"unknown query fields: {', '.join(sorted(unknown))}")

        statements = []
        for raw in payload.get("statements", []):
            if not isinstance(raw, (list, tuple)) or len(raw) != 3:
                raise MalformedRequest(f"statement {raw!r} is not an [s, p, o] triple")
            subject, predicate, obj = (str(part) for part in raw)
            if predicate not in self.hierarchy:
                raise MalformedRequest(f"unknown predicate {predicate!r}")
            statements.append((subject, predicate, obj))

        concepts = [str(c) for c in payload.get("concepts", [])]
        for cid in concepts + [s for s, _, _ in statements] + [o for _, _, o in statements]:
            if cid not in self.ontology:
                raise MalformedRequest(f"unknown concept {cid!r}")

        terms = []
        for raw_term in payload.get("terms", []):
            term = str(raw_term).lower()
            if not term or any(ch.isspace() for ch in term):
                raise MalformedRequest(f"invalid term {raw_term!r}")
            terms.append(term)

        try:
            return make_query(
                statements=[Statement(*parts) for parts in statements],
                concepts=concepts,
                terms=terms,
            )
        except NarqError as exc:
            raise MalformedRequest(str(exc)) from None

    def search(self, query: NarrativeQuery) -> dict[str, Any]:
        doc_ids = answers(query, self.collection_index)
        documents = [
            {
                "doc_id": doc_id,
                "title": self.documents[doc_id].title,
                "abstract": self.documents[doc_id].abstract,
            }
            for doc_id in doc_ids
        ]
        return {"doc_ids": doc_ids, "documents": documents, "total": len(doc_ids)}


def create_app(engine: Optional[Engine] = None) -> FastAPI:
    """Build the API application; pass engine=None to serve 503 until ready."""
    app = FastAPI(title="narq", docs_url=None, redoc_url=None)
    app.state.engine = engine
    # the browser client may be served from any static host
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["GET", "POST"], allow_headers=["*"]
    )

    def _engine() -> Optional[Engine]:
        return app.state.engine

    def _error(status: int, message: str) -> JSONResponse:
        return JSONResponse(status_code=status, content={"error": message})

    @app.exception_handler(Exception)
    async def internal_error(_request: Request, exc: Exception) -> JSONResponse:
        logger.exception("unhandled error: %s", exc)
        return _error(500, "internal server error")

    async def _json_body(request: Request) -> Any:
        try:
            return json.loads(await request.body())
        except json.JSONDecodeError:
            raise MalformedRequest("request body is not valid JSON") from None

    @app.get("/api/health")
    async def health() -> JSONResponse:
        engine = _engine()
        if engine is None:
            return JSONResponse(status_code=503, content={"status": "loading"})
        return JSONResponse(
            content={
                "status": "ok",
                "doc_count": engine.collection_index.doc_count,
                "concept_count": len(engine.ontology),
            }
        )

    @app.post("/api/translate")
    async def translate_endpoint(request: Request) -> JSONResponse:
        engine = _engine()
        if engine is None:
            return _error(503, "index not ready")
        try:
            payload = await _json_body(request)
            if not isinstance(payload, dict):
                raise MalformedRequest("request body must be an object")
            keywords = payload.get("keywords")
            if not isinstance(keywords, str) or not keywords.strip():
                raise MalformedRequest("keywords must be a non-empty string")
            response = engine.translate_panel(keywords, payload.get("options"))
        except TokenLimitError as exc:
            return _error(422, str(exc))
        except MalformedRequest as exc:
            return _error(400, str(exc))
        return JSONResponse(content=response)

    @app.post("/api/search")
    async def search_endpoint(request: Request) -> JSONResponse:
        engine = _engine()
        if engine is None:
            return _error(503, "index not ready")
        try:
            payload = await _json_body(request)
            if not isinstance(payload, dict) or "query" not in payload:
                raise MalformedRequest("request body must be an object with a 'query' field")
            query = engine.parse_query(payload["query"])
        except MalformedRequest as exc:
            return _error(400, str(exc))
        return JSONResponse(content=engine.search(query))

    return app


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="narq-serve", description="Serve the keyword-to-narrative-query API."
    )
    parser.add_argument("--docs", help="Annotated documents (JSON lines).")
    parser.add_argument("--concepts", help="Concept ontology (JSON lines).")
    parser.add_argument("--predicates", help="Predicate hierarchy (JSON lines).")
    parser.add_argument("--host", help="Listen address.")
    parser.add_argument("--port", type=int, help="Listen port.")
    parser.add_argument("--tau", type=int, help="Minimum support threshold.")
    parser.add_argument("--permutations", action="store_true", default=None)
    parser.add_argument("--punct", action="store_true", default=None)
    parser.add_argument("--keep-stopwords", action="store_true", default=None)
    args = parser.parse_args(argv)

    config = config_from_env()
    merged = ServiceConfig(
        documents=args.docs or config.documents,
        concepts=args.concepts or config.concepts,
        predicates=args.predicates or config.predicates,
        host=args.host or config.host,
        port=args.port if args.port is not None else config.port,
        tau=args.tau if args.tau is not None else config.tau,
        consider_permutations=(
            args.permutations if args.permutations is not None else config.consider_permutations
        ),
        replace_punctuation=args.punct if args.punct is not None else config.replace_punctuation,
        remove_stopwords=(
            not args.keep_stopwords if args.keep_stopwords is not None else config.remove_stopwords
        ),
        max_tokens=config.max_tokens,
        max_queries=config.max_queries,
    )
    if not (merged.documents and merged.concepts and merged.predicates):
        parser.error("--docs, --concepts, and --predicates are required (or NARQ_* env vars)")

    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    try:
        engine = Engine.from_config(merged)
    except (NarqError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    import uvicorn

    uvicorn.run(create_app(engine), host=merged.host, port=merged.port, log_level="info")
    return 0


if __name__ == "__main__":
    sys.exit(main())
