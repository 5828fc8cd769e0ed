"""Exception types shared across the package."""


class NarqError(Exception):
    """Base class for all narq errors."""


class InvalidQueryError(NarqError):
    """A narrative query (or one of its parts) violates a structural invariant."""


class UnknownConceptError(NarqError):
    """A concept id was referenced that is not present in the loaded ontology."""

    def __init__(self, concept_id: str, context: str = ""):
        self.concept_id = concept_id
        suffix = f" ({context})" if context else ""
        super().__init__(f"unknown concept: {concept_id!r}{suffix}")


class UnknownPredicateError(NarqError):
    """A predicate id was referenced that is not in the loaded hierarchy."""

    def __init__(self, predicate_id: str, context: str = ""):
        self.predicate_id = predicate_id
        suffix = f" ({context})" if context else ""
        super().__init__(f"unknown predicate: {predicate_id!r}{suffix}")


class CycleError(NarqError):
    """A concept or predicate hierarchy contains a cycle."""

    def __init__(self, member: str):
        self.member = member
        super().__init__(f"hierarchy contains a cycle through {member!r}")


class MultipleRootsError(NarqError):
    """A predicate hierarchy with parent links has more than one root."""

    def __init__(self, roots):
        self.roots = tuple(sorted(roots))
        super().__init__(f"predicate hierarchy has multiple roots: {', '.join(self.roots)}")


class TokenLimitError(NarqError):
    """The keyword query has more tokens than the configured cap allows."""

    def __init__(self, count: int, limit: int):
        self.count = count
        self.limit = limit
        super().__init__(f"keyword query has {count} tokens, limit is {limit}")


class QueryExplosionError(NarqError):
    """Query generation exceeded the internal safety bound before producing output."""


class EmptyCandidateSetError(NarqError):
    """A selection strategy that requires candidates was given none."""


class ParseError(NarqError):
    """An input file could not be parsed; carries the path and line number."""

    def __init__(self, path, line_no: int, reason: str):
        self.path = str(path)
        self.line_no = line_no
        self.reason = reason
        super().__init__(f"{self.path}:{line_no}: {reason}")


class NoJudgmentsError(NarqError):
    """Metrics were requested for a topic that has no relevance judgments."""

    def __init__(self, topic_id: str):
        self.topic_id = topic_id
        super().__init__(f"no judgments for topic {topic_id!r}")
