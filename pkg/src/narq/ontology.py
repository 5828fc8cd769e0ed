"""Concept and predicate hierarchies with precomputed subsumption closures."""
from __future__ import annotations

from typing import Iterable, Mapping, Optional

from .errors import CycleError, MultipleRootsError, UnknownConceptError, UnknownPredicateError
from .model import Concept, ConceptId, Predicate, PredicateId


def _toposort(ids: Iterable[str], parents_of) -> list[str]:
    """Order ids so every node comes after all of its parents; raises CycleError."""
    order: list[str] = []
    state: dict[str, int] = {}  # 0 visiting, 1 done

    for start in ids:
        if state.get(start) == 1:
            continue
        stack = [(start, iter(parents_of(start)))]
        state[start] = 0
        while stack:
            node, it = stack[-1]
            advanced = False
            for parent in it:
                mark = state.get(parent)
                if mark == 0:
                    raise CycleError(parent)
                if mark is None:
                    state[parent] = 0
                    stack.append((parent, iter(parents_of(parent))))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                state[node] = 1
                order.append(node)
    return order


class ConceptOntology:
    """Immutable concept store; concepts may have multiple parents (a DAG)."""

    def __init__(self, concepts: Iterable[Concept]):
        self._concepts: dict[ConceptId, Concept] = {}
        for concept in concepts:
            if concept.id in self._concepts:
                raise UnknownConceptError(concept.id, "duplicate concept id")
            self._concepts[concept.id] = concept
        for concept in self._concepts.values():
            for parent in concept.parents:
                if parent not in self._concepts:
                    raise UnknownConceptError(parent, f"parent of {concept.id!r}")

        # Eager transitive closure; cheap at the scales we load and makes reads O(1).
        self._ancestors: dict[ConceptId, frozenset[ConceptId]] = {}
        order = _toposort(self._concepts, lambda cid: self._concepts[cid].parents)
        for cid in order:
            acc: set[ConceptId] = set()
            for parent in self._concepts[cid].parents:
                acc.add(parent)
                acc.update(self._ancestors[parent])
            self._ancestors[cid] = frozenset(acc)

        self._children: dict[ConceptId, set[ConceptId]] = {cid: set() for cid in self._concepts}
        for concept in self._concepts.values():
            for parent in concept.parents:
                self._children[parent].add(concept.id)

    def __len__(self) -> int:
        return len(self._concepts)

    def __contains__(self, concept_id: ConceptId) -> bool:
        return concept_id in self._concepts

    def __iter__(self):
        return iter(self._concepts.values())

    @property
    def concepts(self) -> Mapping[ConceptId, Concept]:
        return self._concepts

    def get(self, concept_id: ConceptId) -> Concept:
        try:
            return self._concepts[concept_id]
        except KeyError:
            raise UnknownConceptError(concept_id) from None

    def concept_ancestors(self, concept_id: ConceptId) -> frozenset[ConceptId]:
        """All transitive super-concepts of the concept, excluding itself."""
        if concept_id not in self._concepts:
            raise UnknownConceptError(concept_id)
        return self._ancestors[concept_id]

    def children(self, concept_id: ConceptId) -> frozenset[ConceptId]:
        if concept_id not in self._concepts:
            raise UnknownConceptError(concept_id)
        return frozenset(self._children[concept_id])

    def roots(self) -> frozenset[ConceptId]:
        return frozenset(cid for cid, c in self._concepts.items() if not c.parents)


class PredicateHierarchy:
    """Immutable predicate store; predicates form a tree with a single root, or no tree at all."""

    def __init__(self, predicates: Iterable[Predicate]):
        self._predicates: dict[PredicateId, Predicate] = {}
        for predicate in predicates:
            if predicate.id in self._predicates:
                raise UnknownPredicateError(predicate.id, "duplicate predicate id")
            self._predicates[predicate.id] = predicate
        for predicate in self._predicates.values():
            if predicate.parent is not None and predicate.parent not in self._predicates:
                raise UnknownPredicateError(predicate.parent, f"parent of {predicate.id!r}")

        self._has_hierarchy = any(p.parent is not None for p in self._predicates.values())
        self._root: Optional[PredicateId] = None
        if self._has_hierarchy:
            roots = [pid for pid, p in self._predicates.items() if p.parent is None]
            if len(roots) != 1:
                raise MultipleRootsError(roots)
            self._root = roots[0]

        def parents_of(pid: str):
            parent = self._predicates[pid].parent
            return (parent,) if parent is not None else ()

        order = _toposort(self._predicates, parents_of)
        self._generalizations: dict[PredicateId, frozenset[PredicateId]] = {}
        self._depth: dict[PredicateId, int] = {}
        for pid in order:
            parent = self._predicates[pid].parent
            if parent is None:
                self._generalizations[pid] = frozenset()
                self._depth[pid] = 0
            else:
                self._generalizations[pid] = self._generalizations[parent] | {parent}
                self._depth[pid] = self._depth[parent] + 1

    def __len__(self) -> int:
        return len(self._predicates)

    def __contains__(self, predicate_id: PredicateId) -> bool:
        return predicate_id in self._predicates

    def __iter__(self):
        return iter(self._predicates.values())

    @property
    def predicates(self) -> Mapping[PredicateId, Predicate]:
        return self._predicates

    @property
    def has_hierarchy(self) -> bool:
        """True when at least one predicate is a specialization of another."""
        return self._has_hierarchy

    @property
    def root(self) -> Optional[PredicateId]:
        """The most general predicate, when predicates are arranged in a hierarchy."""
        return self._root

    def get(self, predicate_id: PredicateId) -> Predicate:
        try:
            return self._predicates[predicate_id]
        except KeyError:
            raise UnknownPredicateError(predicate_id) from None

    def predicate_generalizations(self, predicate_id: PredicateId) -> frozenset[PredicateId]:
        """All transitive parents of the predicate, excluding itself."""
        if predicate_id not in self._predicates:
            raise UnknownPredicateError(predicate_id)
        return self._generalizations[predicate_id]

    def specificity_depth(self, predicate_id: PredicateId) -> int:
        """Length of the parent chain up to the root; 0 for the root or without a hierarchy."""
        if predicate_id not in self._predicates:
            raise UnknownPredicateError(predicate_id)
        return self._depth[predicate_id]
