"""Semantic-type hierarchy: rooted DAG of Subclass_of edges, ten fixed top types."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    AlreadyInitialized,
    CycleDetected,
    ImmutableNode,
    UnknownParent,
    UnknownType,
)
from .ids import IdCounters, IdKind
from .model import Vocabulary

ROOT_LABEL = "Semantic Type"

# Creation order of the ten top types (and their MTID order).
TOP_TYPE_LABELS = (
    "Anatomical Structure",
    "Gene",
    "Gene Product",
    "Mutation",
    "Cell",
    "Disease",
    "Phenotypic Abnormality",
    "Biochemical Pathway",
    "Biologic Function",
    "Chemical and Drug",
)

# Row order used by the coverage report.
REPORT_ORDER = (
    "Anatomical Structure",
    "Phenotypic Abnormality",
    "Biochemical Pathway",
    "Cell",
    "Biologic Function",
    "Chemical and Drug",
    "Disease",
    "Gene",
    "Mutation",
    "Gene Product",
)

# Prose variants accepted when resolving a label to a top type.
LABEL_SYNONYMS = {
    "phenotype": "Phenotypic Abnormality",
    "biomedical pathway": "Biochemical Pathway",
    "biological function": "Biologic Function",
    "chemical and drug": "Chemical and Drug",
}


@dataclass
class SemanticTypeNode:
    mtid: str
    label: str
    source_of_label: str
    parents: set[str] = field(default_factory=set)


class Hierarchy:
    def __init__(self) -> None:
        self.nodes: dict[str, SemanticTypeNode] = {}
        self.root_mtid: str = ""
        self.top_mtids: list[str] = []

    @property
    def initialized(self) -> bool:
        return bool(self.root_mtid)

    def node(self, mtid: str) -> SemanticTypeNode:
        try:
            return self.nodes[mtid]
        except KeyError:
            raise UnknownType(f"unknown semantic type {mtid!r}") from None

    def init_top_level(self, counters: IdCounters) -> None:
        """Create the root and its ten fixed children."""
        if self.initialized:
            raise AlreadyInitialized("top-level types already created")
        root = SemanticTypeNode(counters.mint(IdKind.TYPE), ROOT_LABEL, "PMV")
        self.nodes[root.mtid] = root
        self.root_mtid = root.mtid
        for label in TOP_TYPE_LABELS:
            node = SemanticTypeNode(
                counters.mint(IdKind.TYPE), label, "PMV", {root.mtid}
            )
            self.nodes[node.mtid] = node
            self.top_mtids.append(node.mtid)

    def add_subtype(
        self,
        label: str,
        parent_mtids: set[str],
        source_of_label: str,
        counters: IdCounters,
    ) -> str:
        if not parent_mtids:
            raise UnknownParent("a subtype needs at least one parent")
        for parent in parent_mtids:
            if parent not in self.nodes:
                raise UnknownParent(f"unknown parent type {parent!r}")
        node = SemanticTypeNode(
            counters.mint(IdKind.TYPE), label, source_of_label, set(parent_mtids)
        )
        if node.mtid in self.nodes:
            raise ValueError(f"counter collision: {node.mtid} already exists")
        self.nodes[node.mtid] = node
        return node.mtid

    def reparent(self, mtid: str, new_parents: set[str]) -> None:
        node = self.node(mtid)
        if mtid == self.root_mtid or mtid in self.top_mtids:
            raise ImmutableNode(f"{node.label} cannot be reparented")
        if not new_parents:
            raise UnknownParent("a non-root node needs at least one parent")
        for parent in new_parents:
            if parent not in self.nodes:
                raise UnknownParent(f"unknown parent type {parent!r}")
            if self.is_descendant(parent, mtid):
                raise CycleDetected(
                    f"{parent} is a descendant of {mtid}; reparent refused"
                )
        node.parents = set(new_parents)

    def is_descendant(self, a: str, b: str) -> bool:
        """True iff a reaches b via parent edges (reflexive)."""
        self.node(b)
        seen = set()
        stack = [a]
        while stack:
            cur = stack.pop()
            if cur == b:
                return True
            if cur in seen:
                continue
            seen.add(cur)
            stack.extend(self.node(cur).parents)
        return False

    def ancestors(self, mtid: str) -> set[str]:
        """All nodes reachable via parent edges, including mtid itself."""
        seen: set[str] = set()
        stack = [mtid]
        while stack:
            cur = stack.pop()
            if cur in seen:
                continue
            seen.add(cur)
            stack.extend(self.node(cur).parents)
        return seen

    def top_types_of(self, mtid: str) -> set[str]:
        return self.ancestors(mtid) & set(self.top_mtids)

    def find_top_by_label(self, label: str) -> str | None:
        canonical = LABEL_SYNONYMS.get(label.lower(), label)
        for mtid in self.top_mtids:
            if self.nodes[mtid].label.lower() == canonical.lower():
                return mtid
        return None

    def find_by_label(self, label: str) -> str | None:
        top = self.find_top_by_label(label)
        if top:
            return top
        for mtid, node in self.nodes.items():
            if node.label.lower() == label.lower():
                return mtid
        return None

    def assert_acyclic(self) -> None:
        # Full scan; hierarchies stay small enough for this to be routine.
        WHITE, GRAY, BLACK = 0, 1, 2
        color = {mtid: WHITE for mtid in self.nodes}

        def visit(mtid: str) -> None:
            color[mtid] = GRAY
            for parent in self.nodes[mtid].parents:
                if color[parent] == GRAY:
                    raise CycleDetected(f"cycle through {parent}")
                if color[parent] == WHITE:
                    visit(parent)
            color[mtid] = BLACK

        for mtid in self.nodes:
            if color[mtid] == WHITE:
                visit(mtid)

    def coverage_report(self, vocab: Vocabulary) -> tuple[list[tuple[str, int]], int]:
        """Concept counts per top type (report row order) plus the untyped count."""
        counts = {mtid: 0 for mtid in self.top_mtids}
        untyped = 0
        for concept in vocab.concepts.values():
            if not concept.type_links:
                untyped += 1
                continue
            tops: set[str] = set()
            for mtid in concept.type_links:
                tops |= self.top_types_of(mtid)
            if not tops:
                untyped += 1
            for top in tops:
                counts[top] += 1
        by_label = {self.nodes[mtid].label: counts[mtid] for mtid in self.top_mtids}
        rows = [(label, by_label[label]) for label in REPORT_ORDER]
        return rows, untyped
