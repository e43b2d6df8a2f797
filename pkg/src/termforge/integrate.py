"""Per-source-concept integration: cascade each term, then merge, park for
review, or mint a new concept."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import Callable, Optional

from .errors import (
    AlreadyResolved,
    CandidateNotOffered,
    EmptySourceConcept,
    UnknownPending,
)
from .ids import id_serial
from .matching import Matcher, MatchResult, MatchStage
from .model import Atom, Vocabulary
from .semnet import Hierarchy


@dataclass(frozen=True)
class Term:
    term_string: str
    tty: str
    language: str = "en"
    species: str = "human"


@dataclass
class SourceConcept:
    """A name plus synonyms for one code in one source. The first term is the
    source's own name/preferred form."""

    source_abbr: str
    code_in_source: str
    terms: list[Term]
    type_labels: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "SourceConcept":
        return cls(
            source_abbr=data["source_abbr"],
            code_in_source=data["code_in_source"],
            terms=[Term(**t) for t in data["terms"]],
            type_labels=list(data.get("type_labels", [])),
        )


class OutcomeKind(Enum):
    MERGED_INTO = "merged_into"
    NEW_CONCEPT = "new_concept"
    PENDING_REVIEW = "pending_review"


@dataclass
class IntegrationOutcome:
    kind: OutcomeKind
    mcid: Optional[str] = None
    pending_id: Optional[str] = None
    added_maids: list[str] = field(default_factory=list)
    duplicates: int = 0
    stage: Optional[MatchStage] = None
    conflict: bool = False


@dataclass
class PendingReview:
    pending_id: str
    source_concept: SourceConcept
    candidates: list[tuple[str, str, float]]  # (mcid, preferred term, score)
    created_at: str
    status: str = "open"  # open | resolved
    decision: Optional[dict] = None

    def to_dict(self) -> dict:
        return {
            "pending_id": self.pending_id,
            "source_concept": self.source_concept.to_dict(),
            "candidates": [list(c) for c in self.candidates],
            "created_at": self.created_at,
            "status": self.status,
            "decision": self.decision,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PendingReview":
        return cls(
            pending_id=data["pending_id"],
            source_concept=SourceConcept.from_dict(data["source_concept"]),
            candidates=[(c[0], c[1], float(c[2])) for c in data["candidates"]],
            created_at=data["created_at"],
            status=data["status"],
            decision=data.get("decision"),
        )


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat()


_STAGE_RANK = {MatchStage.EXACT: 0, MatchStage.NORM: 1}


def resolve_conflict(results: list[MatchResult]) -> tuple[str, bool]:
    """Pick the merge target among per-term exact/norm hits.

    Earliest stage wins (exact beats norm), then the concept hit by the most
    terms, then the lowest MCID serial. Returns (mcid, conflict-flag).
    """
    best_stage: dict[str, int] = {}
    hit_count: dict[str, int] = {}
    for result in results:
        if result.stage not in _STAGE_RANK:
            continue
        rank = _STAGE_RANK[result.stage]
        for mcid, _score in result.candidates:
            hit_count[mcid] = hit_count.get(mcid, 0) + 1
            if rank < best_stage.get(mcid, 99):
                best_stage[mcid] = rank
    if not best_stage:
        raise ValueError("resolve_conflict needs at least one exact/norm hit")
    winner = min(
        best_stage,
        key=lambda mcid: (best_stage[mcid], -hit_count[mcid], id_serial(mcid)),
    )
    return winner, len(best_stage) > 1


class Integrator:
    """Single logical writer executing the integration workflow."""

    def __init__(
        self,
        vocab: Vocabulary,
        matcher: Matcher,
        hierarchy: Optional[Hierarchy] = None,
        clock: Callable[[], str] = _utc_now,
    ) -> None:
        self.vocab = vocab
        self.matcher = matcher
        self.hierarchy = hierarchy
        self.clock = clock
        self.pendings: dict[str, PendingReview] = {}
        self.pending_serial = 0
        self.decisions_by_reviewer: dict[str, int] = {}
        self.events: list[dict] = []

    # -- pending queue ------------------------------------------------------

    def open_pendings(self) -> list[PendingReview]:
        return [p for p in self.pendings.values() if p.status == "open"]

    def resolved_count(self) -> int:
        return sum(1 for p in self.pendings.values() if p.status == "resolved")

    def _next_pending_id(self) -> str:
        self.pending_serial += 1
        return f"PR{self.pending_serial:06d}"

    # -- integration --------------------------------------------------------

    def integrate(self, sc: SourceConcept) -> IntegrationOutcome:
        if not sc.terms:
            raise EmptySourceConcept(
                f"{sc.source_abbr}/{sc.code_in_source} has no terms"
            )
        results = [self.matcher.run_cascade(self._probe_atom(sc, t)) for t in sc.terms]

        if any(r.stage in _STAGE_RANK for r in results):
            target, conflict = resolve_conflict(results)
            stage = min(
                (r.stage for r in results if r.stage in _STAGE_RANK),
                key=_STAGE_RANK.__getitem__,
            )
            outcome = self._merge_terms(target, sc)
            outcome.stage = stage
            outcome.conflict = conflict
        elif any(r.stage is MatchStage.FUZZY for r in results):
            outcome = self._enqueue_pending(sc, results)
        else:
            outcome = self._new_concept(sc)
            outcome.stage = MatchStage.NONE

        self._log_event(sc, outcome)
        return outcome

    def integrate_batch(self, batch: list[SourceConcept]) -> list[IntegrationOutcome]:
        return [self.integrate(sc) for sc in batch]

    def _probe_atom(self, sc: SourceConcept, term: Term) -> Atom:
        return Atom(
            maid="MA00000000",  # probe only; never stored
            term_string=term.term_string,
            source_abbr=sc.source_abbr,
            code_in_source=sc.code_in_source,
            tty=term.tty,
            language=term.language,
            species=term.species,
        )

    def _merge_terms(self, mcid: str, sc: SourceConcept) -> IntegrationOutcome:
        added, duplicates = [], 0
        for term in sc.terms:
            atom = self.vocab.add_atom(
                mcid,
                term.term_string,
                sc.source_abbr,
                sc.code_in_source,
                term.tty,
                term.language,
                term.species,
            )
            if atom is None:
                duplicates += 1
            else:
                added.append(atom.maid)
                self.matcher.index.add_atom(mcid, atom)
        return IntegrationOutcome(
            OutcomeKind.MERGED_INTO, mcid=mcid, added_maids=added, duplicates=duplicates
        )

    def _new_concept(self, sc: SourceConcept) -> IntegrationOutcome:
        concept = self.vocab.new_concept()
        outcome = self._merge_terms(concept.mcid, sc)
        outcome.kind = OutcomeKind.NEW_CONCEPT
        if self.hierarchy is not None:
            for label in sc.type_labels:
                mtid = self.hierarchy.find_by_label(label)
                if mtid:
                    concept.type_links.add(mtid)
        return outcome

    def _enqueue_pending(
        self, sc: SourceConcept, results: list[MatchResult]
    ) -> IntegrationOutcome:
        best: dict[str, float] = {}
        for result in results:
            if result.stage is not MatchStage.FUZZY:
                continue
            for mcid, score in result.candidates:
                if score > best.get(mcid, -1.0):
                    best[mcid] = score
        ranked = sorted(best.items(), key=lambda kv: (-kv[1], id_serial(kv[0])))[:5]
        candidates = []
        for mcid, score in ranked:
            concept = self.vocab.concept(mcid)
            preferred = concept.atoms[concept.preferred_maid].term_string
            candidates.append((mcid, preferred, score))
        pending = PendingReview(
            pending_id=self._next_pending_id(),
            source_concept=sc,
            candidates=candidates,
            created_at=self.clock(),
        )
        self.pendings[pending.pending_id] = pending
        return IntegrationOutcome(
            OutcomeKind.PENDING_REVIEW,
            pending_id=pending.pending_id,
            stage=MatchStage.FUZZY,
        )

    # -- review decisions ---------------------------------------------------

    def apply_review_decision(
        self,
        pending_id: str,
        decision: str,
        reviewer: str,
        mcid: Optional[str] = None,
    ) -> IntegrationOutcome:
        """decision is "choose" (with mcid) or "reject_all"."""
        pending = self.pendings.get(pending_id)
        if pending is None:
            raise UnknownPending(f"no pending review {pending_id!r}")
        if pending.status == "resolved":
            raise AlreadyResolved(f"{pending_id} was already decided")
        if decision == "choose":
            offered = {c[0] for c in pending.candidates}
            if mcid not in offered:
                raise CandidateNotOffered(
                    f"{mcid} is not among the candidates of {pending_id}"
                )
            outcome = self._merge_terms(mcid, pending.source_concept)
            outcome.stage = MatchStage.FUZZY
        elif decision == "reject_all":
            outcome = self._new_concept(pending.source_concept)
        else:
            raise ValueError(f"unknown decision {decision!r}")
        pending.status = "resolved"
        pending.decision = {
            "action": decision,
            "mcid": outcome.mcid,
            "reviewer": reviewer,
            "decided_at": self.clock(),
        }
        self.decisions_by_reviewer[reviewer] = (
            self.decisions_by_reviewer.get(reviewer, 0) + 1
        )
        outcome.pending_id = pending_id
        self._log_event(pending.source_concept, outcome)
        return outcome

    # -- run log ------------------------------------------------------------

    def _log_event(self, sc: SourceConcept, outcome: IntegrationOutcome) -> None:
        self.events.append(
            {
                "source_abbr": sc.source_abbr,
                "code_in_source": sc.code_in_source,
                "outcome": outcome.kind.value,
                "stage": outcome.stage.value if outcome.stage else None,
                "mcid": outcome.mcid,
                "pending_id": outcome.pending_id,
                "added": len(outcome.added_maids),
                "duplicates": outcome.duplicates,
                "conflict": outcome.conflict,
            }
        )

    def write_run_log(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for event in self.events:
                fh.write(json.dumps(event, ensure_ascii=False) + "\n")
