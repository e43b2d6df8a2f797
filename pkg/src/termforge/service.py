"""HTTP facade over the pending-review queue for human curators."""

from __future__ import annotations

import threading
from pathlib import Path
from typing import Callable, Optional

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .errors import AlreadyResolved, CandidateNotOffered, UnknownPending
from .integrate import Integrator, PendingReview


class DecisionBody(BaseModel):
    action: str  # "choose" | "reject_all"
    mcid: Optional[str] = None
    reviewer: str = "anonymous"


def _task_payload(pending: PendingReview, integrator: Integrator) -> dict:
    hierarchy = integrator.hierarchy
    candidates = []
    for mcid, preferred, score in sorted(
        pending.candidates, key=lambda c: -c[2]
    ):
        top_labels: list[str] = []
        if hierarchy is not None and hierarchy.initialized:
            tops: set[str] = set()
            for mtid in integrator.vocab.concept(mcid).type_links:
                tops |= hierarchy.top_types_of(mtid)
            top_labels = sorted(hierarchy.nodes[t].label for t in tops)
        candidates.append(
            {
                "mcid": mcid,
                "preferred_term": preferred,
                "score": score,
                "top_types": top_labels,
            }
        )
    sc = pending.source_concept
    return {
        "pending_id": pending.pending_id,
        "source_concept": {
            "source_abbr": sc.source_abbr,
            "code_in_source": sc.code_in_source,
            "terms": [{"term_string": t.term_string, "tty": t.tty} for t in sc.terms],
        },
        "candidates": candidates,
        "created_at": pending.created_at,
    }


def create_app(
    integrator: Integrator,
    on_mutation: Optional[Callable[[], None]] = None,
    static_dir: Optional[str | Path] = None,
) -> FastAPI:
    """Build the review API. on_mutation runs after each applied decision
    (used by the CLI to persist the store)."""
    app = FastAPI(title="termforge review service")
    write_lock = threading.Lock()

    @app.get("/api/pending")
    def list_pending(limit: int = 20, offset: int = 0):
        open_pendings = sorted(
            integrator.open_pendings(),
            key=lambda p: (p.created_at, p.pending_id),
        )
        page = open_pendings[offset : offset + limit]
        return {
            "total_open": len(open_pendings),
            "limit": limit,
            "offset": offset,
            "tasks": [_task_payload(p, integrator) for p in page],
        }

    @app.post("/api/pending/{pending_id}/decision")
    def submit_decision(pending_id: str, body: DecisionBody):
        with write_lock:
            try:
                outcome = integrator.apply_review_decision(
                    pending_id, body.action, body.reviewer, mcid=body.mcid
                )
            except UnknownPending as exc:
                return JSONResponse({"error": str(exc)}, status_code=404)
            except AlreadyResolved as exc:
                return JSONResponse({"error": str(exc)}, status_code=409)
            except (CandidateNotOffered, ValueError) as exc:
                return JSONResponse({"error": str(exc)}, status_code=422)
            if on_mutation is not None:
                on_mutation()
        return {
            "pending_id": pending_id,
            "outcome": outcome.kind.value,
            "mcid": outcome.mcid,
            "added_maids": outcome.added_maids,
            "duplicates": outcome.duplicates,
        }

    @app.get("/api/stats")
    def queue_stats():
        open_count = len(integrator.open_pendings())
        resolved = integrator.resolved_count()
        coverage_rows: list[dict] = []
        untyped = 0
        hierarchy = integrator.hierarchy
        if hierarchy is not None and hierarchy.initialized:
            rows, untyped = hierarchy.coverage_report(integrator.vocab)
            coverage_rows = [{"label": label, "count": count} for label, count in rows]
        return {
            "open": open_count,
            "resolved": resolved,
            "decisions_by_reviewer": integrator.decisions_by_reviewer,
            "coverage": coverage_rows,
            "untyped": untyped,
        }

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
