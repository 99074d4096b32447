"""HTTP annotation service: sessions, query queue, labels, rounds, metrics.

All endpoints live under /v1.  Each session's mutable state sits behind a
lock so round execution and label ingestion serialize per session while
distinct sessions proceed independently.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from . import active_learning as al
from .corpus import GENRE_NAMES, Genre, RecipeRecord, corpus_stats
from .features import FeatureSpec
from .models import N_GENRES


class SessionRequest(BaseModel):
    corpus: str
    feature: str = "title"
    tau: float = Field(default=0.99, gt=0.0, le=1.0)
    batch: int = Field(default=9, ge=1)
    seed: int = 0


class LabelRequest(BaseModel):
    record_id: int
    label: int


@dataclass
class SessionState:
    session: al.AnnotationSession
    lock: threading.Lock = field(default_factory=threading.Lock)
    staged_labels: dict[int, int] = field(default_factory=dict)
    label_outcomes: dict[int, dict] = field(default_factory=dict)
    served_cursor: int = 0

    def remaining_in_batch(self) -> int:
        return len(
            [i for i in self.session.queried if i not in self.staged_labels]
        )


def _query_payload(state: SessionState, record: RecipeRecord) -> dict:
    session = state.session
    probas = al.committee_probas(session.committee, [record])
    votes = al.committee_votes(probas)[:, 0]
    return {
        "record_id": record.record_id,
        "title": record.title,
        "directions": list(record.directions),
        "ner": list(record.ner),
        "extended_ner": (
            record.extended_ner.surfaces()
            if record.extended_ner is not None
            else []
        ),
        "committee_votes": [
            {"member": kind, "genre": GENRE_NAMES[Genre(int(vote))],
             "label": int(vote)}
            for kind, vote in zip(session.committee.kinds, votes)
        ],
        "vote_entropy": al.vote_entropy([int(v) for v in votes]),
    }


def create_app(
    corpora: dict[str, list[RecipeRecord]],
    static_dir: Path | None = None,
) -> FastAPI:
    app = FastAPI(title="recipeforge annotation service", version="1.0")
    sessions: dict[str, SessionState] = {}
    registry_lock = threading.Lock()
    counter = {"next": 1}

    def get_state(session_id: str) -> SessionState:
        state = sessions.get(session_id)
        if state is None:
            raise HTTPException(
                status_code=404, detail=f"unknown session {session_id!r}"
            )
        return state

    @app.post("/v1/sessions")
    def create_session(request: SessionRequest):
        records = corpora.get(request.corpus)
        if records is None:
            raise HTTPException(
                status_code=404, detail=f"unknown corpus {request.corpus!r}"
            )
        try:
            session = al.create_session(
                records,
                spec=FeatureSpec.parse(request.feature),
                batch_size=request.batch,
                tau=request.tau,
                seed=request.seed,
            )
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        if not session.labeled_ids:
            raise HTTPException(
                status_code=422,
                detail="session corpus needs at least one labeled record "
                "to seed the committee",
            )
        al.run_annotation_round(session)
        with registry_lock:
            session_id = f"s{counter['next']}"
            counter["next"] += 1
            sessions[session_id] = SessionState(session=session)
        return {"session_id": session_id}

    @app.get("/v1/sessions/{session_id}/next")
    def next_query(session_id: str):
        state = get_state(session_id)
        with state.lock:
            session = state.session
            pending = [
                i for i in session.queried if i not in state.staged_labels
            ]
            if not pending:
                return {
                    "record": None,
                    "remaining_in_batch": 0,
                    "pool_remaining": len(session.pool_ids),
                    "pool_empty": not session.pool_ids,
                }
            record = session.records[pending[0]]
            return {
                "record": _query_payload(state, record),
                "remaining_in_batch": len(pending),
                "pool_remaining": len(session.pool_ids),
                "pool_empty": False,
            }

    @app.post("/v1/sessions/{session_id}/label")
    def submit_label(session_id: str, request: LabelRequest):
        state = get_state(session_id)
        if not 1 <= request.label <= N_GENRES:
            raise HTTPException(
                status_code=422,
                detail=f"label {request.label} outside 1..{N_GENRES}",
            )
        with state.lock:
            session = state.session
            previous = state.label_outcomes.get(request.record_id)
            if previous is not None:
                if previous["label"] == request.label:
                    return previous["response"]
                return {
                    "accepted": False,
                    "remaining_in_batch": state.remaining_in_batch(),
                    "detail": "record already labeled; first write wins",
                }
            if request.record_id not in session.queried:
                raise HTTPException(
                    status_code=422,
                    detail=f"record {request.record_id} is not in the "
                    "current query batch",
                )
            state.staged_labels[request.record_id] = request.label
            response = {
                "accepted": True,
                "remaining_in_batch": state.remaining_in_batch(),
            }
            state.label_outcomes[request.record_id] = {
                "label": request.label,
                "response": response,
            }
            return response

    @app.post("/v1/sessions/{session_id}/round")
    def run_round(session_id: str):
        state = get_state(session_id)
        with state.lock:
            labels = dict(state.staged_labels)
            state.staged_labels.clear()
            state.label_outcomes.clear()
            try:
                summary = al.run_annotation_round(state.session, labels)
            except ValueError as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from exc
            return {
                "round": summary.round,
                "auto_labeled": len(summary.auto_labeled),
                "queried": summary.queried,
                "pool_remaining": summary.pool_remaining,
            }

    @app.get("/v1/sessions/{session_id}/metrics")
    def session_metrics(session_id: str):
        state = get_state(session_id)
        with state.lock:
            session = state.session
            counts = session.labeled_counts()
            return {
                "human": counts["human"],
                "machine": counts["machine"],
                "pool_remaining": len(session.pool_ids),
                "rounds": session.round,
                "committee_agreement": al.committee_agreement(session),
            }

    @app.get("/v1/corpus/{corpus_id}/stats")
    def corpus_statistics(corpus_id: str):
        records = corpora.get(corpus_id)
        if records is None:
            raise HTTPException(
                status_code=404, detail=f"unknown corpus {corpus_id!r}"
            )
        return corpus_stats(records).to_dict()

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount(
            "/", StaticFiles(directory=str(static_dir), html=True),
            name="ui",
        )
    return app
