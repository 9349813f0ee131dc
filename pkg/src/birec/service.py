"""HTTP session service for the iterative consultancy loop.

A session starts from company demographics (a verbosity-0 query), serves
hybrid recommendations, and grows its query as the user confirms solution
elements. Sessions live in memory; mutations can be journaled to an
append-only file.
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from .base import Query
from .casebase import CaseBase, ElementKind, canonical_name
from .config import EngineConfig
from .hybrid import HybridRecommender


class SessionCreate(BaseModel):
    industry: str
    business_process: str
    goal: str = ""
    target_groups: list[str] = Field(default_factory=list)


class SelectionItem(BaseModel):
    name: str
    custom: bool = False


class SelectionRequest(BaseModel):
    elements: list[SelectionItem]


@dataclass
class Session:
    id: str
    query: Query
    selections: list[dict] = field(default_factory=list)
    created_at: float = field(default_factory=time.time)
    updated_at: float = field(default_factory=time.time)
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def selected_names(self) -> set[str]:
        return {s["name"] for s in self.selections}


def _error(status: int, code: str, message: str, fld: str | None = None):
    detail = {"code": code, "message": message}
    if fld:
        detail["field"] = fld
    return HTTPException(status_code=status, detail=detail)


def create_app(
    cb: CaseBase,
    config: EngineConfig | None = None,
    journal_path=None,
) -> FastAPI:
    """Build the service around one loaded case base and a fitted hybrid engine."""
    config = config or EngineConfig()
    engine = config.make_hybrid()
    # interactive sessions always exclude confirmed selections from pages;
    # exclusion is applied here, not via the engine flag, so scores stay comparable
    engine.set_params(include_query_elements=True)
    engine.fit(cb)
    kinds: dict[str, ElementKind] = cb.element_kinds()
    processes = set(cb.processes)

    app = FastAPI(title="birec session service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    sessions: dict[str, Session] = {}
    journal_lock = threading.Lock()

    def journal(event: dict) -> None:
        if journal_path is None:
            return
        with journal_lock:
            with open(journal_path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(event, sort_keys=True) + "\n")

    def get_session(session_id: str) -> Session:
        session = sessions.get(session_id)
        if session is None:
            raise _error(404, "session_not_found", f"no session {session_id!r}")
        return session

    def session_view(session: Session) -> dict:
        return {
            "id": session.id,
            "industry": session.query.industry,
            "business_process": session.query.business_process,
            "goal": session.query.goal,
            "target_groups": sorted(session.query.target_groups),
            "verbosity": session.query.verbosity,
            "alpha": engine.alpha_for(session.query),
            "selected": [dict(s) for s in session.selections],
            "created_at": session.created_at,
            "updated_at": session.updated_at,
        }

    @app.post("/sessions", status_code=201)
    def create_session(body: SessionCreate) -> dict:
        if body.industry not in cb.taxonomy:
            raise _error(422, "unknown_industry", f"industry {body.industry!r} not in taxonomy",
                         "industry")
        if body.business_process not in processes:
            raise _error(
                422, "unknown_process",
                f"business process {body.business_process!r} not in case base",
                "business_process",
            )
        bad = set(body.target_groups) - {"employees", "middle management", "top management"}
        if bad:
            raise _error(422, "illegal_target_group", f"illegal target groups {sorted(bad)}",
                         "target_groups")
        session = Session(
            id=uuid.uuid4().hex,
            query=Query(
                industry=body.industry,
                business_process=body.business_process,
                goal=body.goal,
                target_groups=frozenset(body.target_groups),
            ),
        )
        sessions[session.id] = session
        journal({"event": "create", "session": session.id, "query": body.model_dump()})
        return session_view(session)

    @app.get("/sessions/{session_id}")
    def read_session(session_id: str) -> dict:
        return session_view(get_session(session_id))

    @app.get("/sessions/{session_id}/recommendations")
    def recommendations(session_id: str, limit: int = 10) -> dict:
        if limit < 1:
            raise _error(422, "bad_limit", "limit must be >= 1", "limit")
        session = get_session(session_id)
        with session.lock:
            query = session.query
            selected = set(session.selected_names)
        ranking = engine.recommend(query).without(selected)
        items = [
            {
                "name": name,
                "kind": kinds[name].value if name in kinds else None,
                "score": score,
            }
            for name, score in ranking.top(limit)
        ]
        return {
            "session_id": session_id,
            "verbosity": query.verbosity,
            "alpha": engine.alpha_for(query),
            "beta": engine.beta,
            "verbosity_threshold": engine.c_bar_,
            "items": items,
        }

    @app.post("/sessions/{session_id}/selections")
    def select(session_id: str, body: SelectionRequest) -> dict:
        session = get_session(session_id)
        with session.lock:
            for item in body.elements:
                name = canonical_name(item.name)
                if not name:
                    raise _error(422, "empty_element", "element name is empty", "elements")
                if name not in kinds and not item.custom:
                    raise _error(
                        422, "unknown_element",
                        f"element {name!r} not in vocabulary (pass custom=true to force)",
                        "elements",
                    )
                if name in session.selected_names:
                    continue  # idempotent
                session.selections.append(
                    {
                        "name": name,
                        "kind": kinds[name].value if name in kinds else None,
                        "custom": name not in kinds,
                        "selected_at": time.time(),
                    }
                )
            session.query = session.query.with_elements(session.selected_names)
            session.updated_at = time.time()
            journal({
                "event": "select",
                "session": session.id,
                "elements": sorted(e.name for e in body.elements),
            })
            return session_view(session)

    @app.get("/sessions/{session_id}/solution")
    def solution(session_id: str) -> dict:
        session = get_session(session_id)
        with session.lock:
            return {
                "session_id": session.id,
                "elements": [dict(s) for s in session.selections],
            }

    @app.get("/meta/taxonomy")
    def taxonomy() -> dict:
        return cb.taxonomy.to_dict()

    @app.get("/meta/processes")
    def meta_processes() -> dict:
        return {"processes": cb.processes}

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "cases": len(cb)}

    return app
