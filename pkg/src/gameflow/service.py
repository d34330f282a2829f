"""HTTP service hosting live sessions for the in-game console.

Endpoints:
    POST /sessions                     create a session from a model file
    POST /sessions/{id}/events         fold one event, returns a snapshot
    GET  /sessions/{id}/state          full snapshot
    GET  /sessions/{id}/replay         batch replay of the implied record
    GET  /sessions/{id}/stream         server-sent events, one per snapshot
    GET  /healthz

All payload numbers are decimal strings with 17 significant digits.
"""

from __future__ import annotations

import asyncio
import itertools
import json
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.responses import StreamingResponse
from pydantic import BaseModel

from .data import load_model
from .errors import GameflowError
from .live import Event, LiveSession
from .process import MatchContext, replay


class SessionRequest(BaseModel):
    model_ref: str
    opponent_tfs: float
    grid_R: int = 40
    theta: float = 0.02
    epsilon: float = 0.1


def create_app(model_dir: str | Path | None = None) -> FastAPI:
    """Build the service; ``model_dir`` restricts model_ref lookups."""
    app = FastAPI(title="gameflow live service")
    sessions: dict[str, LiveSession] = {}
    listeners: dict[str, list[asyncio.Queue]] = {}
    ids = itertools.count(1)

    def get_session(session_id: str) -> LiveSession:
        try:
            return sessions[session_id]
        except KeyError:
            raise HTTPException(status_code=404, detail={
                "category": "unknown-session", "message": session_id})

    def resolve_model(ref: str) -> Path:
        path = Path(ref)
        if model_dir is not None and not path.is_absolute():
            path = Path(model_dir) / path
        return path

    def publish(session_id: str, snapshot: dict) -> None:
        for queue in listeners.get(session_id, []):
            queue.put_nowait(snapshot)

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "sessions": len(sessions)}

    @app.post("/sessions")
    def create_session(req: SessionRequest):
        try:
            model = load_model(resolve_model(req.model_ref))
            session = LiveSession(model, opponent_tfs=req.opponent_tfs,
                                  grid_r=req.grid_R, theta=req.theta,
                                  epsilon=req.epsilon)
        except (GameflowError, OSError, ValueError) as exc:
            raise HTTPException(status_code=400, detail={
                "category": getattr(exc, "category", "error"),
                "message": str(exc)})
        session_id = f"s{next(ids)}"
        sessions[session_id] = session
        return {"session_id": session_id, "snapshot": session.snapshot()}

    @app.post("/sessions/{session_id}/events")
    def post_event(session_id: str, body: dict):
        session = get_session(session_id)
        try:
            snapshot = session.apply(Event.parse(body))
        except GameflowError as exc:
            raise HTTPException(status_code=409, detail={
                "category": exc.category, "message": str(exc)})
        publish(session_id, snapshot)
        return snapshot

    @app.get("/sessions/{session_id}/state")
    def get_state(session_id: str):
        return get_session(session_id).snapshot()

    @app.get("/sessions/{session_id}/replay")
    def get_replay(session_id: str):
        session = get_session(session_id)
        try:
            record = session.implied_record()
        except GameflowError as exc:
            raise HTTPException(status_code=409, detail={
                "category": exc.category, "message": str(exc)})
        ctx = MatchContext(model=session.ctx.model,
                           opponent_tfs=session.ctx.opponent_tfs,
                           grid_r=session.ctx.grid_r)
        path = replay(ctx, record)
        f = "{:.17g}".format
        return {
            "t": [f(v) for v in path.times],
            "mt": [f(v) for v in path.mt],
            "pw": [f(v) for v in path.pw],
            "score_a": [f(v) for v in path.score_a],
            "score_b": [f(v) for v in path.score_b],
        }

    @app.get("/sessions/{session_id}/stream")
    async def stream(session_id: str, limit: int | None = None):
        """SSE snapshots; ``limit`` closes the stream after that many."""
        session = get_session(session_id)
        queue: asyncio.Queue = asyncio.Queue()
        listeners.setdefault(session_id, []).append(queue)
        queue.put_nowait(session.snapshot())

        async def gen():
            sent = 0
            try:
                while limit is None or sent < limit:
                    snapshot = await queue.get()
                    yield f"data: {json.dumps(snapshot)}\n\n"
                    sent += 1
            finally:
                listeners[session_id].remove(queue)

        return StreamingResponse(gen(), media_type="text/event-stream")

    return app
