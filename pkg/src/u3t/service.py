"""HTTP JSON API for live play against the strategy bots.

Sessions are in-memory with idle-TTL eviction; every mutation goes through
the engine, so a session's record always replays to its state. Bot replies
are computed synchronously inside the move request (strategies cost
microseconds). Concurrent requests to one session are serialized by a
per-session lock; distinct sessions proceed independently.

Endpoints:
    POST /api/games {"x": ..., "o": ...} -> {session view}
    GET  /api/games/{id}                 -> {session view}
    POST /api/games/{id}/moves {"f","s"} -> {session view + botMove}
    GET  /api/strategies                 -> [{"id", "seats"}]
Errors: {"error": code, "detail": text}.

The built web UI (frontend/dist) is served at / when present.
"""

from __future__ import annotations

import hashlib
import secrets
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .engine import (
    BoardState,
    IN_PROGRESS,
    IllegalMoveError,
    O,
    X,
    apply_move,
    cells_string,
    legal_moves,
    new_game,
)
from .records import GameRecord
from .strategies import (
    STRATEGY_SEATS,
    StrategyError,
    make_mover,
    move_label,
)

HUMAN = "human"
DEFAULT_TTL_SECONDS = 24 * 3600


class CreateGameBody(BaseModel):
    x: str = HUMAN
    o: str = HUMAN


class MoveBody(BaseModel):
    f: int
    s: int


@dataclass
class Session:
    id: str
    x_controller: str
    o_controller: str
    state: BoardState
    history: list = field(default_factory=list)
    annotations: list = field(default_factory=list)
    created_at: float = field(default_factory=time.time)
    last_access: float = field(default_factory=time.time)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def controller(self, side: str) -> str:
        return self.x_controller if side == X else self.o_controller

    def record(self) -> GameRecord:
        rec = GameRecord.from_addrs(list(self.history), self.state.status)
        rec.annotations = list(self.annotations)
        return rec

    def view(self, bot_move: Optional[dict] = None) -> dict:
        state = self.state
        body = {
            "id": self.id,
            "cells": cells_string(state),
            "fieldStatus": list(state.field_status),
            "forcedField": state.forced_field,
            "toMove": state.to_move,
            "ply": state.ply,
            "status": state.status,
            "legalMoves": [{"f": f, "s": s} for f, s in legal_moves(state)],
            "moves": [
                {"p": X if k % 2 == 0 else O, "f": a[0], "s": a[1]}
                for k, a in enumerate(self.history)
            ],
            "annotations": list(self.annotations),
            "xController": self.x_controller,
            "oController": self.o_controller,
        }
        if bot_move is not None:
            body["botMove"] = bot_move
        return body


class SessionStore:
    def __init__(self, ttl_seconds: float = DEFAULT_TTL_SECONDS):
        self.ttl = ttl_seconds
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def _purge(self) -> None:
        cutoff = time.time() - self.ttl
        for sid in [s for s, sess in self._sessions.items() if sess.last_access < cutoff]:
            del self._sessions[sid]

    def create(self, x_controller: str, o_controller: str) -> Session:
        with self._lock:
            self._purge()
            sid = secrets.token_urlsafe(16)
            session = Session(sid, x_controller, o_controller, new_game())
            self._sessions[sid] = session
            return session

    def get(self, sid: str) -> Optional[Session]:
        with self._lock:
            self._purge()
            session = self._sessions.get(sid)
            if session:
                session.last_access = time.time()
            return session


def _error(status: int, code: str, detail: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": code, "detail": detail})


def _bot_seed(sid: str) -> int:
    return int.from_bytes(hashlib.sha256(sid.encode()).digest()[:8], "big") >> 1


def _apply_bot_moves(session: Session) -> Optional[dict]:
    """Advance the session by one bot reply if a bot is on turn.

    Raises StrategyError when the seated bot cannot move on this history
    (e.g. a blocker seated behind an unsupported opening).
    """
    state = session.state
    if state.status != IN_PROGRESS:
        return None
    controller = session.controller(state.to_move)
    if controller == HUMAN:
        return None
    mover = make_mover(controller, _bot_seed(session.id))
    label = move_label(controller, state, session.history)
    addr = mover(state, session.history)
    session.state = apply_move(state, addr)
    session.history.append(addr)
    session.annotations.append(label)
    return {"p": state.to_move, "f": addr[0], "s": addr[1]}


def create_app(
    ttl_seconds: float = DEFAULT_TTL_SECONDS,
    frontend_dist: Optional[Path] = None,
) -> FastAPI:
    app = FastAPI(title="u3t service")
    store = SessionStore(ttl_seconds)
    app.state.store = store

    @app.get("/api/strategies")
    def strategies() -> list[dict]:
        return [
            {"id": sid, "seats": seats} for sid, seats in STRATEGY_SEATS.items()
        ]

    @app.post("/api/games")
    def create_game(body: CreateGameBody):
        for seat, controller in ((X, body.x), (O, body.o)):
            if controller == HUMAN:
                continue
            if controller not in STRATEGY_SEATS:
                return _error(422, "bad-controller", f"unknown strategy {controller!r}")
            if seat not in STRATEGY_SEATS[controller]:
                return _error(
                    422, "seat-mismatch", f"{controller} cannot play {seat}"
                )
        if body.x != HUMAN and body.o != HUMAN:
            return _error(
                422, "two-bots", "at least one side must be human; use the CLI "
                "play command for bot-vs-bot matches"
            )
        session = store.create(body.x, body.o)
        with session.lock:
            try:
                bot_move = _apply_bot_moves(session)
            except StrategyError as exc:
                return _error(409, "strategy-error", str(exc))
            return session.view(bot_move)

    @app.get("/api/games/{sid}")
    def get_game(sid: str):
        session = store.get(sid)
        if session is None:
            return _error(404, "unknown-session", f"no session {sid!r}")
        with session.lock:
            return session.view()

    @app.post("/api/games/{sid}/moves")
    def post_move(sid: str, body: MoveBody):
        session = store.get(sid)
        if session is None:
            return _error(404, "unknown-session", f"no session {sid!r}")
        with session.lock:
            state = session.state
            if state.status != IN_PROGRESS:
                return _error(409, "terminal", "the game is over")
            if session.controller(state.to_move) != HUMAN:
                return _error(409, "not-your-turn", f"{state.to_move} is a bot")
            try:
                next_state = apply_move(state, (body.f, body.s))
            except IllegalMoveError as exc:
                return _error(409, exc.reason, str(exc))
            # stage the human move, then the bot reply, atomically: if the
            # bot cannot answer this history the whole move is rejected
            session.state = next_state
            session.history.append((body.f, body.s))
            session.annotations.append(None)
            try:
                bot_move = _apply_bot_moves(session)
            except StrategyError as exc:
                session.state = state
                session.history.pop()
                session.annotations.pop()
                return _error(409, "strategy-error", str(exc))
            return session.view(bot_move)

    dist = frontend_dist
    if dist is None:
        dist = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    if dist.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(dist), html=True), name="ui")
    else:
        @app.get("/")
        def index_placeholder():
            return {
                "service": "u3t",
                "note": "web UI not built; see README for frontend build steps",
            }

    return app
