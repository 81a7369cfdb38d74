"""Session-based HTTP advisor: play a turn under exact guidance.

A session walks the machine `awaiting-roll -> awaiting-decision -> ...`
until it is banked or busted.  Dice come from a seeded server RNG or, in
manual mode, from the client (physical dice).  Every decision point can be
asked for advice: each legal action with its exact expected value and the
optimal one flagged, straight from the solved table.

State is in memory; with a log directory each session also appends its
events to a JSONL file, and a restart replays those files back into live
sessions.
"""
from __future__ import annotations

import json
import random
import threading
import uuid
from fractions import Fraction
from pathlib import Path
from typing import Iterable

from fastapi import FastAPI, Query
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import __version__
from .dice import (
    Action,
    Configuration,
    GameState,
    INITIAL,
    apply_move,
    available_actions,
    classify_roll,
    reachable_states,
    roll_successor,
)
from .policy_io import format_decimal, _metadata, _rows
from .solver import SolvedTable, roll_value, solve_backward
from .variants import parse_action_subset, solve_restricted

AWAITING_ROLL = "awaiting-roll"
AWAITING_DECISION = "awaiting-decision"
BANKED = "banked"
BUSTED = "busted"


class SessionError(Exception):
    def __init__(self, status_code: int, detail: str):
        self.status_code = status_code
        self.detail = detail
        super().__init__(detail)


def state_payload(state: GameState) -> dict:
    return {
        "tau": state.tau,
        "config": str(state.config) if state.config is not None else None,
        "n": state.n,
    }


class GameSession:
    """One interactive turn; mutations are serialized by a per-session lock."""

    def __init__(self, session_id: str, mode: str, seed: int | None):
        if mode not in ("rng", "manual"):
            raise SessionError(400, f"mode must be 'rng' or 'manual', not {mode!r}")
        self.id = session_id
        self.mode = mode
        self.seed = seed
        self.rng = random.Random(seed) if mode == "rng" else None
        self.state: GameState = INITIAL
        self.status = AWAITING_ROLL
        self.payoff: int | None = None
        self.events: list[dict] = [{"type": "created", "mode": mode, "seed": seed}]
        self.lock = threading.Lock()

    def roll(self, faces: list[int] | None) -> dict:
        if self.status == AWAITING_DECISION:
            # rolling from a decision point implicitly takes the roll action
            self._apply_act(Action.ROLL)
        elif self.status != AWAITING_ROLL:
            raise SessionError(409, f"cannot roll a {self.status} session")
        if self.mode == "rng":
            if faces is not None:
                raise SessionError(400, "rng sessions roll their own dice")
            faces = [self.rng.randint(1, 6) for _ in range(self.state.n)]
        else:
            if faces is None:
                raise SessionError(400, "manual sessions must supply faces")
            if len(faces) != self.state.n:
                raise SessionError(
                    400, f"expected {self.state.n} faces, got {len(faces)}"
                )
            if any(not 1 <= f <= 6 for f in faces):
                raise SessionError(400, "faces must be integers 1..6")
        config = classify_roll(faces)
        self.events.append({"type": "roll", "faces": list(faces)})
        if config.score == 0:
            self.status = BUSTED
            self.payoff = 0
            outcome = {"faces": list(faces), "config": None}
        else:
            self.state = roll_successor(self.state, config)
            self.status = AWAITING_DECISION
            outcome = {"faces": list(faces), "config": str(config)}
        return outcome

    def act(self, action: Action) -> None:
        if self.status != AWAITING_DECISION:
            raise SessionError(409, f"cannot act on a {self.status} session")
        legal = available_actions(self.state)
        if action not in legal:
            raise SessionError(
                400,
                f"{action.value} is not legal here; legal actions:"
                f" {','.join(a.value for a in legal)}",
            )
        self.events.append({"type": "act", "action": action.value})
        self._apply_act(action)

    def _apply_act(self, action: Action) -> None:
        if action == Action.STOP:
            self.payoff = self.state.tau
            self.status = BANKED
        elif action == Action.ROLL:
            self.status = AWAITING_ROLL
        else:
            self.state = apply_move(self.state, action)
            self.status = AWAITING_DECISION

    def payload(self) -> dict:
        data = {
            "id": self.id,
            "mode": self.mode,
            "state": state_payload(self.state),
            "status": self.status,
        }
        if self.payoff is not None:
            data["payoff"] = self.payoff
        return data

    @classmethod
    def replay(cls, session_id: str, events: list[dict]) -> "GameSession":
        """Rebuild a session from its event log.

        RNG sessions re-draw from the seeded generator and must reproduce
        the logged faces, which also restores the stream position.
        """
        created = events[0]
        session = cls(session_id, created["mode"], created.get("seed"))
        for event in events[1:]:
            if event["type"] == "roll":
                if session.status == AWAITING_DECISION:
                    session._apply_act(Action.ROLL, record=False)
                faces = event["faces"]
                if session.mode == "rng":
                    drawn = [session.rng.randint(1, 6) for _ in range(len(faces))]
                    if drawn != faces:
                        raise SessionError(
                            409, f"session {session_id}: log does not match its seed"
                        )
                config = classify_roll(faces)
                if config.score == 0:
                    session.status = BUSTED
                    session.payoff = 0
                else:
                    session.state = roll_successor(session.state, config)
                    session.status = AWAITING_DECISION
            elif event["type"] == "act":
                session._apply_act(Action(event["action"]), record=False)
        session.events = events
        return session


class CreateSessionRequest(BaseModel):
    mode: str = "rng"
    seed: int | None = None


class RollRequest(BaseModel):
    faces: list[int] | None = None


class ActRequest(BaseModel):
    action: str = Field(min_length=1)


class Advisor:
    """Holds the solved table and the session registry."""

    def __init__(self, table: SolvedTable | None = None, log_dir: str | Path | None = None):
        self.table = table if table is not None else solve_backward()
        self.sessions: dict[str, GameSession] = {}
        self.registry_lock = threading.Lock()
        self.log_dir = Path(log_dir) if log_dir else None
        self._policy_cache: dict[str, dict] = {}
        if self.log_dir:
            self.log_dir.mkdir(parents=True, exist_ok=True)
            self._restore_sessions()

    # -- persistence ----------------------------------------------------
    def _log_path(self, session_id: str) -> Path:
        return self.log_dir / f"{session_id}.jsonl"

    def _append_events(self, session: GameSession, events: Iterable[dict]) -> None:
        if not self.log_dir:
            return
        with self._log_path(session.id).open("a") as handle:
            for event in events:
                handle.write(json.dumps(event) + "\n")

    def _restore_sessions(self) -> None:
        for path in sorted(self.log_dir.glob("*.jsonl")):
            events = [json.loads(line) for line in path.read_text().splitlines() if line]
            if not events:
                continue
            session = GameSession.replay(path.stem, events)
            self.sessions[session.id] = session

    # -- session operations ----------------------------------------------
    def create_session(self, mode: str, seed: int | None) -> GameSession:
        session = GameSession(uuid.uuid4().hex, mode, seed)
        with self.registry_lock:
            self.sessions[session.id] = session
        self._append_events(session, session.events)
        return session

    def get(self, session_id: str) -> GameSession:
        try:
            return self.sessions[session_id]
        except KeyError:
            raise SessionError(404, f"unknown session {session_id}") from None

    def advise(self, session: GameSession) -> list[dict]:
        if session.status != AWAITING_DECISION:
            raise SessionError(409, f"no decision pending on a {session.status} session")
        state = session.state
        table = self.table
        entries = []
        best = None
        for action in available_actions(state):
            if action == Action.STOP:
                value = Fraction(state.tau)
                next_state = None
            elif action == Action.ROLL:
                value = roll_value(state.tau, state.n, table.value)
                next_state = None
            else:
                destination = apply_move(state, action)
                value = table.state_value(destination)
                next_state = state_payload(destination)
            entries.append(
                {
                    "action": action.value,
                    "value_dec": format_decimal(value, 4),
                    "value_num": str(value.numerator),
                    "value_den": str(value.denominator),
                    "optimal": False,
                    "next_state": next_state,
                    "_value": value,
                }
            )
            best = value if best is None else max(best, value)
        optimal_action = table.state_action(state) if state.tau < table.threshold else Action.STOP
        flagged = [e for e in entries if e["action"] == optimal_action.value]
        assert len(flagged) == 1 and flagged[0]["_value"] == best, (
            f"optimal action {optimal_action} does not attain the state value at {state}"
        )
        flagged[0]["optimal"] = True
        for entry in entries:
            entry.pop("_value")
        return entries

    def policy_export(self, variant: str) -> dict:
        name = variant.strip() or "all"
        if name not in self._policy_cache:
            try:
                subset = parse_action_subset(name)
            except ValueError as exc:
                raise SessionError(400, str(exc)) from None
            table = self.table if name == "all" else solve_restricted(subset)
            bundle = {
                "metadata": _metadata(name),
                "initial": {
                    "value_num": str(table.game_value.numerator),
                    "value_den": str(table.game_value.denominator),
                    "value_dec": format_decimal(table.game_value, 10),
                },
                "rows": [
                    {**row, "value_num": str(row["value_num"]),
                     "value_den": str(row["value_den"])}
                    for row in _rows(table, reachable_states())
                ],
            }
            self._policy_cache[name] = bundle
        return self._policy_cache[name]


def create_app(
    table: SolvedTable | None = None, log_dir: str | Path | None = None
) -> FastAPI:
    advisor = Advisor(table=table, log_dir=log_dir)
    app = FastAPI(title="Ten Thousand advisor", version=__version__)
    app.state.advisor = advisor

    @app.exception_handler(SessionError)
    async def _session_error(request, exc: SessionError):
        return JSONResponse(status_code=exc.status_code, content={"detail": exc.detail})

    @app.post("/api/v1/sessions")
    def create_session(body: CreateSessionRequest):
        session = advisor.create_session(body.mode, body.seed)
        return session.payload()

    @app.get("/api/v1/sessions/{session_id}")
    def get_session(session_id: str):
        return advisor.get(session_id).payload()

    @app.post("/api/v1/sessions/{session_id}/roll")
    def roll(session_id: str, body: RollRequest | None = None):
        session = advisor.get(session_id)
        with session.lock:
            mark = len(session.events)
            outcome = session.roll(body.faces if body else None)
            advisor._append_events(session, session.events[mark:])
            return {**session.payload(), "outcome": outcome}

    @app.get("/api/v1/sessions/{session_id}/advice")
    def advice(session_id: str):
        session = advisor.get(session_id)
        with session.lock:
            return advisor.advise(session)

    @app.post("/api/v1/sessions/{session_id}/act")
    def act(session_id: str, body: ActRequest):
        session = advisor.get(session_id)
        try:
            action = Action(body.action)
        except ValueError:
            raise SessionError(400, f"unknown action {body.action!r}") from None
        with session.lock:
            mark = len(session.events)
            session.act(action)
            advisor._append_events(session, session.events[mark:])
            return session.payload()

    @app.get("/api/v1/value")
    def value(
        tau: int = Query(ge=0),
        f: int = Query(ge=0, le=5),
        o: int = Query(ge=0, le=5),
        t: int = Query(ge=0, le=6),
        n: int = Query(ge=1, le=5),
    ):
        try:
            config = Configuration(f, o, t)
            state = GameState(tau, config, n)
        except ValueError as exc:
            raise SessionError(400, str(exc)) from None
        val = advisor.table.state_value(state)
        action = advisor.table.state_action(state)
        return {
            "tau": tau,
            "config": str(config),
            "n": n,
            "value_dec": format_decimal(val, 4),
            "value_num": str(val.numerator),
            "value_den": str(val.denominator),
            "action": action.value,
        }

    @app.get("/api/v1/policy")
    def policy(variant: str = "all"):
        return advisor.policy_export(variant)

    return app
