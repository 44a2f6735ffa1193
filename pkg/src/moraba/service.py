"""HTTP and WebSocket service around both game modes.

Matches live in memory; every accepted mutation (join, move, attack,
defense, timeout) appends one event to the match's log and bumps the
match revision by exactly one, under a per-match asyncio lock, so
clients see a single serial history. The event log carries everything
the engine needs, which makes a match replayable from its log alone
(:func:`replay_match_events`).

Bots occupy seats like players do and answer server-side immediately
after a human command (or timer expiry) hands them the turn. Move
timers are enforced lazily on every access and, for live pushes, by a
background watcher per match.

Finished awareness matches are recorded to the score store under the
creator's nickname with the wall-clock playtime.
"""

from __future__ import annotations

import asyncio
import time
import uuid
from contextlib import asynccontextmanager
from dataclasses import dataclass, field
from tempfile import mkdtemp
from typing import Any, Callable, Optional

from fastapi import FastAPI, Request, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import awareness as aw
from .ai import MinimaxPolicy, RandomPolicy, make_policy
from .board import point_from_name, point_name, standard_topology
from .catalog import default_catalog, default_matrix
from .classic import ClassicMatch, legal_moves, move_from_text, move_text, new_classic_game
from .errors import (
    IllegalMoveError,
    MorabaError,
    NotFoundError,
    OutOfTurnError,
)
from .persistence import PlayerProfile, ScoreStore
from .roles import Role, role_from_name

PROTOCOL_VERSION = 1

_ERROR_STATUS = {
    "not_found": 404,
    "stale_revision": 409,
    "out_of_turn": 409,
    "seat_taken": 409,
}


class StaleRevisionError(MorabaError):
    code = "stale_revision"


class SeatTakenError(MorabaError):
    code = "seat_taken"


@dataclass
class Seat:
    role: Role
    nickname: str
    kind: str  # "human" | "bot"
    token: Optional[str] = None  # humans only
    policy: Any = None  # bots only


@dataclass
class MatchSession:
    match_id: str
    mode: str  # "awareness" | "classic"
    creator: Role
    seats: dict[Role, Seat]
    state: Any  # AwarenessState or ClassicMatch
    clock: Callable[[], float]
    revision: int = 0
    events: list[dict] = field(default_factory=list)
    lock: asyncio.Lock = field(default_factory=asyncio.Lock)
    subscribers: list[tuple[asyncio.Queue, Optional[Role]]] = field(default_factory=list)
    created_at: float = 0.0
    phase_started: float = 0.0
    deadline: Optional[float] = None
    recorded: bool = False
    watcher: Optional[asyncio.Task] = None

    @property
    def over(self) -> bool:
        return self.state.over  # both engines expose the flag

    def seat_of_token(self, token: str) -> Seat:
        for seat in self.seats.values():
            if seat.token == token:
                return seat
        raise NotFoundError("unknown player token")

    def actor(self) -> Optional[Role]:
        """Whose input the match is waiting for, None when finished."""
        if self.over:
            return None
        if self.mode == "awareness":
            if self.state.phase is aw.MatchPhase.AWAIT_ATTACK:
                return Role.ATTACKER
            return Role.DEFENDER
        return self.state.state.to_move

    def timer_seconds(self) -> Optional[float]:
        if self.mode == "awareness":
            return self.state.timer_seconds
        return None


class Registry:
    def __init__(self, store: ScoreStore, clock: Callable[[], float], watch_timers: bool):
        self.store = store
        self.clock = clock
        self.watch_timers = watch_timers
        self.matches: dict[str, MatchSession] = {}
        self.matrix = default_matrix()
        self.catalog = default_catalog()

    def get(self, match_id: str) -> MatchSession:
        try:
            return self.matches[match_id]
        except KeyError:
            raise NotFoundError(f"no match {match_id}") from None


def _bot_policy(spec: str, mode: str, role: Role):
    policy = make_policy(spec)
    if mode == "classic" and not hasattr(policy, "choose_move"):
        raise ValueError(f"policy {spec!r} cannot play classic mode")
    if mode == "awareness":
        needed = "choose_attack" if role is Role.ATTACKER else "choose_defense"
        if not hasattr(policy, needed):
            raise ValueError(f"policy {spec!r} cannot play the {role.value} seat")
    return policy


def _awareness_snapshot(session: MatchSession, viewer: Optional[Role]) -> dict:
    state = session.state
    committed = None
    if state.committed_attack is not None:
        reveal = (not state.blind) or viewer is Role.ATTACKER
        committed = {
            "token": state.committed_attack.token_id if reveal else None,
            "point": point_name(state.committed_attack.point),
        }
    result = None
    if state.over:
        final = aw.final_result(state)
        result = {
            "attacker_score": final.attacker_score,
            "defender_score": final.defender_score,
            "outcome": final.outcome.value,
            "attacker_best_moves": list(final.attacker_best_moves),
            "defender_best_moves": list(final.defender_best_moves),
        }
    deadline_in = None
    if session.deadline is not None and not state.over:
        deadline_in = max(0.0, session.deadline - session.clock())
    return {
        "mode": "awareness",
        "phase": state.phase.value,
        "round_no": state.round_no,
        "rounds_total": state.rounds_total,
        "scores": {"attacker": state.attacker_score, "defender": state.defender_score},
        "attacker_remaining": list(state.attacker_remaining),
        "defender_remaining": list(state.defender_remaining),
        "claimed_points": [point_name(p) for p in state.claimed_points],
        "committed_attack": committed,
        "options": {
            "allow_reuse": state.allow_reuse,
            "blind": state.blind,
            "timer_seconds": state.timer_seconds,
        },
        "deadline_in": deadline_in,
        "records": [
            {
                "index": r.index,
                "attack": r.attack_id,
                "point": point_name(r.point) if r.point is not None else None,
                "defense": r.defend_id,
                "winner": r.winner.value,
                "feedback": r.feedback,
            }
            for r in state.records
        ],
        "result": result,
    }


def _classic_snapshot(session: MatchSession) -> dict:
    match: ClassicMatch = session.state
    state = match.state
    result = None
    if match.result is not None:
        result = {"outcome": "draw" if match.result == "draw" else match.result.value}
    return {
        "mode": "classic",
        "occupancy": [None if piece is None else piece.value for piece in state.occupancy],
        "hands": {"attacker": state.hands[0], "defender": state.hands[1]},
        "captured": {"attacker": state.captured[0], "defender": state.captured[1]},
        "to_move": state.to_move.value,
        "pending_capture": state.pending_capture,
        "phase": state.phase.value,
        "options": {"diagonals": state.topology.diagonals},
        "legal_moves": [] if match.over else [move_text(m) for m in legal_moves(state)],
        "result": result,
    }


def snapshot(session: MatchSession, viewer: Optional[Role] = None) -> dict:
    if session.mode == "awareness":
        body = _awareness_snapshot(session, viewer)
    else:
        body = _classic_snapshot(session)
    body["match_id"] = session.match_id
    body["revision"] = session.revision
    body["seats"] = {
        role.value: {"nickname": seat.nickname, "kind": seat.kind}
        for role, seat in session.seats.items()
    }
    body["actor"] = None if session.actor() is None else session.actor().value
    return body


def _filter_event(event: dict, session: MatchSession, viewer: Optional[Role]) -> dict:
    """Hide the in-flight attack token from non-attackers in blind play."""
    if (
        session.mode == "awareness"
        and session.state.blind
        and event["type"] == "attack"
        and viewer is not Role.ATTACKER
        and session.state.phase is aw.MatchPhase.AWAIT_DEFENSE
    ):
        payload = dict(event["payload"])
        payload["token"] = None
        return {**event, "payload": payload}
    return event


class Service:
    """Game logic above the transport: every public method is called
    while holding the session lock."""

    def __init__(self, registry: Registry):
        self.registry = registry

    def _push(self, session: MatchSession, event: dict) -> None:
        for queue, viewer in list(session.subscribers):
            try:
                queue.put_nowait(
                    {
                        "protocol": PROTOCOL_VERSION,
                        "type": "event",
                        "event": _filter_event(event, session, viewer),
                        "revision": session.revision,
                        "state": snapshot(session, viewer),
                    }
                )
            except asyncio.QueueFull:
                session.subscribers.remove((queue, viewer))

    def _commit(self, session: MatchSession, kind: str, payload: dict) -> None:
        session.revision += 1
        event = {"seq": session.revision, "type": kind, "payload": payload}
        session.events.append(event)
        session.phase_started = session.clock()
        timer = session.timer_seconds()
        armed = timer is not None and not session.over and len(session.seats) == 2
        session.deadline = session.clock() + timer if armed else None
        # push before recording so subscribers see this event ahead of
        # the finish event it may trigger (wire order == log order)
        self._push(session, event)
        self._record_if_finished(session)

    def _record_if_finished(self, session: MatchSession) -> None:
        if session.mode != "awareness" or not session.state.over or session.recorded:
            return
        session.recorded = True
        creator = session.seats[session.creator]
        playtime = session.clock() - session.created_at
        entry = self.registry.store.record_result(
            PlayerProfile(creator.nickname),
            session.state,
            match_id=session.match_id,
            playtime_seconds=round(playtime, 3),
        )
        final = aw.final_result(session.state)
        session.revision += 1
        event = {
            "seq": session.revision,
            "type": "finish",
            "payload": {
                "entry_id": entry.entry_id,
                "outcome": final.outcome.value,
                "attacker_score": final.attacker_score,
                "defender_score": final.defender_score,
                "attacker_best_moves": list(final.attacker_best_moves),
                "defender_best_moves": list(final.defender_best_moves),
            },
        }
        session.events.append(event)
        self._push(session, event)

    def settle(self, session: MatchSession) -> None:
        """Apply due timeouts, then let any bot on turn reply; repeat
        until a human must act or the match ends."""
        while not session.over:
            if session.deadline is not None and session.clock() >= session.deadline:
                state, record = aw.expire_timer(session.state)
                session.state = state
                self._commit(session, "timeout", {"round": record.index, "winner": record.winner.value})
                continue
            actor = session.actor()
            if actor is None:
                break
            seat = session.seats.get(actor)
            if seat is None or seat.kind != "bot":
                break
            elapsed = round(session.clock() - session.phase_started, 3)
            if session.mode == "awareness":
                if actor is Role.ATTACKER:
                    token, point = seat.policy.choose_attack(session.state)
                    session.state = aw.submit_attack(session.state, token, point, elapsed=elapsed)
                    self._commit(
                        session, "attack", {"token": token, "point": point_name(point), "elapsed": elapsed}
                    )
                else:
                    token = seat.policy.choose_defense(session.state)
                    session.state, record = aw.submit_defense(session.state, token, elapsed=elapsed)
                    self._commit(
                        session,
                        "defense",
                        {"token": token, "elapsed": elapsed, "winner": record.winner.value, "feedback": record.feedback},
                    )
            else:
                move = seat.policy.choose_move(session.state.state)
                session.state.play(move)
                self._commit(session, "move", {"move": move_text(move)})

    def create_match(self, body: "CreateMatchBody") -> MatchSession:
        registry = self.registry
        creator_role = role_from_name(body.role)
        options = body.options or {}
        if body.mode == "awareness":
            state: Any = aw.new_awareness_match(
                matrix=registry.matrix,
                catalog=registry.catalog,
                rounds_total=options.get("rounds_total", aw.DEFAULT_ROUNDS),
                allow_reuse=options.get("allow_reuse", False),
                blind=options.get("blind", False),
                timer_seconds=options.get("timer_seconds"),
            )
        elif body.mode == "classic":
            if options.get("timer_seconds") is not None:
                raise ValueError("move timers apply to awareness matches only")
            topology = standard_topology(diagonals=bool(options.get("diagonals", False)))
            state = ClassicMatch(new_classic_game(topology))
        else:
            raise ValueError(f"unknown mode {body.mode!r}")

        session = MatchSession(
            match_id=uuid.uuid4().hex[:12],
            mode=body.mode,
            creator=creator_role,
            seats={},
            state=state,
            clock=registry.clock,
        )
        session.created_at = registry.clock()
        session.phase_started = session.created_at
        creator_seat = Seat(
            role=creator_role,
            nickname=body.nickname,
            kind="human",
            token=uuid.uuid4().hex,
        )
        session.seats[creator_role] = creator_seat
        other = creator_role.opponent
        if body.opponent == "human":
            pass  # the seat stays open until someone joins
        else:
            session.seats[other] = Seat(
                role=other,
                nickname=f"bot:{body.opponent}",
                kind="bot",
                policy=_bot_policy(body.opponent, body.mode, other),
            )
        timer = session.timer_seconds()
        if timer is not None and len(session.seats) == 2:
            # Clocks only run once both seats are filled; a join starts them.
            session.deadline = session.clock() + timer
        registry.matches[session.match_id] = session
        session.revision += 1
        session.events.append(
            {
                "seq": session.revision,
                "type": "create",
                "payload": {
                    "mode": body.mode,
                    "creator_role": creator_role.value,
                    "nickname": body.nickname,
                    "opponent": body.opponent,
                    "options": (
                        {
                            "rounds_total": state.rounds_total,
                            "allow_reuse": state.allow_reuse,
                            "blind": state.blind,
                            "timer_seconds": state.timer_seconds,
                        }
                        if body.mode == "awareness"
                        else {"diagonals": state.state.topology.diagonals}
                    ),
                },
            }
        )
        return session

    def join_match(self, session: MatchSession, nickname: str) -> Seat:
        open_roles = [role for role in Role if role not in session.seats]
        if not open_roles:
            raise SeatTakenError("both seats are taken")
        role = open_roles[0]
        seat = Seat(role=role, nickname=nickname, kind="human", token=uuid.uuid4().hex)
        session.seats[role] = seat
        # _commit also starts the move timer now that both seats are filled.
        self._commit(session, "join", {"role": role.value, "nickname": nickname})
        return seat

    def apply_command(self, session: MatchSession, seat: Seat, command: dict) -> None:
        kind = command.get("type")
        actor = session.actor()
        if session.over:
            raise OutOfTurnError("match is finished")
        if len(session.seats) < 2:
            raise OutOfTurnError("waiting for an opponent to join")
        if session.mode == "awareness":
            elapsed = round(session.clock() - session.phase_started, 3)
            if kind == "attack":
                if actor is not Role.ATTACKER or seat.role is not Role.ATTACKER:
                    raise OutOfTurnError("it is not your turn to attack")
                point = point_from_name(str(command.get("point", "")))
                token = str(command.get("token", ""))
                session.state = aw.submit_attack(session.state, token, point, elapsed=elapsed)
                self._commit(
                    session, "attack", {"token": token, "point": point_name(point), "elapsed": elapsed}
                )
            elif kind == "defense":
                if actor is not Role.DEFENDER or seat.role is not Role.DEFENDER:
                    raise OutOfTurnError("it is not your turn to defend")
                token = str(command.get("token", ""))
                session.state, record = aw.submit_defense(session.state, token, elapsed=elapsed)
                self._commit(
                    session,
                    "defense",
                    {"token": token, "elapsed": elapsed, "winner": record.winner.value, "feedback": record.feedback},
                )
            else:
                raise IllegalMoveError(f"unknown command type {kind!r}")
        else:
            if kind != "move":
                raise IllegalMoveError(f"unknown command type {kind!r}")
            if actor is not seat.role:
                raise OutOfTurnError("it is not your turn")
            move = move_from_text(str(command.get("move", "")))
            session.state.play(move)
            self._commit(session, "move", {"move": move_text(move)})
        self.settle(session)


def replay_match_events(events: list[dict]) -> Any:
    """Rebuild a match's engine state purely from its event log.

    Returns the final :class:`AwarenessState` or :class:`ClassicMatch`.
    """
    if not events or events[0]["type"] != "create":
        raise ValueError("event log must start with a create event")
    head = events[0]["payload"]
    options = head["options"]
    if head["mode"] == "awareness":
        state = aw.new_awareness_match(
            rounds_total=options["rounds_total"],
            allow_reuse=options["allow_reuse"],
            blind=options["blind"],
            timer_seconds=options["timer_seconds"],
        )
        for event in events[1:]:
            payload = event["payload"]
            if event["type"] == "attack":
                state = aw.submit_attack(
                    state, payload["token"], point_from_name(payload["point"]), elapsed=payload["elapsed"]
                )
            elif event["type"] == "defense":
                state, _ = aw.submit_defense(state, payload["token"], elapsed=payload["elapsed"])
            elif event["type"] == "timeout":
                state, _ = aw.expire_timer(state)
        return state
    match = ClassicMatch(new_classic_game(standard_topology(diagonals=options["diagonals"])))
    for event in events[1:]:
        if event["type"] == "move":
            match.play(move_from_text(event["payload"]["move"]))
    return match


class CreateMatchBody(BaseModel):
    mode: str
    nickname: str
    role: str = "attacker"
    opponent: str = "human"
    options: Optional[dict] = None


class JoinBody(BaseModel):
    nickname: str


class CommandBody(BaseModel):
    player_token: str
    command: dict
    revision: Optional[int] = None


async def _watch_session(service: Service, session: MatchSession) -> None:
    while True:
        async with session.lock:
            if session.over:
                return
            remaining = None if session.deadline is None else session.deadline - session.clock()
        if remaining is None:
            # Timer not armed yet (waiting for a join); poll cheaply.
            await asyncio.sleep(0.05)
            continue
        await asyncio.sleep(max(remaining, 0.01))
        async with session.lock:
            service.settle(session)


def create_app(
    store: Optional[ScoreStore] = None,
    clock: Callable[[], float] = time.monotonic,
    watch_timers: bool = True,
) -> FastAPI:
    """Build the service; ``store`` and ``clock`` are injectable for
    tests (a fresh temp-dir store is used when none is given)."""

    @asynccontextmanager
    async def lifespan(_app: FastAPI):
        yield
        for session in registry.matches.values():
            if session.watcher is not None:
                session.watcher.cancel()

    app = FastAPI(title="moraba", version="1", lifespan=lifespan)
    registry = Registry(
        store=store if store is not None else ScoreStore(mkdtemp(prefix="moraba-")),
        clock=clock,
        watch_timers=watch_timers,
    )
    service = Service(registry)
    app.state.registry = registry

    @app.exception_handler(MorabaError)
    async def moraba_error(_request: Request, exc: MorabaError):
        status = _ERROR_STATUS.get(exc.code, 400)
        return JSONResponse(
            status_code=status,
            content={"protocol": PROTOCOL_VERSION, "error": {"code": exc.code, "message": str(exc)}},
        )

    @app.exception_handler(ValueError)
    async def value_error(_request: Request, exc: ValueError):
        return JSONResponse(
            status_code=400,
            content={"protocol": PROTOCOL_VERSION, "error": {"code": "illegal_move", "message": str(exc)}},
        )

    def _maybe_watch(session: MatchSession) -> None:
        if registry.watch_timers and session.timer_seconds() is not None and session.watcher is None:
            session.watcher = asyncio.get_running_loop().create_task(_watch_session(service, session))

    @app.post("/matches")
    async def create_match(body: CreateMatchBody):
        session = service.create_match(body)
        async with session.lock:
            service.settle(session)
            _maybe_watch(session)
            seat = session.seats[session.creator]
            return {
                "protocol": PROTOCOL_VERSION,
                "match_id": session.match_id,
                "player_token": seat.token,
                "role": seat.role.value,
                "revision": session.revision,
                "state": snapshot(session, seat.role),
            }

    @app.post("/matches/{match_id}/join")
    async def join_match(match_id: str, body: JoinBody):
        session = registry.get(match_id)
        async with session.lock:
            seat = service.join_match(session, body.nickname)
            service.settle(session)
            return {
                "protocol": PROTOCOL_VERSION,
                "match_id": session.match_id,
                "player_token": seat.token,
                "role": seat.role.value,
                "revision": session.revision,
                "state": snapshot(session, seat.role),
            }

    @app.post("/matches/{match_id}/commands")
    async def post_command(match_id: str, body: CommandBody):
        session = registry.get(match_id)
        async with session.lock:
            seat = session.seat_of_token(body.player_token)
            service.settle(session)  # due timeouts first, so the clock wins races
            if body.revision is not None and body.revision != session.revision:
                raise StaleRevisionError(
                    f"expected revision {body.revision}, match is at {session.revision}"
                )
            service.apply_command(session, seat, body.command)
            return {
                "protocol": PROTOCOL_VERSION,
                "revision": session.revision,
                "state": snapshot(session, seat.role),
            }

    @app.get("/matches/{match_id}")
    async def get_match(match_id: str, player_token: Optional[str] = None):
        session = registry.get(match_id)
        async with session.lock:
            viewer = session.seat_of_token(player_token).role if player_token else None
            service.settle(session)
            return {
                "protocol": PROTOCOL_VERSION,
                "revision": session.revision,
                "state": snapshot(session, viewer),
            }

    @app.get("/matches/{match_id}/log")
    async def get_log(match_id: str):
        session = registry.get(match_id)
        async with session.lock:
            service.settle(session)
            return {
                "protocol": PROTOCOL_VERSION,
                "match_id": session.match_id,
                "revision": session.revision,
                "events": list(session.events),
            }

    @app.get("/matrix")
    async def get_matrix():
        catalog = registry.catalog
        return {
            "protocol": PROTOCOL_VERSION,
            "attacks": [
                {"id": t.id, "label": t.label, "definition": t.definition} for t in catalog.attack_tokens
            ],
            "defends": [
                {"id": t.id, "label": t.label, "definition": t.definition} for t in catalog.defend_tokens
            ],
            "pairs": [
                {"attack": a, "defend": d, "winner": v.winner.value, "message": v.feedback}
                for a, d, v in registry.matrix.pairs()
            ],
        }

    @app.get("/scoreboard")
    async def get_scoreboard():
        return {
            "protocol": PROTOCOL_VERSION,
            "entries": [
                {
                    "entry_id": e.entry_id,
                    "nickname": e.nickname,
                    "attacker_score": e.attacker_score,
                    "defender_score": e.defender_score,
                    "playtime_seconds": e.playtime_seconds,
                    "winner": e.winner.value,
                }
                for e in registry.store.list_scoreboard()
            ],
        }

    @app.delete("/scoreboard/{entry_id}")
    async def delete_scoreboard(entry_id: int):
        registry.store.delete_entry(entry_id)
        return {"protocol": PROTOCOL_VERSION, "deleted": entry_id}

    @app.websocket("/matches/{match_id}/events")
    async def match_events(websocket: WebSocket, match_id: str):
        try:
            session = registry.get(match_id)
        except NotFoundError:
            await websocket.close(code=4404)
            return
        await websocket.accept()
        token = websocket.query_params.get("player_token")
        queue: asyncio.Queue = asyncio.Queue(maxsize=256)
        async with session.lock:
            viewer = None
            if token:
                try:
                    viewer = session.seat_of_token(token).role
                except NotFoundError:
                    viewer = None
            service.settle(session)
            _maybe_watch(session)
            session.subscribers.append((queue, viewer))
            hello = {
                "protocol": PROTOCOL_VERSION,
                "type": "hello",
                "revision": session.revision,
                "state": snapshot(session, viewer),
            }
        try:
            await websocket.send_json(hello)
            while True:
                message = await queue.get()
                await websocket.send_json(message)
        except (WebSocketDisconnect, RuntimeError):
            pass
        finally:
            async with session.lock:
                if (queue, viewer) in session.subscribers:
                    session.subscribers.remove((queue, viewer))

    return app
