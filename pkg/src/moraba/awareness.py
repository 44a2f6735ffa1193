"""Round-based awareness mode.

A match runs a fixed number of rounds. Each round the attacker commits
an attack token and claims a free board point, then the defender
answers with a defense token; the matchup matrix decides the winner,
who scores one point. Tokens are single-use by default (``allow_reuse``
lifts that), and each round claims a fresh board point, so a match can
never have more rounds than board points or, in single-use mode, than
tokens per side.

An optional per-move timer can be enabled; a side that fails to move in
time forfeits the round with the fixed feedback message
``"move time expired"``. Timeouts by the attacker consume no token and
claim no point; timeouts by the defender leave the committed attack
standing.

States are immutable; :func:`submit_attack`, :func:`submit_defense` and
:func:`expire_timer` return new states. A finished match condenses into
a :class:`FinalResult`, and any match can be serialized to a small
line-based transcript and replayed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import IO, Optional, Union

from . import board
from .catalog import (
    MatchupMatrix,
    TokenCatalog,
    default_catalog,
    default_matrix,
    judge_verdict,
    token_sort_key,
    validate_matrix,
)
from .errors import (
    IllegalMoveError,
    MorabaError,
    OutOfTurnError,
    TimerDisabledError,
    TokenExhaustedError,
)
from .roles import Role

TIMEOUT_FEEDBACK = "move time expired"
TRANSCRIPT_HEADER = "moraba-transcript 1"
DEFAULT_ROUNDS = 13


class MatchPhase(enum.Enum):
    AWAIT_ATTACK = "await_attack"
    AWAIT_DEFENSE = "await_defense"
    FINISHED = "finished"


class Outcome(enum.Enum):
    ATTACKER = "attacker"
    DEFENDER = "defender"
    DRAW = "draw"


def outcome_from_scores(attacker: int, defender: int) -> Outcome:
    if attacker > defender:
        return Outcome.ATTACKER
    if defender > attacker:
        return Outcome.DEFENDER
    return Outcome.DRAW


@dataclass(frozen=True, slots=True)
class RoundRecord:
    """One resolved round. Token or point fields are None on a timeout."""

    index: int
    attack_id: Optional[str]
    point: Optional[int]
    defend_id: Optional[str]
    winner: Role
    feedback: str
    attack_elapsed: float = 0.0
    defend_elapsed: float = 0.0


@dataclass(frozen=True, slots=True)
class CommittedAttack:
    token_id: str
    point: int
    elapsed: float


@dataclass(frozen=True, slots=True)
class AwarenessState:
    catalog: TokenCatalog
    matrix: MatchupMatrix
    rounds_total: int
    allow_reuse: bool
    blind: bool
    timer_seconds: Optional[float]
    phase: MatchPhase
    round_no: int
    scores: tuple[int, int]
    attacker_remaining: tuple[str, ...]
    defender_remaining: tuple[str, ...]
    claimed_points: tuple[int, ...]
    committed_attack: Optional[CommittedAttack]
    records: tuple[RoundRecord, ...] = field(repr=False)

    @property
    def attacker_score(self) -> int:
        return self.scores[Role.ATTACKER.index]

    @property
    def defender_score(self) -> int:
        return self.scores[Role.DEFENDER.index]

    @property
    def over(self) -> bool:
        return self.phase is MatchPhase.FINISHED


def new_awareness_match(
    matrix: Optional[MatchupMatrix] = None,
    catalog: Optional[TokenCatalog] = None,
    rounds_total: int = DEFAULT_ROUNDS,
    allow_reuse: bool = False,
    blind: bool = False,
    timer_seconds: Optional[float] = None,
) -> AwarenessState:
    catalog = catalog or default_catalog()
    matrix = matrix if matrix is not None else default_matrix(catalog)
    report = validate_matrix(matrix, catalog)
    if not report.ok:
        raise ValueError("matrix does not cover the catalog:\n" + report.summary())
    if rounds_total < 0:
        raise ValueError("rounds_total must be >= 0")
    if rounds_total > board.POINT_COUNT:
        raise ValueError(f"rounds_total must be <= {board.POINT_COUNT}, each round claims a fresh point")
    if not allow_reuse and rounds_total > len(catalog.attack_tokens):
        raise ValueError(f"rounds_total must be <= {len(catalog.attack_tokens)} when tokens are single-use")
    if timer_seconds is not None and timer_seconds <= 0:
        raise ValueError("timer_seconds must be positive when set")
    return AwarenessState(
        catalog=catalog,
        matrix=matrix,
        rounds_total=rounds_total,
        allow_reuse=allow_reuse,
        blind=blind,
        timer_seconds=timer_seconds,
        phase=MatchPhase.FINISHED if rounds_total == 0 else MatchPhase.AWAIT_ATTACK,
        round_no=min(1, rounds_total),
        scores=(0, 0),
        attacker_remaining=tuple(sorted(catalog.attack_ids, key=token_sort_key)),
        defender_remaining=tuple(sorted(catalog.defend_ids, key=token_sort_key)),
        claimed_points=(),
        committed_attack=None,
        records=(),
    )


def _consume(remaining: tuple[str, ...], token_id: str) -> tuple[str, ...]:
    out = list(remaining)
    out.remove(token_id)
    return tuple(out)


def submit_attack(state: AwarenessState, token_id: str, point: int, elapsed: float = 0.0) -> AwarenessState:
    if state.phase is not MatchPhase.AWAIT_ATTACK:
        raise OutOfTurnError("not awaiting an attack")
    if token_id not in state.catalog.attack_ids:
        raise IllegalMoveError(f"unknown attack token {token_id!r}")
    if token_id not in state.attacker_remaining:
        raise TokenExhaustedError(f"attack token {token_id} already used")
    board.check_point(point)
    if point in state.claimed_points:
        raise IllegalMoveError(f"point {board.point_name(point)} already claimed")
    return replace(
        state,
        phase=MatchPhase.AWAIT_DEFENSE,
        committed_attack=CommittedAttack(token_id, point, elapsed),
    )


def _finish_round(state: AwarenessState, record: RoundRecord, **changes) -> tuple[AwarenessState, RoundRecord]:
    scores = list(state.scores)
    scores[record.winner.index] += 1
    last = state.round_no >= state.rounds_total
    new_state = replace(
        state,
        scores=(scores[0], scores[1]),
        records=state.records + (record,),
        committed_attack=None,
        phase=MatchPhase.FINISHED if last else MatchPhase.AWAIT_ATTACK,
        round_no=state.round_no if last else state.round_no + 1,
        **changes,
    )
    return new_state, record


def submit_defense(state: AwarenessState, token_id: str, elapsed: float = 0.0) -> tuple[AwarenessState, RoundRecord]:
    if state.phase is not MatchPhase.AWAIT_DEFENSE:
        raise OutOfTurnError("not awaiting a defense")
    if token_id not in state.catalog.defend_ids:
        raise IllegalMoveError(f"unknown defense token {token_id!r}")
    if token_id not in state.defender_remaining:
        raise TokenExhaustedError(f"defense token {token_id} already used")
    attack = state.committed_attack
    assert attack is not None
    verdict = judge_verdict(state.matrix, attack.token_id, token_id)
    record = RoundRecord(
        index=state.round_no,
        attack_id=attack.token_id,
        point=attack.point,
        defend_id=token_id,
        winner=verdict.winner,
        feedback=verdict.feedback,
        attack_elapsed=attack.elapsed,
        defend_elapsed=elapsed,
    )
    changes = {"claimed_points": state.claimed_points + (attack.point,)}
    if not state.allow_reuse:
        changes["attacker_remaining"] = _consume(state.attacker_remaining, attack.token_id)
        changes["defender_remaining"] = _consume(state.defender_remaining, token_id)
    return _finish_round(state, record, **changes)


def expire_timer(state: AwarenessState) -> tuple[AwarenessState, RoundRecord]:
    """Forfeit the current move to the clock; the waiting side scores."""
    if state.timer_seconds is None:
        raise TimerDisabledError("no move timer configured")
    if state.phase is MatchPhase.FINISHED:
        raise OutOfTurnError("match is finished")
    if state.phase is MatchPhase.AWAIT_ATTACK:
        # The attacker never moved: no token spent, no point claimed.
        record = RoundRecord(
            index=state.round_no,
            attack_id=None,
            point=None,
            defend_id=None,
            winner=Role.DEFENDER,
            feedback=TIMEOUT_FEEDBACK,
        )
        return _finish_round(state, record)
    attack = state.committed_attack
    assert attack is not None
    # The committed attack stands: its token is spent and its point claimed.
    record = RoundRecord(
        index=state.round_no,
        attack_id=attack.token_id,
        point=attack.point,
        defend_id=None,
        winner=Role.ATTACKER,
        feedback=TIMEOUT_FEEDBACK,
        attack_elapsed=attack.elapsed,
    )
    changes = {"claimed_points": state.claimed_points + (attack.point,)}
    if not state.allow_reuse:
        changes["attacker_remaining"] = _consume(state.attacker_remaining, attack.token_id)
    return _finish_round(state, record, **changes)


def totals(state: AwarenessState) -> tuple[int, int]:
    return state.scores


@dataclass(frozen=True, slots=True)
class FinalResult:
    attacker_score: int
    defender_score: int
    outcome: Outcome
    attacker_best_moves: tuple[str, ...]
    defender_best_moves: tuple[str, ...]


def _dedupe(labels: list[str]) -> tuple[str, ...]:
    seen: dict[str, None] = {}
    for label in labels:
        seen.setdefault(label)
    return tuple(seen)


def final_result(state: AwarenessState) -> FinalResult:
    """Scores, outcome, and the labels of the tokens that won rounds."""
    if not state.over:
        raise ValueError("match is not finished")
    attacker_wins = [r.attack_id for r in state.records if r.winner is Role.ATTACKER and r.attack_id]
    defender_wins = [r.defend_id for r in state.records if r.winner is Role.DEFENDER and r.defend_id]
    return FinalResult(
        attacker_score=state.attacker_score,
        defender_score=state.defender_score,
        outcome=outcome_from_scores(state.attacker_score, state.defender_score),
        attacker_best_moves=_dedupe([state.catalog.get(t).label for t in attacker_wins]),
        defender_best_moves=_dedupe([state.catalog.get(t).label for t in defender_wins]),
    )


# Transcript format: a header line, one option per line, then one line
# per resolved round with "-" marking a side that timed out.


class TranscriptFormatError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class TranscriptRound:
    attack_id: Optional[str]
    point: Optional[int]
    defend_id: Optional[str]


@dataclass(frozen=True, slots=True)
class Transcript:
    rounds_total: int
    allow_reuse: bool
    blind: bool
    timer_seconds: Optional[float]
    rounds: tuple[TranscriptRound, ...]


def format_transcript(state: AwarenessState) -> str:
    lines = [
        TRANSCRIPT_HEADER,
        f"rounds {state.rounds_total}",
        f"allow-reuse {'on' if state.allow_reuse else 'off'}",
        f"blind {'on' if state.blind else 'off'}",
        "timer off" if state.timer_seconds is None else f"timer {state.timer_seconds:g}",
    ]
    for record in state.records:
        attack = record.attack_id or "-"
        point = board.point_name(record.point) if record.point is not None else "-"
        defend = record.defend_id or "-"
        lines.append(f"round {attack} {point} {defend}")
    return "\n".join(lines) + "\n"


Source = Union[str, Path, IO[str]]


def _read_text(source: Source) -> str:
    if hasattr(source, "read"):
        return source.read()  # type: ignore[union-attr]
    return Path(source).read_text(encoding="utf-8")


def parse_transcript(source: Source) -> Transcript:
    lines = _read_text(source).splitlines()
    if not lines or lines[0].strip() != TRANSCRIPT_HEADER:
        raise TranscriptFormatError(f"line 1: expected header {TRANSCRIPT_HEADER!r}")
    options = {"rounds": None, "allow-reuse": False, "blind": False, "timer": None}
    rounds: list[TranscriptRound] = []
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        key = parts[0]
        if key == "round":
            if len(parts) != 4:
                raise TranscriptFormatError(f"line {lineno}: round needs attack, point, defense")
            attack, point_name, defend = parts[1:]
            try:
                point = None if point_name == "-" else board.point_from_name(point_name)
            except ValueError as err:
                raise TranscriptFormatError(f"line {lineno}: {err}") from None
            rounds.append(
                TranscriptRound(
                    attack_id=None if attack == "-" else attack,
                    point=point,
                    defend_id=None if defend == "-" else defend,
                )
            )
        elif key == "rounds" and len(parts) == 2 and parts[1].isdigit():
            options["rounds"] = int(parts[1])
        elif key in ("allow-reuse", "blind") and len(parts) == 2 and parts[1] in ("on", "off"):
            options[key] = parts[1] == "on"
        elif key == "timer" and len(parts) == 2:
            if parts[1] == "off":
                options["timer"] = None
            else:
                try:
                    options["timer"] = float(parts[1])
                except ValueError:
                    raise TranscriptFormatError(f"line {lineno}: bad timer value {parts[1]!r}") from None
        else:
            raise TranscriptFormatError(f"line {lineno}: unrecognized line {raw!r}")
    if options["rounds"] is None:
        options["rounds"] = len(rounds)
    return Transcript(
        rounds_total=options["rounds"],
        allow_reuse=options["allow-reuse"],
        blind=options["blind"],
        timer_seconds=options["timer"],
        rounds=tuple(rounds),
    )


def replay_transcript(
    transcript: Transcript,
    matrix: Optional[MatchupMatrix] = None,
    catalog: Optional[TokenCatalog] = None,
) -> AwarenessState:
    """Drive a fresh match through the transcript's rounds."""
    state = new_awareness_match(
        matrix=matrix,
        catalog=catalog,
        rounds_total=transcript.rounds_total,
        allow_reuse=transcript.allow_reuse,
        blind=transcript.blind,
        timer_seconds=transcript.timer_seconds,
    )
    for i, entry in enumerate(transcript.rounds, start=1):
        try:
            if entry.attack_id is None:
                state, _ = expire_timer(state)
                continue
            if entry.point is None:
                raise IllegalMoveError("attack token without a point")
            state = submit_attack(state, entry.attack_id, entry.point)
            if entry.defend_id is None:
                state, _ = expire_timer(state)
            else:
                state, _ = submit_defense(state, entry.defend_id)
        except (ValueError, MorabaError) as err:
            raise ValueError(f"round {i}: {err}") from None
    return state
