"""Awareness mode tests: round flow, scoring, timers, transcripts."""

import io
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moraba.awareness import (
    MatchPhase,
    Outcome,
    TIMEOUT_FEEDBACK,
    Transcript,
    TranscriptFormatError,
    TranscriptRound,
    expire_timer,
    final_result,
    format_transcript,
    new_awareness_match,
    outcome_from_scores,
    parse_transcript,
    replay_transcript,
    submit_attack,
    submit_defense,
    totals,
)
from moraba.board import point_from_name
from moraba.errors import (
    IllegalMoveError,
    OutOfTurnError,
    TimerDisabledError,
    TokenExhaustedError,
)
from moraba.roles import Role

# The eight showcase rounds: attack, point, defense, winner, feedback.
SHOWCASE_ROUNDS = [
    ("A1", "a7", "D5", Role.DEFENDER, "Never trust malicious emails"),
    ("A11", "d7", "D1", Role.DEFENDER, "Keep denying malicious links"),
    ("A3", "g7", "D4", Role.DEFENDER, "Identification of malicious chats"),
    ("A2", "a4", "D7", Role.ATTACKER, "The defender trusted a malicious call"),
    ("A7", "g4", "D12", Role.DEFENDER, "Secured connection suggested"),
    ("A8", "a1", "D4", Role.DEFENDER, "Malicious access identified"),
    ("A10", "d1", "D6", Role.ATTACKER, "Data loss occurred"),
    ("A11", "g1", "D8", Role.ATTACKER, "Malicious link used"),
]


def play_showcase():
    """Replays the eight showcase rounds; needs token reuse (A11, D4
    both appear twice)."""
    state = new_awareness_match(rounds_total=8, allow_reuse=True)
    records = []
    for attack, point, defense, _, _ in SHOWCASE_ROUNDS:
        state = submit_attack(state, attack, point_from_name(point))
        state, record = submit_defense(state, defense)
        records.append(record)
    return state, records


def test_new_match_defaults():
    state = new_awareness_match()
    assert state.rounds_total == 13
    assert not state.allow_reuse
    assert not state.blind
    assert state.timer_seconds is None
    assert state.phase is MatchPhase.AWAIT_ATTACK
    assert state.round_no == 1
    assert state.scores == (0, 0)
    assert len(state.attacker_remaining) == 13
    assert len(state.defender_remaining) == 13


def test_zero_rounds_is_finished():
    state = new_awareness_match(rounds_total=0)
    assert state.over
    result = final_result(state)
    assert result.outcome is Outcome.DRAW


@pytest.mark.parametrize(
    "kwargs",
    [
        {"rounds_total": -1},
        {"rounds_total": 25},
        {"rounds_total": 14},  # single-use: only 13 tokens per side
        {"timer_seconds": 0},
        {"timer_seconds": -5},
    ],
)
def test_invalid_options_rejected(kwargs):
    with pytest.raises(ValueError):
        new_awareness_match(**kwargs)


def test_reuse_lifts_round_cap():
    state = new_awareness_match(rounds_total=14, allow_reuse=True)
    assert state.rounds_total == 14


def test_round_flow_and_scoring():
    state = new_awareness_match(rounds_total=2)
    state = submit_attack(state, "A1", point_from_name("a7"), elapsed=1.5)
    assert state.phase is MatchPhase.AWAIT_DEFENSE
    state, record = submit_defense(state, "D5", elapsed=2.5)
    assert record.index == 1
    assert record.winner is Role.DEFENDER
    assert record.feedback == "Never trust malicious emails"
    assert record.attack_elapsed == 1.5
    assert record.defend_elapsed == 2.5
    assert state.scores == (0, 1)
    assert state.round_no == 2
    assert state.phase is MatchPhase.AWAIT_ATTACK
    assert point_from_name("a7") in state.claimed_points
    assert "A1" not in state.attacker_remaining
    assert "D5" not in state.defender_remaining
    state = submit_attack(state, "A2", point_from_name("d7"))
    state, record = submit_defense(state, "D7")
    assert record.winner is Role.ATTACKER
    assert state.over
    assert totals(state) == (1, 1)


def test_out_of_turn_rejected():
    state = new_awareness_match()
    with pytest.raises(OutOfTurnError):
        submit_defense(state, "D1")
    state = submit_attack(state, "A1", 0)
    with pytest.raises(OutOfTurnError):
        submit_attack(state, "A2", 1)
    state, _ = submit_defense(state, "D1")
    finished = new_awareness_match(rounds_total=0)
    with pytest.raises(OutOfTurnError):
        submit_attack(finished, "A1", 0)


def test_unknown_and_wrong_role_tokens_rejected():
    state = new_awareness_match()
    with pytest.raises(IllegalMoveError):
        submit_attack(state, "A99", 0)
    with pytest.raises(IllegalMoveError):
        submit_attack(state, "D1", 0)
    state = submit_attack(state, "A1", 0)
    with pytest.raises(IllegalMoveError):
        submit_defense(state, "A2")


def test_single_use_tokens():
    state = new_awareness_match(rounds_total=3)
    state = submit_attack(state, "A1", 0)
    state, _ = submit_defense(state, "D1")
    with pytest.raises(TokenExhaustedError):
        submit_attack(state, "A1", 1)
    state = submit_attack(state, "A2", 1)
    with pytest.raises(TokenExhaustedError):
        submit_defense(state, "D1")


def test_reuse_allows_repeats():
    state = new_awareness_match(rounds_total=3, allow_reuse=True)
    for point in (0, 1, 2):
        state = submit_attack(state, "A1", point)
        state, _ = submit_defense(state, "D1")
    assert state.over
    assert state.scores == (0, 3)


def test_points_claimed_once():
    state = new_awareness_match()
    state = submit_attack(state, "A1", 5)
    state, _ = submit_defense(state, "D1")
    with pytest.raises(IllegalMoveError):
        submit_attack(state, "A2", 5)
    with pytest.raises(ValueError):
        submit_attack(state, "A2", 24)


def test_timer_disabled_by_default():
    state = new_awareness_match()
    with pytest.raises(TimerDisabledError):
        expire_timer(state)


def test_attacker_timeout():
    state = new_awareness_match(rounds_total=2, timer_seconds=5)
    state, record = expire_timer(state)
    assert record.attack_id is None and record.point is None and record.defend_id is None
    assert record.winner is Role.DEFENDER
    assert record.feedback == TIMEOUT_FEEDBACK
    assert state.scores == (0, 1)
    assert len(state.attacker_remaining) == 13  # nothing was spent
    assert state.claimed_points == ()
    assert state.round_no == 2


def test_defender_timeout():
    state = new_awareness_match(rounds_total=2, timer_seconds=5)
    state = submit_attack(state, "A4", point_from_name("b6"))
    state, record = expire_timer(state)
    assert record.attack_id == "A4"
    assert record.defend_id is None
    assert record.winner is Role.ATTACKER
    assert record.feedback == TIMEOUT_FEEDBACK
    assert state.scores == (1, 0)
    assert "A4" not in state.attacker_remaining  # the attack stood
    assert state.claimed_points == (point_from_name("b6"),)


def test_timeout_after_finish_rejected():
    state = new_awareness_match(rounds_total=0, timer_seconds=5)
    with pytest.raises(OutOfTurnError):
        expire_timer(state)


@pytest.mark.parametrize("attack,point,defense,winner,feedback", SHOWCASE_ROUNDS)
def test_showcase_rounds(attack, point, defense, winner, feedback):
    state = new_awareness_match(rounds_total=1, allow_reuse=True)
    state = submit_attack(state, attack, point_from_name(point))
    state, record = submit_defense(state, defense)
    assert record.winner is winner
    assert record.feedback == feedback


def test_showcase_match_totals():
    state, records = play_showcase()
    assert state.over
    assert totals(state) == (3, 5)
    result = final_result(state)
    assert result.outcome is Outcome.DEFENDER
    assert [r.feedback for r in records] == [row[4] for row in SHOWCASE_ROUNDS]


def test_equal_scores_draw():
    state = new_awareness_match(rounds_total=12, allow_reuse=True)
    for i in range(6):
        state = submit_attack(state, "A1", i)
        state, _ = submit_defense(state, "D1")  # defender win
    for i in range(6, 12):
        state = submit_attack(state, "A1", i)
        state, _ = submit_defense(state, "D7")  # attacker win
    assert totals(state) == (6, 6)
    assert final_result(state).outcome is Outcome.DRAW


def test_final_result_requires_finish():
    with pytest.raises(ValueError):
        final_result(new_awareness_match())


def test_best_moves_deduped_in_round_order():
    state, _ = play_showcase()
    result = final_result(state)
    # Attack wins: A2, A10, A11 -> labels Phone, Data loss, Click.
    assert result.attacker_best_moves == ("Phone", "Data loss", "Click")
    # Defense wins: D5, D1, D4, D12, D4 -> D4 listed once.
    assert result.defender_best_moves == ("No trust", "Denying", "Identification", "Connection")


def test_outcome_from_scores():
    assert outcome_from_scores(2, 1) is Outcome.ATTACKER
    assert outcome_from_scores(1, 2) is Outcome.DEFENDER
    assert outcome_from_scores(0, 0) is Outcome.DRAW


def test_transcript_round_trip():
    state, _ = play_showcase()
    text = format_transcript(state)
    transcript = parse_transcript(io.StringIO(text))
    replayed = replay_transcript(transcript)
    assert replayed.records == state.records
    assert totals(replayed) == (3, 5)


def test_transcript_with_timeouts_round_trips():
    state = new_awareness_match(rounds_total=3, timer_seconds=10)
    state, _ = expire_timer(state)
    state = submit_attack(state, "A4", point_from_name("b6"))
    state, _ = expire_timer(state)
    state = submit_attack(state, "A1", point_from_name("a7"))
    state, _ = submit_defense(state, "D5")
    text = format_transcript(state)
    assert "round - - -" in text
    assert "round A4 b6 -" in text
    replayed = replay_transcript(parse_transcript(io.StringIO(text)))
    assert replayed.records == state.records


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("nope\n", "line 1"),
        ("moraba-transcript 1\nround A1 a7\n", "line 2"),
        ("moraba-transcript 1\nround A1 zz D1\n", "line 2"),
        ("moraba-transcript 1\ntimer soon\n", "line 2"),
        ("moraba-transcript 1\nmystery on\n", "line 2"),
    ],
)
def test_transcript_parse_errors_name_lines(text, fragment):
    with pytest.raises(TranscriptFormatError, match=fragment):
        parse_transcript(io.StringIO(text))


def test_transcript_replay_errors_name_rounds():
    transcript = Transcript(
        rounds_total=2,
        allow_reuse=False,
        blind=False,
        timer_seconds=None,
        rounds=(
            TranscriptRound("A1", 3, "D1"),
            TranscriptRound("A2", 3, "D2"),  # point 3 reused
        ),
    )
    with pytest.raises(ValueError, match="round 2"):
        replay_transcript(transcript)


def test_transcript_timeout_needs_timer():
    transcript = Transcript(
        rounds_total=1,
        allow_reuse=False,
        blind=False,
        timer_seconds=None,
        rounds=(TranscriptRound(None, None, None),),
    )
    with pytest.raises(ValueError, match="round 1"):
        replay_transcript(transcript)


def test_forced_outcome_single_use_full_match():
    # Single-use over all 13 rounds uses every defense exactly once, and
    # the default matrix's winner depends only on the defense: 4 risky
    # defenses, 9 safe ones.
    for seed in (0, 1, 2):
        rng = random.Random(seed)
        state = new_awareness_match()
        while not state.over:
            attack = rng.choice(state.attacker_remaining)
            point = rng.choice([p for p in range(24) if p not in state.claimed_points])
            state = submit_attack(state, attack, point)
            state, _ = submit_defense(state, rng.choice(state.defender_remaining))
        assert totals(state) == (4, 9)
        assert final_result(state).outcome is Outcome.DEFENDER


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_match_invariants_hold(seed):
    rng = random.Random(seed)
    state = new_awareness_match(
        rounds_total=rng.randrange(0, 14),
        allow_reuse=rng.random() < 0.5,
        timer_seconds=5,
    )
    while not state.over:
        if rng.random() < 0.15:
            state, _ = expire_timer(state)
            continue
        attack = rng.choice(state.attacker_remaining)
        point = rng.choice([p for p in range(24) if p not in state.claimed_points])
        state = submit_attack(state, attack, point)
        if rng.random() < 0.15:
            state, _ = expire_timer(state)
        else:
            state, _ = submit_defense(state, rng.choice(state.defender_remaining))
        # Invariants after every resolved round.
        assert sum(state.scores) == len(state.records)
        assert len(set(state.claimed_points)) == len(state.claimed_points)
        spent = sum(1 for r in state.records if r.attack_id is not None)
        if not state.allow_reuse:
            assert len(state.attacker_remaining) == 13 - spent
        assert state.round_no <= max(state.rounds_total, 1)
    assert len(state.records) == state.rounds_total
    judged = [r for r in state.records if r.defend_id is not None and r.attack_id is not None]
    for record in judged:
        verdict = state.matrix.lookup(record.attack_id, record.defend_id)
        assert record.winner is verdict.winner
        assert record.feedback == verdict.feedback
