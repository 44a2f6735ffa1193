"""CLI tests driving moraba.cli.main directly."""

import io

import pytest

from moraba import awareness as aw
from moraba.catalog import default_matrix, matrix_to_text
from moraba.cli import main
from moraba.persistence import PlayerProfile, ScoreStore, parse_dataset


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_dump_board(capsys):
    code, out, _ = run(capsys, "dump-board")
    assert code == 0
    assert "a7" in out and "g1" in out
    assert "d4" not in out  # the center stays empty
    assert "16 mill lines" in out


def test_dump_board_diagonals(capsys):
    code, out, _ = run(capsys, "dump-board", "--diagonals")
    assert code == 0
    assert "20 mill lines" in out


def test_validate_matrix_builtin(capsys):
    code, out, _ = run(capsys, "validate-matrix")
    assert code == 0
    assert out.startswith("169/169 pairs")


def test_validate_matrix_names_missing_pairs(tmp_path, capsys):
    lines = matrix_to_text(default_matrix()).splitlines()
    pruned = [line for line in lines if not line.startswith("A3\tD9\t")]
    path = tmp_path / "pruned.tsv"
    path.write_text("\n".join(pruned) + "\n", encoding="utf-8")
    code, out, _ = run(capsys, "validate-matrix", "--matrix", str(path))
    assert code == 1
    assert "168/169 pairs" in out
    assert "missing pair (A3, D9)" in out


def test_validate_matrix_rejects_duplicates(tmp_path, capsys):
    text = matrix_to_text(default_matrix())
    path = tmp_path / "dup.tsv"
    path.write_text(text + "A1\tD1\tdefender\tagain\n", encoding="utf-8")
    code, _, err = run(capsys, "validate-matrix", "--matrix", str(path))
    assert code == 1
    assert "invalid matrix" in err
    assert "line 171" in err


def test_simulate_forced_outcome(capsys):
    code, out, _ = run(capsys, "simulate", "--games", "3", "--defender-policy", "greedy", "--seed", "1")
    assert code == 0
    assert "games 3: attacker 0, defender 3, draws 0" in out
    assert "mean scores: attacker 4.00, defender 9.00" in out
    assert "mean playtime" in out


def test_simulate_is_deterministic(capsys):
    _, first, _ = run(capsys, "simulate", "--games", "4", "--seed", "9")
    _, second, _ = run(capsys, "simulate", "--games", "4", "--seed", "9")
    # Timing lines differ run to run; the played games must not.
    strip = lambda text: [l for l in text.splitlines() if not l.startswith("mean playtime")]
    assert strip(first) == strip(second)


def test_simulate_writes_round_dataset(tmp_path, capsys):
    out_path = tmp_path / "rounds.csv"
    code, out, _ = run(capsys, "simulate", "--games", "2", "--seed", "5", "--out", str(out_path))
    assert code == 0
    assert f"wrote 26 rounds to {out_path}" in out
    rows = parse_dataset(out_path)
    assert len(rows) == 26
    assert {r.match_id for r in rows} == {"sim-0", "sim-1"}


def test_simulate_rejects_zero_games(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--games", "0"])
    assert exc.value.code == 2


def test_simulate_classic(capsys):
    code, out, _ = run(capsys, "simulate", "--mode", "classic", "--games", "2", "--seed", "3")
    assert code == 0
    assert "games 2:" in out
    assert "mean plies" in out


def test_simulate_classic_rejects_out(tmp_path, capsys):
    code, _, err = run(
        capsys, "simulate", "--mode", "classic", "--games", "1", "--out", str(tmp_path / "x.csv")
    )
    assert code == 2
    assert "awareness" in err


def test_simulate_rejects_wrong_seat_policy(capsys):
    code, _, err = run(capsys, "simulate", "--games", "1", "--attacker-policy", "greedy")
    assert code == 1
    assert "error:" in err


def played_state(rounds=2):
    state = aw.new_awareness_match(rounds_total=rounds)
    plays = [("A1", 0, "D5"), ("A2", 1, "D7")][:rounds]
    for attack, point, defense in plays:
        state = aw.submit_attack(state, attack, point)
        state, _ = aw.submit_defense(state, defense)
    return state


def test_replay_transcript(tmp_path, capsys):
    path = tmp_path / "match.txt"
    path.write_text(aw.format_transcript(played_state()), encoding="utf-8")
    code, out, _ = run(capsys, "replay", str(path))
    assert code == 0
    assert "round 1: A1 a7 vs D5 -> defender | Never trust malicious emails" in out
    assert "round 2: A2 d7 vs D7 -> attacker" in out
    assert "totals: attacker 1, defender 1" in out
    assert "outcome: draw" in out


def test_replay_empty_transcript_is_a_draw(tmp_path, capsys):
    path = tmp_path / "empty.txt"
    path.write_text("moraba-transcript 1\n", encoding="utf-8")
    code, out, _ = run(capsys, "replay", str(path))
    assert code == 0
    assert "totals: attacker 0, defender 0" in out
    assert "outcome: draw" in out


def test_replay_round_trips_a_simulated_game(tmp_path, capsys):
    from moraba.ai import RandomPolicy

    attacker, defender = RandomPolicy(seed=11), RandomPolicy(seed=12)
    state = aw.new_awareness_match()
    while not state.over:
        token, point = attacker.choose_attack(state)
        state = aw.submit_attack(state, token, point)
        state, _ = aw.submit_defense(state, defender.choose_defense(state))
    path = tmp_path / "sim.txt"
    path.write_text(aw.format_transcript(state), encoding="utf-8")
    code, out, _ = run(capsys, "replay", str(path))
    assert code == 0
    attacker_score, defender_score = state.scores
    assert f"totals: attacker {attacker_score}, defender {defender_score}" in out


def test_simulate_expectimax_versus_greedy(capsys):
    code, out, _ = run(
        capsys,
        "simulate", "--games", "2", "--seed", "2",
        "--attacker-policy", "expectimax", "--defender-policy", "greedy",
    )
    assert code == 0
    assert "games 2: attacker 0, defender 2, draws 0" in out
    assert "mean scores: attacker 4.00, defender 9.00" in out


def test_replay_reports_bad_lines(tmp_path, capsys):
    path = tmp_path / "broken.txt"
    path.write_text("moraba-transcript 1\nrounds 2\nround A1 zz D5\n", encoding="utf-8")
    code, _, err = run(capsys, "replay", str(path))
    assert code == 1
    assert "replay failed" in err
    assert "line 3" in err


def test_export_dataset(tmp_path, capsys):
    store = ScoreStore(tmp_path / "data")
    store.record_result(PlayerProfile("Pat"), played_state(), match_id="m1", playtime_seconds=3.0)
    out_path = tmp_path / "rounds.jsonl"
    code, out, _ = run(
        capsys, "export-dataset", "--data-dir", str(tmp_path / "data"), "--out", str(out_path)
    )
    assert code == 0
    assert "wrote 2 rounds" in out
    assert len(parse_dataset(out_path)) == 2


def test_play_awareness_scripted(monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO("A1\nA1 a7\nA2 d7\n"))
    code, out, _ = run(
        capsys, "play", "--rounds", "2", "--opponent", "greedy", "--seed", "0"
    )
    assert code == 0
    assert "expected a token and a point" in out
    assert "Never trust malicious emails" not in out  # greedy answers A1 with D1
    assert "defender wins the round" in out
    assert "final: attacker 0, defender 2 -> defender" in out
    assert "best defenses:" in out


def test_play_awareness_quits_on_eof(monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO(""))
    code, out, _ = run(capsys, "play", "--opponent", "greedy")
    assert code == 0
    assert "you play attacker" in out


def test_play_classic_scripted(monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO("P:d4\nP:a7\n"))
    code, out, _ = run(capsys, "play", "--mode", "classic", "--opponent", "random:1")
    assert code == 0
    assert "rejected" in out  # d4 is not a point
    assert "opponent: P:" in out  # the bot answered the legal placement
