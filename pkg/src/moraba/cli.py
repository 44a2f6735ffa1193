"""Command-line front end.

Subcommands: ``simulate`` (bot-vs-bot batches with a summary and an
optional per-round dataset), ``validate-matrix``, ``replay`` (awareness
transcripts), ``play`` (interactive terminal match), ``serve`` (HTTP
API), ``dump-board``, and ``export-dataset`` (score store to CSV or
JSON lines).
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from importlib import resources
from pathlib import Path
from typing import Optional

from . import awareness as aw
from .ai import make_policy
from .board import POINT_COUNT, point_coords, point_from_name, point_name, standard_topology
from .catalog import MatrixFormatError, load_matrix, parse_matrix, validate_matrix
from .classic import ClassicMatch, move_from_text, move_text, new_classic_game
from .errors import MorabaError
from .persistence import GameLogRecord, ScoreStore, export_dataset
from .roles import Role


def _positive_int(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _matrix_path_default() -> Path:
    return Path(str(resources.files("moraba").joinpath("assets/default_matrix.tsv")))


def _load_matrix_arg(path: Optional[str]):
    """None keeps the built-in matrix; a path loads and validates it."""
    if path is None:
        return None
    return load_matrix(path)


def _add_awareness_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--rounds", type=int, default=aw.DEFAULT_ROUNDS, help="rounds per match")
    parser.add_argument("--matrix", help="matchup matrix TSV (default: built-in)")
    parser.add_argument("--allow-reuse", action="store_true", help="tokens may be played repeatedly")
    parser.add_argument("--blind", action="store_true", help="hide the attack from the defender")
    parser.add_argument("--timer-seconds", type=float, default=None, help="move timer")


def _run_awareness(state, attacker, defender):
    while not state.over:
        token, point = attacker.choose_attack(state)
        state = aw.submit_attack(state, token, point)
        state, _ = aw.submit_defense(state, defender.choose_defense(state))
    return state


def _sim_rows(game: int, state, label: str) -> list[GameLogRecord]:
    return [
        GameLogRecord(
            match_id=f"sim-{game}",
            nickname=label,
            round_index=r.index,
            attack_id=r.attack_id,
            point=point_name(r.point) if r.point is not None else None,
            defend_id=r.defend_id,
            winner=r.winner.value,
            feedback=r.feedback,
            attack_elapsed=r.attack_elapsed,
            defend_elapsed=r.defend_elapsed,
        )
        for r in state.records
    ]


def _check_policy(spec: str, needed: str) -> None:
    if not hasattr(make_policy(spec), needed):
        raise ValueError(f"policy {spec!r} cannot play this seat")


def _cmd_simulate(args) -> int:
    rng = random.Random(args.seed)
    wins = {"attacker": 0, "defender": 0, "draw": 0}
    times: list[float] = []

    if args.mode == "awareness":
        _check_policy(args.attacker_policy, "choose_attack")
        _check_policy(args.defender_policy, "choose_defense")
        matrix = _load_matrix_arg(args.matrix)
        label = f"{args.attacker_policy} vs {args.defender_policy}"
        rows: list[GameLogRecord] = []
        score_sums = [0, 0]
        for game in range(args.games):
            attacker = make_policy(args.attacker_policy, seed=rng.randrange(2**32))
            defender = make_policy(args.defender_policy, seed=rng.randrange(2**32))
            started = time.perf_counter()
            state = aw.new_awareness_match(
                matrix=matrix,
                rounds_total=args.rounds,
                allow_reuse=args.allow_reuse,
                blind=args.blind,
                timer_seconds=args.timer_seconds,
            )
            state = _run_awareness(state, attacker, defender)
            times.append(time.perf_counter() - started)
            wins[aw.outcome_from_scores(*state.scores).value] += 1
            score_sums[0] += state.scores[0]
            score_sums[1] += state.scores[1]
            if args.out:
                rows.extend(_sim_rows(game, state, label))
        print(f"games {args.games}: attacker {wins['attacker']}, defender {wins['defender']}, draws {wins['draw']}")
        print(f"mean scores: attacker {score_sums[0] / args.games:.2f}, defender {score_sums[1] / args.games:.2f}")
        print(f"mean playtime: {sum(times) / args.games:.4f}s")
        if args.out:
            fmt = "jsonl" if args.out.endswith(".jsonl") else "csv"
            count = export_dataset(rows, args.out, fmt=fmt)
            print(f"wrote {count} rounds to {args.out}")
        return 0

    if args.out:
        print("--out applies to awareness simulations only", file=sys.stderr)
        return 2
    _check_policy(args.attacker_policy, "choose_move")
    _check_policy(args.defender_policy, "choose_move")
    topology = standard_topology(diagonals=args.diagonals)
    policies = {}
    plies_total = 0
    for game in range(args.games):
        policies[Role.ATTACKER] = make_policy(args.attacker_policy, seed=rng.randrange(2**32))
        policies[Role.DEFENDER] = make_policy(args.defender_policy, seed=rng.randrange(2**32))
        started = time.perf_counter()
        match = ClassicMatch(new_classic_game(topology))
        plies = 0
        while not match.over:
            if plies >= 10_000:
                raise RuntimeError("game failed to terminate")
            match.play(policies[match.state.to_move].choose_move(match.state))
            plies += 1
        times.append(time.perf_counter() - started)
        plies_total += plies
        wins["draw" if match.result == "draw" else match.result.value] += 1
    print(f"games {args.games}: attacker {wins['attacker']}, defender {wins['defender']}, draws {wins['draw']}")
    print(f"mean plies: {plies_total / args.games:.1f}")
    print(f"mean playtime: {sum(times) / args.games:.4f}s")
    return 0


def _cmd_validate_matrix(args) -> int:
    path = args.matrix or _matrix_path_default()
    try:
        matrix = parse_matrix(path)
    except (MatrixFormatError, OSError) as err:
        print(f"invalid matrix: {err}", file=sys.stderr)
        return 1
    report = validate_matrix(matrix)
    print(report.summary())
    return 0 if report.ok else 1


def _cmd_replay(args) -> int:
    try:
        matrix = _load_matrix_arg(args.matrix)
        transcript = aw.parse_transcript(Path(args.transcript))
        state = aw.replay_transcript(transcript, matrix=matrix)
    except (ValueError, OSError) as err:
        print(f"replay failed: {err}", file=sys.stderr)
        return 1
    for record in state.records:
        attack = record.attack_id or "-"
        point = point_name(record.point) if record.point is not None else "-"
        defend = record.defend_id or "-"
        print(f"round {record.index}: {attack} {point} vs {defend} -> {record.winner.value} | {record.feedback}")
    attacker, defender = state.scores
    print(f"totals: attacker {attacker}, defender {defender}")
    if state.over:
        print(f"outcome: {aw.final_result(state).outcome.value}")
    else:
        print(f"unfinished: {len(state.records)} of {state.rounds_total} rounds played")
    return 0


def _board_text(diagonals: bool) -> str:
    topology = standard_topology(diagonals=diagonals)
    grid = [["  "] * 7 for _ in range(7)]
    for point in range(POINT_COUNT):
        x, y = point_coords(point)
        grid[y][x] = point_name(point)
    lines = ["  ".join(grid[y]).rstrip() for y in range(6, -1, -1)]
    lines.append("")
    lines.append(f"{POINT_COUNT} points, {len(topology.mills)} mill lines")
    return "\n".join(lines)


def _cmd_dump_board(args) -> int:
    print(_board_text(args.diagonals))
    return 0


def _cmd_export_dataset(args) -> int:
    store = ScoreStore(args.data_dir)
    rounds = store.list_rounds(match_id=args.match_id)
    fmt = args.format or ("jsonl" if args.out.endswith(".jsonl") else "csv")
    count = export_dataset(rounds, args.out, fmt=fmt)
    print(f"wrote {count} rounds to {args.out}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    host, _, port = args.listen.partition(":")
    app = create_app(store=ScoreStore(args.data_dir))
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000))
    return 0


def _prompt(label: str) -> Optional[str]:
    print(label, end="", flush=True)
    line = sys.stdin.readline()
    if not line:
        print()
        return None
    return line.strip()


def _cmd_play(args) -> int:
    seed = args.seed if args.seed is not None else random.randrange(2**32)
    bot = make_policy(args.opponent, seed=seed)
    role = Role(args.role)
    if args.mode == "classic":
        _check_policy(args.opponent, "choose_move")
        return _play_classic(role, bot, args)
    _check_policy(args.opponent, "choose_defense" if role is Role.ATTACKER else "choose_attack")
    return _play_awareness(role, bot, args)


def _play_awareness(role: Role, bot, args) -> int:
    matrix = _load_matrix_arg(args.matrix)
    state = aw.new_awareness_match(
        matrix=matrix,
        rounds_total=args.rounds,
        allow_reuse=args.allow_reuse,
        blind=args.blind,
        timer_seconds=args.timer_seconds,
    )
    print(f"you play {role.value}; {state.rounds_total} rounds")
    while not state.over:
        if state.phase is aw.MatchPhase.AWAIT_ATTACK:
            if role is Role.ATTACKER:
                print(f"round {state.round_no} | tokens: {' '.join(state.attacker_remaining)}")
                line = _prompt("attack (TOKEN POINT)> ")
                if line is None:
                    return 0
                parts = line.split()
                if len(parts) != 2:
                    print("expected a token and a point, e.g. 'A1 a7'")
                    continue
                try:
                    state = aw.submit_attack(state, parts[0].upper(), point_from_name(parts[1]))
                except (ValueError, MorabaError) as err:
                    print(f"rejected: {err}")
            else:
                token, point = bot.choose_attack(state)
                state = aw.submit_attack(state, token, point)
                shown = "?" if state.blind else token
                print(f"round {state.round_no}: opponent attacks {shown} at {point_name(point)}")
        else:
            if role is Role.DEFENDER:
                attack = state.committed_attack
                shown = "?" if state.blind else attack.token_id
                print(f"incoming {shown} at {point_name(attack.point)} | tokens: {' '.join(state.defender_remaining)}")
                line = _prompt("defend (TOKEN)> ")
                if line is None:
                    return 0
                try:
                    state, record = aw.submit_defense(state, line.upper())
                except (ValueError, MorabaError) as err:
                    print(f"rejected: {err}")
                    continue
            else:
                state, record = aw.submit_defense(state, bot.choose_defense(state))
            print(f"  {record.winner.value} wins the round: {record.feedback}")
            attacker, defender = state.scores
            print(f"  score attacker {attacker} : {defender} defender")
    result = aw.final_result(state)
    print(f"final: attacker {result.attacker_score}, defender {result.defender_score} -> {result.outcome.value}")
    if result.attacker_best_moves:
        print(f"best attacks: {', '.join(result.attacker_best_moves)}")
    if result.defender_best_moves:
        print(f"best defenses: {', '.join(result.defender_best_moves)}")
    return 0


def _play_classic(role: Role, bot, args) -> int:
    match = ClassicMatch(new_classic_game(standard_topology(diagonals=args.diagonals)))
    print(f"you play {role.value}")
    while not match.over:
        state = match.state
        if state.to_move is role:
            line = _prompt("move (P:a7 / S:a7-d7 / C:g1)> ")
            if line is None:
                return 0
            try:
                match.play(move_from_text(line))
            except (ValueError, MorabaError) as err:
                print(f"rejected: {err}")
        else:
            move = bot.choose_move(state)
            match.play(move)
            print(f"opponent: {move_text(move)}")
    if match.result == "draw":
        print("final: draw")
    else:
        print(f"final: {match.result.value} wins")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="moraba", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run bot-vs-bot matches and summarize")
    sim.add_argument("--mode", choices=("awareness", "classic"), default="awareness")
    sim.add_argument("--games", type=_positive_int, default=10)
    sim.add_argument("--attacker-policy", default="random")
    sim.add_argument("--defender-policy", default="random")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--diagonals", action="store_true", help="classic: play with diagonal lines")
    sim.add_argument("--out", help="awareness: write per-round rows (.csv or .jsonl)")
    _add_awareness_options(sim)
    sim.set_defaults(func=_cmd_simulate)

    check = sub.add_parser("validate-matrix", help="check a matchup matrix file")
    check.add_argument("--matrix", help="TSV path (default: the built-in matrix)")
    check.set_defaults(func=_cmd_validate_matrix)

    replay = sub.add_parser("replay", help="replay an awareness transcript")
    replay.add_argument("transcript")
    replay.add_argument("--matrix")
    replay.set_defaults(func=_cmd_replay)

    play = sub.add_parser("play", help="play against a bot in the terminal")
    play.add_argument("--mode", choices=("awareness", "classic"), default="awareness")
    play.add_argument("--role", choices=("attacker", "defender"), default="attacker")
    play.add_argument("--opponent", default="random", help="bot policy spec")
    play.add_argument("--seed", type=int, default=None)
    play.add_argument("--diagonals", action="store_true")
    _add_awareness_options(play)
    play.set_defaults(func=_cmd_play)

    serve = sub.add_parser("serve", help="serve the HTTP API")
    serve.add_argument("--listen", default="127.0.0.1:8000")
    serve.add_argument("--data-dir", default="moraba-data")
    serve.set_defaults(func=_cmd_serve)

    dump = sub.add_parser("dump-board", help="print the board layout")
    dump.add_argument("--diagonals", action="store_true")
    dump.set_defaults(func=_cmd_dump_board)

    export = sub.add_parser("export-dataset", help="export stored rounds")
    export.add_argument("--data-dir", required=True)
    export.add_argument("--out", required=True)
    export.add_argument("--format", choices=("csv", "jsonl"))
    export.add_argument("--match-id")
    export.set_defaults(func=_cmd_export_dataset)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
