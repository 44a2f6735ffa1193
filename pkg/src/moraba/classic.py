"""Classic Morabaraba: placement, movement, mills, captures, terminal rules.

States are immutable values; :func:`apply_move` returns a new state, so
any number of lines of play can be explored from one position (the AI
search relies on this). Each side enters twelve pieces one per turn,
then slides them along board lines. Completing a mill (three own pieces
on one line) grants exactly one capture before the turn passes. A side
loses when reduced below three pieces or when it cannot move.

Draws (threefold repetition, or 100 movement plies without a capture)
are not a property of a single state; :class:`ClassicMatch` tracks them
over the course of a game.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field, replace
from typing import Iterator, Optional

from .board import BoardTopology, name_order, point_from_name, point_name, standard_topology
from .errors import IllegalMoveError
from .roles import Role

PIECES_PER_SIDE = 12
FREE_CAPTURE_AT = 3  # at three pieces left, mill protection lapses
NO_CAPTURE_DRAW_PLIES = 100
REPETITION_DRAW_COUNT = 3


class Phase(enum.Enum):
    PLACEMENT = "placement"
    MOVEMENT = "movement"


class MoveKind(enum.Enum):
    # Rank order mirrors notation prefixes: "C:" < "P:" < "S:".
    CAPTURE = 0
    PLACE = 1
    SLIDE = 2


@dataclass(frozen=True, slots=True)
class Move:
    kind: MoveKind
    point: int
    dest: Optional[int] = None

    @staticmethod
    def place(point: int) -> "Move":
        return Move(MoveKind.PLACE, point)

    @staticmethod
    def slide(src: int, dst: int) -> "Move":
        return Move(MoveKind.SLIDE, src, dst)

    @staticmethod
    def capture(point: int) -> "Move":
        return Move(MoveKind.CAPTURE, point)


def move_text(move: Move) -> str:
    """Text notation: ``P:a7``, ``S:a7-d7``, ``C:g1``."""
    if move.kind is MoveKind.PLACE:
        return f"P:{point_name(move.point)}"
    if move.kind is MoveKind.SLIDE:
        return f"S:{point_name(move.point)}-{point_name(move.dest)}"
    return f"C:{point_name(move.point)}"


def move_from_text(text: str) -> Move:
    head, sep, rest = text.strip().partition(":")
    if not sep or head not in ("P", "S", "C"):
        raise ValueError(f"bad move notation {text!r}")
    if head == "S":
        src, sep, dst = rest.partition("-")
        if not sep:
            raise ValueError(f"bad slide notation {text!r}")
        return Move.slide(point_from_name(src), point_from_name(dst))
    point = point_from_name(rest)
    return Move.place(point) if head == "P" else Move.capture(point)


def move_sort_key(move: Move) -> tuple[int, int, int]:
    """Orders moves the way their notation strings sort."""
    return (move.kind.value, name_order(move.point), 0 if move.dest is None else name_order(move.dest))


@dataclass(frozen=True, slots=True)
class ClassicState:
    """Full game state. ``captured`` counts pieces each role has lost."""

    topology: BoardTopology
    occupancy: tuple[Optional[Role], ...]
    hands: tuple[int, int]
    captured: tuple[int, int]
    to_move: Role
    pending_capture: bool
    history: tuple[Move, ...] = field(default=(), repr=False)

    @property
    def phase(self) -> Phase:
        return Phase.PLACEMENT if self.hands[0] > 0 or self.hands[1] > 0 else Phase.MOVEMENT

    def on_board(self, role: Role) -> int:
        return sum(1 for piece in self.occupancy if piece is role)

    def alive(self, role: Role) -> int:
        return self.hands[role.index] + self.on_board(role)


def new_classic_game(topology: Optional[BoardTopology] = None, first: Role = Role.ATTACKER) -> ClassicState:
    topology = topology or standard_topology()
    return ClassicState(
        topology=topology,
        occupancy=(None,) * topology.point_count,
        hands=(PIECES_PER_SIDE, PIECES_PER_SIDE),
        captured=(0, 0),
        to_move=first,
        pending_capture=False,
    )


def _points_in_mill(state: ClassicState, role: Role) -> set[int]:
    occ = state.occupancy
    inside: set[int] = set()
    for a, b, c in state.topology.mills:
        if occ[a] is role and occ[b] is role and occ[c] is role:
            inside.update((a, b, c))
    return inside


def capture_targets(state: ClassicState) -> list[int]:
    """Opponent pieces the mover may capture after completing a mill.

    Pieces inside a mill are protected while the opponent has both
    unprotected pieces and more than three pieces left; at three pieces
    everything is capturable.
    """
    opponent = state.to_move.opponent
    occ = state.occupancy
    on_board = [p for p in range(state.topology.point_count) if occ[p] is opponent]
    if state.alive(opponent) <= FREE_CAPTURE_AT:
        return on_board
    protected = _points_in_mill(state, opponent)
    free = [p for p in on_board if p not in protected]
    return free if free else on_board


def legal_moves(state: ClassicState) -> list[Move]:
    """Moves available to ``state.to_move``; empty means it is immobilized."""
    occ = state.occupancy
    mover = state.to_move
    if state.pending_capture:
        moves = [Move.capture(p) for p in capture_targets(state)]
    elif state.hands[mover.index] > 0:
        moves = [Move.place(p) for p in range(state.topology.point_count) if occ[p] is None]
    else:
        moves = [
            Move.slide(p, q)
            for p in range(state.topology.point_count)
            if occ[p] is mover
            for q in state.topology.adjacency[p]
            if occ[q] is None
        ]
    moves.sort(key=move_sort_key)
    return moves


def _completes_mill(state: ClassicState, occupancy: tuple[Optional[Role], ...], point: int) -> bool:
    mills = state.topology.mills
    role = state.to_move
    for i in state.topology.mills_at[point]:
        a, b, c = mills[i]
        if occupancy[a] is role and occupancy[b] is role and occupancy[c] is role:
            return True
    return False


def apply_move(state: ClassicState, move: Move) -> ClassicState:
    """Apply a legal move, returning the successor state.

    Illegal moves raise :class:`IllegalMoveError` and leave the state
    untouched. Completing a mill keeps the turn with the mover and sets
    ``pending_capture``; the capture itself then passes the turn.
    """
    if move not in legal_moves(state):
        raise IllegalMoveError(f"illegal move {move_text(move)}")
    return apply_legal(state, move)


def apply_legal(state: ClassicState, move: Move) -> ClassicState:
    """Like :func:`apply_move` but trusts ``move in legal_moves(state)``."""
    mover = state.to_move
    opponent = mover.opponent
    occ = list(state.occupancy)
    hands = state.hands
    captured = state.captured

    if move.kind is MoveKind.CAPTURE:
        occ[move.point] = None
        j = opponent.index
        captured = (captured[0] + 1, captured[1]) if j == 0 else (captured[0], captured[1] + 1)
        return replace(
            state,
            occupancy=tuple(occ),
            captured=captured,
            to_move=opponent,
            pending_capture=False,
            history=state.history + (move,),
        )

    if move.kind is MoveKind.PLACE:
        occ[move.point] = mover
        i = mover.index
        hands = (hands[0] - 1, hands[1]) if i == 0 else (hands[0], hands[1] - 1)
        landed = move.point
    else:
        occ[move.point] = None
        occ[move.dest] = mover
        landed = move.dest

    occupancy = tuple(occ)
    # A completed mill earns a capture, provided there is anything to take.
    milled = _completes_mill(state, occupancy, landed) and any(piece is opponent for piece in occupancy)
    return replace(
        state,
        occupancy=occupancy,
        hands=hands,
        to_move=mover if milled else opponent,
        pending_capture=milled,
        history=state.history + (move,),
    )


def terminal(state: ClassicState) -> Optional[Role]:
    """Winner if the game is over, else None.

    A side loses when reduced below three pieces, or when it is to move
    in the movement phase with no legal move.
    """
    for role in Role:
        if state.alive(role) < FREE_CAPTURE_AT:
            return role.opponent
    if state.phase is Phase.MOVEMENT and not legal_moves(state):
        return state.to_move.opponent
    return None


def repetition_key(state: ClassicState) -> tuple:
    return (state.occupancy, state.to_move, state.phase)


class ClassicMatch:
    """Drives one game, adding the draw rules on top of the pure engine.

    ``result`` is None while the game runs, a :class:`Role` for a win,
    or the string ``"draw"`` on threefold repetition of
    (occupancy, side to move, phase) or 100 movement plies without a
    capture.
    """

    def __init__(self, state: Optional[ClassicState] = None):
        self.state = state or new_classic_game()
        self._seen: dict[tuple, int] = {repetition_key(self.state): 1}
        self._plies_since_capture = 0
        self.result: Optional[Role | str] = terminal(self.state)

    @property
    def over(self) -> bool:
        return self.result is not None

    def play(self, move: Move) -> ClassicState:
        if self.over:
            raise IllegalMoveError("game is over")
        self.state = apply_move(self.state, move)

        if move.kind is MoveKind.CAPTURE:
            self._plies_since_capture = 0
        elif self.state.phase is Phase.MOVEMENT:
            self._plies_since_capture += 1

        key = repetition_key(self.state)
        count = self._seen.get(key, 0) + 1
        self._seen[key] = count

        winner = terminal(self.state)
        if winner is not None:
            self.result = winner
        elif count >= REPETITION_DRAW_COUNT or self._plies_since_capture >= NO_CAPTURE_DRAW_PLIES:
            self.result = "draw"
        return self.state


def random_playout(
    rng: random.Random,
    state: Optional[ClassicState] = None,
    max_plies: int = 1000,
) -> tuple[ClassicMatch, int]:
    """Play uniformly random legal moves until the match ends.

    Returns the finished match and the number of plies played. Raises
    if the game is still open after ``max_plies``.
    """
    match = ClassicMatch(state)
    plies = 0
    while not match.over:
        if plies >= max_plies:
            raise RuntimeError(f"playout exceeded {max_plies} plies")
        moves = legal_moves(match.state)
        match.play(rng.choice(moves))
        plies += 1
    return match, plies


def random_positions(seed: int, count: int, max_random_plies: int = 60) -> Iterator[ClassicState]:
    """Non-terminal positions reached by short random playouts (for tests)."""
    rng = random.Random(seed)
    produced = 0
    while produced < count:
        state = new_classic_game()
        for _ in range(rng.randrange(max_random_plies + 1)):
            if terminal(state) is not None:
                break
            moves = legal_moves(state)
            state = apply_legal(state, rng.choice(moves))
        if terminal(state) is None:
            produced += 1
            yield state
