"""Computer opponents for both modes.

Classic mode uses depth-limited alpha-beta over the fast kernel. Depth
counts turn passes, so completing a mill and taking the earned capture
belong to the same ply. Ties between equally good moves always go to
the move whose text notation sorts first, which makes searches
reproducible across backends and runs.

Awareness mode ships three deterministic-or-seeded policies: uniform
random, a greedy defender (play a winning token if one remains), and an
expectimax attacker (maximize expected reward against a uniformly
random defense from the opponent's remaining tokens).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from ._kernel import Core
from .awareness import AwarenessState
from .board import POINT_COUNT, BoardTopology, name_order
from .classic import ClassicState, Move, MoveKind, legal_moves, terminal
from .roles import Role

DEFAULT_WEIGHTS = (10.0, 1.0, 3.0)  # material, mobility, open two-in-line
MAX_SEARCH_DEPTH = 64


@dataclass(frozen=True, slots=True)
class SearchConfig:
    max_depth: int = 3
    weights: tuple[float, float, float] = DEFAULT_WEIGHTS

    def __post_init__(self):
        if not 1 <= self.max_depth <= MAX_SEARCH_DEPTH:
            raise ValueError(f"max_depth must be in 1..{MAX_SEARCH_DEPTH}")


@lru_cache(maxsize=4)
def _tables(topology: BoardTopology):
    n = topology.point_count
    order = tuple(name_order(p) for p in range(n))
    point_of_order = {order[p]: p for p in range(n)}
    return n, topology.adjacency, topology.mills, order, point_of_order


def make_core(topology: BoardTopology) -> Core:
    n, adjacency, mills, order, _ = _tables(topology)
    return Core(n, adjacency, mills, order)


def load_state(core: Core, state: ClassicState) -> None:
    board = [0 if piece is None else piece.index + 1 for piece in state.occupancy]
    core.set_state(board, state.hands, state.captured, state.to_move.index, state.pending_capture)


def kernel_move(move: Move) -> int:
    dest = 0 if move.dest is None else name_order(move.dest)
    return move.kind.value * 4096 + name_order(move.point) * 64 + dest


def move_from_kernel(topology: BoardTopology, encoded: int) -> Move:
    _, _, _, _, point_of_order = _tables(topology)
    kind = MoveKind(encoded >> 12)
    point = point_of_order[(encoded >> 6) & 63]
    if kind is MoveKind.SLIDE:
        return Move.slide(point, point_of_order[encoded & 63])
    return Move(kind, point)


def search_value(state: ClassicState, config: Optional[SearchConfig] = None) -> tuple[float, Move]:
    """Search value (from the mover's perspective) and best move."""
    config = config or SearchConfig()
    if terminal(state) is not None:
        raise ValueError("cannot search a finished game")
    core = make_core(state.topology)
    load_state(core, state)
    w1, w2, w3 = config.weights
    value, encoded = core.search(config.max_depth, w1, w2, w3)
    return value, move_from_kernel(state.topology, encoded)


def minimax_move(state: ClassicState, config: Optional[SearchConfig] = None) -> Move:
    return search_value(state, config)[1]


def _free_points(state: AwarenessState) -> list[int]:
    claimed = set(state.claimed_points)
    return [p for p in range(POINT_COUNT) if p not in claimed]


def greedy_defense(state: AwarenessState) -> str:
    """Lowest-numbered remaining token that wins the round, if any wins;
    otherwise the lowest-numbered remaining token."""
    attack = state.committed_attack
    if attack is not None:
        for token_id in state.defender_remaining:
            if state.matrix.lookup(attack.token_id, token_id).winner is Role.DEFENDER:
                return token_id
    return state.defender_remaining[0]


def expectimax_attack(state: AwarenessState) -> str:
    """Remaining attack with the best expected reward against a uniform
    random remaining defense; ties go to the lowest-numbered token."""
    defenses = state.defender_remaining
    best_id = None
    best_wins = -1
    for token_id in state.attacker_remaining:
        wins = sum(
            1 for d in defenses if state.matrix.lookup(token_id, d).winner is Role.ATTACKER
        )
        if wins > best_wins:
            best_wins = wins
            best_id = token_id
    return best_id


class RandomPolicy:
    """Uniform random play for either mode; seeded, so reproducible."""

    def __init__(self, seed: Optional[int] = None):
        self.rng = random.Random(seed)

    def choose_move(self, state: ClassicState) -> Move:
        return self.rng.choice(legal_moves(state))

    def choose_attack(self, state: AwarenessState) -> tuple[str, int]:
        token = self.rng.choice(state.attacker_remaining)
        point = self.rng.choice(_free_points(state))
        return token, point

    def choose_defense(self, state: AwarenessState) -> str:
        return self.rng.choice(state.defender_remaining)


class MinimaxPolicy:
    """Classic-mode searcher."""

    def __init__(self, config: Optional[SearchConfig] = None):
        self.config = config or SearchConfig()

    def choose_move(self, state: ClassicState) -> Move:
        return minimax_move(state, self.config)


class GreedyDefenderPolicy:
    def choose_defense(self, state: AwarenessState) -> str:
        return greedy_defense(state)


class ExpectimaxAttackerPolicy:
    """Plays the best expected attack onto the lowest free point."""

    def choose_attack(self, state: AwarenessState) -> tuple[str, int]:
        return expectimax_attack(state), _free_points(state)[0]


def make_policy(spec: str, seed: Optional[int] = None):
    """Build a policy from its CLI name: ``random[:seed]``, ``greedy``,
    ``expectimax``, or ``minimax[:depth]``."""
    name, _, arg = spec.partition(":")
    if name == "random":
        if arg:
            seed = int(arg)
        return RandomPolicy(seed)
    if name == "greedy":
        return GreedyDefenderPolicy()
    if name == "expectimax":
        return ExpectimaxAttackerPolicy()
    if name == "minimax":
        config = SearchConfig(max_depth=int(arg)) if arg else SearchConfig()
        return MinimaxPolicy(config)
    raise ValueError(f"unknown policy {spec!r}")
