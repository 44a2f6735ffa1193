"""Two-mode Morabaraba package.

Classic mode is the full board game (placement, movement, mills,
captures); awareness mode is a round-based attack/defense quiz played
on the same board. The package also ships search and policy opponents,
match persistence, an HTTP/WebSocket service, and a CLI.
"""

from ._kernel import backend_name
from .awareness import (
    AwarenessState,
    FinalResult,
    MatchPhase,
    Outcome,
    RoundRecord,
    expire_timer,
    final_result,
    new_awareness_match,
    outcome_from_scores,
    submit_attack,
    submit_defense,
)
from .board import BoardTopology, point_from_name, point_name, standard_topology
from .catalog import (
    MatchupMatrix,
    Token,
    TokenCatalog,
    Verdict,
    default_catalog,
    default_matrix,
    judge_verdict,
    load_matrix,
    save_matrix,
    validate_matrix,
)
from .classic import (
    ClassicMatch,
    ClassicState,
    Move,
    MoveKind,
    Phase,
    apply_move,
    legal_moves,
    move_from_text,
    move_text,
    new_classic_game,
    terminal,
)
from .errors import (
    IllegalMoveError,
    MorabaError,
    NotFoundError,
    OutOfTurnError,
    TimerDisabledError,
    TokenExhaustedError,
)
from .roles import Role

__version__ = "0.1.0"

__all__ = [
    "AwarenessState",
    "BoardTopology",
    "ClassicMatch",
    "ClassicState",
    "FinalResult",
    "IllegalMoveError",
    "MatchPhase",
    "MatchupMatrix",
    "MorabaError",
    "Move",
    "MoveKind",
    "NotFoundError",
    "Outcome",
    "OutOfTurnError",
    "Phase",
    "Role",
    "RoundRecord",
    "TimerDisabledError",
    "Token",
    "TokenCatalog",
    "TokenExhaustedError",
    "Verdict",
    "apply_move",
    "backend_name",
    "default_catalog",
    "default_matrix",
    "expire_timer",
    "final_result",
    "judge_verdict",
    "legal_moves",
    "load_matrix",
    "move_from_text",
    "move_text",
    "new_awareness_match",
    "new_classic_game",
    "outcome_from_scores",
    "point_from_name",
    "point_name",
    "save_matrix",
    "standard_topology",
    "submit_attack",
    "submit_defense",
    "terminal",
    "validate_matrix",
]
