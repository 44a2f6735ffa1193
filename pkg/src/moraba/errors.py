"""Game-flow errors with stable machine-readable codes.

The service layer maps these onto wire error payloads, so the `code`
strings are part of the protocol and must stay stable.
"""

from __future__ import annotations


class MorabaError(Exception):
    code = "error"


class IllegalMoveError(MorabaError):
    code = "illegal_move"


class OutOfTurnError(MorabaError):
    code = "out_of_turn"


class TokenExhaustedError(MorabaError):
    code = "token_exhausted"


class TimerDisabledError(MorabaError):
    code = "timer_disabled"


class NotFoundError(MorabaError):
    code = "not_found"
