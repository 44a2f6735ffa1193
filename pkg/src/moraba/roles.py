"""The two sides of a match, shared by both game modes."""

from __future__ import annotations

import enum


class Role(enum.Enum):
    ATTACKER = "attacker"
    DEFENDER = "defender"

    @property
    def index(self) -> int:
        return 0 if self is Role.ATTACKER else 1

    @property
    def opponent(self) -> "Role":
        return Role.DEFENDER if self is Role.ATTACKER else Role.ATTACKER

    def __str__(self) -> str:
        return self.value


def role_from_name(name: str) -> Role:
    try:
        return Role(name.lower())
    except ValueError:
        raise ValueError(f"unknown role {name!r}; expected 'attacker' or 'defender'") from None
