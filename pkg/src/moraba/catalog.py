"""Attack/defense token catalog, the judging matrix, and its file format.

Each side plays from a set of 13 themed tokens (A1..A13 attacks,
D1..D13 defenses). A round is judged by looking the (attack, defense)
pair up in a :class:`MatchupMatrix` that is total over the catalog:
every one of the 13x13 pairs maps to a winner and a feedback message.

The shipped default matrix marks a defense as winning whenever it is a
sound practice (D1-D5, D9, D10, D12, D13) and as losing for the four
risky behaviours (D6 Upload, D7 Trust, D8 Provide, D11 Social media);
eight well-known pairings carry hand-written feedback and the rest get
templated messages. Alternative matrices can be loaded from a simple
tab-separated file, one record per pair.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Iterator, Union

from .roles import Role

MATRIX_HEADER = "moraba-matrix 1"


@dataclass(frozen=True)
class Token:
    id: str
    role: Role
    label: str
    definition: str

    def __post_init__(self):
        prefix = "A" if self.role is Role.ATTACKER else "D"
        if not self.id.startswith(prefix) or not self.id[1:].isdigit():
            raise ValueError(f"token id {self.id!r} does not match role {self.role}")


def token_sort_key(token_id: str) -> tuple[str, int]:
    return (token_id[:1], int(token_id[1:]))


_ATTACKS = [
    ("A1", "Email", "Malicious e-mail"),
    ("A2", "Phone", "Malicious phone call"),
    ("A3", "Chat", "Malicious chat"),
    ("A4", "Attachment", "Malicious attachment"),
    ("A5", "Donate", "Malicious directory"),
    ("A6", "Password", "Malicious directory"),  # A5/A6 intentionally share a definition
    ("A7", "Connection", "Malicious network connection"),
    ("A8", "Access", "Malicious intrusion"),
    ("A9", "Data", "Malicious data"),
    ("A10", "Data loss", "Data loss process"),
    ("A11", "Click", "Malicious link"),
    ("A12", "Sensitive data", "Theft of data"),
    ("A13", "Message", "Malicious communication"),
]

_DEFENSES = [
    ("D1", "Denying", "Blocking/denying actions"),
    ("D2", "Network monitoring", "Network traffic analysis"),
    ("D3", "Avoid clicking", "Refuse to click"),
    ("D4", "Identification", "Verification process"),
    ("D5", "No trust", "Zero trust policy"),
    ("D6", "Upload", "Uploading process"),
    ("D7", "Trust", "The defender trusts"),
    ("D8", "Provide", "Providing information"),
    ("D9", "Confidential", "Confidentiality of data"),
    ("D10", "Report", "Reporting cyber incidents"),
    ("D11", "Social media", "Sharing data on social media"),
    ("D12", "Connection", "Secured network connection"),
    ("D13", "Backup", "Data recovery"),
]

# Defenses that defeat any attack in the default matrix; the other four
# (Upload, Trust, Provide, Social media) lose to any attack.
SAFE_DEFENSES = frozenset({"D1", "D2", "D3", "D4", "D5", "D9", "D10", "D12", "D13"})
RISKY_DEFENSES = frozenset({"D6", "D7", "D8", "D11"})

# Hand-written verdicts for the classic pairings; everything else in the
# default matrix gets a templated message.
_SPECIAL_VERDICTS = {
    ("A1", "D5"): (Role.DEFENDER, "Never trust malicious emails"),
    ("A11", "D1"): (Role.DEFENDER, "Keep denying malicious links"),
    ("A3", "D4"): (Role.DEFENDER, "Identification of malicious chats"),
    ("A2", "D7"): (Role.ATTACKER, "The defender trusted a malicious call"),
    ("A7", "D12"): (Role.DEFENDER, "Secured connection suggested"),
    ("A8", "D4"): (Role.DEFENDER, "Malicious access identified"),
    ("A10", "D6"): (Role.ATTACKER, "Data loss occurred"),
    ("A11", "D8"): (Role.ATTACKER, "Malicious link used"),
}


@dataclass(frozen=True)
class TokenCatalog:
    attack_tokens: tuple[Token, ...]
    defend_tokens: tuple[Token, ...]

    def __post_init__(self):
        ids = [t.id for t in self.attack_tokens + self.defend_tokens]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate token ids in catalog")

    @property
    def attack_ids(self) -> tuple[str, ...]:
        return tuple(t.id for t in self.attack_tokens)

    @property
    def defend_ids(self) -> tuple[str, ...]:
        return tuple(t.id for t in self.defend_tokens)

    def get(self, token_id: str) -> Token:
        for t in self.attack_tokens + self.defend_tokens:
            if t.id == token_id:
                return t
        raise ValueError(f"unknown token id {token_id!r}")


def default_catalog() -> TokenCatalog:
    return TokenCatalog(
        attack_tokens=tuple(Token(i, Role.ATTACKER, lbl, d) for i, lbl, d in _ATTACKS),
        defend_tokens=tuple(Token(i, Role.DEFENDER, lbl, d) for i, lbl, d in _DEFENSES),
    )


@dataclass(frozen=True)
class Verdict:
    winner: Role
    feedback: str

    def __post_init__(self):
        if not self.feedback:
            raise ValueError("verdict feedback must be nonempty")


class MatchupMatrix:
    """Total map from (attack token, defense token) to a :class:`Verdict`."""

    def __init__(self, entries: dict[tuple[str, str], Verdict]):
        self._entries = dict(entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, pair: tuple[str, str]) -> bool:
        return pair in self._entries

    def pairs(self) -> Iterator[tuple[str, str, Verdict]]:
        for (a, d), verdict in sorted(
            self._entries.items(), key=lambda kv: (token_sort_key(kv[0][0]), token_sort_key(kv[0][1]))
        ):
            yield a, d, verdict

    def lookup(self, attack_id: str, defend_id: str) -> Verdict:
        try:
            return self._entries[(attack_id, defend_id)]
        except KeyError:
            raise ValueError(f"no verdict for pair ({attack_id}, {defend_id})") from None


def judge_verdict(matrix: MatchupMatrix, attack_id: str, defend_id: str) -> Verdict:
    """Deterministic verdict for one round: winner plus feedback message."""
    return matrix.lookup(attack_id, defend_id)


def default_matrix(catalog: TokenCatalog | None = None) -> MatchupMatrix:
    catalog = catalog or default_catalog()
    entries: dict[tuple[str, str], Verdict] = {}
    for attack in catalog.attack_tokens:
        for defend in catalog.defend_tokens:
            special = _SPECIAL_VERDICTS.get((attack.id, defend.id))
            if special:
                winner, message = special
            elif defend.id in RISKY_DEFENSES:
                winner = Role.ATTACKER
                message = f"{attack.label} succeeded: {attack.definition}"
            else:
                winner = Role.DEFENDER
                message = f"Effective defense: {defend.definition} against {attack.definition}"
            entries[(attack.id, defend.id)] = Verdict(winner, message)
    return MatchupMatrix(entries)


@dataclass
class MatrixReport:
    """Completeness check of a matrix against a catalog."""

    known_pairs: int
    expected: int
    missing: list[tuple[str, str]] = field(default_factory=list)
    unknown_ids: list[str] = field(default_factory=list)
    empty_messages: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.missing or self.unknown_ids or self.empty_messages)

    def summary(self) -> str:
        lines = [f"{self.known_pairs}/{self.expected} pairs"]
        for a, d in self.missing:
            lines.append(f"missing pair ({a}, {d})")
        for token_id in self.unknown_ids:
            lines.append(f"unknown token id {token_id}")
        for a, d in self.empty_messages:
            lines.append(f"empty message for ({a}, {d})")
        return "\n".join(lines)


def validate_matrix(matrix: MatchupMatrix, catalog: TokenCatalog | None = None) -> MatrixReport:
    catalog = catalog or default_catalog()
    attack_ids = set(catalog.attack_ids)
    defend_ids = set(catalog.defend_ids)
    report = MatrixReport(known_pairs=0, expected=len(attack_ids) * len(defend_ids))
    seen: set[tuple[str, str]] = set()
    for a, d, verdict in matrix.pairs():
        if a not in attack_ids and a not in report.unknown_ids:
            report.unknown_ids.append(a)
        if d not in defend_ids and d not in report.unknown_ids:
            report.unknown_ids.append(d)
        if (a in attack_ids) and (d in defend_ids):
            seen.add((a, d))
            report.known_pairs += 1
            if not verdict.feedback.strip():
                report.empty_messages.append((a, d))
    for a in catalog.attack_ids:
        for d in catalog.defend_ids:
            if (a, d) not in seen:
                report.missing.append((a, d))
    return report


class MatrixFormatError(ValueError):
    pass


Source = Union[str, Path, IO[str]]


def _open_text(source: Source) -> tuple[IO[str], bool]:
    if hasattr(source, "read"):
        return source, False  # type: ignore[return-value]
    return open(source, "r", encoding="utf-8"), True


def parse_matrix(source: Source) -> MatchupMatrix:
    """Parse a matrix file without checking completeness."""
    stream, owned = _open_text(source)
    try:
        lines = stream.read().splitlines()
    finally:
        if owned:
            stream.close()
    if not lines or lines[0].strip() != MATRIX_HEADER:
        raise MatrixFormatError(f"line 1: expected header {MATRIX_HEADER!r}")
    entries: dict[tuple[str, str], Verdict] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise MatrixFormatError(f"line {lineno}: expected 4 tab-separated fields, got {len(parts)}")
        attack_id, defend_id, winner_name = (p.strip() for p in parts[:3])
        message = parts[3]
        if winner_name not in ("attacker", "defender"):
            raise MatrixFormatError(f"line {lineno}: winner must be 'attacker' or 'defender', got {winner_name!r}")
        if (attack_id, defend_id) in entries:
            raise MatrixFormatError(f"line {lineno}: duplicate pair ({attack_id}, {defend_id})")
        if not message:
            raise MatrixFormatError(f"line {lineno}: empty message for ({attack_id}, {defend_id})")
        entries[(attack_id, defend_id)] = Verdict(Role(winner_name), message)
    return MatchupMatrix(entries)


def load_matrix(source: Source, catalog: TokenCatalog | None = None) -> MatchupMatrix:
    """Parse and validate a matrix file; incomplete matrices are rejected."""
    matrix = parse_matrix(source)
    report = validate_matrix(matrix, catalog)
    if not report.ok:
        raise MatrixFormatError(report.summary())
    return matrix


def save_matrix(matrix: MatchupMatrix, destination: Union[str, Path, IO[str]]) -> None:
    if hasattr(destination, "write"):
        _write_matrix(matrix, destination)  # type: ignore[arg-type]
    else:
        with open(destination, "w", encoding="utf-8") as stream:
            _write_matrix(matrix, stream)


def _write_matrix(matrix: MatchupMatrix, stream: IO[str]) -> None:
    stream.write(MATRIX_HEADER + "\n")
    for a, d, verdict in matrix.pairs():
        stream.write(f"{a}\t{d}\t{verdict.winner.value}\t{verdict.feedback}\n")


def matrix_to_text(matrix: MatchupMatrix) -> str:
    out = io.StringIO()
    _write_matrix(matrix, out)
    return out.getvalue()
