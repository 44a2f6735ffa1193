"""Player profiles, the scoreboard, and research dataset export.

The store is a small append-only journal (one JSON object per line)
plus an optional snapshot. Every mutation is appended and fsynced
before it is acknowledged, snapshots are written to a temp file and
renamed into place, and a torn trailing line (a crash mid-append) is
ignored on load. Entry winners are never stored; they are derived from
the scores so the scoreboard cannot disagree with itself.

Per-round records double as the research dataset and can be exported
as CSV or JSON lines; both formats parse back losslessly.
"""

from __future__ import annotations

import csv
import json
import os
import threading
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Optional, Union

from .awareness import AwarenessState, Outcome, outcome_from_scores
from .board import point_name
from .errors import NotFoundError

MAX_NICKNAME = 32

JOURNAL_NAME = "journal.jsonl"
SNAPSHOT_NAME = "snapshot.json"


@dataclass(frozen=True, slots=True)
class PlayerProfile:
    """Who is playing; only the nickname is required."""

    nickname: str
    age: Optional[int] = None
    gender: Optional[str] = None

    def __post_init__(self):
        if not self.nickname or not self.nickname.strip():
            raise ValueError("nickname must be nonempty")
        if len(self.nickname) > MAX_NICKNAME:
            raise ValueError(f"nickname must be at most {MAX_NICKNAME} characters")
        if self.age is not None and not 0 <= self.age <= 150:
            raise ValueError("age out of range")


@dataclass(frozen=True, slots=True)
class ScoreboardEntry:
    entry_id: int
    nickname: str
    attacker_score: int
    defender_score: int
    playtime_seconds: float

    @property
    def winner(self) -> Outcome:
        return outcome_from_scores(self.attacker_score, self.defender_score)


@dataclass(frozen=True, slots=True)
class GameLogRecord:
    """One resolved round, flattened for analysis."""

    match_id: str
    nickname: str
    round_index: int
    attack_id: Optional[str]
    point: Optional[str]
    defend_id: Optional[str]
    winner: str
    feedback: str
    attack_elapsed: float = 0.0
    defend_elapsed: float = 0.0


class ScoreStore:
    """Durable scoreboard and round log rooted at one directory."""

    def __init__(self, root: Union[str, Path]):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._entries: dict[int, ScoreboardEntry] = {}
        self._entry_order: list[int] = []
        self._rounds: list[GameLogRecord] = []
        self._next_entry_id = 1
        self._last_seq = 0
        self._load()
        self._journal = open(self.root / JOURNAL_NAME, "a", encoding="utf-8")

    # Loading

    def _load(self) -> None:
        snap_path = self.root / SNAPSHOT_NAME
        if snap_path.exists():
            snap = json.loads(snap_path.read_text(encoding="utf-8"))
            self._last_seq = snap["last_seq"]
            self._next_entry_id = snap["next_entry_id"]
            for raw in snap["entries"]:
                entry = ScoreboardEntry(**raw)
                self._entries[entry.entry_id] = entry
                self._entry_order.append(entry.entry_id)
            self._rounds = [GameLogRecord(**raw) for raw in snap["rounds"]]
        journal_path = self.root / JOURNAL_NAME
        if not journal_path.exists():
            return
        good_bytes = 0
        torn = False
        with open(journal_path, "r", encoding="utf-8") as handle:
            for line in handle:
                try:
                    event = json.loads(line)
                except json.JSONDecodeError:
                    torn = True  # interrupted write from a crash
                    break
                good_bytes += len(line.encode("utf-8"))
                if event["seq"] <= self._last_seq:
                    continue
                self._apply(event)
                self._last_seq = event["seq"]
        if torn:
            # Drop the torn tail so later appends start on a clean line.
            with open(journal_path, "r+", encoding="utf-8") as handle:
                handle.truncate(good_bytes)

    def _apply(self, event: dict) -> None:
        op = event["op"]
        if op == "entry":
            entry = ScoreboardEntry(**event["entry"])
            self._entries[entry.entry_id] = entry
            self._entry_order.append(entry.entry_id)
            self._next_entry_id = max(self._next_entry_id, entry.entry_id + 1)
        elif op == "delete":
            entry_id = event["entry_id"]
            if entry_id in self._entries:
                del self._entries[entry_id]
                self._entry_order.remove(entry_id)
        elif op == "round":
            self._rounds.append(GameLogRecord(**event["round"]))

    # Writing

    def _append(self, event: dict) -> None:
        self._last_seq += 1
        event = {"seq": self._last_seq, **event}
        self._journal.write(json.dumps(event, separators=(",", ":")) + "\n")
        self._journal.flush()
        os.fsync(self._journal.fileno())
        self._apply(event)

    def snapshot(self) -> None:
        """Compact the journal into a snapshot; crash-safe via rename."""
        with self._lock:
            snap = {
                "last_seq": self._last_seq,
                "next_entry_id": self._next_entry_id,
                "entries": [asdict(self._entries[i]) for i in self._entry_order],
                "rounds": [asdict(r) for r in self._rounds],
            }
            tmp = self.root / (SNAPSHOT_NAME + ".tmp")
            with open(tmp, "w", encoding="utf-8") as handle:
                json.dump(snap, handle)
                handle.flush()
                os.fsync(handle.fileno())
            os.replace(tmp, self.root / SNAPSHOT_NAME)
            self._journal.truncate(0)
            self._journal.seek(0)

    def close(self) -> None:
        self._journal.close()

    # Scoreboard

    def add_entry(
        self,
        nickname: str,
        attacker_score: int,
        defender_score: int,
        playtime_seconds: float,
    ) -> ScoreboardEntry:
        with self._lock:
            entry = ScoreboardEntry(
                entry_id=self._next_entry_id,
                nickname=nickname,
                attacker_score=attacker_score,
                defender_score=defender_score,
                playtime_seconds=playtime_seconds,
            )
            self._next_entry_id += 1
            self._append({"op": "entry", "entry": asdict(entry)})
            return entry

    def record_result(
        self,
        profile: PlayerProfile,
        state: AwarenessState,
        match_id: str,
        playtime_seconds: Optional[float] = None,
    ) -> ScoreboardEntry:
        """Store a finished awareness match: one scoreboard entry plus
        one log record per resolved round."""
        if not state.over:
            raise ValueError("match is not finished")
        if playtime_seconds is None:
            playtime_seconds = sum(r.attack_elapsed + r.defend_elapsed for r in state.records)
        entry = self.add_entry(profile.nickname, state.attacker_score, state.defender_score, playtime_seconds)
        with self._lock:
            for record in state.records:
                row = GameLogRecord(
                    match_id=match_id,
                    nickname=profile.nickname,
                    round_index=record.index,
                    attack_id=record.attack_id,
                    point=point_name(record.point) if record.point is not None else None,
                    defend_id=record.defend_id,
                    winner=record.winner.value,
                    feedback=record.feedback,
                    attack_elapsed=record.attack_elapsed,
                    defend_elapsed=record.defend_elapsed,
                )
                self._append({"op": "round", "round": asdict(row)})
        return entry

    def list_scoreboard(self) -> list[ScoreboardEntry]:
        with self._lock:
            return [self._entries[i] for i in self._entry_order]

    def get_entry(self, entry_id: int) -> ScoreboardEntry:
        with self._lock:
            try:
                return self._entries[entry_id]
            except KeyError:
                raise NotFoundError(f"no scoreboard entry {entry_id}") from None

    def delete_entry(self, entry_id: int) -> None:
        with self._lock:
            if entry_id not in self._entries:
                raise NotFoundError(f"no scoreboard entry {entry_id}")
            self._append({"op": "delete", "entry_id": entry_id})

    def list_rounds(self, match_id: Optional[str] = None) -> list[GameLogRecord]:
        with self._lock:
            if match_id is None:
                return list(self._rounds)
            return [r for r in self._rounds if r.match_id == match_id]


# Dataset export

_CSV_FIELDS = [
    "match_id",
    "nickname",
    "round_index",
    "attack_id",
    "point",
    "defend_id",
    "winner",
    "feedback",
    "attack_elapsed",
    "defend_elapsed",
]


def export_dataset(rounds: Iterable[GameLogRecord], destination: Union[str, Path], fmt: str = "csv") -> int:
    """Write round records to ``destination``; returns the row count."""
    rounds = list(rounds)
    if fmt == "csv":
        with open(destination, "w", encoding="utf-8", newline="") as handle:
            writer = csv.DictWriter(handle, fieldnames=_CSV_FIELDS)
            writer.writeheader()
            for record in rounds:
                row = asdict(record)
                for key in ("attack_id", "point", "defend_id"):
                    if row[key] is None:
                        row[key] = ""
                writer.writerow(row)
    elif fmt == "jsonl":
        with open(destination, "w", encoding="utf-8") as handle:
            for record in rounds:
                handle.write(json.dumps(asdict(record), separators=(",", ":")) + "\n")
    else:
        raise ValueError(f"unknown dataset format {fmt!r}; expected 'csv' or 'jsonl'")
    return len(rounds)


def parse_dataset(source: Union[str, Path], fmt: Optional[str] = None) -> list[GameLogRecord]:
    """Read an exported dataset back; the inverse of :func:`export_dataset`."""
    path = Path(source)
    if fmt is None:
        fmt = "jsonl" if path.suffix in (".jsonl", ".ndjson") else "csv"
    records = []
    if fmt == "csv":
        with open(path, "r", encoding="utf-8", newline="") as handle:
            for row in csv.DictReader(handle):
                records.append(
                    GameLogRecord(
                        match_id=row["match_id"],
                        nickname=row["nickname"],
                        round_index=int(row["round_index"]),
                        attack_id=row["attack_id"] or None,
                        point=row["point"] or None,
                        defend_id=row["defend_id"] or None,
                        winner=row["winner"],
                        feedback=row["feedback"],
                        attack_elapsed=float(row["attack_elapsed"]),
                        defend_elapsed=float(row["defend_elapsed"]),
                    )
                )
    elif fmt == "jsonl":
        with open(path, "r", encoding="utf-8") as handle:
            for line in handle:
                if line.strip():
                    records.append(GameLogRecord(**json.loads(line)))
    else:
        raise ValueError(f"unknown dataset format {fmt!r}; expected 'csv' or 'jsonl'")
    return records
