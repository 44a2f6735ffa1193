"""Morabaraba board topology: 24 points on three concentric squares.

Point ids are ``ring * 8 + index`` with ring 0 = outer, 1 = middle,
2 = inner. Index 0 is the top-left corner of the ring and runs
clockwise, so even indices are corners and odd indices are the
midpoints of the sides::

    a7----------d7----------g7        id  0  1  2
    |           |            |                 3
    |   b6------d6------f6   |             8  9 10
    |   |       |        |   |                11
    |   |   c5--d5--e5   |   |            16 17 18
    |   |   |        |   |   |
    a4--b4--c4      e4--f4--g4   ids 7,15,23 / 19,11,3
    |   |   |        |   |   |
    |   |   c3--d3--e3   |   |
    |   |       |        |   |
    |   b2------d2------f2   |
    |           |            |
    a1----------d1----------g1

Every point also has a coordinate on a 7x7 grid (columns a-g, rows
1-7, centre d4 unused); that embedding defines the text names used by
move notation and is what the test oracles enumerate against. The
optional diagonals connect the ring corners (a7-b6-c5 etc.) and add
four mill lines.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

POINT_COUNT = 24
RING_COUNT = 3
CENTER = (3, 3)

COLUMNS = "abcdefg"

# Offsets of ring index 0..7 relative to the centre, clockwise from the
# top-left corner, scaled by the ring's half-width (3 outer, 2, 1 inner).
_RING_STEPS = [(-1, 1), (0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0)]


def point_coords(point: int) -> tuple[int, int]:
    """Grid (x, y) of a point; x is the column a-g, y is the row minus 1."""
    check_point(point)
    ring, index = divmod(point, 8)
    half = 3 - ring
    dx, dy = _RING_STEPS[index]
    return CENTER[0] + dx * half, CENTER[1] + dy * half


def point_name(point: int) -> str:
    x, y = point_coords(point)
    return f"{COLUMNS[x]}{y + 1}"


def check_point(point: int) -> None:
    if not isinstance(point, int) or not 0 <= point < POINT_COUNT:
        raise ValueError(f"invalid point id {point!r}; expected 0..{POINT_COUNT - 1}")


_NAME_TO_POINT = None


def point_from_name(name: str) -> int:
    global _NAME_TO_POINT
    if _NAME_TO_POINT is None:
        _NAME_TO_POINT = {point_name(p): p for p in range(POINT_COUNT)}
    try:
        return _NAME_TO_POINT[name.lower()]
    except KeyError:
        raise ValueError(f"unknown point name {name!r}") from None


def name_order(point: int) -> int:
    """Rank of the point's text name under plain string ordering."""
    x, y = point_coords(point)
    return x * 7 + y


@dataclass(frozen=True)
class BoardTopology:
    """Immutable board graph: adjacency lists plus mill lines.

    ``adjacency[p]`` is sorted by :func:`name_order`; ``mills`` holds
    each line once as a sorted id triple. Immutable, so one instance
    can back any number of concurrent games.
    """

    point_count: int
    adjacency: tuple[tuple[int, ...], ...]
    mills: tuple[tuple[int, int, int], ...]
    diagonals: bool

    @property
    def mills_at(self) -> tuple[tuple[int, ...], ...]:
        return _mills_at_table(self)


@lru_cache(maxsize=None)
def _mills_at_table(topology: BoardTopology) -> tuple[tuple[int, ...], ...]:
    table: list[list[int]] = [[] for _ in range(topology.point_count)]
    for i, line in enumerate(topology.mills):
        for p in line:
            table[p].append(i)
    return tuple(tuple(ms) for ms in table)


@lru_cache(maxsize=2)
def standard_topology(diagonals: bool = False) -> BoardTopology:
    """Build the canonical 24-point board.

    Ring neighbours are connected along each square, side midpoints are
    connected across rings, and with ``diagonals`` on the corners are
    additionally connected across rings (adding the four diagonal mill
    lines).
    """
    pid = lambda ring, index: ring * 8 + index % 8

    edges: set[tuple[int, int]] = set()
    for ring in range(RING_COUNT):
        for index in range(8):
            edges.add(_edge(pid(ring, index), pid(ring, index + 1)))
    for ring in (0, 1):
        for index in (1, 3, 5, 7):
            edges.add(_edge(pid(ring, index), pid(ring + 1, index)))
        if diagonals:
            for index in (0, 2, 4, 6):
                edges.add(_edge(pid(ring, index), pid(ring + 1, index)))

    neighbors: list[list[int]] = [[] for _ in range(POINT_COUNT)]
    for a, b in edges:
        neighbors[a].append(b)
        neighbors[b].append(a)
    for ns in neighbors:
        ns.sort(key=name_order)

    mills: list[tuple[int, int, int]] = []
    for ring in range(RING_COUNT):
        for corner in (0, 2, 4, 6):
            mills.append(_line(pid(ring, corner), pid(ring, corner + 1), pid(ring, corner + 2)))
    for index in (1, 3, 5, 7):
        mills.append(_line(pid(0, index), pid(1, index), pid(2, index)))
    if diagonals:
        for index in (0, 2, 4, 6):
            mills.append(_line(pid(0, index), pid(1, index), pid(2, index)))
    mills.sort()

    return BoardTopology(
        point_count=POINT_COUNT,
        adjacency=tuple(tuple(ns) for ns in neighbors),
        mills=tuple(mills),
        diagonals=diagonals,
    )


def _edge(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


def _line(a: int, b: int, c: int) -> tuple[int, int, int]:
    return tuple(sorted((a, b, c)))  # type: ignore[return-value]


def adjacent(topology: BoardTopology, point: int) -> frozenset[int]:
    """All points one slide away from ``point``."""
    check_point(point)
    return frozenset(topology.adjacency[point])


def mills_through(topology: BoardTopology, point: int) -> tuple[tuple[int, int, int], ...]:
    """All mill lines containing ``point``."""
    check_point(point)
    return tuple(topology.mills[i] for i in topology.mills_at[point])


def dump_topology(topology: BoardTopology) -> str:
    """Line-oriented text dump of the board graph, for fixtures and debugging."""
    lines = ["moraba-board 1", f"diagonals {'on' if topology.diagonals else 'off'}"]
    for p in range(topology.point_count):
        ring, index = divmod(p, 8)
        lines.append(f"point {p} {point_name(p)} ring={ring} index={index}")
    for p in range(topology.point_count):
        for q in topology.adjacency[p]:
            if p < q:
                lines.append(f"adj {point_name(p)} {point_name(q)}")
    for line in topology.mills:
        lines.append("mill " + " ".join(point_name(p) for p in line))
    return "\n".join(lines) + "\n"
