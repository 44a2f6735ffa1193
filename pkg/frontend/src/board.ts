// Board geometry from the engine's canonical 7x7 embedding: columns
// a-g, rows 1-7, the center d4 unused. Point names are the shared
// notation, so what the user clicks is what goes on the wire.

export const POINT_NAMES = [
  "a7", "d7", "g7", "g4", "g1", "d1", "a1", "a4",
  "b6", "d6", "f6", "f4", "f2", "d2", "b2", "b4",
  "c5", "d5", "e5", "e4", "e3", "d3", "c3", "c4",
] as const;

export type PointName = (typeof POINT_NAMES)[number];

export interface GridPos {
  x: number; // 0..6 left to right (columns a..g)
  y: number; // 0..6 top to bottom (rows 7..1)
}

export function gridPos(name: string): GridPos {
  const col = name.charCodeAt(0) - "a".charCodeAt(0);
  const row = Number(name[1]);
  return { x: col, y: 7 - row };
}

// Connected runs along each square and the four spokes, for drawing.
const RINGS: string[][] = [
  ["a7", "d7", "g7", "g4", "g1", "d1", "a1", "a4"],
  ["b6", "d6", "f6", "f4", "f2", "d2", "b2", "b4"],
  ["c5", "d5", "e5", "e4", "e3", "d3", "c3", "c4"],
];

const SPOKES: string[][] = [
  ["d7", "d6", "d5"],
  ["g4", "f4", "e4"],
  ["d1", "d2", "d3"],
  ["a4", "b4", "c4"],
];

export interface Segment {
  from: GridPos;
  to: GridPos;
}

export function boardSegments(): Segment[] {
  const segments: Segment[] = [];
  for (const ring of RINGS) {
    for (let i = 0; i < ring.length; i++) {
      const a = ring[i]!;
      const b = ring[(i + 1) % ring.length]!;
      segments.push({ from: gridPos(a), to: gridPos(b) });
    }
  }
  for (const spoke of SPOKES) {
    segments.push({ from: gridPos(spoke[0]!), to: gridPos(spoke[2]!) });
  }
  return segments;
}
