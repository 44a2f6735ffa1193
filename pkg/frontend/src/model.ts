import type {
  AwarenessSnapshot,
  RoleName,
  ScoreboardEntry,
  ServerFrame,
  TokenInfo,
} from "./protocol.js";

// Pure view of server state: every field below is copied from a server
// payload. The model never judges a round or totals a score itself.
export interface ViewModel {
  role: RoleName | null;
  matchId: string | null;
  playerToken: string | null;
  snapshot: AwarenessSnapshot | null;
  lastSeq: number;
  banner: string; // newest judge feedback, verbatim
  deadlineAt: number | null; // local clock ms when the move timer ends
  attackCatalog: TokenInfo[];
  defendCatalog: TokenInfo[];
  tokens: Map<string, TokenInfo>;
  scoreboard: ScoreboardEntry[];
}

export function emptyModel(): ViewModel {
  return {
    role: null,
    matchId: null,
    playerToken: null,
    snapshot: null,
    lastSeq: 0,
    banner: "",
    deadlineAt: null,
    attackCatalog: [],
    defendCatalog: [],
    tokens: new Map(),
    scoreboard: [],
  };
}

/** Adopt a snapshot unless we already hold a newer one. */
export function applySnapshot(
  model: ViewModel,
  snapshot: AwarenessSnapshot,
  now: () => number,
): boolean {
  if (model.snapshot && snapshot.revision < model.snapshot.revision) {
    return false;
  }
  model.snapshot = snapshot;
  model.lastSeq = Math.max(model.lastSeq, snapshot.revision);
  const last = snapshot.records[snapshot.records.length - 1];
  model.banner = last ? last.feedback : "";
  model.deadlineAt =
    snapshot.deadline_in === null ? null : now() + snapshot.deadline_in * 1000;
  return true;
}

/** Apply a push frame; out-of-order events are discarded. */
export function applyFrame(
  model: ViewModel,
  frame: ServerFrame,
  now: () => number,
): boolean {
  if (frame.type === "hello") {
    return applySnapshot(model, frame.state, now);
  }
  if (frame.event.seq <= model.lastSeq) {
    return false; // duplicate or already folded into a snapshot
  }
  model.lastSeq = frame.event.seq;
  applySnapshot(model, frame.state, now);
  return true;
}

export function loadCatalog(
  model: ViewModel,
  attacks: TokenInfo[],
  defends: TokenInfo[],
): void {
  model.attackCatalog = attacks;
  model.defendCatalog = defends;
  for (const token of [...attacks, ...defends]) {
    model.tokens.set(token.id, token);
  }
}

export function myTurn(model: ViewModel): boolean {
  // commands are rejected until both seats are filled, so the palette
  // stays disabled while a seat is open
  return (
    model.snapshot !== null &&
    model.role !== null &&
    model.snapshot.actor === model.role &&
    model.snapshot.seats.attacker !== undefined &&
    model.snapshot.seats.defender !== undefined
  );
}

export function remainingFor(model: ViewModel, role: RoleName): string[] {
  if (!model.snapshot) return [];
  return role === "attacker"
    ? model.snapshot.attacker_remaining
    : model.snapshot.defender_remaining;
}
