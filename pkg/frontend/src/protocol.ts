// Wire types for the match service. The client renders these verbatim
// and never derives verdicts or scores on its own.

export type RoleName = "attacker" | "defender";

export interface SeatInfo {
  nickname: string;
  kind: "human" | "bot";
}

export interface RoundRecord {
  index: number;
  attack: string | null;
  point: string | null;
  defense: string | null;
  winner: string;
  feedback: string;
}

export interface FinalResult {
  attacker_score: number;
  defender_score: number;
  outcome: string;
  attacker_best_moves: string[];
  defender_best_moves: string[];
}

export interface CommittedAttack {
  token: string | null; // null when hidden in blind play
  point: string;
}

export interface AwarenessSnapshot {
  mode: "awareness";
  match_id: string;
  revision: number;
  phase: string;
  round_no: number;
  rounds_total: number;
  scores: { attacker: number; defender: number };
  attacker_remaining: string[];
  defender_remaining: string[];
  claimed_points: string[];
  committed_attack: CommittedAttack | null;
  options: {
    allow_reuse: boolean;
    blind: boolean;
    timer_seconds: number | null;
  };
  deadline_in: number | null;
  records: RoundRecord[];
  result: FinalResult | null;
  seats: Partial<Record<RoleName, SeatInfo>>;
  actor: RoleName | null;
}

export interface MatchEvent {
  seq: number;
  type: string;
  payload: Record<string, unknown>;
}

export interface HelloFrame {
  protocol: number;
  type: "hello";
  revision: number;
  state: AwarenessSnapshot;
}

export interface EventFrame {
  protocol: number;
  type: "event";
  event: MatchEvent;
  revision: number;
  state: AwarenessSnapshot;
}

export type ServerFrame = HelloFrame | EventFrame;

export interface SeatResponse {
  protocol: number;
  match_id: string;
  player_token: string;
  role: RoleName;
  revision: number;
  state: AwarenessSnapshot;
}

export interface CommandResponse {
  protocol: number;
  revision: number;
  state: AwarenessSnapshot;
}

export interface TokenInfo {
  id: string;
  label: string;
  definition: string;
}

export interface CatalogResponse {
  protocol: number;
  attacks: TokenInfo[];
  defends: TokenInfo[];
}

export interface ScoreboardEntry {
  entry_id: number;
  nickname: string;
  attacker_score: number;
  defender_score: number;
  playtime_seconds: number;
  winner: string;
}

export interface ScoreboardResponse {
  protocol: number;
  entries: ScoreboardEntry[];
}

export interface ErrorBody {
  protocol: number;
  error: { code: string; message: string };
}
