import type {
  CatalogResponse,
  CommandResponse,
  RoleName,
  ScoreboardResponse,
  SeatResponse,
} from "./protocol.js";

export type FetchFn = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  code: string;
  status: number;

  constructor(code: string, message: string, status: number) {
    super(message);
    this.code = code;
    this.status = status;
  }
}

async function unwrap<T>(response: Response): Promise<T> {
  if (response.ok) {
    return (await response.json()) as T;
  }
  let code = "unknown";
  let message = `request failed (${response.status})`;
  try {
    const body = (await response.json()) as {
      error?: { code?: string; message?: string };
    };
    if (body.error) {
      code = body.error.code ?? code;
      message = body.error.message ?? message;
    }
  } catch {
    // non-JSON error body: keep the fallback message
  }
  throw new ApiError(code, message, response.status);
}

export interface CreateMatchRequest {
  mode: "awareness";
  role: RoleName;
  nickname: string;
  opponent: string;
  options?: Record<string, unknown>;
}

export class Api {
  private base: string;
  private fetchFn: FetchFn;

  constructor(base: string, fetchFn: FetchFn) {
    this.base = base;
    this.fetchFn = fetchFn;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.fetchFn(this.base + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    }).then((r) => unwrap<T>(r));
  }

  private get<T>(path: string): Promise<T> {
    return this.fetchFn(this.base + path).then((r) => unwrap<T>(r));
  }

  createMatch(request: CreateMatchRequest): Promise<SeatResponse> {
    return this.post("/matches", request);
  }

  joinMatch(matchId: string, nickname: string): Promise<SeatResponse> {
    return this.post(`/matches/${matchId}/join`, { nickname });
  }

  sendCommand(
    matchId: string,
    playerToken: string,
    command: Record<string, unknown>,
  ): Promise<CommandResponse> {
    return this.post(`/matches/${matchId}/commands`, {
      player_token: playerToken,
      command,
    });
  }

  getMatch(matchId: string, playerToken?: string): Promise<CommandResponse> {
    const query = playerToken ? `?player_token=${playerToken}` : "";
    return this.get(`/matches/${matchId}${query}`);
  }

  getCatalog(): Promise<CatalogResponse> {
    return this.get("/matrix");
  }

  getScoreboard(): Promise<ScoreboardResponse> {
    return this.get("/scoreboard");
  }

  deleteEntry(entryId: number): Promise<{ protocol: number; deleted: number }> {
    return this.fetchFn(`${this.base}/scoreboard/${entryId}`, {
      method: "DELETE",
    }).then((r) => unwrap(r));
  }
}
