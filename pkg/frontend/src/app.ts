import { Api, ApiError, type FetchFn } from "./api.js";
import { openFeed, type SocketCtor, type SocketLike } from "./events.js";
import {
  applyFrame,
  applySnapshot,
  emptyModel,
  loadCatalog,
  type ViewModel,
} from "./model.js";
import type { RoleName, ScoreboardEntry } from "./protocol.js";
import { renderPlay } from "./screens/play.js";
import { renderRole } from "./screens/role.js";
import { renderScoreboard } from "./screens/scoreboard.js";

export interface AppDeps {
  base: string;
  fetchFn: FetchFn;
  socketCtor: SocketCtor;
  now?: () => number;
  reconnectDelayMs?: number;
}

export interface AppHandle {
  model: ViewModel;
  render(): void;
  goToScoreboard(): void;
  goToPlay(): void;
  idle(): Promise<void>;
}

type Screen = "role" | "play" | "scoreboard";

export function createApp(root: HTMLElement, deps: AppDeps): AppHandle {
  const api = new Api(deps.base, deps.fetchFn);
  const now = deps.now ?? (() => Date.now());
  const model = emptyModel();

  let screen: Screen = "role";
  let selectedToken: string | null = null;
  let roleError = "";
  let playError = "";
  let scoreboardError = "";
  let scoreboardFailed = false;
  let feed: SocketLike | null = null;

  let inflight: Promise<unknown> = Promise.resolve();
  function track<T>(work: Promise<T>): Promise<T> {
    inflight = inflight.then(() => work.then(() => undefined, () => undefined));
    return work;
  }
  async function idle(): Promise<void> {
    let seen: Promise<unknown>;
    do {
      seen = inflight;
      await seen;
    } while (seen !== inflight);
  }

  function message(err: unknown): string {
    return err instanceof Error ? err.message : String(err);
  }

  async function ensureCatalog(): Promise<void> {
    if (model.attackCatalog.length > 0) return;
    const catalog = await api.getCatalog();
    loadCatalog(model, catalog.attacks, catalog.defends);
  }

  function connectFeed(): void {
    if (!model.matchId) return;
    feed = openFeed(deps.socketCtor, deps.base, model.matchId, model.playerToken, {
      onFrame(frame) {
        if (applyFrame(model, frame, now)) render();
      },
      onClose() {
        feed = null;
        if (screen === "play" && model.snapshot && !model.snapshot.result) {
          setTimeout(connectFeed, deps.reconnectDelayMs ?? 1000);
        }
      },
    });
  }

  function enterMatch(role: RoleName, matchId: string, playerToken: string): void {
    model.role = role;
    model.matchId = matchId;
    model.playerToken = playerToken;
    screen = "play";
    connectFeed();
  }

  function startCreate(role: RoleName, nickname: string, opponent: string): void {
    track(
      (async () => {
        await ensureCatalog();
        const seat = await api.createMatch({
          mode: "awareness",
          role,
          nickname,
          opponent,
        });
        applySnapshot(model, seat.state, now);
        enterMatch(seat.role, seat.match_id, seat.player_token);
        roleError = "";
        render();
      })().catch((err) => {
        roleError = message(err);
        render();
      }),
    );
  }

  function startJoin(matchId: string, nickname: string): void {
    track(
      (async () => {
        await ensureCatalog();
        const seat = await api.joinMatch(matchId, nickname);
        applySnapshot(model, seat.state, now);
        enterMatch(seat.role, seat.match_id, seat.player_token);
        roleError = "";
        render();
      })().catch((err) => {
        roleError = message(err);
        render();
      }),
    );
  }

  function sendCommand(command: Record<string, unknown>): void {
    if (!model.matchId || !model.playerToken) return;
    track(
      api
        .sendCommand(model.matchId, model.playerToken, command)
        .then((response) => {
          applySnapshot(model, response.state, now);
          playError = "";
          selectedToken = null;
          render();
        })
        .catch((err) => {
          // the server is the rule authority: surface and resync
          playError = err instanceof ApiError ? err.message : message(err);
          selectedToken = null;
          render();
        }),
    );
  }

  function onSelectToken(id: string): void {
    if (model.role === "defender") {
      sendCommand({ type: "defense", token: id });
      return;
    }
    selectedToken = selectedToken === id ? null : id;
    render();
  }

  function onPoint(name: string): void {
    if (model.role !== "attacker" || !selectedToken) return;
    sendCommand({ type: "attack", token: selectedToken, point: name });
  }

  function loadScoreboard(): void {
    track(
      api
        .getScoreboard()
        .then((response) => {
          model.scoreboard = response.entries;
          scoreboardError = "";
          scoreboardFailed = false;
          render();
        })
        .catch((err) => {
          scoreboardError = message(err);
          scoreboardFailed = true;
          render();
        }),
    );
  }

  function deleteEntry(entryId: number): void {
    track(
      api
        .deleteEntry(entryId)
        .then((response) => {
          model.scoreboard = model.scoreboard.filter(
            (entry: ScoreboardEntry) => entry.entry_id !== response.deleted,
          );
          scoreboardError = "";
          render();
        })
        .catch((err) => {
          scoreboardError = message(err); // row stays until the server confirms
          render();
        }),
    );
  }

  function goToScoreboard(): void {
    screen = "scoreboard";
    loadScoreboard();
    render();
  }

  function goToPlay(): void {
    screen = model.matchId ? "play" : "role";
    render();
  }

  function render(): void {
    root.textContent = "";

    const nav = document.createElement("nav");
    const play = document.createElement("button");
    play.id = "nav-play";
    play.textContent = "Play";
    play.addEventListener("click", goToPlay);
    const scores = document.createElement("button");
    scores.id = "nav-scoreboard";
    scores.textContent = "Scoreboard";
    scores.addEventListener("click", goToScoreboard);
    nav.append(play, scores);
    root.appendChild(nav);

    if (screen === "role") {
      root.appendChild(
        renderRole(roleError, { onCreate: startCreate, onJoin: startJoin }),
      );
    } else if (screen === "play") {
      root.appendChild(
        renderPlay(
          model,
          { selectedToken, error: playError },
          { onSelectToken, onPoint },
          now,
        ),
      );
    } else {
      root.appendChild(
        renderScoreboard(
          {
            entries: model.scoreboard,
            error: scoreboardError,
            loadFailed: scoreboardFailed,
          },
          { onDelete: deleteEntry, onRetry: loadScoreboard },
        ),
      );
    }
  }

  render();
  return { model, render, goToScoreboard, goToPlay, idle };
}
