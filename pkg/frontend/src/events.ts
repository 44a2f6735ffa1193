import type { ServerFrame } from "./protocol.js";

// Minimal surface so tests can substitute a scripted socket.
export interface SocketLike {
  addEventListener(type: string, listener: (event: any) => void): void;
  close(): void;
}

export type SocketCtor = new (url: string) => SocketLike;

export function wsUrl(base: string, path: string): string {
  if (base.startsWith("http")) {
    return base.replace(/^http/, "ws") + path;
  }
  const proto = location.protocol === "https:" ? "wss:" : "ws:";
  return `${proto}//${location.host}${path}`;
}

export interface FeedHandlers {
  onFrame(frame: ServerFrame): void;
  onClose?(): void;
}

/** Push feed for one match. Frame ordering is the view model's job. */
export function openFeed(
  ctor: SocketCtor,
  base: string,
  matchId: string,
  playerToken: string | null,
  handlers: FeedHandlers,
): SocketLike {
  const query = playerToken ? `?player_token=${playerToken}` : "";
  const socket = new ctor(wsUrl(base, `/matches/${matchId}/events${query}`));
  socket.addEventListener("message", (event: MessageEvent) => {
    handlers.onFrame(JSON.parse(String(event.data)) as ServerFrame);
  });
  socket.addEventListener("close", () => {
    if (handlers.onClose) handlers.onClose();
  });
  return socket;
}
