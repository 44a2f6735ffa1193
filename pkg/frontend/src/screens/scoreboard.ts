import type { ScoreboardEntry } from "../protocol.js";

export interface ScoreboardView {
  entries: ScoreboardEntry[];
  error: string;
  loadFailed: boolean;
}

export interface ScoreboardHandlers {
  onDelete(entryId: number): void;
  onRetry(): void;
}

export function renderScoreboard(
  view: ScoreboardView,
  handlers: ScoreboardHandlers,
): HTMLElement {
  const el = document.createElement("div");
  el.className = "scoreboard-screen";
  el.innerHTML = `
    <h1>Scoreboard</h1>
    <div id="scoreboard-error" class="error"></div>
  `;
  (el.querySelector("#scoreboard-error") as HTMLElement).textContent = view.error;

  if (view.loadFailed) {
    const retry = document.createElement("button");
    retry.id = "scoreboard-retry";
    retry.textContent = "Retry";
    retry.addEventListener("click", () => handlers.onRetry());
    el.appendChild(retry);
    return el; // no phantom rows while the server is unreachable
  }

  const table = document.createElement("table");
  table.id = "scoreboard-table";
  table.innerHTML = `
    <thead>
      <tr>
        <th>Player</th><th>Defender Score</th><th>Attacker Score</th>
        <th>Winner</th><th>Playtime</th><th>Delete</th>
      </tr>
    </thead>
    <tbody></tbody>
  `;
  const body = table.querySelector("tbody") as HTMLElement;
  for (const entry of view.entries) {
    const row = document.createElement("tr");
    row.dataset.entry = String(entry.entry_id);
    for (const text of [
      entry.nickname,
      String(entry.defender_score),
      String(entry.attacker_score),
      entry.winner,
      `${entry.playtime_seconds}s`,
    ]) {
      const cell = document.createElement("td");
      cell.textContent = text;
      row.appendChild(cell);
    }
    const actions = document.createElement("td");
    const remove = document.createElement("button");
    remove.className = "delete";
    remove.dataset.entry = String(entry.entry_id);
    remove.textContent = "Delete";
    remove.addEventListener("click", () => handlers.onDelete(entry.entry_id));
    actions.appendChild(remove);
    row.appendChild(actions);
    body.appendChild(row);
  }
  el.appendChild(table);
  return el;
}
