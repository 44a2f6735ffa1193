import { boardSegments, gridPos, POINT_NAMES } from "../board.js";
import { myTurn, remainingFor, type ViewModel } from "../model.js";
import type { RoundRecord } from "../protocol.js";

export interface PlayView {
  selectedToken: string | null;
  error: string;
}

export interface PlayHandlers {
  onSelectToken(id: string): void;
  onPoint(name: string): void;
}

const STEP = 100;
const MARGIN = 50;

function px(grid: { x: number; y: number }): { cx: number; cy: number } {
  return { cx: MARGIN + grid.x * STEP, cy: MARGIN + grid.y * STEP };
}

function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string>,
): SVGElementTagNameMap[K] {
  const el = document.createElementNS("http://www.w3.org/2000/svg", tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, value);
  }
  return el;
}

function buildBoard(model: ViewModel, view: PlayView, handlers: PlayHandlers): SVGSVGElement {
  const snapshot = model.snapshot!;
  const svg = svgEl("svg", {
    id: "board",
    viewBox: "0 0 700 700",
    role: "img",
  });
  for (const segment of boardSegments()) {
    const a = px(segment.from);
    const b = px(segment.to);
    svg.appendChild(
      svgEl("line", {
        x1: String(a.cx), y1: String(a.cy),
        x2: String(b.cx), y2: String(b.cy),
        class: "board-line",
      }),
    );
  }

  const byPoint = new Map<string, RoundRecord>();
  for (const record of snapshot.records) {
    if (record.point) byPoint.set(record.point, record);
  }
  const claimed = new Set(snapshot.claimed_points);
  const committed = snapshot.committed_attack;
  const placing =
    model.role === "attacker" && myTurn(model) && view.selectedToken !== null;

  for (const name of POINT_NAMES) {
    const { cx, cy } = px(gridPos(name));
    const group = svgEl("g", { "data-point": name });
    const open = !claimed.has(name) && !(committed && committed.point === name);
    const classes = ["point"];
    if (!open) classes.push("claimed");
    if (open && placing) classes.push("target");
    group.appendChild(
      svgEl("circle", { cx: String(cx), cy: String(cy), r: "14", class: classes.join(" ") }),
    );

    const record = byPoint.get(name);
    if (record && record.attack) {
      const label = svgEl("text", { x: String(cx), y: String(cy - 20), class: "attack-label" });
      label.textContent = record.attack;
      group.appendChild(label);
      if (record.defense) {
        const badge = svgEl("text", { x: String(cx), y: String(cy + 32), class: "defense-badge" });
        badge.textContent = record.defense;
        group.appendChild(badge);
      }
    } else if (committed && committed.point === name) {
      const label = svgEl("text", { x: String(cx), y: String(cy - 20), class: "attack-label live" });
      label.textContent = committed.token ?? "?"; // hidden in blind play
      group.appendChild(label);
    }

    if (open && placing) {
      group.addEventListener("click", () => handlers.onPoint(name));
    }
    svg.appendChild(group);
  }
  return svg;
}

function buildPalette(model: ViewModel, view: PlayView, handlers: PlayHandlers): HTMLElement {
  const palette = document.createElement("div");
  palette.id = "palette";
  const snapshot = model.snapshot!;
  const role = model.role;
  if (!role) return palette;
  const catalog = role === "attacker" ? model.attackCatalog : model.defendCatalog;
  const remaining = new Set(remainingFor(model, role));
  const phaseWants = role === "attacker" ? "await_attack" : "await_defense";
  const active = myTurn(model) && snapshot.phase === phaseWants;
  for (const token of catalog) {
    const button = document.createElement("button");
    button.className = "token";
    button.dataset.token = token.id;
    button.textContent = `${token.id} ${token.label}`;
    button.title = token.definition;
    const spent = !remaining.has(token.id);
    button.disabled = spent || !active;
    if (spent) button.classList.add("spent");
    if (view.selectedToken === token.id) button.classList.add("selected");
    button.addEventListener("click", () => handlers.onSelectToken(token.id));
    palette.appendChild(button);
  }
  return palette;
}

function buildSummary(model: ViewModel): HTMLElement | null {
  const result = model.snapshot?.result;
  if (!result) return null;
  const summary = document.createElement("div");
  summary.id = "summary";
  summary.innerHTML = `
    <div class="summary-card">
      <h2>Match over</h2>
      <p id="summary-outcome"></p>
      <p class="totals">
        attacker <span id="summary-attacker"></span>
        : <span id="summary-defender"></span> defender
      </p>
      <p>Attacker best moves: <span id="summary-attacker-best"></span></p>
      <p>Defender best moves: <span id="summary-defender-best"></span></p>
    </div>
  `;
  const outcome =
    result.outcome === "draw" ? "Draw" : `${result.outcome} wins`;
  (summary.querySelector("#summary-outcome") as HTMLElement).textContent = outcome;
  (summary.querySelector("#summary-attacker") as HTMLElement).textContent =
    String(result.attacker_score);
  (summary.querySelector("#summary-defender") as HTMLElement).textContent =
    String(result.defender_score);
  (summary.querySelector("#summary-attacker-best") as HTMLElement).textContent =
    result.attacker_best_moves.join(", ");
  (summary.querySelector("#summary-defender-best") as HTMLElement).textContent =
    result.defender_best_moves.join(", ");
  return summary;
}

export function renderPlay(
  model: ViewModel,
  view: PlayView,
  handlers: PlayHandlers,
  now: () => number,
): HTMLElement {
  const el = document.createElement("div");
  el.className = "play-screen";
  const snapshot = model.snapshot;
  if (!snapshot) {
    el.textContent = "no match";
    return el;
  }

  const status = document.createElement("div");
  status.id = "status";
  const seats = snapshot.seats;
  const names = `${seats.attacker?.nickname ?? "(open seat)"} vs ${seats.defender?.nickname ?? "(open seat)"}`;
  let turn: string;
  if (snapshot.result) {
    turn = "match over";
  } else if (!seats.attacker || !seats.defender) {
    turn = `waiting for an opponent (match id ${snapshot.match_id})`;
  } else if (myTurn(model)) {
    turn =
      model.role === "attacker" && view.selectedToken
        ? "pick a point for your attack"
        : "your move";
  } else {
    turn = `waiting for the ${snapshot.actor ?? "server"}`;
  }
  status.textContent = `Round ${snapshot.round_no} of ${snapshot.rounds_total} | ${names} | ${turn}`;
  el.appendChild(status);

  const scores = document.createElement("div");
  scores.id = "scores";
  scores.textContent = `attacker ${snapshot.scores.attacker} : ${snapshot.scores.defender} defender`;
  el.appendChild(scores);

  if (snapshot.options.timer_seconds !== null && model.deadlineAt !== null && !snapshot.result) {
    const countdown = document.createElement("div");
    countdown.id = "countdown";
    const left = Math.max(0, Math.ceil((model.deadlineAt - now()) / 1000));
    countdown.textContent = `${left}s`;
    el.appendChild(countdown);
  }

  el.appendChild(buildBoard(model, view, handlers));

  const banner = document.createElement("div");
  banner.id = "banner";
  banner.className = "banner";
  banner.textContent = model.banner;
  el.appendChild(banner);

  el.appendChild(buildPalette(model, view, handlers));

  const error = document.createElement("div");
  error.id = "play-error";
  error.className = "error";
  error.textContent = view.error;
  el.appendChild(error);

  const summary = buildSummary(model);
  if (summary) el.appendChild(summary);
  return el;
}
