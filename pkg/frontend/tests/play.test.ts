import { beforeEach, expect, test } from "vitest";
import { createApp, type AppHandle } from "../src/app.js";
import type { EventFrame, FinalResult, SeatResponse } from "../src/protocol.js";
import { FakeSocket, ScriptedHttp } from "./fakes.js";
import fixtures from "./fixtures.json";

const BASE = "http://srv";
const play = fixtures.play;
const MATCH_ID = play.create_response.match_id;

function mount(http: ScriptedHttp): { root: HTMLElement; app: AppHandle } {
  const root = document.createElement("div");
  document.body.appendChild(root);
  const app = createApp(root, {
    base: BASE,
    fetchFn: http.fetchFn,
    socketCtor: FakeSocket,
  });
  return { root, app };
}

function text(root: HTMLElement, selector: string): string {
  const el = root.querySelector(selector);
  expect(el, `missing element ${selector}`).not.toBeNull();
  return el!.textContent ?? "";
}

beforeEach(() => {
  document.body.innerHTML = "";
  FakeSocket.reset();
});

test("defender session: A1 arrives, D5 answers, banner is verbatim", async () => {
  const http = new ScriptedHttp([
    { method: "GET", path: `${BASE}/matrix`, response: fixtures.matrix },
    {
      method: "POST",
      path: `${BASE}/matches/${MATCH_ID}/join`,
      response: play.join_response,
    },
    {
      method: "POST",
      path: `${BASE}/matches/${MATCH_ID}/commands`,
      response: play.defense_response,
    },
  ]);
  const { root, app } = mount(http);

  // role screen: join the waiting match as Dee
  (root.querySelector("#nickname") as HTMLInputElement).value = "Dee";
  (root.querySelector("#match-id") as HTMLInputElement).value = MATCH_ID;
  (root.querySelector("#start") as HTMLButtonElement).click();
  await app.idle();

  expect(http.seen[1]?.body).toEqual({ nickname: "Dee" });
  const socket = FakeSocket.last();
  expect(socket.url).toBe(
    `ws://srv/matches/${MATCH_ID}/events?player_token=${play.join_response.player_token}`,
  );

  socket.push(play.hello);
  expect(text(root, "#status")).toContain("waiting for the attacker");

  // the attack reaches the defender as a push event
  socket.push(play.attack_frames[0]);
  expect(text(root, '[data-point="a7"] .attack-label')).toBe("A1");
  const d5 = root.querySelector('[data-token="D5"]') as HTMLButtonElement;
  expect(d5.disabled).toBe(false);
  expect(d5.title).toBe("Zero trust policy");

  d5.click();
  await app.idle();

  expect(http.seen[2]?.body).toEqual({
    player_token: play.join_response.player_token,
    command: { type: "defense", token: "D5" },
  });
  expect(text(root, "#banner")).toBe("Never trust malicious emails");
  expect(text(root, '[data-point="a7"] .defense-badge')).toBe("D5");

  // end-of-match summary equals the server's final_result
  const finish = play.finish_frames[1] as unknown as EventFrame;
  const result = finish.event.payload as unknown as FinalResult;
  expect(text(root, "#summary-attacker")).toBe(String(result.attacker_score));
  expect(text(root, "#summary-defender")).toBe(String(result.defender_score));
  expect(text(root, "#summary-outcome")).toBe(`${result.outcome} wins`);
  expect(text(root, "#summary-defender-best")).toBe(
    result.defender_best_moves.join(", "),
  );

  // the push copies of already-applied events change nothing
  for (const frame of play.finish_frames) {
    socket.push(frame);
  }
  expect(text(root, "#banner")).toBe("Never trust malicious emails");
  expect(root.querySelector("#summary")).not.toBeNull();
  expect(http.remaining).toBe(0);
});

test("attacker session: click a token, click a point, watch the verdict", async () => {
  const side = play.attacker_side;
  const http = new ScriptedHttp([
    { method: "GET", path: `${BASE}/matrix`, response: fixtures.matrix },
    { method: "POST", path: `${BASE}/matches`, response: play.create_response },
    {
      method: "POST",
      path: `${BASE}/matches/${MATCH_ID}/commands`,
      response: side.attack_response,
    },
  ]);
  const { root, app } = mount(http);

  (root.querySelector("#nickname") as HTMLInputElement).value = "Avi";
  (root.querySelector("#start") as HTMLButtonElement).click();
  await app.idle();

  expect(http.seen[1]?.body).toMatchObject({
    mode: "awareness",
    role: "attacker",
    nickname: "Avi",
    opponent: "human",
  });

  // an open seat: palette locked, match id on screen for sharing
  expect(text(root, "#status")).toContain("waiting for an opponent");
  expect(text(root, "#status")).toContain(MATCH_ID);
  let a1 = root.querySelector('[data-token="A1"]') as HTMLButtonElement;
  expect(a1.disabled).toBe(true);

  const socket = FakeSocket.last();
  socket.push(side.hello);
  socket.push(side.join_frames[0]);
  a1 = root.querySelector('[data-token="A1"]') as HTMLButtonElement;
  expect(a1.disabled).toBe(false);

  a1.click();
  expect(text(root, "#status")).toContain("pick a point");
  (root.querySelector('[data-point="a7"]') as unknown as SVGGElement).dispatchEvent(
    new MouseEvent("click", { bubbles: true }),
  );
  await app.idle();

  expect(http.seen[2]?.body).toEqual({
    player_token: play.create_response.player_token,
    command: { type: "attack", token: "A1", point: "a7" },
  });
  expect(text(root, '[data-point="a7"] .attack-label')).toBe("A1");

  // the defender's answer and the finish arrive as push events
  socket.push(side.frames[1]);
  expect(text(root, "#banner")).toBe("Never trust malicious emails");
  socket.push(side.frames[2]);
  const result = (side.frames[2] as unknown as EventFrame).event
    .payload as unknown as FinalResult;
  expect(text(root, "#summary-attacker")).toBe(String(result.attacker_score));
  expect(text(root, "#summary-defender")).toBe(String(result.defender_score));
  expect(http.remaining).toBe(0);
});

test("countdown renders from the server deadline", () => {
  const http = new ScriptedHttp([
    { method: "GET", path: `${BASE}/matrix`, response: fixtures.matrix },
    { method: "POST", path: `${BASE}/matches`, response: play.create_response },
  ]);
  const { root, app } = mount(http);
  const seat = play.create_response as unknown as SeatResponse;
  app.model.role = seat.role;
  app.model.matchId = seat.match_id;
  app.model.snapshot = structuredClone(seat.state);
  app.model.snapshot.options.timer_seconds = 30;
  app.model.deadlineAt = Date.now() + 12_400;
  app.goToPlay();
  expect(text(root, "#countdown")).toBe("13s");
});
