import type { RoleName } from "../protocol.js";

export interface RoleHandlers {
  onCreate(role: RoleName, nickname: string, opponent: string): void;
  onJoin(matchId: string, nickname: string): void;
}

export function renderRole(error: string, handlers: RoleHandlers): HTMLElement {
  const el = document.createElement("div");
  el.className = "role-screen";
  el.innerHTML = `
    <h1>moraba</h1>
    <p class="tagline">Attack and defend on the Morabaraba board.</p>
    <form id="role-form">
      <label>Nickname <input id="nickname" autocomplete="off"></label>
      <fieldset>
        <legend>Play as</legend>
        <label><input type="radio" name="role" value="attacker" checked> Attacker</label>
        <label><input type="radio" name="role" value="defender"> Defender</label>
      </fieldset>
      <label>Opponent
        <select id="opponent">
          <option value="human">another player</option>
          <option value="greedy">bot (greedy)</option>
          <option value="random">bot (random)</option>
          <option value="expectimax">bot (expectimax)</option>
        </select>
      </label>
      <label>Join a match <input id="match-id" placeholder="match id, empty to create"></label>
      <button id="start" type="submit">Start</button>
      <div id="form-error" class="error"></div>
    </form>
  `;
  const errorBox = el.querySelector("#form-error") as HTMLElement;
  errorBox.textContent = error;

  const form = el.querySelector("#role-form") as HTMLFormElement;
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const nickname = (el.querySelector("#nickname") as HTMLInputElement).value.trim();
    if (!nickname) {
      errorBox.textContent = "enter a nickname";
      return;
    }
    const matchId = (el.querySelector("#match-id") as HTMLInputElement).value.trim();
    if (matchId) {
      handlers.onJoin(matchId, nickname);
      return;
    }
    const role = (
      el.querySelector('input[name="role"]:checked') as HTMLInputElement
    ).value as RoleName;
    const opponent = (el.querySelector("#opponent") as HTMLSelectElement).value;
    handlers.onCreate(role, nickname, opponent);
  });
  return el;
}
