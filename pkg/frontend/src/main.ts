import { createApp } from "./app.js";

const root = document.getElementById("app");
if (!root) throw new Error("missing #app element");

const handle = createApp(root, {
  base: "",
  fetchFn: (input, init) => fetch(input, init),
  socketCtor: WebSocket,
});

// tick the move timer without rebuilding the screen
setInterval(() => {
  const countdown = document.getElementById("countdown");
  if (countdown && handle.model.deadlineAt !== null) {
    const left = Math.max(
      0,
      Math.ceil((handle.model.deadlineAt - Date.now()) / 1000),
    );
    countdown.textContent = `${left}s`;
  }
}, 250);
