// Scripted transport doubles: each test declares the exact requests it
// expects, in order, with the recorded server responses to replay.

export interface ScriptStep {
  method: string;
  path: string;
  response?: unknown;
  status?: number;
  fail?: boolean; // simulate an unreachable server
}

export interface SeenRequest {
  method: string;
  path: string;
  body: unknown;
}

export class ScriptedHttp {
  private steps: ScriptStep[];
  seen: SeenRequest[] = [];

  constructor(steps: ScriptStep[]) {
    this.steps = [...steps];
  }

  get remaining(): number {
    return this.steps.length;
  }

  fetchFn = async (input: string, init?: RequestInit): Promise<Response> => {
    const method = (init?.method ?? "GET").toUpperCase();
    const step = this.steps.shift();
    if (!step) {
      throw new Error(`unscripted request: ${method} ${input}`);
    }
    if (step.method !== method || step.path !== input) {
      throw new Error(
        `expected ${step.method} ${step.path}, got ${method} ${input}`,
      );
    }
    this.seen.push({
      method,
      path: input,
      body: init?.body ? JSON.parse(String(init.body)) : null,
    });
    if (step.fail) {
      throw new TypeError("network down");
    }
    return new Response(JSON.stringify(step.response), {
      status: step.status ?? 200,
      headers: { "content-type": "application/json" },
    });
  };
}

export class FakeSocket {
  static instances: FakeSocket[] = [];
  url: string;
  closed = false;
  private listeners = new Map<string, ((event: unknown) => void)[]>();

  constructor(url: string) {
    this.url = url;
    FakeSocket.instances.push(this);
  }

  static reset(): void {
    FakeSocket.instances = [];
  }

  static last(): FakeSocket {
    const socket = FakeSocket.instances[FakeSocket.instances.length - 1];
    if (!socket) throw new Error("no socket was opened");
    return socket;
  }

  addEventListener(type: string, listener: (event: unknown) => void): void {
    const list = this.listeners.get(type) ?? [];
    list.push(listener);
    this.listeners.set(type, list);
  }

  close(): void {
    this.closed = true;
    this.emit("close", {});
  }

  push(frame: unknown): void {
    this.emit("message", { data: JSON.stringify(frame) });
  }

  private emit(type: string, event: unknown): void {
    for (const listener of this.listeners.get(type) ?? []) {
      listener(event);
    }
  }
}
