import type { ApiError, StateView, StrategyInfo } from "./types.js";

/** Thrown for any non-2xx response; carries the server's error code. */
export class ServiceError extends Error {
  readonly code: string;

  constructor(code: string, detail: string) {
    super(detail);
    this.code = code;
  }
}

async function parse<T>(resp: Response): Promise<T> {
  const body = (await resp.json()) as T | ApiError;
  if (!resp.ok) {
    const err = body as ApiError;
    throw new ServiceError(err.error ?? `http-${resp.status}`, err.detail ?? "");
  }
  return body as T;
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  listStrategies(): Promise<StrategyInfo[]> {
    return fetch(`${this.base}/api/strategies`).then((r) => parse<StrategyInfo[]>(r));
  }

  createGame(x: string, o: string): Promise<StateView> {
    return fetch(`${this.base}/api/games`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ x, o }),
    }).then((r) => parse<StateView>(r));
  }

  getState(id: string): Promise<StateView> {
    return fetch(`${this.base}/api/games/${id}`).then((r) => parse<StateView>(r));
  }

  postMove(id: string, f: number, s: number): Promise<StateView> {
    return fetch(`${this.base}/api/games/${id}/moves`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ f, s }),
    }).then((r) => parse<StateView>(r));
  }
}
