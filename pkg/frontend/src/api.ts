/**
 * Thin client for the /v1 service.
 *
 * At most one request is in flight per endpoint: a newer call aborts the
 * previous one (latest-wins), so a slider being dragged can fire freely
 * without stale responses overwriting fresh ones. `fetchImpl` is
 * injectable so tests can intercept every byte the UI consumes.
 */

import type {
  ApiEnvelope,
  BreakEven,
  Catalog,
  CurveRow,
  DecideResponse,
  Scenario,
} from "./types";

export class ServiceError extends Error {
  constructor(
    message: string,
    public code: string,
    public field: string | null = null,
  ) {
    super(message);
  }
}

export class StaleRequestError extends Error {
  constructor() {
    super("superseded by a newer request");
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private sequence: Record<string, number> = {};
  private controllers: Record<string, AbortController> = {};

  constructor(
    public baseUrl: string,
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(method: "GET" | "POST", path: string, body?: unknown): Promise<T> {
    const seq = (this.sequence[path] ?? 0) + 1;
    this.sequence[path] = seq;
    this.controllers[path]?.abort();
    const controller = new AbortController();
    this.controllers[path] = controller;

    const response = await this.fetchImpl(this.baseUrl + path, {
      method,
      headers: body === undefined ? undefined : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
      signal: controller.signal,
    });
    if (this.sequence[path] !== seq) {
      throw new StaleRequestError();
    }
    const envelope = (await response.json()) as ApiEnvelope<T>;
    if (!envelope.ok || envelope.data === undefined) {
      const error = envelope.error ?? { code: "unknown", message: "malformed envelope", field: null };
      throw new ServiceError(error.message, error.code, error.field);
    }
    return envelope.data;
  }

  catalog(): Promise<Catalog> {
    return this.request("GET", "/v1/catalog");
  }

  scenarios(): Promise<Scenario[]> {
    return this.request("GET", "/v1/scenarios");
  }

  breakeven(upfront: number, apiPrice: number, supCost: number): Promise<BreakEven> {
    return this.request("POST", "/v1/breakeven", {
      upfront,
      api_price: apiPrice,
      sup_cost: supCost,
    });
  }

  tcoCurve(scale: string, profiles: string[], volumes: number[]): Promise<CurveRow[]> {
    return this.request("POST", "/v1/tco", { scale, profiles, volumes });
  }

  decide(scenario: Scenario): Promise<DecideResponse> {
    return this.request("POST", "/v1/decide", { scenario });
  }
}

/** Fire trailing-edge calls at most once per `delayMs` of silence. */
export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  delayMs: number,
): (...args: A) => void {
  let timer: ReturnType<typeof setTimeout> | undefined;
  return (...args: A) => {
    if (timer !== undefined) clearTimeout(timer);
    timer = setTimeout(() => fn(...args), delayMs);
  };
}
