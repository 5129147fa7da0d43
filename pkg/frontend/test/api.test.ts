import { describe, expect, it } from "vitest";

import { ApiClient, ServiceError, StaleRequestError, debounce } from "../src/api";

function responseOf(body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status: 200,
    headers: { "content-type": "application/json" },
  });
}

describe("ApiClient envelope handling", () => {
  it("unwraps ok envelopes", async () => {
    const client = new ApiClient("http://svc", async () =>
      responseOf({ ok: true, data: { volume: 55314285.71 } }),
    );
    const result = await client.breakeven(11616, 0.00025, 0.00004);
    expect(result.volume).toBeCloseTo(55314285.71);
  });

  it("raises typed errors with the field from error envelopes", async () => {
    const client = new ApiClient("http://svc", async () =>
      responseOf({
        ok: false,
        error: { code: "validation_error", message: "bad", field: "daily_volume" },
      }),
    );
    await expect(client.scenarios()).rejects.toSatisfy(
      (e: unknown) => e instanceof ServiceError && e.field === "daily_volume",
    );
  });

  it("sends the JSON body the service expects", async () => {
    let captured: { url: string; body: string } | null = null;
    const client = new ApiClient("http://svc", async (url, init) => {
      captured = { url, body: String(init?.body) };
      return responseOf({ ok: true, data: [] });
    });
    await client.tcoCurve("large", ["gemini-flash-2.5"], [1000]);
    expect(captured!.url).toBe("http://svc/v1/tco");
    expect(JSON.parse(captured!.body)).toEqual({
      scale: "large",
      profiles: ["gemini-flash-2.5"],
      volumes: [1000],
    });
  });
});

describe("latest-wins per endpoint", () => {
  it("a superseded request rejects and the latest resolves", async () => {
    const gates: Array<() => void> = [];
    const client = new ApiClient("http://svc", (_url, init) => {
      const index = gates.length;
      return new Promise((resolve, reject) => {
        init?.signal?.addEventListener("abort", () => reject(new DOMException("x", "AbortError")));
        gates.push(() => resolve(responseOf({ ok: true, data: { sequence: index } })));
      });
    });
    const first = client.catalog();
    const second = client.catalog();
    // firing the second aborted the first; release both
    gates[1]!();
    await expect(second).resolves.toEqual({ sequence: 1 });
    await expect(first).rejects.toSatisfy(
      (e: unknown) => e instanceof DOMException || e instanceof StaleRequestError,
    );
  });

  it("different endpoints do not cancel each other", async () => {
    const client = new ApiClient("http://svc", async (url) =>
      responseOf({ ok: true, data: { from: url } }),
    );
    const [catalog, scenarios] = await Promise.all([client.catalog(), client.scenarios()]);
    expect((catalog as { from: string }).from).toContain("/v1/catalog");
    expect((scenarios as unknown as { from: string }).from).toContain("/v1/scenarios");
  });
});

describe("debounce", () => {
  it("collapses a burst into one trailing call", async () => {
    let calls = 0;
    const bump = debounce(() => {
      calls += 1;
    }, 10);
    bump();
    bump();
    bump();
    expect(calls).toBe(0);
    await new Promise((resolve) => setTimeout(resolve, 40));
    expect(calls).toBe(1);
  });
});
