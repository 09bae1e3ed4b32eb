import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, Ticketing } from "../src/api.js";

function fakeFetch(handler: (url: string, init?: RequestInit) => { status: number; body: unknown }) {
  return (async (url: RequestInfo | URL, init?: RequestInit) => {
    const { status, body } = handler(String(url), init);
    return new Response(JSON.stringify(body), {
      status,
      headers: { "content-type": "application/json" },
    });
  }) as typeof fetch;
}

describe("ApiClient", () => {
  it("creates a session and returns the parsed body", async () => {
    const client = new ApiClient(
      "http://x",
      fakeFetch((url, init) => {
        expect(url).toBe("http://x/sessions");
        expect(JSON.parse(String(init?.body))).toEqual({ data: "a,b\n1,2\n", format: "csv" });
        return { status: 201, body: { session: "s1", version: 1, state: {} } };
      }),
    );
    const res = await client.createSession("a,b\n1,2\n");
    expect(res.session).toBe("s1");
    expect(res.version).toBe(1);
  });

  it("surfaces a 409 action rejection with its validation report", async () => {
    const client = new ApiClient(
      "http://x",
      fakeFetch(() => ({
        status: 409,
        body: {
          detail: {
            error: "invalid",
            violations: [{ code: "duplicate-channel", path: "visual.v0.y", message: "dup" }],
          },
        },
      })),
    );
    const err = await client
      .postAction("s1", { type: "SwitchTab", tab: "visual" })
      .then(() => null, (e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    const apiErr = err as ApiError;
    expect(apiErr.status).toBe(409);
    expect(apiErr.violations).toHaveLength(1);
    expect(apiErr.violations[0].code).toBe("duplicate-channel");
  });

  it("surfaces the server version on a stale selection rejection", async () => {
    const client = new ApiClient(
      "http://x",
      fakeFetch(() => ({
        status: 409,
        body: { detail: { error: "stale version", currentVersion: 7 } },
      })),
    );
    const err = (await client
      .postSelection("s1", 1, "text", { and: [] })
      .then(() => null, (e: unknown) => e)) as ApiError;
    expect(err.currentVersion).toBe(7);
  });
});

describe("Ticketing", () => {
  it("marks only the newest ticket as current", () => {
    const t = new Ticketing();
    const first = t.issue();
    const second = t.issue();
    expect(t.isCurrent(first)).toBe(false);
    expect(t.isCurrent(second)).toBe(true);
  });

  it("discards an out-of-order response in a racing sequence", async () => {
    // Simulate two overlapping requests where the older one resolves last.
    const t = new Ticketing();
    let rendered = "";
    const respond = (ticket: number, value: string, delay: number) =>
      new Promise<void>((resolve) =>
        setTimeout(() => {
          if (t.isCurrent(ticket)) rendered = value;
          resolve();
        }, delay),
      );
    const older = respond(t.issue(), "old", 20);
    const newer = respond(t.issue(), "new", 5);
    await Promise.all([older, newer]);
    expect(rendered).toBe("new");
  });
});
