import { describe, expect, it } from "vitest";

import { ApiError, StudioApi } from "../src/api.js";
import { DEFAULT_CONFIG } from "../src/panel.js";

interface Recorded {
  url: string;
  method: string;
  body: unknown;
  headers: Record<string, string> | undefined;
}

function jsonResponse(doc: unknown, status = 200): Response {
  return new Response(JSON.stringify(doc), {
    status,
    headers: { "content-type": "application/json" },
  });
}

function makeApi(reply: (url: string) => Response = () => jsonResponse({})) {
  const calls: Recorded[] = [];
  const api = new StudioApi("", (url, init) => {
    calls.push({
      url,
      method: init?.method ?? "GET",
      body: typeof init?.body === "string" ? JSON.parse(init.body) : undefined,
      headers: init?.headers as Record<string, string> | undefined,
    });
    return Promise.resolve(reply(url));
  });
  return { api, calls };
}

describe("request shaping", () => {
  it("reads documents from /api/v1 paths", async () => {
    const { api, calls } = makeApi();
    await api.layout();
    await api.config();
    await api.scheme();
    await api.placement();
    await api.field("post office");
    await api.job("job-7");
    expect(calls.map((c) => c.url)).toEqual([
      "/api/v1/layout",
      "/api/v1/config",
      "/api/v1/scheme",
      "/api/v1/placement",
      "/api/v1/field/post%20office",
      "/api/v1/jobs/job-7",
    ]);
    expect(calls.every((c) => c.method === "GET")).toBe(true);
  });

  it("prefixes a configured base URL", async () => {
    const calls: string[] = [];
    const api = new StudioApi("http://example.test:9", (url) => {
      calls.push(url);
      return Promise.resolve(jsonResponse({}));
    });
    await api.layout();
    expect(calls).toEqual(["http://example.test:9/api/v1/layout"]);
  });

  it("unwraps the job listing", async () => {
    const { api } = makeApi(() => jsonResponse({ jobs: [{ id: "job-1" }] }));
    expect(await api.jobs()).toEqual([{ id: "job-1" }]);
  });

  it("posts runs with optional config overrides", async () => {
    const { api, calls } = makeApi();
    await api.startOptimize();
    await api.startRefine(DEFAULT_CONFIG);
    await api.startHeatmap();
    await api.startHeatmap("school");
    expect(calls.map((c) => [c.method, c.url, c.body])).toEqual([
      ["POST", "/api/v1/optimize", {}],
      ["POST", "/api/v1/refine", { config: DEFAULT_CONFIG }],
      ["POST", "/api/v1/heatmap", {}],
      ["POST", "/api/v1/heatmap", { destination: "school" }],
    ]);
    expect(calls[1].headers).toEqual({ "content-type": "application/json" });
  });

  it("posts config saves and blind-zone fixes verbatim", async () => {
    const { api, calls } = makeApi();
    await api.saveConfig(DEFAULT_CONFIG);
    await api.fixBlindZone(600, 480, "school");
    expect(calls[0].body).toEqual(DEFAULT_CONFIG);
    expect(calls[1]).toMatchObject({
      method: "POST",
      url: "/api/v1/blindzone-fix",
      body: { x: 600, y: 480, destination: "school" },
    });
  });
});

describe("error handling", () => {
  it("surfaces the server's machine-readable diagnostics", async () => {
    const { api } = makeApi(() =>
      jsonResponse({ error: { code: "invalid", message: "'x' must be a number" } }, 400),
    );
    const err = await api.startOptimize().catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err).toMatchObject({ status: 400, code: "invalid", message: "'x' must be a number" });
  });

  it("falls back to the status line on non-JSON errors", async () => {
    const { api } = makeApi(
      () => new Response("boom", { status: 502, statusText: "Bad Gateway" }),
    );
    const err = (await api.layout().catch((e: unknown) => e)) as ApiError;
    expect(err.code).toBe("http_error");
    expect(err.status).toBe(502);
    expect(err.message).toContain("502");
  });

  it("treats missing pipeline outputs as null, not failures", async () => {
    const { api } = makeApi(() =>
      jsonResponse({ error: { code: "not_found", message: "no scheme yet" } }, 404),
    );
    expect(await api.scheme()).toBeNull();
    expect(await api.placement()).toBeNull();
    expect(await api.field("school")).toBeNull();
  });

  it("still raises non-404 read failures", async () => {
    const { api } = makeApi(() =>
      jsonResponse({ error: { code: "invalid", message: "corrupt" } }, 500),
    );
    await expect(api.scheme()).rejects.toBeInstanceOf(ApiError);
  });
});
