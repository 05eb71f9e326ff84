import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("ApiClient", () => {
  it("parses successful responses", async () => {
    const fetchMock = vi.fn().mockResolvedValue(jsonResponse(200, { status: "ok", mode: "replay" }));
    vi.stubGlobal("fetch", fetchMock);

    const client = new ApiClient("http://backend");
    await expect(client.health()).resolves.toEqual({ status: "ok", mode: "replay" });
    expect(fetchMock).toHaveBeenCalledWith("http://backend/api/health", {
      method: "GET",
      headers: undefined,
      body: undefined,
    });
  });

  it("sends JSON bodies for mutations", async () => {
    const fetchMock = vi.fn().mockResolvedValue(jsonResponse(200, { entries: [] }));
    vi.stubGlobal("fetch", fetchMock);

    await new ApiClient().substitute("Hi {ENTITY}.", ["a"], "source");
    const [url, init] = fetchMock.mock.calls[0]!;
    expect(url).toBe("/api/substitutions");
    expect(init.headers).toEqual({ "Content-Type": "application/json" });
    expect(JSON.parse(init.body)).toEqual({
      frame: "Hi {ENTITY}.",
      entities: ["a"],
      source: "source",
    });
  });

  it("posts selections with an explicit null for unedited text", async () => {
    const fetchMock = vi.fn().mockResolvedValue(jsonResponse(200, {}));
    vi.stubGlobal("fetch", fetchMock);

    await new ApiClient().selectCandidate("abc123", "v2");
    const [url, init] = fetchMock.mock.calls[0]!;
    expect(url).toBe("/api/sessions/abc123/selection");
    expect(JSON.parse(init.body)).toEqual({ label: "v2", edited_text: null });
  });

  it("surfaces the error body's code and message", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn().mockResolvedValue(
        jsonResponse(404, { code: "session.not_found", message: "no session deadbeef" }),
      ),
    );

    const error = await new ApiClient().getSession("deadbeef").catch((e: unknown) => e);
    expect(error).toBeInstanceOf(ApiError);
    expect((error as ApiError).status).toBe(404);
    expect((error as ApiError).code).toBe("session.not_found");
    expect((error as ApiError).message).toContain("deadbeef");
  });

  it("falls back to a status code when the error body is not JSON", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn().mockResolvedValue(new Response("<html>bad gateway</html>", { status: 502 })),
    );

    const error = await new ApiClient().listSessions().catch((e: unknown) => e);
    expect((error as ApiError).code).toBe("http.502");
  });

  it("wraps network failures", async () => {
    vi.stubGlobal("fetch", vi.fn().mockRejectedValue(new TypeError("fetch failed")));

    const error = await new ApiClient("http://nowhere").health().catch((e: unknown) => e);
    expect(error).toBeInstanceOf(ApiError);
    expect((error as ApiError).status).toBe(0);
    expect((error as ApiError).code).toBe("network.unreachable");
  });

  it("escapes session ids in paths", async () => {
    const fetchMock = vi.fn().mockResolvedValue(jsonResponse(200, {}));
    vi.stubGlobal("fetch", fetchMock);

    await new ApiClient().getSession("a/b");
    expect(fetchMock.mock.calls[0]![0]).toBe("/api/sessions/a%2Fb");
  });
});
