import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("ApiClient", () => {
  it("posts the pasted text on createSession", async () => {
    const fetchMock = vi.fn().mockResolvedValue(
      jsonResponse({ sessionId: "s1", sentences: 2 }),
    );
    vi.stubGlobal("fetch", fetchMock);
    const client = new ApiClient("http://x");
    const created = await client.createSession("Hola. Chau.");
    expect(created.sessionId).toBe("s1");
    const [url, init] = fetchMock.mock.calls[0];
    expect(url).toBe("http://x/api/session");
    expect(init.method).toBe("POST");
    expect(JSON.parse(init.body)).toEqual({ text: "Hola. Chau." });
  });

  it("sends option index or custom text unchanged", async () => {
    const fetchMock = vi.fn(async () => jsonResponse({ choices: {}, complete: false }));
    vi.stubGlobal("fetch", fetchMock);
    const client = new ApiClient("");
    await client.postChoice("s1", 0, 1, 0);
    await client.postChoice("s1", 0, 1, "mi texto");
    expect(JSON.parse(fetchMock.mock.calls[0][1].body)).toEqual({
      segmentIndex: 1,
      option: 0,
    });
    expect(JSON.parse(fetchMock.mock.calls[1][1].body)).toEqual({
      segmentIndex: 1,
      option: "mi texto",
    });
  });

  it("raises ApiError with the server detail on 4xx", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn(async () => jsonResponse({ detail: "sentence already accepted" }, 409)),
    );
    const client = new ApiClient("");
    await expect(client.acceptSentence("s1", 0)).rejects.toThrowError(ApiError);
    await expect(client.acceptSentence("s1", 0)).rejects.toMatchObject({
      status: 409,
      detail: "sentence already accepted",
    });
  });

  it("builds download urls from the session id", () => {
    const client = new ApiClient("http://h");
    expect(client.documentUrl("abc")).toBe("http://h/api/session/abc/document");
    expect(client.tmxUrl("abc")).toBe("http://h/api/session/abc/export.tmx");
  });
});
