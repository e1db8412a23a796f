// Typed client for the workbench HTTP API.  Every target string the UI
// shows originates in one of these responses; the UI itself never
// translates anything.

export interface Segment {
  kind: "translated" | "gray";
  tokenSpan: [number, number];
  charSpan: [number, number];
  text: string;
  options: string[];
  segmentId: string | null;
}

export interface FuzzyMatch {
  source: string;
  target: string;
  score: number;
}

export type Choice = { option: number } | { custom: string };

export interface SentencePayload {
  index: number;
  source: string;
  segments: Segment[];
  fuzzyMatches: FuzzyMatch[];
  choices: Record<string, Choice>;
  accepted: boolean;
  target: string | null;
}

export interface SessionInfo {
  sessionId: string;
  sentences: number;
  accepted: number[];
}

export class ApiError extends Error {
  constructor(public status: number, public detail: string) {
    super(`${status}: ${detail}`);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, init);
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      if (body && typeof body.detail === "string") detail = body.detail;
    } catch {
      // not JSON; keep the status text
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(private base: string = "") {}

  createSession(text: string): Promise<{ sessionId: string; sentences: number }> {
    return request(`${this.base}/api/session`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ text }),
    });
  }

  sessionInfo(sessionId: string): Promise<SessionInfo> {
    return request(`${this.base}/api/session/${sessionId}`);
  }

  getSentence(sessionId: string, n: number): Promise<SentencePayload> {
    return request(`${this.base}/api/session/${sessionId}/sentence/${n}`);
  }

  postChoice(
    sessionId: string,
    n: number,
    segmentIndex: number,
    option: number | string,
  ): Promise<{ choices: Record<string, Choice>; complete: boolean }> {
    return request(`${this.base}/api/session/${sessionId}/sentence/${n}/choice`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ segmentIndex, option }),
    });
  }

  acceptSentence(sessionId: string, n: number): Promise<{ targetSentence: string }> {
    return request(`${this.base}/api/session/${sessionId}/sentence/${n}/accept`, {
      method: "POST",
    });
  }

  documentUrl(sessionId: string): string {
    return `${this.base}/api/session/${sessionId}/document`;
  }

  tmxUrl(sessionId: string): string {
    return `${this.base}/api/session/${sessionId}/export.tmx`;
  }
}
