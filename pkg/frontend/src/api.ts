import type {
  CreateSessionRequest,
  RankedReport,
  SessionIndexEntry,
  SessionRecord,
} from "./types.js";

/** Error body shape every endpoint uses: {"code": ..., "message": ...}. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function parseBody(response: Response): Promise<unknown> {
  const text = await response.text();
  if (!text) return null;
  try {
    return JSON.parse(text);
  } catch {
    return null;
  }
}

/** The slice of the HTTP surface the workbench consumes; stubbed in tests. */
export interface WorkbenchApi {
  createSession(body: CreateSessionRequest): Promise<SessionRecord>;
  getSession(sessionId: string): Promise<SessionRecord>;
  selectCandidate(sessionId: string, label: string, editedText?: string): Promise<SessionRecord>;
  substitute(frame: string, entities: string[], source: string): Promise<RankedReport>;
}

export class ApiClient implements WorkbenchApi {
  constructor(readonly baseUrl: string = "") {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    let response: Response;
    try {
      response = await fetch(`${this.baseUrl}${path}`, {
        method,
        headers: body === undefined ? undefined : { "Content-Type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (error) {
      throw new ApiError(0, "network.unreachable", `cannot reach ${this.baseUrl}: ${error}`);
    }
    const data = (await parseBody(response)) as
      | { code?: string; message?: string }
      | null;
    if (!response.ok) {
      throw new ApiError(
        response.status,
        data?.code ?? `http.${response.status}`,
        data?.message ?? response.statusText,
      );
    }
    return data as T;
  }

  health(): Promise<{ status: string; mode: string }> {
    return this.request("GET", "/api/health");
  }

  createSession(body: CreateSessionRequest): Promise<SessionRecord> {
    return this.request("POST", "/api/sessions", body);
  }

  getSession(sessionId: string): Promise<SessionRecord> {
    return this.request("GET", `/api/sessions/${encodeURIComponent(sessionId)}`);
  }

  listSessions(): Promise<{ sessions: SessionIndexEntry[] }> {
    return this.request("GET", "/api/sessions");
  }

  selectCandidate(
    sessionId: string,
    label: string,
    editedText?: string,
  ): Promise<SessionRecord> {
    return this.request("POST", `/api/sessions/${encodeURIComponent(sessionId)}/selection`, {
      label,
      edited_text: editedText ?? null,
    });
  }

  substitute(frame: string, entities: string[], source: string): Promise<RankedReport> {
    return this.request("POST", "/api/substitutions", { frame, entities, source });
  }
}
