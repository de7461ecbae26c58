/** Typed client for the shapelab HTTP service. */

export interface Diagnostic {
  severity: "error" | "warning";
  line: number;
  column: number;
  message: string;
  hint?: string | null;
}

export interface CompileResponse {
  ok: boolean;
  programId?: string;
  diagnostics: Diagnostic[];
}

export interface SessionResponse {
  sessionId: string;
  programId: string;
  created: string;
  eventCount: number;
  svg: string;
  modelDump: unknown;
}

export interface EventResponse {
  firedMessages: string[];
  svg: string;
  modelDump: unknown;
  elapsed: number;
  eventCount: number;
  error?: string;
}

export interface PaletteColor {
  name: string;
  rgb: [number, number, number];
  hex: string;
}

export type SessionEvent =
  | { type: "tap"; x: number; y: number }
  | { type: "move"; x: number; y: number }
  | { type: "tick"; dt: number }
  | { type: "keydown"; key: string }
  | { type: "keyup"; key: string };

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class Api {
  constructor(
    readonly base: string,
    private readonly fetchFn: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request(
    path: string,
    init?: RequestInit,
    tolerate422 = false,
  ): Promise<unknown> {
    let response: Response;
    try {
      response = await this.fetchFn(this.base + path, init);
    } catch (err) {
      throw new ApiError(0, `service unreachable: ${String(err)}`);
    }
    const body = await response.json().catch(() => ({}));
    if (!response.ok && !(tolerate422 && response.status === 422)) {
      const record = body as { error?: unknown; diagnostics?: Diagnostic[] };
      const detail =
        typeof record.error === "string"
          ? record.error
          : (record.diagnostics?.[0]?.message ?? response.statusText);
      throw new ApiError(response.status, detail);
    }
    return body;
  }

  private post(path: string, payload: unknown, tolerate422 = false): Promise<unknown> {
    return this.request(
      path,
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(payload),
      },
      tolerate422,
    );
  }

  /** 422 (program errors) resolves normally with ok: false; every other
   * route treats 422 as a failure and surfaces its first diagnostic. */
  compile(source: string): Promise<CompileResponse> {
    return this.post("/compile", { source }, true) as Promise<CompileResponse>;
  }

  createSession(programId: string): Promise<SessionResponse> {
    return this.post("/sessions", { programId }) as Promise<SessionResponse>;
  }

  getSession(sessionId: string): Promise<SessionResponse & { elapsed: number }> {
    return this.request(`/sessions/${sessionId}`) as Promise<
      SessionResponse & { elapsed: number }
    >;
  }

  async deleteSession(sessionId: string): Promise<void> {
    try {
      await this.request(`/sessions/${sessionId}`, { method: "DELETE" });
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) return; // already gone
      throw err;
    }
  }

  sendEvent(sessionId: string, event: SessionEvent): Promise<EventResponse> {
    return this.post(`/sessions/${sessionId}/events`, event) as Promise<EventResponse>;
  }

  async palette(): Promise<PaletteColor[]> {
    const body = (await this.request("/palette")) as { colors: PaletteColor[] };
    return body.colors;
  }

  async health(): Promise<boolean> {
    const body = (await this.request("/health")) as { ok?: boolean };
    return body.ok === true;
  }
}

export const DEFAULT_API_BASE = "http://127.0.0.1:8642";

/** Reads `?api=<base-url>` from a query string, trimming a trailing slash. */
export function apiBaseFromQuery(search: string, fallback = DEFAULT_API_BASE): string {
  const value = new URLSearchParams(search).get("api");
  if (!value) return fallback;
  return value.endsWith("/") ? value.slice(0, -1) : value;
}
