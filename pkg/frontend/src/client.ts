import type {
  GameEvent,
  ReplaySeries,
  ServiceErrorBody,
  SessionRequest,
  Snapshot,
} from "./types.js";

/** A non-2xx service response, carrying the machine-parsable category. */
export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly category: string,
    message: string,
  ) {
    super(message);
    this.name = "ServiceError";
  }
}

async function throwServiceError(resp: Response): Promise<never> {
  let body: ServiceErrorBody = { category: "error", message: resp.statusText };
  try {
    const doc = await resp.json();
    if (doc && typeof doc.detail === "object" && doc.detail !== null) {
      body = doc.detail as ServiceErrorBody;
    }
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ServiceError(resp.status, body.category, body.message);
}

/** Thin typed wrapper over the live-session HTTP endpoints. */
export class ServiceClient {
  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return `${this.baseUrl.replace(/\/$/, "")}${path}`;
  }

  private async getJson<T>(path: string): Promise<T> {
    const resp = await fetch(this.url(path));
    if (!resp.ok) await throwServiceError(resp);
    return (await resp.json()) as T;
  }

  private async postJson<T>(path: string, body: unknown): Promise<T> {
    const resp = await fetch(this.url(path), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!resp.ok) await throwServiceError(resp);
    return (await resp.json()) as T;
  }

  health(): Promise<{ status: string; sessions: number }> {
    return this.getJson("/healthz");
  }

  createSession(
    req: SessionRequest,
  ): Promise<{ session_id: string; snapshot: Snapshot }> {
    return this.postJson("/sessions", req);
  }

  postEvent(sessionId: string, event: GameEvent): Promise<Snapshot> {
    return this.postJson(`/sessions/${sessionId}/events`, event);
  }

  getState(sessionId: string): Promise<Snapshot> {
    return this.getJson(`/sessions/${sessionId}/state`);
  }

  getReplay(sessionId: string): Promise<ReplaySeries> {
    return this.getJson(`/sessions/${sessionId}/replay`);
  }

  /**
   * Subscribe to the server-push snapshot stream (SSE).  Returns a stop
   * function.  Works in both browsers and node via fetch streaming.
   */
  subscribe(
    sessionId: string,
    onSnapshot: (snap: Snapshot) => void,
    limit?: number,
  ): () => void {
    const controller = new AbortController();
    const query = limit === undefined ? "" : `?limit=${limit}`;
    (async () => {
      const resp = await fetch(
        this.url(`/sessions/${sessionId}/stream${query}`),
        { signal: controller.signal },
      );
      if (!resp.ok || resp.body === null) return;
      const reader = resp.body.getReader();
      const decoder = new TextDecoder();
      let buffer = "";
      for (;;) {
        const { done, value } = await reader.read();
        if (done) break;
        buffer += decoder.decode(value, { stream: true });
        let idx: number;
        while ((idx = buffer.indexOf("\n\n")) >= 0) {
          const frame = buffer.slice(0, idx);
          buffer = buffer.slice(idx + 2);
          for (const line of frame.split("\n")) {
            if (line.startsWith("data: ")) {
              onSnapshot(JSON.parse(line.slice(6)) as Snapshot);
            }
          }
        }
      }
    })().catch(() => {
      /* aborted or connection closed */
    });
    return () => controller.abort();
  }
}
