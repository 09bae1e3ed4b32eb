/** Thin typed client for the session HTTP API, plus response-ordering guards.
 *
 * The UI never builds artifacts itself; every render is fed from one of
 * these calls. All calls are asynchronous; callers use `Ticketing` to
 * discard responses that arrive after a newer request has been issued.
 */

import type {
  ArtifactResponse,
  EditAction,
  Predicate,
  Schedule,
  SelectionResponse,
  SessionResponse,
  StateResponse,
  TreeNode,
  VisualDoc,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number,
    readonly detail: unknown,
  ) {
    super(message);
    this.name = "ApiError";
  }

  /** Validation report attached to a 409 action rejection, if any. */
  get violations(): { code: string; path: string; message: string }[] {
    const d = this.detail as { violations?: { code: string; path: string; message: string }[] };
    return d && Array.isArray(d.violations) ? d.violations : [];
  }

  /** Server-side version attached to a 409 stale-selection rejection. */
  get currentVersion(): number | null {
    const d = this.detail as { currentVersion?: number };
    return d && typeof d.currentVersion === "number" ? d.currentVersion : null;
  }
}

export class ApiClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchFn: typeof fetch = (...args) => fetch(...args),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const send = () =>
      this.fetchFn(this.baseUrl + path, {
        method,
        headers: body === undefined ? {} : { "content-type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    let res: Response;
    try {
      res = await send();
    } catch {
      // Transport-level failure (e.g. a kept-alive connection the server
      // closed mid-reuse): retry once before giving up.
      res = await send();
    }
    const text = await res.text();
    let doc: unknown = null;
    try {
      doc = text ? JSON.parse(text) : null;
    } catch {
      doc = text;
    }
    if (!res.ok) {
      const detail = (doc as { detail?: unknown })?.detail ?? doc;
      throw new ApiError(`${method} ${path} failed with ${res.status}`, res.status, detail);
    }
    return doc as T;
  }

  createSession(data: string, format = "csv"): Promise<SessionResponse> {
    return this.request("POST", "/sessions", { data, format });
  }

  getState(session: string): Promise<StateResponse> {
    return this.request("GET", `/sessions/${session}/state`);
  }

  postAction(session: string, action: EditAction): Promise<StateResponse> {
    return this.request("POST", `/sessions/${session}/actions`, action);
  }

  getVisual(session: string): Promise<ArtifactResponse<VisualDoc>> {
    return this.request("GET", `/sessions/${session}/artifacts/visual`);
  }

  getText(session: string): Promise<ArtifactResponse<TreeNode>> {
    return this.request("GET", `/sessions/${session}/artifacts/text`);
  }

  getAudio(session: string): Promise<ArtifactResponse<Schedule[]>> {
    return this.request("GET", `/sessions/${session}/artifacts/audio`);
  }

  postSelection(
    session: string,
    version: number,
    source: "visual" | "text" | "audio",
    predicate: Predicate,
  ): Promise<SelectionResponse> {
    return this.request("POST", `/sessions/${session}/selection`, {
      version,
      source,
      predicate,
    });
  }
}

/**
 * Monotone request ordering: each outbound request takes a ticket; a
 * response is applied only while its ticket is still the newest issued.
 * Responses raced out of order (e.g. during rapid tree navigation) are
 * discarded so the rendered state always reflects the latest request.
 */
export class Ticketing {
  private latest = 0;

  issue(): number {
    return ++this.latest;
  }

  isCurrent(ticket: number): boolean {
    return ticket === this.latest;
  }
}
