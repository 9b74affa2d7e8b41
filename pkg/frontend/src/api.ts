// Typed client for the QA service REST API.

export interface SourceRow {
  doc_id: string;
  article_number: number | null;
  score: number;
}

export interface ChatReply {
  answer: string;
  sources: SourceRow[];
  timing_ms: number;
}

export interface HealthReply {
  status: string;
  index_entries: number;
}

export type LanguageHint = "ar" | "en";

/** Failure carrying the service's {"error": {code, message}} envelope. */
export class ApiError extends Error {
  constructor(
    readonly code: string,
    message: string,
    /** HTTP status, or null when the request never reached the service. */
    readonly status: number | null,
  ) {
    super(message);
    this.name = "ApiError";
  }

  /** True when trying again could help (network down, provider outage). */
  get retryable(): boolean {
    return this.status === null || this.status >= 500;
  }
}

type FetchFn = (input: string, init?: RequestInit) => Promise<Response>;

async function envelopeError(res: Response): Promise<ApiError> {
  try {
    const body = (await res.json()) as { error?: { code?: unknown; message?: unknown } };
    const err = body?.error;
    if (err && typeof err.code === "string") {
      return new ApiError(err.code, String(err.message ?? ""), res.status);
    }
  } catch {
    // not the envelope; fall through to a generic error
  }
  return new ApiError(`http_${res.status}`, res.statusText || "request failed", res.status);
}

export class ApiClient {
  private readonly fetchFn: FetchFn;

  constructor(
    private readonly baseUrl: string = "",
    fetchFn?: FetchFn,
  ) {
    // fetch must be called with the global as its receiver
    this.fetchFn = fetchFn ?? ((input, init) => globalThis.fetch(input, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let res: Response;
    try {
      res = await this.fetchFn(this.baseUrl + path, init);
    } catch (exc) {
      const detail = exc instanceof Error ? exc.message : String(exc);
      throw new ApiError("network", detail, null);
    }
    if (!res.ok) throw await envelopeError(res);
    return (await res.json()) as T;
  }

  health(): Promise<HealthReply> {
    return this.request<HealthReply>("/api/health");
  }

  corpusStats(): Promise<Record<string, number>> {
    return this.request<Record<string, number>>("/api/corpus/stats");
  }

  chat(question: string, languageHint?: LanguageHint): Promise<ChatReply> {
    const payload: Record<string, unknown> = { question };
    if (languageHint !== undefined) payload.language_hint = languageHint;
    return this.request<ChatReply>("/api/chat", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
  }
}
