/** Typed client for the query service; the console's only network surface. */

export interface LabelCount {
  label: string;
  count: number;
}

export interface SessionLog {
  log_id: string;
  name: string;
  trace_count: number;
  variant_count: number;
  labels: LabelCount[];
  dropped_starts: number;
}

export interface TokenSpan {
  start: number;
  end: number;
  class: string;
}

export interface ParsePosition {
  offset: number;
  line: number;
  column: number;
  message: string;
}

export interface ParseFeedback {
  ok: boolean;
  leaves?: number;
  formatted?: string;
  error?: ParsePosition;
  tokens: TokenSpan[];
}

export interface VariantNode {
  id: string;
  label: string;
}

export interface VariantDag {
  key: string;
  count: number;
  nodes: VariantNode[];
  edges: [string, string][];
}

export interface QueryResponse {
  log_id: string;
  query: string;
  mode: string;
  trace_count: number;
  variant_count: number;
  matched_trace_count: number;
  matched_variant_count: number;
  matched_trace_ids: string[];
  matched_variants: VariantDag[];
  metrics: {
    total_leaves: number;
    median_leaves_evaluated: number;
    wall_time_ms: number;
  };
}

export interface ApiErrorBody {
  error: {
    code: string;
    message: string;
    position?: ParsePosition;
  };
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly body: ApiErrorBody | null,
  ) {
    super(body?.error?.message ?? `request failed with status ${status}`);
  }
}

async function asJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let body: ApiErrorBody | null = null;
    try {
      body = (await response.json()) as ApiErrorBody;
    } catch {
      body = null;
    }
    throw new ApiError(response.status, body);
  }
  return (await response.json()) as T;
}

export class Client {
  constructor(readonly baseUrl: string = "") {}

  async uploadLog(file: File): Promise<SessionLog> {
    const form = new FormData();
    form.append("file", file, file.name);
    const response = await fetch(`${this.baseUrl}/logs`, {
      method: "POST",
      body: form,
    });
    return asJson<SessionLog>(response);
  }

  async parseQuery(text: string, signal?: AbortSignal): Promise<ParseFeedback> {
    const response = await fetch(`${this.baseUrl}/query/parse`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ text }),
      signal,
    });
    return asJson<ParseFeedback>(response);
  }

  async runQuery(
    logId: string,
    text: string,
    signal?: AbortSignal,
  ): Promise<QueryResponse> {
    const response = await fetch(`${this.baseUrl}/logs/${logId}/query`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ text, mode: "short" }),
      signal,
    });
    return asJson<QueryResponse>(response);
  }
}
