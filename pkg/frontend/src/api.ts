/** Fetch client for the session API. Every derived number the UI shows
 * travels through here; the client never post-processes values. */

import type {
  ApiErrorBody,
  ChartPayload,
  ChartVariant,
  RecordPayload,
  SessionPayload,
} from "./types.js";

export class ApiRequestError extends Error {
  constructor(
    public status: number,
    public body: ApiErrorBody,
  ) {
    super(body.message);
    this.name = "ApiRequestError";
  }
}

export interface CreateSessionBody {
  kind: string;
  n?: number;
  fitness?: number[];
  migration_rate?: number;
  migrant_freq?: number;
  generations?: number;
  seed?: number;
  mode?: string;
  p0?: number;
}

export interface EnterCountsBody {
  AA: number;
  Aa: number;
  aa: number;
  t?: number;
  note?: string;
}

export interface MutationResponse {
  record: RecordPayload;
  session: SessionPayload;
}

export class LabApi {
  constructor(private readonly base: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.base + path, {
      headers: { "Content-Type": "application/json" },
      ...init,
    });
    const payload = (await response.json()) as Record<string, unknown>;
    if (!response.ok) {
      const error = (payload["error"] ?? {
        code: "unknown",
        message: `request failed with status ${response.status}`,
      }) as ApiErrorBody;
      throw new ApiRequestError(response.status, error);
    }
    return payload as T;
  }

  async createSession(body: CreateSessionBody): Promise<SessionPayload> {
    const data = await this.request<{ session: SessionPayload }>("/api/sessions", {
      method: "POST",
      body: JSON.stringify(body),
    });
    return data.session;
  }

  async fetchSession(id: string): Promise<SessionPayload> {
    const data = await this.request<{ session: SessionPayload }>(
      `/api/sessions/${encodeURIComponent(id)}`,
    );
    return data.session;
  }

  async enterCounts(id: string, body: EnterCountsBody): Promise<MutationResponse> {
    return this.request<MutationResponse>(
      `/api/sessions/${encodeURIComponent(id)}/generations`,
      { method: "POST", body: JSON.stringify(body) },
    );
  }

  async autoStep(id: string): Promise<MutationResponse> {
    return this.request<MutationResponse>(
      `/api/sessions/${encodeURIComponent(id)}/auto-step`,
      { method: "POST" },
    );
  }

  async chart(id: string, variant: ChartVariant): Promise<ChartPayload> {
    const data = await this.request<{ chart: ChartPayload }>(
      `/api/sessions/${encodeURIComponent(id)}/charts?variant=${variant}`,
    );
    return data.chart;
  }

  exportUrl(id: string): string {
    return `${this.base}/api/sessions/${encodeURIComponent(id)}/export.csv`;
  }
}
