import type { DecisionResult, PendingPage, QueueStats } from "./types.js";

export class ApiError extends Error {
  constructor(
    message: string,
    public readonly status: number,
  ) {
    super(message);
  }
}

export type FetchLike = typeof fetch;

/** Thin client over the review service JSON API. */
export class ReviewClient {
  constructor(
    private readonly fetchImpl: FetchLike = fetch,
    private readonly base: string = "",
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await this.fetchImpl(`${this.base}${path}`, init);
    if (!res.ok) {
      let detail = `${res.status}`;
      try {
        const body = await res.json();
        if (body && body.error) detail = body.error;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(detail, res.status);
    }
    return res.json() as Promise<T>;
  }

  listPending(limit = 10, offset = 0): Promise<PendingPage> {
    return this.request<PendingPage>(`/api/pending?limit=${limit}&offset=${offset}`);
  }

  submitDecision(
    pendingId: string,
    action: "choose" | "reject_all",
    reviewer: string,
    mcid?: string,
  ): Promise<DecisionResult> {
    return this.request<DecisionResult>(`/api/pending/${pendingId}/decision`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ action, mcid: mcid ?? null, reviewer }),
    });
  }

  stats(): Promise<QueueStats> {
    return this.request<QueueStats>("/api/stats");
  }
}
