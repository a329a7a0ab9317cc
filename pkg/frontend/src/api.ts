// Thin typed client over the local service. All endpoints return the
// service's JSON verbatim; errors carry the HTTP detail message.

import type { ExplanationResponse, RankingResponse, Verdict } from "./types.js";

export class ServiceError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchFn: typeof fetch = fetch,
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await this.fetchFn(`${this.baseUrl}${path}`, init);
    if (!res.ok) {
      let detail = res.statusText;
      try {
        detail = (await res.json()).detail ?? detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ServiceError(res.status, detail);
    }
    return res.json() as Promise<T>;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  createSession(spectrum: unknown, formula: string, granularity?: string, tiebreak?: string) {
    return this.post<{ session_id: string }>("/sessions", {
      spectrum,
      formula,
      ...(granularity ? { granularity } : {}),
      ...(tiebreak ? { tiebreak } : {}),
    });
  }

  getRanking(sessionId: string, opts: { limit?: number; granularity?: string } = {}) {
    const params = new URLSearchParams();
    if (opts.limit !== undefined) params.set("limit", String(opts.limit));
    if (opts.granularity !== undefined) params.set("granularity", opts.granularity);
    const query = params.toString();
    return this.request<RankingResponse>(
      `/sessions/${sessionId}/ranking${query ? `?${query}` : ""}`,
    );
  }

  postFeedback(sessionId: string, element: number, verdict: Verdict) {
    return this.post<RankingResponse>(`/sessions/${sessionId}/feedback`, {
      element,
      verdict,
    });
  }

  postReanalyze(sessionId: string, spectrum: unknown) {
    return this.post<RankingResponse>(`/sessions/${sessionId}/reanalyze`, { spectrum });
  }

  getExplanation(sessionId: string, element: number) {
    return this.request<ExplanationResponse>(
      `/sessions/${sessionId}/explanation?element=${element}`,
    );
  }

  exportSession(sessionId: string) {
    return this.request<Record<string, unknown>>(`/sessions/${sessionId}/export`);
  }
}
