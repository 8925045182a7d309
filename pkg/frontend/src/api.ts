/**
 * Thin typed client for the /api/v1 routes.
 *
 * The fetch implementation is injectable so tests can replay recorded
 * payloads without a network. A non-2xx response becomes an ApiError
 * carrying the HTTP status and the server's detail message verbatim.
 */

import type { CardDoc, JobDoc, ModelDoc, SessionDoc } from "./types";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  readonly status: number;

  constructor(status: number, detail: string) {
    super(detail);
    this.status = status;
  }
}

async function detailOf(response: Response): Promise<string> {
  try {
    const body = await response.json();
    if (typeof body.detail === "string") return body.detail;
    return JSON.stringify(body.detail ?? body);
  } catch {
    return `HTTP ${response.status}`;
  }
}

export class ApiClient {
  private readonly base: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl = "", fetchFn: FetchLike = (u, i) => fetch(u, i)) {
    this.base = baseUrl.replace(/\/$/, "");
    this.fetchFn = fetchFn;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(`${this.base}/api/v1${path}`, init);
    if (!response.ok) {
      throw new ApiError(response.status, await detailOf(response));
    }
    return (await response.json()) as T;
  }

  getModel(): Promise<ModelDoc> {
    return this.request("GET", "/model");
  }

  getCards(): Promise<CardDoc[]> {
    return this.request("GET", "/cards");
  }

  getCard(modelId: string, version: number): Promise<CardDoc> {
    return this.request("GET", `/cards/${modelId}/${version}`);
  }

  createSession(): Promise<SessionDoc> {
    return this.request("POST", "/sessions");
  }

  getSessionState(sessionId: string): Promise<SessionDoc> {
    return this.request("GET", `/sessions/${sessionId}/state`);
  }

  postDecision(sessionId: string, feature: string, value: boolean): Promise<SessionDoc> {
    return this.request("POST", `/sessions/${sessionId}/decisions`, { feature, value });
  }

  retractDecision(sessionId: string, feature: string): Promise<SessionDoc> {
    return this.request("DELETE", `/sessions/${sessionId}/decisions/${feature}`);
  }

  startOptimize(params: Record<string, number>): Promise<{ job_id: string }> {
    return this.request("POST", "/optimize", params);
  }

  getJob(jobId: string): Promise<JobDoc> {
    return this.request("GET", `/jobs/${jobId}`);
  }
}
