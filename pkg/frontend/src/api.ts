// Thin client over the recommendation service HTTP API.

import type {
  GraphDocument,
  IngestStats,
  MatchResponse,
  RecommendResponse,
  ResultTableDocument,
  SpecDocument,
  VisualDocument,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

async function parseError(response: Response): Promise<never> {
  let code = "error";
  let message = `${response.status} ${response.statusText}`;
  try {
    const body = (await response.json()) as { code?: string; message?: string };
    if (body.code) code = body.code;
    if (body.message) message = body.message;
  } catch {
    // non-JSON error body; keep the status line
  }
  throw new ApiError(response.status, code, message);
}

export class ApiClient {
  private readonly base: string;
  private readonly fetchImpl: FetchLike;

  constructor(base = "", fetchImpl: FetchLike = (...args) => fetch(...args)) {
    this.base = base.replace(/\/$/, "");
    this.fetchImpl = fetchImpl;
  }

  private async json<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.base + path, init);
    if (!response.ok) await parseError(response);
    return (await response.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.json<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  getGraph(task: string): Promise<GraphDocument> {
    return this.json<GraphDocument>(`/graphs/${encodeURIComponent(task)}`);
  }

  evaluate(dataset: string, spec: SpecDocument): Promise<ResultTableDocument> {
    return this.post(`/datasets/${encodeURIComponent(dataset)}/evaluate`, { spec });
  }

  match(task: string, spec: SpecDocument, m: number): Promise<MatchResponse> {
    return this.post(`/graphs/${encodeURIComponent(task)}/match`, { spec, M: m });
  }

  recommend(
    task: string,
    spec: SpecDocument,
    options: {
      m?: number;
      thresholdMs?: number;
      dataset?: string;
      userPref?: VisualDocument;
      visited?: string[];
    } = {},
  ): Promise<RecommendResponse> {
    return this.post(`/graphs/${encodeURIComponent(task)}/recommend`, {
      spec,
      ...(options.m !== undefined ? { M: options.m } : {}),
      ...(options.thresholdMs !== undefined ? { T: options.thresholdMs } : {}),
      ...(options.dataset ? { dataset: options.dataset } : {}),
      ...(options.userPref ? { userPref: options.userPref } : {}),
      ...(options.visited ? { visited: options.visited } : {}),
    });
  }

  upvote(task: string, nodeId: string): Promise<{ nodeId: string; votes: number }> {
    return this.post(
      `/graphs/${encodeURIComponent(task)}/nodes/${encodeURIComponent(nodeId)}/upvote`,
      undefined,
    );
  }

  async recordEvents(body: string): Promise<number> {
    const result = await this.json<{ recorded: number }>("/sessions/events", {
      method: "POST",
      headers: { "Content-Type": "application/x-ndjson" },
      body,
    });
    return result.recorded;
  }

  ingestSequences(task: string, body: string): Promise<IngestStats> {
    return this.json<IngestStats>(`/graphs/${encodeURIComponent(task)}/sequences`, {
      method: "POST",
      headers: { "Content-Type": "application/x-ndjson" },
      body,
    });
  }
}
