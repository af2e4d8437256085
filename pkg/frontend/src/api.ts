/** Typed client over the engine's HTTP API.
 *
 * executeApprovedSql is the only code path that sends execute=true; the
 * proposal call always sends false, so the server-side approval gate is
 * matched by construction on the client.
 */

import type {
  AnalysisReport,
  AnswerBundle,
  ChangeSet,
  Chunk,
  SqlErrorResponse,
  SqlRunResult,
  SseEvent,
  StageEntry,
} from "./types.js";

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public status: number,
    public body: unknown,
  ) {
    super(`API error ${status}`);
  }
}

export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async post<T>(path: string, body: unknown): Promise<T> {
    const resp = await this.fetchImpl(this.baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    const payload = await resp.json();
    if (!resp.ok) throw new ApiError(resp.status, payload);
    return payload as T;
  }

  private async get<T>(path: string): Promise<T> {
    const resp = await this.fetchImpl(this.baseUrl + path);
    const payload = await resp.json();
    if (!resp.ok) throw new ApiError(resp.status, payload);
    return payload as T;
  }

  query(question: string): Promise<AnswerBundle> {
    return this.post<AnswerBundle>("/query", { question });
  }

  chunk(chunkId: string): Promise<Chunk> {
    return this.get<Chunk>(`/chunks/${encodeURIComponent(chunkId)}`);
  }

  /** Generation + validation only: the approval step. */
  proposeSql(question: string): Promise<SqlRunResult> {
    return this.post<SqlRunResult>("/sql", { question, execute: false });
  }

  /** The single execute=true path; call only from the Execute button. */
  executeApprovedSql(question: string): Promise<SqlRunResult> {
    return this.post<SqlRunResult>("/sql", { question, execute: true });
  }

  analyze(docId: string, mode: "summary" | "evaluate" | "both" = "both"): Promise<AnalysisReport> {
    return this.post<AnalysisReport>(`/reports/${encodeURIComponent(docId)}/analyze`, { mode });
  }

  diff(docId: string, from: number, to: number): Promise<ChangeSet> {
    return this.get<ChangeSet>(`/reports/${encodeURIComponent(docId)}/diff?from=${from}&to=${to}`);
  }

  /** Stream a query; onStage fires per stage event; resolves with the bundle. */
  async streamQuery(
    question: string,
    onStage: (stage: StageEntry) => void,
  ): Promise<AnswerBundle> {
    const resp = await this.fetchImpl(this.baseUrl + "/query", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ question, stream: true }),
    });
    if (!resp.ok || !resp.body) throw new ApiError(resp.status, await resp.text());
    const reader = resp.body.getReader();
    const decoder = new TextDecoder();
    let buffer = "";
    let result: AnswerBundle | null = null;
    for (;;) {
      const { done, value } = await reader.read();
      if (done) break;
      buffer += decoder.decode(value, { stream: true });
      const events = parseSse(buffer);
      buffer = events.rest;
      for (const event of events.events) {
        if (event.event === "stage") onStage(event.data as StageEntry);
        if (event.event === "result") result = event.data as AnswerBundle;
        if (event.event === "error") throw new ApiError(502, event.data);
      }
    }
    if (!result) throw new ApiError(502, { detail: "stream ended without a result" });
    return result;
  }
}

/** Parse complete SSE frames out of a buffer; returns leftover partial text. */
export function parseSse(buffer: string): { events: SseEvent[]; rest: string } {
  const events: SseEvent[] = [];
  const frames = buffer.split("\n\n");
  const rest = frames.pop() ?? "";
  for (const frame of frames) {
    let eventName = "message";
    const dataLines: string[] = [];
    for (const line of frame.split("\n")) {
      if (line.startsWith("event: ")) eventName = line.slice(7).trim();
      else if (line.startsWith("data: ")) dataLines.push(line.slice(6));
    }
    if (dataLines.length) {
      events.push({ event: eventName, data: JSON.parse(dataLines.join("\n")) });
    }
  }
  return { events, rest };
}

export type { SqlErrorResponse };
