/** Mirrors the payload shapes published in docs/schemas. */

export interface Citation {
  chunk_id: string;
  doc_id: string;
  doc_title: string;
  title_path: string[];
  page_start: number;
  page_end: number;
}

export interface HallucinationMark {
  span: [number, number];
  quoted_text: string;
  reason: string;
  corrected_text: string | null;
}

export interface StageEntry {
  stage: string;
  status: "ok" | "degraded" | "skipped" | "error";
  flags: string[];
}

export interface AnswerBundle {
  question: string;
  answer: string;
  intent: string;
  citations: Citation[];
  sql: SqlRunResult | null;
  hallucination_marks: HallucinationMark[];
  corrected_answer: string | null;
  stages: StageEntry[];
}

export interface Violation {
  code: string;
  detail: string;
}

export interface ValidationReport {
  verdict: "pass" | "fail";
  violations: Violation[];
}

export interface QueryResult {
  columns: { name: string; alias: string }[];
  rows: unknown[][];
  row_count: number;
}

export interface SqlRunResult {
  question: string;
  sql: string | null;
  validation: ValidationReport | null;
  result?: QueryResult | null;
  time_info?: Record<string, string>;
  tables?: string[];
  repairs?: unknown[];
  flags?: string[];
  message?: string | null;
}

/** 409 body when the repair loop gives up. */
export interface SqlErrorResponse {
  detail: string;
  validation: ValidationReport | null;
}

export interface Chunk {
  chunk_id: string;
  doc_id: string;
  doc_title?: string;
  title_path: string[];
  body: string;
  provenance: { page_start: number; page_end: number; paragraph_indices: number[] };
  modality: string;
  version: number;
}

export interface ReportEntry {
  dimension_id: string;
  title: string;
  analysis: string | null;
  evidence: Citation[];
  hallucination_marks: HallucinationMark[];
  assessment: string | null;
  score: number | null;
  flags: string[];
}

export interface AnalysisReport {
  doc_id: string;
  profile: {
    name: string | null;
    sector: string | null;
    report_year: number | null;
    scopes_reported: string[];
  };
  entries: ReportEntry[];
  metadata: Record<string, unknown>;
}

export interface ChangeSet {
  doc_id: string;
  from_version: number;
  to_version: number;
  added_chunks: string[];
  removed_chunks: string[];
  modified_chunks: [string, string][];
}

export interface SseEvent {
  event: string;
  data: unknown;
}
