/** Pure HTML-string renderers.
 *
 * Every number shown comes verbatim from an API payload: the console never
 * aggregates or recomputes scores client-side.
 */

import type {
  AnalysisReport,
  AnswerBundle,
  ChangeSet,
  Chunk,
  QueryResult,
  ReportEntry,
  SqlErrorResponse,
  SqlRunResult,
  StageEntry,
  ValidationReport,
} from "./types.js";

export function escapeHtml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

export const NO_MATCH_GUIDANCE =
  "No matching content was found for this question. Check that it names the " +
  "company, year, or specific emission type you mean, then rephrase or contact " +
  "an administrator.";

/** Answer text with hallucination-marked spans highlighted. */
export function renderAnswerText(bundle: AnswerBundle): string {
  const answer = bundle.answer;
  if (!answer) {
    return `<p class="guidance">${escapeHtml(NO_MATCH_GUIDANCE)}</p>`;
  }
  const marks = [...bundle.hallucination_marks].sort((a, b) => a.span[0] - b.span[0]);
  let cursor = 0;
  let html = "";
  for (const mark of marks) {
    const [start, end] = mark.span;
    if (start < cursor || end > answer.length) continue; // out-of-band span: skip, never crash
    html += escapeHtml(answer.slice(cursor, start));
    html += `<mark class="hallucination" title="${escapeHtml(mark.reason)}">${escapeHtml(
      answer.slice(start, end),
    )}</mark>`;
    cursor = end;
  }
  html += escapeHtml(answer.slice(cursor));
  return `<p class="answer-text">${html}</p>`;
}

export function renderCitations(bundle: AnswerBundle): string {
  if (!bundle.citations.length) return "";
  const items = bundle.citations
    .map(
      (c, i) =>
        `<li><a href="#" class="citation" data-chunk-id="${escapeHtml(c.chunk_id)}">` +
        `[${i + 1}] ${escapeHtml(c.doc_title)} p.${c.page_start}` +
        (c.page_end !== c.page_start ? `-${c.page_end}` : "") +
        `</a><span class="hover-card" data-card-for="${escapeHtml(c.chunk_id)}"></span></li>`,
    )
    .join("");
  return `<ol class="citations">${items}</ol>`;
}

export function renderStages(stages: StageEntry[]): string {
  const items = stages
    .map(
      (s) =>
        `<li class="stage stage-${s.status}">${escapeHtml(s.stage)} <em>${s.status}</em>` +
        (s.flags.length ? ` <span class="flags">${escapeHtml(s.flags.join(", "))}</span>` : "") +
        `</li>`,
    )
    .join("");
  return `<ul class="stages">${items}</ul>`;
}

export function renderAnswer(bundle: AnswerBundle): string {
  const corrected =
    bundle.corrected_answer && bundle.corrected_answer !== bundle.answer
      ? `<div class="corrected"><h4>Corrected response</h4><p>${escapeHtml(bundle.corrected_answer)}</p></div>`
      : "";
  return (
    `<article class="answer" data-intent="${escapeHtml(bundle.intent)}">` +
    `<h3>${escapeHtml(bundle.question)}</h3>` +
    renderAnswerText(bundle) +
    corrected +
    renderCitations(bundle) +
    renderStages(bundle.stages) +
    `</article>`
  );
}

export function renderHoverCard(chunk: Chunk): string {
  const path = chunk.title_path.join(" › ");
  return (
    `<div class="card-body">` +
    `<strong>${escapeHtml(chunk.doc_title ?? chunk.doc_id)}</strong>` +
    (path ? `<div class="path">${escapeHtml(path)}</div>` : "") +
    `<div class="pages">p.${chunk.provenance.page_start}-${chunk.provenance.page_end}</div>` +
    `<blockquote>${escapeHtml(chunk.body)}</blockquote>` +
    `</div>`
  );
}

// -- SQL approval panel --------------------------------------------------------

export function canExecute(validation: ValidationReport | null | undefined): boolean {
  return !!validation && validation.verdict === "pass";
}

export function renderValidation(validation: ValidationReport | null): string {
  if (!validation) return `<p class="validation unknown">no validation report</p>`;
  if (validation.verdict === "pass") {
    return `<p class="validation pass">validation: pass</p>`;
  }
  const items = validation.violations
    .map((v) => `<li><code>${escapeHtml(v.code)}</code> ${escapeHtml(v.detail)}</li>`)
    .join("");
  return `<div class="validation fail"><p>validation: fail</p><ul>${items}</ul></div>`;
}

export function renderSqlPanel(proposal: SqlRunResult): string {
  const executable = canExecute(proposal.validation);
  return (
    `<section class="sql-panel">` +
    `<pre class="sql">${escapeHtml(proposal.sql ?? "(no SQL generated)")}</pre>` +
    renderValidation(proposal.validation) +
    `<button id="execute-sql" ${executable ? "" : "disabled"}>Execute</button>` +
    `</section>`
  );
}

export function renderSqlError(error: SqlErrorResponse): string {
  return (
    `<section class="sql-panel sql-error">` +
    `<p class="error">${escapeHtml(error.detail)}</p>` +
    renderValidation(error.validation) +
    `<button id="execute-sql" disabled>Execute</button>` +
    `</section>`
  );
}

export function renderResultTable(result: QueryResult): string {
  const head = result.columns.map((c) => `<th>${escapeHtml(c.alias)}</th>`).join("");
  const rows = result.rows
    .map(
      (row) =>
        `<tr>${row.map((v) => `<td>${escapeHtml(v === null ? "NULL" : String(v))}</td>`).join("")}</tr>`,
    )
    .join("");
  return (
    `<table class="result"><thead><tr>${head}</tr></thead>` +
    `<tbody>${rows}</tbody></table>` +
    `<p class="row-count">${result.row_count} row(s)</p>`
  );
}

// -- dashboard -----------------------------------------------------------------

export function renderScoreBar(entry: ReportEntry): string {
  const scored = entry.score !== null;
  const label = scored ? `${entry.score}/100` : "unscored";
  const width = scored ? entry.score : 0;
  return (
    `<div class="dim-row" data-dimension="${escapeHtml(entry.dimension_id)}">` +
    `<span class="dim-label">${escapeHtml(entry.dimension_id)} ${escapeHtml(entry.title)}</span>` +
    `<span class="bar-track"><span class="bar" data-score="${scored ? entry.score : ""}"` +
    ` style="width:${width}%"></span></span>` +
    `<span class="score">${label}</span>` +
    `</div>`
  );
}

export function renderDashboard(report: AnalysisReport): string {
  const bars = report.entries.map(renderScoreBar).join("");
  const name = report.profile.name ?? report.doc_id;
  const year = report.profile.report_year !== null ? ` (${report.profile.report_year})` : "";
  return (
    `<section class="dashboard">` +
    `<h2>${escapeHtml(name)}${escapeHtml(year)}</h2>` +
    `<div class="bars">${bars}</div>` +
    `</section>`
  );
}

export function renderDrawer(entry: ReportEntry): string {
  const marks = entry.hallucination_marks.length
    ? `<p class="marks">${entry.hallucination_marks.length} flagged statement(s)</p>`
    : "";
  const evidence = entry.evidence
    .map((c) => `<li>${escapeHtml(c.doc_title)} p.${c.page_start}-${c.page_end}</li>`)
    .join("");
  return (
    `<aside class="drawer" data-dimension="${escapeHtml(entry.dimension_id)}">` +
    `<h3>${escapeHtml(entry.dimension_id)}: ${escapeHtml(entry.title)}</h3>` +
    `<p>${escapeHtml(entry.analysis ?? "(no analysis)")}</p>` +
    (entry.assessment ? `<p class="assessment">${escapeHtml(entry.assessment)}</p>` : "") +
    marks +
    (evidence ? `<ul class="evidence">${evidence}</ul>` : "") +
    `</aside>`
  );
}

export function renderDiff(changeset: ChangeSet): string {
  const list = (ids: string[]) =>
    ids.map((id) => `<li><code>${escapeHtml(id)}</code></li>`).join("") || "<li>none</li>";
  const modified = changeset.modified_chunks
    .map(([a, b]) => `<li><code>${escapeHtml(a)}</code> → <code>${escapeHtml(b)}</code></li>`)
    .join("") || "<li>none</li>";
  return (
    `<section class="diff">` +
    `<h3>v${changeset.from_version} → v${changeset.to_version}</h3>` +
    `<h4>Added</h4><ul class="added">${list(changeset.added_chunks)}</ul>` +
    `<h4>Removed</h4><ul class="removed">${list(changeset.removed_chunks)}</ul>` +
    `<h4>Modified</h4><ul class="modified">${modified}</ul>` +
    `</section>`
  );
}
