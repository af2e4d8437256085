/** DOM wiring for the console: chat, SQL approval, dashboard tabs. */

import { ApiClient, ApiError } from "./api.js";
import {
  renderAnswer,
  renderDashboard,
  renderDiff,
  renderDrawer,
  renderHoverCard,
  renderResultTable,
  renderSqlError,
  renderSqlPanel,
  renderStages,
} from "./render.js";
import { ConsoleSession } from "./state.js";
import type { AnalysisReport, SqlErrorResponse, StageEntry } from "./types.js";

const api = new ApiClient("");
const session = new ConsoleSession();
let currentReport: AnalysisReport | null = null;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function showError(target: HTMLElement, err: unknown): void {
  const detail =
    err instanceof ApiError ? JSON.stringify(err.body) : err instanceof Error ? err.message : String(err);
  target.insertAdjacentHTML("beforeend", `<p class="error">${detail.replace(/</g, "&lt;")}</p>`);
}

// -- chat ----------------------------------------------------------------------

function wireChat(): void {
  const form = el<HTMLFormElement>("chat-form");
  const input = el<HTMLInputElement>("chat-input");
  const log = el<HTMLDivElement>("chat-log");
  const stagesBox = el<HTMLDivElement>("chat-stages");

  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    const question = input.value.trim();
    if (!question) return;
    input.value = "";
    stagesBox.innerHTML = "";
    const live: StageEntry[] = [];
    try {
      const bundle = await api.streamQuery(question, (stage) => {
        live.push(stage);
        stagesBox.innerHTML = renderStages(live);
      });
      session.recordAnswer(question, bundle);
      log.insertAdjacentHTML("beforeend", renderAnswer(bundle));
      wireCitations(log);
    } catch (err) {
      showError(log, err);
    }
  });
}

function wireCitations(root: HTMLElement): void {
  root.querySelectorAll<HTMLAnchorElement>("a.citation:not([data-wired])").forEach((link) => {
    link.dataset.wired = "1";
    const chunkId = link.dataset.chunkId ?? "";
    const card = root.querySelector<HTMLElement>(`[data-card-for="${CSS.escape(chunkId)}"]`);
    link.addEventListener("mouseenter", async () => {
      if (!card || card.dataset.loaded) return;
      try {
        const chunk = await api.chunk(chunkId);
        card.innerHTML = renderHoverCard(chunk);
        card.dataset.loaded = "1";
      } catch {
        card.textContent = "chunk unavailable";
      }
    });
    link.addEventListener("click", (e) => e.preventDefault());
  });
}

// -- SQL approval ----------------------------------------------------------------

function wireSql(): void {
  const form = el<HTMLFormElement>("sql-form");
  const input = el<HTMLInputElement>("sql-input");
  const panel = el<HTMLDivElement>("sql-panel");
  const resultBox = el<HTMLDivElement>("sql-result");

  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    const question = input.value.trim();
    if (!question) return;
    resultBox.innerHTML = "";
    try {
      const proposal = await api.proposeSql(question);
      session.setProposal(question, proposal);
      panel.innerHTML = renderSqlPanel(proposal);
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        const body = err.body as SqlErrorResponse;
        session.setProposalError(question, body);
        panel.innerHTML = renderSqlError(body);
      } else {
        panel.innerHTML = "";
        showError(panel, err);
        return;
      }
    }
    const button = panel.querySelector<HTMLButtonElement>("#execute-sql");
    // the Execute click is the only path that requests execution
    button?.addEventListener("click", async () => {
      if (!session.executionAllowed() || !session.pendingSql) return;
      try {
        const executed = await api.executeApprovedSql(session.pendingSql.question);
        if (executed.result) resultBox.innerHTML = renderResultTable(executed.result);
        if (executed.message) {
          resultBox.insertAdjacentHTML("beforeend", `<p class="guidance">${executed.message}</p>`);
        }
      } catch (err) {
        showError(resultBox, err);
      }
    });
  });
}

// -- dashboard ---------------------------------------------------------------------

function wireDashboard(): void {
  const form = el<HTMLFormElement>("report-form");
  const input = el<HTMLInputElement>("report-input");
  const board = el<HTMLDivElement>("dashboard");
  const drawer = el<HTMLDivElement>("drawer");
  const diffForm = el<HTMLFormElement>("diff-form");
  const diffBox = el<HTMLDivElement>("diff-view");

  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    const docId = input.value.trim();
    if (!docId) return;
    try {
      currentReport = await api.analyze(docId, "both");
      session.activeReport = docId;
      board.innerHTML = renderDashboard(currentReport);
      drawer.innerHTML = "";
      board.querySelectorAll<HTMLElement>(".dim-row").forEach((row) => {
        row.addEventListener("click", () => {
          const entry = currentReport?.entries.find(
            (e) => e.dimension_id === row.dataset.dimension,
          );
          if (entry) drawer.innerHTML = renderDrawer(entry);
        });
      });
    } catch (err) {
      board.innerHTML = "";
      showError(board, err);
    }
  });

  diffForm.addEventListener("submit", async (event) => {
    event.preventDefault();
    if (!session.activeReport) return;
    const from = Number(el<HTMLInputElement>("diff-from").value);
    const to = Number(el<HTMLInputElement>("diff-to").value);
    try {
      const changeset = await api.diff(session.activeReport, from, to);
      diffBox.innerHTML = renderDiff(changeset);
    } catch (err) {
      diffBox.innerHTML = "";
      showError(diffBox, err);
    }
  });
}

function wireTabs(): void {
  document.querySelectorAll<HTMLButtonElement>("nav button").forEach((button) => {
    button.addEventListener("click", () => {
      document.querySelectorAll("main > section").forEach((s) => s.classList.add("hidden"));
      el(button.dataset.target ?? "").classList.remove("hidden");
    });
  });
}

wireTabs();
wireChat();
wireSql();
wireDashboard();
