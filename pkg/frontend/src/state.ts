/** Client-side session state: history, active report, pending SQL proposal. */

import type { AnswerBundle, SqlErrorResponse, SqlRunResult } from "./types.js";
import { canExecute } from "./render.js";

export interface PendingSql {
  question: string;
  proposal: SqlRunResult | null;
  error: SqlErrorResponse | null;
}

export class ConsoleSession {
  history: { question: string; bundle: AnswerBundle }[] = [];
  activeReport: string | null = null;
  pendingSql: PendingSql | null = null;

  recordAnswer(question: string, bundle: AnswerBundle): void {
    this.history.push({ question, bundle });
  }

  setProposal(question: string, proposal: SqlRunResult): void {
    this.pendingSql = { question, proposal, error: null };
  }

  setProposalError(question: string, error: SqlErrorResponse): void {
    this.pendingSql = { question, proposal: null, error };
  }

  /** The Execute button's gate: a pending proposal with a passing report. */
  executionAllowed(): boolean {
    return !!this.pendingSql?.proposal && canExecute(this.pendingSql.proposal.validation);
  }

  clearProposal(): void {
    this.pendingSql = null;
  }
}
