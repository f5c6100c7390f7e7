/** DOM wiring: submit handler, history selection, retry affordance.
 * All markup comes from the pure renderers in render.ts. */

import { AssessClient } from "./api";
import { SubmissionHistory } from "./history";
import {
  renderAssessment,
  renderComparison,
  renderError,
  renderHistoryList,
  renderPending,
} from "./render";
import type { SubmissionInput } from "./types";

const BASE_URL = (window as { CEFRKIT_API?: string }).CEFRKIT_API ?? "";

export function startApp(root: Document = document): void {
  const client = new AssessClient(BASE_URL);
  const history = new SubmissionHistory();

  const form = root.getElementById("submit-form") as HTMLFormElement;
  const textarea = root.getElementById("submission") as HTMLTextAreaElement;
  const mode = root.getElementById("input-mode") as HTMLSelectElement;
  const resultPane = root.getElementById("result") as HTMLElement;
  const historyPane = root.getElementById("history") as HTMLElement;
  const comparePane = root.getElementById("comparison") as HTMLElement;

  let lastInput: SubmissionInput | null = null;
  let selectedHistoryIndex: number | null = null;

  function refreshHistory(): void {
    historyPane.innerHTML = renderHistoryList(history.list(), selectedHistoryIndex);
  }

  async function runSubmission(input: SubmissionInput): Promise<void> {
    lastInput = input;
    resultPane.innerHTML = renderPending();
    const outcome = await client.submit(input);
    if (outcome.kind === "stale") {
      return; // a newer submission owns the result pane
    }
    if (outcome.kind === "error") {
      resultPane.innerHTML = renderError(outcome.error);
      return;
    }
    history.add(input, outcome.result);
    selectedHistoryIndex = null;
    comparePane.innerHTML = "";
    resultPane.innerHTML = renderAssessment(outcome.result);
    refreshHistory();
  }

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const raw = textarea.value;
    if (!raw.trim()) return;
    void runSubmission(mode.value === "conllu" ? { conllu: raw } : { text: raw });
  });

  resultPane.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    if (target.dataset.action === "retry" && lastInput) {
      void runSubmission(lastInput);
    }
  });

  historyPane.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    if (target.dataset.action !== "compare") return;
    const index = Number(target.dataset.index);
    const latest = history.length - 1;
    const earlier = history.get(index);
    const newest = history.get(latest);
    if (!earlier || !newest || index === latest) return;
    selectedHistoryIndex = index;
    comparePane.innerHTML = renderComparison(earlier, newest);
    refreshHistory();
  });

  refreshHistory();
}

if (typeof document !== "undefined" && document.getElementById("submit-form")) {
  startApp();
}
