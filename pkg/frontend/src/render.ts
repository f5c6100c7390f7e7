/** Pure HTML renderers for assessment results, errors and comparisons.
 *
 * Each function returns a markup string assembled only from the /assess
 * JSON, so the views are unit-testable without a browser and the UI never
 * recomputes features client-side.
 */

import { LEVELS } from "./types";
import type {
  ApiErrorState,
  AssessmentResult,
  FeatureEntry,
  SubmissionHistoryEntry,
} from "./types";

export function escapeHtml(raw: string): string {
  return raw
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function formatValue(value: number | null): string {
  if (value === null) return "imputed";
  if (Number.isInteger(value)) return String(value);
  return value.toFixed(2);
}

/** Level whose training mean sits closest to the document's value. */
export function nearestLevel(entry: FeatureEntry): string | null {
  if (entry.value === null) return null;
  let best: string | null = null;
  let bestDistance = Infinity;
  for (const level of LEVELS) {
    const mean = entry.training_level_means[level];
    if (mean === undefined || Number.isNaN(mean)) continue;
    const distance = Math.abs(entry.value - mean);
    if (distance < bestDistance) {
      bestDistance = distance;
      best = level;
    }
  }
  return best;
}

function levelBadge(label: string, level: string, extraClass = ""): string {
  return (
    `<span class="badge level-${escapeHtml(level)} ${extraClass}">` +
    `<span class="badge-label">${escapeHtml(label)}</span>` +
    `<span class="badge-level">${escapeHtml(level)}</span></span>`
  );
}

export function renderFeatureTable(result: AssessmentResult): string {
  const rows = Object.entries(result.feature_report)
    .sort(([a], [b]) => a.localeCompare(b))
    .map(([featureId, entry]) => {
      const closest = nearestLevel(entry);
      const meanCells = LEVELS.map((level) => {
        const mean = entry.training_level_means[level];
        const text = mean === undefined || Number.isNaN(mean) ? "-" : mean.toFixed(2);
        const cls = level === closest ? ' class="nearest"' : "";
        return `<td${cls}>${text}</td>`;
      }).join("");
      const valueClass = entry.degenerate ? ' class="degenerate"' : "";
      return (
        `<tr data-feature="${escapeHtml(featureId)}">` +
        `<th>${escapeHtml(featureId)}</th>` +
        `<td${valueClass}>${formatValue(entry.value)}</td>` +
        meanCells +
        "</tr>"
      );
    });
  return (
    '<table class="feature-table"><thead><tr><th>feature</th><th>your text</th>' +
    LEVELS.map((l) => `<th>${l} mean</th>`).join("") +
    "</tr></thead><tbody>" +
    rows.join("") +
    "</tbody></table>"
  );
}

export function renderWarnings(warnings: string[]): string {
  if (warnings.length === 0) return "";
  const items = warnings.map((w) => `<li>${escapeHtml(w)}</li>`).join("");
  return `<div class="warnings"><strong>Notes</strong><ul>${items}</ul></div>`;
}

export function renderAssessment(result: AssessmentResult): string {
  const subBadges = Object.entries(result.sub_levels)
    .sort(([a], [b]) => a.localeCompare(b))
    .map(([category, level]) => levelBadge(category, level, "sub-badge"))
    .join("");
  return (
    '<section class="assessment">' +
    '<div class="badges">' +
    levelBadge("overall", result.overall_level, "overall-badge") +
    subBadges +
    "</div>" +
    `<p class="meta">${result.word_count} words</p>` +
    renderWarnings(result.warnings) +
    renderFeatureTable(result) +
    "</section>"
  );
}

export function renderError(error: ApiErrorState): string {
  const status = error.status === null ? "connection problem" : `status ${error.status}`;
  const retry = '<button type="button" data-action="retry">Try again</button>';
  return (
    '<section class="error-state">' +
    `<p class="error-title">Assessment failed (${escapeHtml(status)})</p>` +
    `<p class="error-message">${escapeHtml(error.message)}</p>` +
    retry +
    "</section>"
  );
}

export function renderPending(): string {
  return '<section class="pending"><p>Assessing…</p></section>';
}

export function renderHistoryList(
  entries: readonly SubmissionHistoryEntry[],
  selected: number | null,
): string {
  if (entries.length === 0) {
    return '<p class="history-empty">No submissions yet.</p>';
  }
  const items = entries
    .map((entry, index) => {
      const cls = index === selected ? ' class="selected"' : "";
      return (
        `<li${cls}><button type="button" data-action="compare" data-index="${index}">` +
        `${escapeHtml(entry.timestamp)} — ${entry.result.overall_level}` +
        "</button></li>"
      );
    })
    .join("");
  return `<ol class="history">${items}</ol>`;
}

/** Side-by-side delta of two submissions, newest last. */
export function renderComparison(
  before: SubmissionHistoryEntry,
  after: SubmissionHistoryEntry,
): string {
  const featureIds = Array.from(
    new Set([
      ...Object.keys(before.result.feature_report),
      ...Object.keys(after.result.feature_report),
    ]),
  ).sort();
  const rows = featureIds.map((featureId) => {
    const a = before.result.feature_report[featureId]?.value ?? null;
    const b = after.result.feature_report[featureId]?.value ?? null;
    let delta = "-";
    let deltaClass = "";
    if (a !== null && b !== null) {
      const diff = b - a;
      delta = `${diff >= 0 ? "+" : ""}${diff.toFixed(2)}`;
      deltaClass = diff > 0 ? ' class="up"' : diff < 0 ? ' class="down"' : "";
    }
    return (
      `<tr data-feature="${escapeHtml(featureId)}"><th>${escapeHtml(featureId)}</th>` +
      `<td>${formatValue(a)}</td><td>${formatValue(b)}</td><td${deltaClass}>${delta}</td></tr>`
    );
  });
  return (
    '<section class="comparison">' +
    `<p>${escapeHtml(before.timestamp)} (${before.result.overall_level}) vs ` +
    `${escapeHtml(after.timestamp)} (${after.result.overall_level})</p>` +
    '<table class="comparison-table"><thead><tr><th>feature</th><th>earlier</th>' +
    "<th>later</th><th>change</th></tr></thead><tbody>" +
    rows.join("") +
    "</tbody></table></section>"
  );
}
