import { describe, expect, test } from "vitest";

import { describeStatus } from "./api";
import { fixtureResult, revisedResult } from "./fixtures";
import {
  escapeHtml,
  nearestLevel,
  renderAssessment,
  renderComparison,
  renderError,
  renderHistoryList,
} from "./render";
import type { SubmissionHistoryEntry } from "./types";

describe("renderAssessment", () => {
  test("shows the overall badge and all three sub-rating badges", () => {
    const html = renderAssessment(fixtureResult());
    expect(html).toContain("overall-badge");
    expect(html).toContain(">B1<");
    for (const category of ["lexical", "morphological", "surface"]) {
      expect(html).toContain(category);
    }
    expect((html.match(/sub-badge/g) ?? []).length).toBe(3);
  });

  test("feature table positions the document against level means", () => {
    const html = renderAssessment(fixtureResult());
    expect(html).toContain('data-feature="word_count"');
    expect(html).toContain("A2 mean");
    // 112 words sit closest to the B1 mean of 120.3
    expect(html).toContain('class="nearest">120.30');
  });

  test("degenerate features render as imputed, not as numbers", () => {
    const html = renderAssessment(fixtureResult());
    expect(html).toContain('class="degenerate">imputed');
  });

  test("warnings panel is visible when warnings exist", () => {
    const html = renderAssessment(fixtureResult());
    expect(html).toContain("warnings");
    expect(html).toContain("error features imputed");
    const none = renderAssessment(fixtureResult({ warnings: [] }));
    expect(none).not.toContain('class="warnings"');
  });

  test("escapes markup coming from the server", () => {
    const hostile = fixtureResult({ warnings: ["<script>alert(1)</script>"] });
    const html = renderAssessment(hostile);
    expect(html).not.toContain("<script>alert");
    expect(html).toContain("&lt;script&gt;");
  });
});

describe("nearestLevel", () => {
  test("finds the closest training mean", () => {
    const entry = fixtureResult().feature_report["word_count"];
    expect(nearestLevel(entry)).toBe("B1");
  });

  test("degenerate values have no position", () => {
    const entry = fixtureResult().feature_report["gram_edits_per_word"];
    expect(nearestLevel(entry)).toBeNull();
  });
});

describe("renderError", () => {
  test.each([400, 422, 502, 503])("status %i produces a visible state", (status) => {
    const html = renderError(describeStatus(status));
    expect(html.length).toBeGreaterThan(80);
    expect(html).toContain("error-state");
    expect(html).toContain(`status ${status}`);
    expect(html).toContain('data-action="retry"');
  });

  test("network failures render with a retry affordance too", () => {
    const html = renderError({
      kind: "network",
      status: null,
      message: "Could not reach the assessment service.",
      retriable: true,
    });
    expect(html).toContain("connection problem");
    expect(html).toContain('data-action="retry"');
  });
});

describe("renderComparison", () => {
  const entries: SubmissionHistoryEntry[] = [
    { timestamp: "2026-01-10T10:00:00Z", input: { conllu: "a" }, result: fixtureResult() },
    { timestamp: "2026-01-10T10:20:00Z", input: { conllu: "b" }, result: revisedResult() },
  ];

  test("delta view shows per-feature value changes", () => {
    const html = renderComparison(entries[0], entries[1]);
    expect(html).toContain('data-feature="word_count"');
    expect(html).toContain("+56.00");
    expect(html).toContain("+1.30");
    expect(html).toContain("B1");
    expect(html).toContain("B2");
  });

  test("features missing a value on either side show no delta", () => {
    const html = renderComparison(entries[0], entries[1]);
    expect(html).toContain('data-feature="gram_edits_per_word"');
    expect(html).toMatch(/gram_edits_per_word[^<]*<\/th><td>imputed<\/td><td>imputed<\/td><td>-<\/td>/);
  });
});

describe("renderHistoryList", () => {
  test("empty history is an explicit message, never a blank pane", () => {
    expect(renderHistoryList([], null)).toContain("No submissions yet");
  });

  test("entries are selectable buttons", () => {
    const entries: SubmissionHistoryEntry[] = [
      { timestamp: "t1", input: {}, result: fixtureResult() },
      { timestamp: "t2", input: {}, result: revisedResult() },
    ];
    const html = renderHistoryList(entries, 1);
    expect(html).toContain('data-index="0"');
    expect((html.match(/data-action="compare"/g) ?? []).length).toBe(2);
    expect(html).toContain('class="selected"');
  });
});

describe("escapeHtml", () => {
  test("escapes the four html metacharacters", () => {
    expect(escapeHtml('<a href="x">&</a>')).toBe("&lt;a href=&quot;x&quot;&gt;&amp;&lt;/a&gt;");
  });
});
