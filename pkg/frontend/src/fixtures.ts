/** Hand-built assessment fixtures shared by the test modules. */

import type { AssessmentResult } from "./types";

export function fixtureResult(overrides: Partial<AssessmentResult> = {}): AssessmentResult {
  return {
    overall_level: "B1",
    sub_levels: { lexical: "B1", morphological: "A2", surface: "B1" },
    word_count: 112,
    feature_report: {
      word_count: {
        value: 112,
        degenerate: false,
        training_level_means: { A2: 49.3, B1: 120.3, B2: 196.8, C1: 260.7 },
      },
      rttr: {
        value: 6.1,
        degenerate: false,
        training_level_means: { A2: 5.7, B1: 8.3, B2: 10.0, C1: 11.4 },
      },
      gram_edits_per_word: {
        value: null,
        degenerate: true,
        training_level_means: { A2: 0.04, B1: 0.02, B2: 0.012, C1: 0.008 },
      },
    },
    model_ids: { mixed: "models/mixed.json" },
    warnings: ["error features imputed with training means (no corrector output)"],
    ...overrides,
  };
}

export function revisedResult(): AssessmentResult {
  const base = fixtureResult({ overall_level: "B2" });
  base.feature_report = {
    ...base.feature_report,
    word_count: {
      value: 168,
      degenerate: false,
      training_level_means: { A2: 49.3, B1: 120.3, B2: 196.8, C1: 260.7 },
    },
    rttr: {
      value: 7.4,
      degenerate: false,
      training_level_means: { A2: 5.7, B1: 8.3, B2: 10.0, C1: 11.4 },
    },
  };
  return base;
}
