/** Shapes of the assessment service JSON; the UI renders these and
 * never recomputes any feature or statistic client-side. */

export type Level = "A2" | "B1" | "B2" | "C1";

export const LEVELS: Level[] = ["A2", "B1", "B2", "C1"];

export interface FeatureEntry {
  value: number | null;
  degenerate: boolean;
  training_level_means: Record<string, number>;
}

export interface AssessmentResult {
  overall_level: Level;
  sub_levels: Record<string, Level>;
  word_count: number;
  feature_report: Record<string, FeatureEntry>;
  model_ids: Record<string, string>;
  warnings: string[];
}

export interface ApiErrorState {
  kind: "api" | "network";
  status: number | null;
  message: string;
  retriable: boolean;
}

export type SubmissionOutcome =
  | { kind: "ok"; result: AssessmentResult }
  | { kind: "error"; error: ApiErrorState }
  | { kind: "stale" };

export interface SubmissionInput {
  conllu?: string;
  text?: string;
}

export interface SubmissionHistoryEntry {
  timestamp: string;
  input: SubmissionInput;
  result: AssessmentResult;
}
