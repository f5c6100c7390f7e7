/** Session-local submission history: append-only, capped at the newest 20. */

import type { AssessmentResult, SubmissionHistoryEntry, SubmissionInput } from "./types";

export const HISTORY_CAPACITY = 20;

export class SubmissionHistory {
  private entries: SubmissionHistoryEntry[] = [];

  constructor(private readonly capacity: number = HISTORY_CAPACITY) {}

  add(input: SubmissionInput, result: AssessmentResult, timestamp?: string): SubmissionHistoryEntry {
    const entry: SubmissionHistoryEntry = {
      timestamp: timestamp ?? new Date().toISOString(),
      input,
      result,
    };
    this.entries.push(entry);
    if (this.entries.length > this.capacity) {
      this.entries.splice(0, this.entries.length - this.capacity);
    }
    return entry;
  }

  list(): readonly SubmissionHistoryEntry[] {
    return this.entries;
  }

  get(index: number): SubmissionHistoryEntry | undefined {
    return this.entries[index];
  }

  get length(): number {
    return this.entries.length;
  }
}
