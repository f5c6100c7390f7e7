/** Client for POST /assess with stale-response discarding.
 *
 * The session allows one meaningful assessment at a time: every submit
 * bumps a request token, and a response whose token is no longer current
 * resolves as {kind: "stale"} so the caller drops it instead of
 * overwriting a newer result.
 */

import type { ApiErrorState, SubmissionInput, SubmissionOutcome } from "./types";

type FetchLike = (url: string, init: RequestInit) => Promise<Response>;

const STATUS_MESSAGES: Record<number, string> = {
  400: "The submission could not be read. Check the CoNLL-U formatting and try again.",
  422: "The text appears to be empty — there is nothing to assess.",
  502: "A language analysis service upstream failed. Try again in a moment.",
  503: "The assessment models are not loaded yet. Try again in a moment.",
};

export function describeStatus(status: number, detail?: string): ApiErrorState {
  const message =
    STATUS_MESSAGES[status] ?? `The assessment service answered with status ${status}.`;
  return {
    kind: "api",
    status,
    message: detail ? `${message} (${detail})` : message,
    retriable: status >= 500 || status === 429,
  };
}

export class AssessClient {
  private token = 0;

  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  /** True when a newer submission has superseded the given token. */
  private isStale(token: number): boolean {
    return token !== this.token;
  }

  async submit(input: SubmissionInput): Promise<SubmissionOutcome> {
    const token = ++this.token;
    let response: Response;
    try {
      response = await this.fetchFn(`${this.baseUrl}/assess`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(input),
      });
    } catch {
      if (this.isStale(token)) return { kind: "stale" };
      return {
        kind: "error",
        error: {
          kind: "network",
          status: null,
          message: "Could not reach the assessment service.",
          retriable: true,
        },
      };
    }
    if (this.isStale(token)) return { kind: "stale" };

    if (!response.ok) {
      let detail: string | undefined;
      try {
        const body = await response.json();
        if (body && typeof body.error === "string") detail = body.error;
      } catch {
        detail = undefined;
      }
      if (this.isStale(token)) return { kind: "stale" };
      return { kind: "error", error: describeStatus(response.status, detail) };
    }

    const result = await response.json();
    if (this.isStale(token)) return { kind: "stale" };
    return { kind: "ok", result };
  }
}
