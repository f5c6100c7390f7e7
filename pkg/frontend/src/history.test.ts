import { describe, expect, test } from "vitest";

import { fixtureResult } from "./fixtures";
import { HISTORY_CAPACITY, SubmissionHistory } from "./history";

describe("SubmissionHistory", () => {
  test("appends in submission order", () => {
    const history = new SubmissionHistory();
    history.add({ conllu: "one" }, fixtureResult(), "t1");
    history.add({ conllu: "two" }, fixtureResult(), "t2");
    expect(history.list().map((e) => e.timestamp)).toEqual(["t1", "t2"]);
    expect(history.get(0)?.input.conllu).toBe("one");
  });

  test("caps at the newest twenty entries", () => {
    const history = new SubmissionHistory();
    for (let i = 0; i < 25; i += 1) {
      history.add({ conllu: `draft ${i}` }, fixtureResult(), `t${i}`);
    }
    expect(history.length).toBe(HISTORY_CAPACITY);
    expect(history.get(0)?.timestamp).toBe("t5");
    expect(history.get(HISTORY_CAPACITY - 1)?.timestamp).toBe("t24");
  });

  test("stores the result snapshot as given", () => {
    const history = new SubmissionHistory();
    const result = fixtureResult({ overall_level: "C1" });
    history.add({ text: "tere" }, result, "t1");
    expect(history.get(0)?.result.overall_level).toBe("C1");
  });
});
