import { describe, expect, it } from "vitest";

import { BANDS, RELATED_DEFAULT, ratingFor, toJudgmentJsonl } from "../src/judgments.js";

describe("ratingFor", () => {
  it("pins Right to 100 and Wrong to 0, ignoring any score", () => {
    expect(ratingFor("Right")).toEqual({ label: "Right", score: 100 });
    expect(ratingFor("Right", 42)).toEqual({ label: "Right", score: 100 });
    expect(ratingFor("Wrong")).toEqual({ label: "Wrong", score: 0 });
    expect(ratingFor("Wrong", 42)).toEqual({ label: "Wrong", score: 0 });
  });

  it("passes Related scores inside the band", () => {
    expect(ratingFor("Related", 60).score).toBe(60);
    expect(ratingFor("Related", 85).score).toBe(85);
    expect(ratingFor("Related", 70).score).toBe(70);
  });

  it("defaults Related to the slider midpoint", () => {
    expect(ratingFor("Related").score).toBe(RELATED_DEFAULT);
    expect(RELATED_DEFAULT).toBeGreaterThanOrEqual(BANDS.Related.min);
    expect(RELATED_DEFAULT).toBeLessThanOrEqual(BANDS.Related.max);
  });

  it("rejects Related scores outside [60, 85]", () => {
    expect(() => ratingFor("Related", 59)).toThrow(RangeError);
    expect(() => ratingFor("Related", 86)).toThrow(RangeError);
    expect(() => ratingFor("Related", Number.NaN)).toThrow(RangeError);
  });
});

describe("toJudgmentJsonl", () => {
  it("assigns sequential zero-padded question ids", () => {
    const text = toJudgmentJsonl([
      { label: "Right", score: 100 },
      { label: "Related", score: 70 },
      { label: "Wrong", score: 0 },
    ]);
    const rows = text
      .trimEnd()
      .split("\n")
      .map((line) => JSON.parse(line));
    expect(rows).toEqual([
      { question_id: "q001", label: "Right", satisfaction: 100 },
      { question_id: "q002", label: "Related", satisfaction: 70 },
      { question_id: "q003", label: "Wrong", satisfaction: 0 },
    ]);
  });

  it("ends with a newline when non-empty", () => {
    expect(toJudgmentJsonl([{ label: "Right", score: 100 }]).endsWith("\n")).toBe(true);
  });

  it("is empty for no ratings", () => {
    expect(toJudgmentJsonl([])).toBe("");
  });
});
