// Satisfaction ratings and the judgment-file export format the evaluation
// command consumes: one JSON object per line with question_id, label and
// satisfaction. Right and Wrong have fixed scores; Related is a 60-85 slider.

export const LABELS = ["Right", "Related", "Wrong"] as const;
export type Label = (typeof LABELS)[number];

export const BANDS: Record<Label, { min: number; max: number }> = {
  Right: { min: 100, max: 100 },
  Related: { min: 60, max: 85 },
  Wrong: { min: 0, max: 0 },
};

// slider starting point, middle of the Related band
export const RELATED_DEFAULT = 72;

export interface Rating {
  label: Label;
  score: number;
}

/** Build a rating; Right/Wrong ignore score, Related validates the band. */
export function ratingFor(label: Label, score?: number): Rating {
  if (label === "Related") {
    const value = score ?? RELATED_DEFAULT;
    const { min, max } = BANDS.Related;
    if (!Number.isFinite(value) || value < min || value > max) {
      throw new RangeError(
        `Related satisfaction must be within [${min}, ${max}], got ${value}`,
      );
    }
    return { label, score: value };
  }
  return { label, score: BANDS[label].min };
}

/**
 * Serialize ratings to judgment JSONL. Question ids are assigned
 * sequentially (q001, q002, ...) in the order given.
 */
export function toJudgmentJsonl(ratings: Rating[]): string {
  const lines = ratings.map((rating, i) =>
    JSON.stringify({
      question_id: `q${String(i + 1).padStart(3, "0")}`,
      label: rating.label,
      satisfaction: rating.score,
    }),
  );
  return lines.length ? lines.join("\n") + "\n" : "";
}
