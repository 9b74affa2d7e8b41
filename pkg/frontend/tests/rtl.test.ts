import { describe, expect, it } from "vitest";

import { directionFor, hasArabic } from "../src/rtl.js";

describe("hasArabic", () => {
  it("detects Arabic script", () => {
    expect(hasArabic("ما هي رسوم العضوية؟")).toBe(true);
  });

  it("detects presentation-form codepoints", () => {
    expect(hasArabic("ﺍﺒ")).toBe(true);
  });

  it("rejects Latin, digits and punctuation", () => {
    expect(hasArabic("When does the committee meet?")).toBe(false);
    expect(hasArabic("1234 !?")).toBe(false);
    expect(hasArabic("")).toBe(false);
  });
});

describe("directionFor", () => {
  it("is rtl for Arabic questions", () => {
    expect(directionFor("متى يجتمع مجلس الإدارة؟")).toBe("rtl");
  });

  it("is rtl for mixed text containing Arabic", () => {
    expect(directionFor("Article 5: ما معنى الحل؟")).toBe("rtl");
  });

  it("is ltr otherwise", () => {
    expect(directionFor("Who elects the board?")).toBe("ltr");
  });
});
