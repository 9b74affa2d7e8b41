// Right-to-left detection: Arabic questions flip the turn layout.

const ARABIC =
  /[؀-ۿݐ-ݿࢠ-ࣿﭐ-﷿ﹰ-﻿]/;

export function hasArabic(text: string): boolean {
  return ARABIC.test(text);
}

/** dir attribute for a chat turn, decided by the question's script. */
export function directionFor(question: string): "rtl" | "ltr" {
  return hasArabic(question) ? "rtl" : "ltr";
}
