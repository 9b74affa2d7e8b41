// DOM rendering and event wiring. The page is re-rendered from the store on
// every change; at chat scale that is simpler and safer than patching.

import type { ChatStore, ChatTurn } from "./state.js";
import { BANDS, RELATED_DEFAULT } from "./judgments.js";
import type { Label } from "./judgments.js";
import { directionFor } from "./rtl.js";

export interface UiRefs {
  transcript: HTMLElement;
  form: HTMLFormElement;
  input: HTMLTextAreaElement;
  send: HTMLButtonElement;
  banner: HTMLElement;
  exportButton: HTMLButtonElement;
  status: HTMLElement;
}

export interface UiOptions {
  /** Receives the judgment JSONL on export; defaults to a file download. */
  onExport?: (content: string) => void;
}

function grab<T extends HTMLElement>(root: Document, id: string): T {
  const el = root.getElementById(id);
  if (!el) throw new Error(`missing #${id} in page`);
  return el as T;
}

export function findRefs(root: Document): UiRefs {
  return {
    transcript: grab(root, "transcript"),
    form: grab(root, "question-form"),
    input: grab(root, "question-input"),
    send: grab(root, "send-button"),
    banner: grab(root, "banner"),
    exportButton: grab(root, "export-button"),
    status: grab(root, "status-line"),
  };
}

/** Download a string as judgments.jsonl; no-op where blobs are unsupported. */
export function downloadJudgments(root: Document, content: string): void {
  if (typeof URL.createObjectURL !== "function") return;
  const blob = new Blob([content], { type: "application/jsonl" });
  const url = URL.createObjectURL(blob);
  const anchor = root.createElement("a");
  anchor.href = url;
  anchor.download = "judgments.jsonl";
  anchor.click();
  URL.revokeObjectURL(url);
}

function sourceLine(row: { doc_id: string; article_number: number | null; score: number }): string {
  const where =
    row.article_number === null ? row.doc_id : `${row.doc_id} · article ${row.article_number}`;
  return `${where} · score ${row.score.toFixed(4)}`;
}

function renderSources(doc: Document, turn: ChatTurn): HTMLElement {
  const details = doc.createElement("details");
  details.className = "sources";
  const summary = doc.createElement("summary");
  summary.textContent = `Sources (${turn.sources.length})`;
  details.appendChild(summary);
  const list = doc.createElement("ol");
  for (const row of turn.sources) {
    const item = doc.createElement("li");
    item.textContent = sourceLine(row);
    list.appendChild(item);
  }
  details.appendChild(list);
  return details;
}

function renderRating(doc: Document, turn: ChatTurn, store: ChatStore): HTMLElement {
  const box = doc.createElement("div");
  box.className = "rating";
  if (turn.rating) {
    const badge = doc.createElement("span");
    badge.className = "badge";
    badge.textContent = `Rated ${turn.rating.label} · ${turn.rating.score}`;
    box.appendChild(badge);
    return box;
  }

  const prompt = doc.createElement("span");
  prompt.className = "rating-prompt";
  prompt.textContent = "Rate this answer:";
  box.appendChild(prompt);

  for (const label of ["Right", "Wrong"] as Label[]) {
    const button = doc.createElement("button");
    button.type = "button";
    button.dataset.rate = label;
    button.textContent = label;
    button.addEventListener("click", () => store.rate(turn.id, label));
    box.appendChild(button);
  }

  const group = doc.createElement("span");
  group.className = "related-group";
  const slider = doc.createElement("input");
  slider.type = "range";
  slider.min = String(BANDS.Related.min);
  slider.max = String(BANDS.Related.max);
  slider.step = "1";
  slider.value = String(RELATED_DEFAULT);
  slider.setAttribute("aria-label", "Related satisfaction");
  const readout = doc.createElement("output");
  readout.textContent = slider.value;
  slider.addEventListener("input", () => {
    readout.textContent = slider.value;
  });
  const related = doc.createElement("button");
  related.type = "button";
  related.dataset.rate = "Related";
  related.textContent = "Related";
  related.addEventListener("click", () => store.rate(turn.id, "Related", Number(slider.value)));
  group.append(slider, readout, related);
  box.appendChild(group);
  return box;
}

function renderTurn(doc: Document, turn: ChatTurn, store: ChatStore): HTMLElement {
  const article = doc.createElement("article");
  article.className = `turn ${turn.status}`;
  article.dataset.turnId = String(turn.id);
  article.dir = directionFor(turn.question);

  const question = doc.createElement("div");
  question.className = "bubble question";
  question.textContent = turn.question;
  article.appendChild(question);

  if (turn.status === "answered") {
    const answer = doc.createElement("div");
    answer.className = "bubble answer";
    answer.textContent = turn.answer ?? "";
    article.appendChild(answer);
    article.appendChild(renderSources(doc, turn));
    article.appendChild(renderRating(doc, turn, store));
  } else if (turn.status === "failed") {
    const failure = doc.createElement("div");
    failure.className = turn.error?.retryable ? "bubble failure" : "bubble validation";
    failure.textContent = turn.error?.message || "request failed";
    article.appendChild(failure);
  } else {
    const waiting = doc.createElement("div");
    waiting.className = "bubble waiting";
    waiting.textContent = "…";
    article.appendChild(waiting);
  }
  return article;
}

function renderBanner(doc: Document, refs: UiRefs, store: ChatStore): void {
  const failed = [...store.turns].reverse().find((t) => t.status === "failed" && t.error?.retryable);
  refs.banner.textContent = "";
  if (!failed) {
    refs.banner.hidden = true;
    return;
  }
  refs.banner.hidden = false;
  const message = doc.createElement("span");
  message.textContent = `Service unreachable: ${failed.error?.message ?? ""}`;
  const retry = doc.createElement("button");
  retry.type = "button";
  retry.id = "retry-button";
  retry.textContent = "Retry";
  retry.addEventListener("click", () => store.retry(failed));
  refs.banner.append(message, retry);
}

export function render(root: Document, refs: UiRefs, store: ChatStore): void {
  refs.transcript.textContent = "";
  for (const turn of store.turns) {
    refs.transcript.appendChild(renderTurn(root, turn, store));
  }
  refs.input.disabled = store.busy;
  refs.send.disabled = store.busy || refs.input.value.trim() === "";
  refs.exportButton.disabled = store.ratedCount === 0;
  renderBanner(root, refs, store);
}

/** Wire the page to a store. Returns the refs for tests and callers. */
export function bindUi(root: Document, store: ChatStore, options: UiOptions = {}): UiRefs {
  const refs = findRefs(root);
  const onExport = options.onExport ?? ((content: string) => downloadJudgments(root, content));

  store.subscribe(() => render(root, refs, store));

  refs.form.addEventListener("submit", (event) => {
    event.preventDefault();
    const turn = store.submit(refs.input.value);
    if (turn) refs.input.value = "";
    render(root, refs, store);
  });

  refs.input.addEventListener("input", () => {
    refs.send.disabled = store.busy || refs.input.value.trim() === "";
  });

  refs.exportButton.addEventListener("click", () => {
    const content = store.exportJudgments();
    if (content) onExport(content);
  });

  render(root, refs, store);
  return refs;
}
