// Client-side chat state: turns in submission order, a single in-flight
// request, and a FIFO queue for anything submitted while one is pending.
// Nothing is persisted; history lives only in the page session.

import { ApiError } from "./api.js";
import type { ChatReply, LanguageHint, SourceRow } from "./api.js";
import { ratingFor, toJudgmentJsonl } from "./judgments.js";
import type { Label, Rating } from "./judgments.js";

/** The slice of the API client the store needs. */
export interface ChatApi {
  chat(question: string, languageHint?: LanguageHint): Promise<ChatReply>;
}

export type TurnStatus = "queued" | "pending" | "answered" | "failed";

export interface TurnError {
  code: string;
  message: string;
  retryable: boolean;
}

export interface ChatTurn {
  id: number;
  question: string;
  status: TurnStatus;
  answer: string | null;
  /** Exactly as returned by the service; never mutated or re-ordered. */
  sources: SourceRow[];
  rating: Rating | null;
  error: TurnError | null;
}

export type Listener = () => void;

export class ChatStore {
  readonly turns: ChatTurn[] = [];
  private readonly queue: ChatTurn[] = [];
  private inFlight = false;
  private nextId = 1;
  private readonly listeners: Listener[] = [];

  constructor(
    private readonly api: ChatApi,
    private readonly languageHint?: LanguageHint,
  ) {}

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener();
  }

  /** True while a request is running or queued. */
  get busy(): boolean {
    return this.inFlight || this.queue.length > 0;
  }

  get ratedCount(): number {
    return this.turns.reduce((n, turn) => n + (turn.rating ? 1 : 0), 0);
  }

  /** Queue a question. Blank input is rejected with null. */
  submit(question: string): ChatTurn | null {
    const text = question.trim();
    if (!text) return null;
    const turn: ChatTurn = {
      id: this.nextId++,
      question: text,
      status: "queued",
      answer: null,
      sources: [],
      rating: null,
      error: null,
    };
    this.turns.push(turn);
    this.queue.push(turn);
    this.emit();
    void this.pump();
    return turn;
  }

  /** Put a failed turn back on the queue, keeping its place in history. */
  retry(turn: ChatTurn): void {
    if (turn.status !== "failed") return;
    turn.status = "queued";
    turn.error = null;
    this.queue.push(turn);
    this.emit();
    void this.pump();
  }

  private async pump(): Promise<void> {
    if (this.inFlight) return;
    const turn = this.queue.shift();
    if (!turn) return;
    this.inFlight = true;
    turn.status = "pending";
    this.emit();
    try {
      const reply = await this.api.chat(turn.question, this.languageHint);
      turn.status = "answered";
      turn.answer = reply.answer;
      turn.sources = reply.sources;
    } catch (exc) {
      const err =
        exc instanceof ApiError
          ? exc
          : new ApiError("internal", exc instanceof Error ? exc.message : String(exc), null);
      turn.status = "failed";
      turn.error = { code: err.code, message: err.message, retryable: err.retryable };
    } finally {
      this.inFlight = false;
      this.emit();
      void this.pump();
    }
  }

  /** Attach a satisfaction rating to an answered turn. */
  rate(turnId: number, label: Label, score?: number): Rating {
    const turn = this.turns.find((t) => t.id === turnId);
    if (!turn) throw new Error(`no turn with id ${turnId}`);
    if (turn.status !== "answered") {
      throw new Error("only answered turns can be rated");
    }
    const rating = ratingFor(label, score);
    turn.rating = rating;
    this.emit();
    return rating;
  }

  /** Judgment JSONL for every rated turn, in submission order. */
  exportJudgments(): string {
    const ratings = this.turns
      .filter((turn) => turn.rating !== null)
      .map((turn) => turn.rating as Rating);
    return toJudgmentJsonl(ratings);
  }

  /** Resolve once the queue is drained; test helper. */
  async whenIdle(): Promise<void> {
    while (this.busy) {
      await new Promise((resolve) => setTimeout(resolve, 5));
    }
  }
}
