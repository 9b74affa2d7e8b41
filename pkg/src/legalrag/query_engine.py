"""Retrieval-augmented answering: embed the question, gather context, ask.

The prompt is rebuilt from scratch for every request; when it would bust
the token budget the lowest-scored context passage is dropped and the
prompt re-rendered until it fits.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass

from .errors import BudgetExceeded, EmptyQuestion
from .llm import (
    DEFAULT_MAX_ANSWER_TOKENS,
    MODEL_LIMIT,
    ChatMessage,
    CompletionRequest,
    complete,
)
from .tokenize import DEFAULT_CHUNK_SIZE, DEFAULT_TOKENIZER, count_tokens
from .vector_index import DEFAULT_TOP_K, SearchHit, VectorIndex

log = logging.getLogger(__name__)

SYSTEM_INSTRUCTION = (
    "You are a legal advisor for housing cooperatives. Ground every answer "
    "in the context passages when they are relevant, cite the article "
    "number whenever the context supports it, and reply in the language "
    "of the question."
)

LANGUAGE_LINES = {
    "ar": "Reply in Arabic.",
    "en": "Reply in English.",
}

NO_CORPUS_ANSWER = (
    "No corpus has been loaded, so there is nothing to search. "
    "Ingest documents and build an index first."
)

# Rough token cost of the system instruction plus prompt scaffolding,
# used only for the advisory fit check at configuration time.
_SCAFFOLD_ALLOWANCE = 128


@dataclass(frozen=True)
class EngineConfig:
    top_k: int = DEFAULT_TOP_K
    chunk_size: int = DEFAULT_CHUNK_SIZE
    max_answer_tokens: int = DEFAULT_MAX_ANSWER_TOKENS
    temperature: float = 0.0
    model_limit: int = MODEL_LIMIT

    def __post_init__(self) -> None:
        if self.top_k < 1:
            raise ValueError("top_k must be positive")
        if self.max_answer_tokens < 1:
            raise ValueError("max_answer_tokens must be positive")
        if self.model_limit < 1:
            raise ValueError("model_limit must be positive")
        worst_case = (
            self.top_k * self.chunk_size + self.max_answer_tokens + _SCAFFOLD_ALLOWANCE
        )
        if worst_case > self.model_limit:
            log.warning(
                "top_k=%d full chunks plus the answer budget (%d tokens) can "
                "exceed model_limit=%d; context will be trimmed per request",
                self.top_k,
                worst_case,
                self.model_limit,
            )


@dataclass(frozen=True)
class Answer:
    text: str
    hits: tuple[SearchHit, ...]
    timing_ms: float
    prompt_tokens: int
    completion_tokens: int
    no_corpus: bool = False

    def source_rows(self) -> list[dict]:
        return [
            {
                "doc_id": hit.source_ref.doc_id,
                "article_number": hit.source_ref.article_number,
                "score": hit.score,
            }
            for hit in self.hits
        ]


def render_messages(
    question: str,
    hits: list[SearchHit],
    language_hint: str | None = None,
) -> tuple[ChatMessage, ...]:
    """System instruction plus one user message carrying context and question."""
    system = SYSTEM_INSTRUCTION
    if language_hint is not None:
        system = f"{system} {LANGUAGE_LINES[language_hint]}"
    if not hits:
        return (ChatMessage("system", system), ChatMessage("user", question))
    blocks = [f"[{i}] {hit.source_ref.label()}\n{hit.text}" for i, hit in enumerate(hits, 1)]
    user = "Context:\n\n" + "\n\n".join(blocks) + f"\n\nQuestion: {question}"
    return (ChatMessage("system", system), ChatMessage("user", user))


def answer_question(
    question: str,
    index: VectorIndex,
    embedder,
    backend,
    config: EngineConfig | None = None,
    language_hint: str | None = None,
) -> Answer:
    """Answer one question against the index, trimming context to fit."""
    started = time.perf_counter()
    config = config or EngineConfig()
    if language_hint is not None and language_hint not in LANGUAGE_LINES:
        raise ValueError(f"unknown language hint: {language_hint!r}")
    stripped = question.strip()
    if not stripped:
        raise EmptyQuestion("question must contain non-whitespace text")
    if len(index) == 0:
        return Answer(
            text=NO_CORPUS_ANSWER,
            hits=(),
            timing_ms=(time.perf_counter() - started) * 1000.0,
            prompt_tokens=0,
            completion_tokens=0,
            no_corpus=True,
        )
    query_vector = embedder.embed_batch([stripped])[0]
    hits = index.search(query_vector, k=config.top_k)
    kept = list(hits)
    while True:
        messages = render_messages(stripped, kept, language_hint)
        prompt_tokens = sum(count_tokens(m.content, DEFAULT_TOKENIZER) for m in messages)
        if prompt_tokens + config.max_answer_tokens <= config.model_limit:
            break
        if not kept:
            raise BudgetExceeded(
                f"question alone ({prompt_tokens} tokens) plus the answer budget "
                f"exceeds model_limit={config.model_limit}"
            )
        kept.pop()  # hits arrive best-first, so the tail is the weakest
    request = CompletionRequest(
        messages=messages,
        max_answer_tokens=config.max_answer_tokens,
        temperature=config.temperature,
    )
    response = complete(request, backend)
    return Answer(
        text=response.text,
        hits=tuple(kept),
        timing_ms=(time.perf_counter() - started) * 1000.0,
        prompt_tokens=response.prompt_tokens,
        completion_tokens=response.completion_tokens,
    )
