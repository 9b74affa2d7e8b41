"""Chat-completion gateway: one interface, a scriptable mock, a remote client.

complete() is the single entry point; it refuses any request whose prompt
plus answer budget would bust the model token limit, so no backend ever
sees an oversized request.
"""
from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass
from pathlib import Path

import httpx

from .embedding import _post_with_retries
from .errors import (
    BudgetExceeded,
    MalformedProviderReply,
    ProviderUnavailable,
    SchemaViolation,
)
from .tokenize import DEFAULT_MODEL_LIMIT, DEFAULT_TOKENIZER, TokenizerSpec, count_tokens

MODEL_LIMIT = DEFAULT_MODEL_LIMIT
DEFAULT_MAX_ANSWER_TOKENS = 512
RETRY_DELAYS = (0.5, 1.0, 2.0)

ROLES = ("system", "user", "assistant")


@dataclass(frozen=True)
class ChatMessage:
    role: str
    content: str

    def __post_init__(self) -> None:
        if self.role not in ROLES:
            raise SchemaViolation(f"unknown chat role: {self.role!r}")
        if not self.content:
            raise SchemaViolation("chat message content must be non-empty")


@dataclass(frozen=True)
class CompletionRequest:
    messages: tuple[ChatMessage, ...]
    max_answer_tokens: int = DEFAULT_MAX_ANSWER_TOKENS
    temperature: float = 0.0

    def __post_init__(self) -> None:
        if not self.messages:
            raise SchemaViolation("a completion request needs at least one message")
        if self.max_answer_tokens < 1:
            raise SchemaViolation("max_answer_tokens must be positive")
        if self.temperature < 0:
            raise SchemaViolation("temperature must be >= 0")


@dataclass(frozen=True)
class CompletionResponse:
    text: str
    prompt_tokens: int
    completion_tokens: int


class MockChatBackend:
    """Deterministic scripted backend: first matching content rule wins.

    Rules are {"contains": str, "reply": str}; a rule without "contains"
    matches everything (use it last, as the default). A rule may carry
    {"error": "provider_unavailable"} instead of a reply to script failures.
    """

    FALLBACK_REPLY = "No scripted reply matched the request."

    def __init__(
        self,
        rules: list[dict] | None = None,
        tokenizer: TokenizerSpec = DEFAULT_TOKENIZER,
        model_limit: int = MODEL_LIMIT,
    ):
        self.rules = list(rules or [])
        self.tokenizer = tokenizer
        self.model_limit = model_limit

    @classmethod
    def from_file(cls, path: str | Path, **kwargs) -> "MockChatBackend":
        rules = json.loads(Path(path).read_text(encoding="utf-8"))
        if not isinstance(rules, list):
            raise SchemaViolation(f"{path}: mock fixture must be a JSON array of rules")
        return cls(rules=rules, **kwargs)

    def send(self, request: CompletionRequest) -> CompletionResponse:
        joined = "\n".join(m.content for m in request.messages)
        for rule in self.rules:
            pattern = rule.get("contains")
            if pattern is not None and pattern not in joined:
                continue
            if rule.get("error") == "provider_unavailable":
                raise ProviderUnavailable("scripted provider failure")
            reply = rule.get("reply")
            if not isinstance(reply, str):
                raise SchemaViolation("mock rule needs a string 'reply' or an 'error'")
            return self._response(joined, reply)
        return self._response(joined, self.FALLBACK_REPLY)

    def _response(self, prompt: str, reply: str) -> CompletionResponse:
        return CompletionResponse(
            text=reply,
            prompt_tokens=count_tokens(prompt, self.tokenizer),
            completion_tokens=count_tokens(reply, self.tokenizer),
        )


class RemoteChatBackend:
    """HTTP chat-completion client (OpenAI-style wire format).

    Endpoint and key come from LLM_API_URL / LLM_API_KEY unless given.
    Retries transient failures, then raises ProviderUnavailable; replies
    without non-empty text raise MalformedProviderReply.
    """

    def __init__(
        self,
        model: str,
        url: str | None = None,
        api_key: str | None = None,
        tokenizer: TokenizerSpec = DEFAULT_TOKENIZER,
        model_limit: int = MODEL_LIMIT,
        max_in_flight: int = 2,
        retry_delays: tuple[float, ...] = RETRY_DELAYS,
        timeout: float = 60.0,
        transport: httpx.BaseTransport | None = None,
    ):
        self.model = model
        self.url = url or os.environ.get("LLM_API_URL", "")
        self.api_key = api_key if api_key is not None else os.environ.get("LLM_API_KEY", "")
        self.tokenizer = tokenizer
        self.model_limit = model_limit
        self.retry_delays = retry_delays
        self._semaphore = threading.BoundedSemaphore(max_in_flight)
        self._client = httpx.Client(timeout=timeout, transport=transport)
        if not self.url:
            raise ProviderUnavailable("no chat endpoint configured (LLM_API_URL)")

    def send(self, request: CompletionRequest) -> CompletionResponse:
        payload = {
            "model": self.model,
            "messages": [{"role": m.role, "content": m.content} for m in request.messages],
            "max_tokens": request.max_answer_tokens,
            "temperature": request.temperature,
        }
        headers = {"Authorization": f"Bearer {self.api_key}"}
        data = _post_with_retries(
            self._client, self.url, payload, headers, self.retry_delays, self._semaphore
        )
        try:
            text = data["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as exc:
            raise MalformedProviderReply(f"reply missing choices[0].message.content: {exc}") from exc
        if not isinstance(text, str) or not text.strip():
            raise MalformedProviderReply("provider returned empty answer text")
        usage = data.get("usage") or {}
        prompt_tokens = usage.get("prompt_tokens")
        completion_tokens = usage.get("completion_tokens")
        if not isinstance(prompt_tokens, int):
            prompt_tokens = sum(count_tokens(m.content, self.tokenizer) for m in request.messages)
        if not isinstance(completion_tokens, int):
            completion_tokens = count_tokens(text, self.tokenizer)
        return CompletionResponse(text=text, prompt_tokens=prompt_tokens, completion_tokens=completion_tokens)


def complete(request: CompletionRequest, backend) -> CompletionResponse:
    """Budget-check the request against the backend's limit, then send it."""
    tokens = sum(count_tokens(m.content, backend.tokenizer) for m in request.messages)
    if tokens + request.max_answer_tokens > backend.model_limit:
        raise BudgetExceeded(
            f"prompt ({tokens} tokens) + max_answer_tokens ({request.max_answer_tokens}) "
            f"exceeds the model limit of {backend.model_limit}"
        )
    return backend.send(request)
