"""Token counting and sliding-window chunking.

The default counting rule is deliberately simple and deterministic so it
behaves identically for Arabic and Latin text: a token is a maximal run of
Unicode letters/digits, or a single non-whitespace symbol; whitespace only
separates tokens. Real model tokenizers can be plugged in through
TokenizerSpec.span_fn.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable

from .errors import DegenerateConfig

if TYPE_CHECKING:
    from .corpus import SourceRef

# Word runs first ([^\W_] = Unicode alphanumerics, underscore excluded),
# then any single non-whitespace character.
_TOKEN_RE = re.compile(r"[^\W_]+|\S", re.UNICODE)


def _default_spans(text: str) -> list[tuple[int, int]]:
    return [m.span() for m in _TOKEN_RE.finditer(text)]


@dataclass(frozen=True)
class TokenizerSpec:
    """Named token-counting rule; span_fn overrides the default rule."""

    name: str = "unicode-runs"
    counting_rule: str = (
        "a token is a maximal run of Unicode letter/digit code points or a "
        "single non-whitespace symbol; whitespace separates and is not a token"
    )
    span_fn: Callable[[str], list[tuple[int, int]]] | None = None

    def token_spans(self, text: str) -> list[tuple[int, int]]:
        """Character (start, end) span of every token, in order."""
        fn = self.span_fn or _default_spans
        return fn(text)


DEFAULT_TOKENIZER = TokenizerSpec()


def count_tokens(text: str, spec: TokenizerSpec = DEFAULT_TOKENIZER) -> int:
    return len(spec.token_spans(text))


DEFAULT_CHUNK_SIZE = 600
DEFAULT_CHUNK_OVERLAP = 50
DEFAULT_MODEL_LIMIT = 8192


@dataclass(frozen=True)
class ChunkingConfig:
    chunk_size: int = DEFAULT_CHUNK_SIZE
    chunk_overlap: int = DEFAULT_CHUNK_OVERLAP
    model_limit: int = DEFAULT_MODEL_LIMIT

    def __post_init__(self) -> None:
        if self.chunk_size < 1:
            raise DegenerateConfig(f"chunk_size must be positive, got {self.chunk_size}")
        if self.chunk_overlap < 0:
            raise DegenerateConfig(f"chunk_overlap must be non-negative, got {self.chunk_overlap}")
        if self.chunk_overlap >= self.chunk_size:
            raise DegenerateConfig(
                f"chunk_overlap ({self.chunk_overlap}) must be smaller than "
                f"chunk_size ({self.chunk_size})"
            )
        if self.chunk_size > self.model_limit:
            raise DegenerateConfig(
                f"chunk_size ({self.chunk_size}) exceeds model_limit ({self.model_limit})"
            )

    @property
    def stride(self) -> int:
        return self.chunk_size - self.chunk_overlap


@dataclass(frozen=True)
class Chunk:
    chunk_id: str
    source_ref: "SourceRef | None"
    token_start: int
    token_count: int
    text: str


def chunk_passage(
    text: str,
    config: ChunkingConfig = ChunkingConfig(),
    spec: TokenizerSpec = DEFAULT_TOKENIZER,
    *,
    source_ref: "SourceRef | None" = None,
    id_prefix: str = "chunk",
) -> list[Chunk]:
    """Split a passage into overlapping windows of at most chunk_size tokens.

    Windows start at multiples of the stride (chunk_size - chunk_overlap);
    every window is full-size except possibly the last, which ends exactly at
    the final token. Chunk text is the exact substring spanned by its tokens.
    An empty passage yields no chunks.
    """
    spans = spec.token_spans(text)
    total = len(spans)
    if total == 0:
        return []

    chunks: list[Chunk] = []
    start = 0
    i = 0
    while True:
        end = min(start + config.chunk_size, total)
        chunk_text = text[spans[start][0]:spans[end - 1][1]]
        chunks.append(
            Chunk(
                chunk_id=f"{id_prefix}#c{i}",
                source_ref=source_ref,
                token_start=start,
                token_count=end - start,
                text=chunk_text,
            )
        )
        if start + config.chunk_size >= total:
            break
        start += config.stride
        i += 1
    return chunks
