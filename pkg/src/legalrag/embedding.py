"""Text embedding providers and cosine scoring.

Two providers share one small interface: a mock that derives unit vectors
deterministically from the text bytes (tests, offline runs) and a remote
HTTP provider for live embedding APIs. All vectors are unit-norm float64.
"""
from __future__ import annotations

import hashlib
import os
import threading
import time
from dataclasses import dataclass

import httpx
import numpy as np

from .errors import DimensionMismatch, EmptyText, ProviderUnavailable

DEFAULT_MOCK_DIMENSION = 64
RETRY_DELAYS = (0.5, 1.0, 2.0)


@dataclass(frozen=True)
class EmbeddingProviderSpec:
    provider_id: str
    dimension: int
    kind: str  # "mock" | "remote"

    def __post_init__(self) -> None:
        if self.dimension < 8:
            raise ValueError(f"embedding dimension must be >= 8, got {self.dimension}")
        if self.kind not in ("mock", "remote"):
            raise ValueError(f"unknown provider kind: {self.kind!r}")


def _require_texts(texts: list[str]) -> None:
    if not texts:
        raise EmptyText("embed_batch needs at least one text")
    for i, text in enumerate(texts):
        if not isinstance(text, str) or not text.strip():
            raise EmptyText(f"text at position {i} is empty")


class MockEmbedder:
    """Pure function of (provider_id, text bytes): hash-seeded gaussian, normalized.

    Identical across runs, machines, and thread schedules.
    """

    def __init__(self, dimension: int = DEFAULT_MOCK_DIMENSION, provider_id: str = "mock"):
        self.spec = EmbeddingProviderSpec(provider_id=provider_id, dimension=dimension, kind="mock")

    @property
    def dimension(self) -> int:
        return self.spec.dimension

    def embed_batch(self, texts: list[str]) -> list[np.ndarray]:
        _require_texts(texts)
        return [self._embed_one(t) for t in texts]

    def _embed_one(self, text: str) -> np.ndarray:
        digest = hashlib.sha256(
            self.spec.provider_id.encode("utf-8") + b"\x1f" + text.encode("utf-8")
        ).digest()
        seed = int.from_bytes(digest[:8], "little")
        rng = np.random.default_rng(seed)
        vec = rng.standard_normal(self.spec.dimension)
        return vec / np.linalg.norm(vec)


class RemoteEmbedder:
    """HTTP embedding client: POST {"input": [...], "model": ...}, bearer auth.

    Endpoint and key come from EMBED_API_URL / EMBED_API_KEY unless given.
    Transient failures are retried on an exponential backoff schedule before
    ProviderUnavailable surfaces; in-flight requests are capped.
    """

    def __init__(
        self,
        model: str,
        dimension: int,
        url: str | None = None,
        api_key: str | None = None,
        max_in_flight: int = 4,
        retry_delays: tuple[float, ...] = RETRY_DELAYS,
        timeout: float = 30.0,
        transport: httpx.BaseTransport | None = None,
    ):
        self.spec = EmbeddingProviderSpec(provider_id=model, dimension=dimension, kind="remote")
        self.model = model
        self.url = url or os.environ.get("EMBED_API_URL", "")
        self.api_key = api_key if api_key is not None else os.environ.get("EMBED_API_KEY", "")
        self.retry_delays = retry_delays
        self._semaphore = threading.BoundedSemaphore(max_in_flight)
        self._client = httpx.Client(timeout=timeout, transport=transport)
        if not self.url:
            raise ProviderUnavailable("no embedding endpoint configured (EMBED_API_URL)")

    @property
    def dimension(self) -> int:
        return self.spec.dimension

    def embed_batch(self, texts: list[str]) -> list[np.ndarray]:
        _require_texts(texts)
        payload = {"input": list(texts), "model": self.model}
        headers = {"Authorization": f"Bearer {self.api_key}"}
        data = _post_with_retries(
            self._client, self.url, payload, headers, self.retry_delays, self._semaphore
        )
        try:
            rows = data["data"]
            vectors = [np.asarray(row["embedding"], dtype=np.float64) for row in rows]
        except (KeyError, TypeError) as exc:
            raise ProviderUnavailable(f"malformed embedding reply: {exc}") from exc
        if len(vectors) != len(texts):
            raise ProviderUnavailable(
                f"embedding reply has {len(vectors)} vectors for {len(texts)} texts"
            )
        out = []
        for vec in vectors:
            if vec.shape != (self.spec.dimension,):
                raise DimensionMismatch(
                    f"provider returned dimension {vec.shape}, expected {self.spec.dimension}"
                )
            out.append(vec / np.linalg.norm(vec))
        return out


def _post_with_retries(client, url, payload, headers, delays, semaphore) -> dict:
    last_error: Exception | None = None
    for attempt in range(len(delays)):
        try:
            with semaphore:
                response = client.post(url, json=payload, headers=headers)
            response.raise_for_status()
            return response.json()
        except (httpx.TransportError, httpx.HTTPStatusError, ValueError) as exc:
            last_error = exc
            if attempt + 1 < len(delays):
                time.sleep(delays[attempt])
    raise ProviderUnavailable(f"provider kept failing after {len(delays)} attempts: {last_error}")


def embed_batch(texts: list[str], provider) -> list[np.ndarray]:
    """Embed texts with the given provider; order-preserving, unit vectors."""
    return provider.embed_batch(texts)


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    """Dot product of unit vectors, clamped to [-1, 1]."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionMismatch(f"vector dimensions differ: {a.shape} vs {b.shape}")
    return float(min(1.0, max(-1.0, float(np.dot(a, b)))))
