"""Flat exact-search vector index with checksummed binary persistence.

Search is a linear cosine scan over unit vectors: exact top-k, ties broken
by ascending chunk_id, no recall ambiguity. The on-disk format stores
vectors as little-endian float64 so save/load round trips are bit-equal.
"""
from __future__ import annotations

import hashlib
import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import SourceRef
from .errors import (
    CorruptIndexFile,
    DimensionMismatch,
    DuplicateChunkId,
    VersionMismatch,
)

MAGIC = b"VIDX"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sIIQ32s")  # magic, version, dimension, count, sha256

DEFAULT_TOP_K = 3


@dataclass(frozen=True)
class IndexEntry:
    chunk_id: str
    source_ref: SourceRef
    vector: np.ndarray
    text: str


@dataclass(frozen=True)
class SearchHit:
    chunk_id: str
    score: float
    text: str
    source_ref: SourceRef


class VectorIndex:
    """In-memory flat index; immutable snapshots are safe to share across readers."""

    def __init__(self, dimension: int):
        if dimension < 1:
            raise DimensionMismatch(f"index dimension must be positive, got {dimension}")
        self.dimension = dimension
        self._entries: list[IndexEntry] = []
        self._ids: set[str] = set()
        self._matrix: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self._entries)

    @property
    def entries(self) -> list[IndexEntry]:
        return list(self._entries)

    def add(self, entries: list[IndexEntry]) -> None:
        """Validate then append; on any error the index is left unchanged."""
        fresh: set[str] = set()
        for entry in entries:
            vec = np.asarray(entry.vector, dtype=np.float64)
            if vec.shape != (self.dimension,):
                raise DimensionMismatch(
                    f"entry '{entry.chunk_id}' has dimension {vec.shape}, index wants {self.dimension}"
                )
            if entry.chunk_id in self._ids or entry.chunk_id in fresh:
                raise DuplicateChunkId(f"chunk_id '{entry.chunk_id}' already indexed")
            fresh.add(entry.chunk_id)
        self._entries.extend(entries)
        self._ids.update(fresh)
        self._matrix = None

    def search(self, query_vector: np.ndarray, k: int = DEFAULT_TOP_K) -> list[SearchHit]:
        """Exact top-k by cosine score, ties by ascending chunk_id; [] when empty."""
        if k < 1:
            raise ValueError(f"k must be positive, got {k}")
        query = np.asarray(query_vector, dtype=np.float64)
        if query.shape != (self.dimension,):
            raise DimensionMismatch(
                f"query has dimension {query.shape}, index wants {self.dimension}"
            )
        if not self._entries:
            return []
        if self._matrix is None:
            self._matrix = np.vstack([e.vector for e in self._entries])
        scores = self._matrix @ query
        order = sorted(
            range(len(self._entries)),
            key=lambda i: (-scores[i], self._entries[i].chunk_id),
        )[:k]
        return [
            SearchHit(
                chunk_id=self._entries[i].chunk_id,
                score=float(min(1.0, max(-1.0, scores[i]))),
                text=self._entries[i].text,
                source_ref=self._entries[i].source_ref,
            )
            for i in order
        ]

    # -- persistence ----------------------------------------------------------

    def save(self, path: str | Path) -> None:
        records = bytearray()
        for entry in self._entries:
            records += _record_bytes(entry)
        digest = hashlib.sha256(bytes(records)).digest()
        header = _HEADER.pack(MAGIC, FORMAT_VERSION, self.dimension, len(self._entries), digest)
        Path(path).write_bytes(header + bytes(records))

    @classmethod
    def load(cls, path: str | Path) -> "VectorIndex":
        blob = Path(path).read_bytes()
        if len(blob) < _HEADER.size:
            raise CorruptIndexFile(f"{path}: file shorter than header")
        magic, version, dimension, count, digest = _HEADER.unpack_from(blob, 0)
        if magic != MAGIC:
            raise CorruptIndexFile(f"{path}: bad magic {magic!r}")
        if version != FORMAT_VERSION:
            raise VersionMismatch(f"{path}: format version {version}, expected {FORMAT_VERSION}")
        records = blob[_HEADER.size:]
        if hashlib.sha256(records).digest() != digest:
            raise CorruptIndexFile(f"{path}: checksum mismatch")

        index = cls(dimension)
        entries: list[IndexEntry] = []
        offset = 0
        for _ in range(count):
            chunk_id, offset = _read_str(records, offset, path)
            source_json, offset = _read_str(records, offset, path)
            text, offset = _read_str(records, offset, path)
            vec_bytes, offset = _read_block(records, offset, dimension * 8, path)
            try:
                source_ref = SourceRef.from_json(source_json)
            except (json.JSONDecodeError, KeyError) as exc:
                raise CorruptIndexFile(f"{path}: bad source_ref record ({exc})") from exc
            vector = np.frombuffer(vec_bytes, dtype="<f8").copy()
            entries.append(IndexEntry(chunk_id, source_ref, vector, text))
        if offset != len(records):
            raise CorruptIndexFile(f"{path}: {len(records) - offset} trailing bytes")
        index.add(entries)
        return index


def _record_bytes(entry: IndexEntry) -> bytes:
    parts = []
    for text in (entry.chunk_id, entry.source_ref.to_json(), entry.text):
        raw = text.encode("utf-8")
        parts.append(struct.pack("<I", len(raw)) + raw)
    vec = np.asarray(entry.vector, dtype="<f8").tobytes()
    parts.append(struct.pack("<I", len(vec)) + vec)
    return b"".join(parts)


def _read_block(buf: bytes, offset: int, expected: int | None, path) -> tuple[bytes, int]:
    if offset + 4 > len(buf):
        raise CorruptIndexFile(f"{path}: truncated record length")
    (length,) = struct.unpack_from("<I", buf, offset)
    offset += 4
    if expected is not None and length != expected:
        raise CorruptIndexFile(f"{path}: block of {length} bytes, expected {expected}")
    if offset + length > len(buf):
        raise CorruptIndexFile(f"{path}: truncated record payload")
    return buf[offset:offset + length], offset + length


def _read_str(buf: bytes, offset: int, path) -> tuple[str, int]:
    raw, offset = _read_block(buf, offset, None, path)
    try:
        return raw.decode("utf-8"), offset
    except UnicodeDecodeError as exc:
        raise CorruptIndexFile(f"{path}: undecodable string record") from exc
