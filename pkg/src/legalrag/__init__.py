"""Retrieval-augmented question answering over a legal corpus."""
from __future__ import annotations

from .corpus import (
    Article,
    Corpus,
    Document,
    Passage,
    QAPair,
    SourceRef,
    flatten_to_passages,
    load_corpus,
)
from .embedding import MockEmbedder, RemoteEmbedder, cosine_similarity, embed_batch
from .errors import LegalRagError
from .evaluation import (
    ConfusionReport,
    EvaluationReport,
    Judgment,
    confusion_from_counts,
    evaluate,
    f1_score,
    load_judgments,
)
from .llm import (
    ChatMessage,
    CompletionRequest,
    CompletionResponse,
    MockChatBackend,
    RemoteChatBackend,
    complete,
)
from .pipeline import build_index, chunk_corpus
from .qa_synthesis import SynthesisConfig, SynthesisReport, law_articles, synthesize_qa
from .query_engine import Answer, EngineConfig, answer_question
from .tokenize import Chunk, ChunkingConfig, TokenizerSpec, chunk_passage, count_tokens
from .vector_index import IndexEntry, SearchHit, VectorIndex

__version__ = "0.1.0"

__all__ = [
    "Answer",
    "Article",
    "ChatMessage",
    "Chunk",
    "ChunkingConfig",
    "CompletionRequest",
    "CompletionResponse",
    "ConfusionReport",
    "Corpus",
    "Document",
    "EngineConfig",
    "EvaluationReport",
    "IndexEntry",
    "Judgment",
    "LegalRagError",
    "MockChatBackend",
    "MockEmbedder",
    "Passage",
    "QAPair",
    "RemoteChatBackend",
    "RemoteEmbedder",
    "SearchHit",
    "SourceRef",
    "SynthesisConfig",
    "SynthesisReport",
    "TokenizerSpec",
    "VectorIndex",
    "answer_question",
    "build_index",
    "chunk_corpus",
    "chunk_passage",
    "complete",
    "confusion_from_counts",
    "cosine_similarity",
    "count_tokens",
    "embed_batch",
    "evaluate",
    "f1_score",
    "flatten_to_passages",
    "law_articles",
    "load_corpus",
    "load_judgments",
    "synthesize_qa",
]
