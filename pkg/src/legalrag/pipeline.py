"""Corpus to index: flatten passages, chunk them, embed, build the index."""
from __future__ import annotations

from .corpus import Corpus, Passage, SourceRef, flatten_to_passages
from .tokenize import Chunk, ChunkingConfig, TokenizerSpec, DEFAULT_TOKENIZER, chunk_passage
from .vector_index import IndexEntry, VectorIndex

EMBED_BATCH_SIZE = 64


def passage_prefix(ref: SourceRef) -> str:
    if ref.article_number is not None:
        return f"{ref.doc_id}:a{ref.article_number}"
    return ref.qa_id  # qa ids already embed the doc id


def chunk_corpus(
    corpus: Corpus,
    config: ChunkingConfig = ChunkingConfig(),
    tokenizer: TokenizerSpec = DEFAULT_TOKENIZER,
) -> list[Chunk]:
    chunks: list[Chunk] = []
    for passage in flatten_to_passages(corpus):
        chunks.extend(
            chunk_passage(
                passage.text,
                config,
                tokenizer,
                source_ref=passage.source_ref,
                id_prefix=passage_prefix(passage.source_ref),
            )
        )
    return chunks


def build_index(
    corpus: Corpus,
    embedder,
    config: ChunkingConfig = ChunkingConfig(),
    tokenizer: TokenizerSpec = DEFAULT_TOKENIZER,
    batch_size: int = EMBED_BATCH_SIZE,
) -> VectorIndex:
    """Index every chunk of every passage in the corpus."""
    chunks = chunk_corpus(corpus, config, tokenizer)
    index = VectorIndex(dimension=embedder.dimension)
    for start in range(0, len(chunks), batch_size):
        batch = chunks[start : start + batch_size]
        vectors = embedder.embed_batch([c.text for c in batch])
        index.add(
            [
                IndexEntry(
                    chunk_id=chunk.chunk_id,
                    source_ref=chunk.source_ref,
                    vector=vector,
                    text=chunk.text,
                )
                for chunk, vector in zip(batch, vectors)
            ]
        )
    return index
